#include "hocbf/trajectory_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hocbf/errors.hpp"

namespace hocbf {

namespace {

std::ofstream open_for_writing(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

void append_columns(std::string& line, const char* prefix, Eigen::Index n) {
  for (Eigen::Index i = 0; i < n; ++i) line += "," + std::string(prefix) + std::to_string(i);
}

void append_values(std::string& line, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) line += "," + format_real(v[i]);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_real(const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    throw InvalidInput("malformed number '" + text + "' in trajectory file");
  }
  return v;
}

Eigen::Index count_prefix(const std::vector<std::string>& header, std::size_t& pos,
                          const std::string& prefix) {
  Eigen::Index n = 0;
  while (pos < header.size() && header[pos] == prefix + std::to_string(n)) {
    ++pos;
    ++n;
  }
  return n;
}

}  // namespace

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit_csv(const Trajectory& traj, const std::string& path) {
  traj.check_consistent();
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (!std::isfinite(traj.times[k]) || !traj.states[k].allFinite() ||
        !traj.inputs[k].allFinite() || !traj.nominal_inputs[k].allFinite() ||
        !traj.psi_values[k].allFinite() || !std::isfinite(traj.barrier_b[k]) ||
        !std::isfinite(traj.mu[k])) {
      throw InvalidInput("trajectory contains non-finite values at sample " + std::to_string(k));
    }
  }
  const Eigen::Index nx = traj.empty() ? 0 : traj.states.front().size();
  const Eigen::Index nu = traj.empty() ? 0 : traj.inputs.front().size();
  const Eigen::Index np = traj.empty() ? 0 : traj.psi_values.front().size();

  std::ofstream out = open_for_writing(path);
  std::string line = "t";
  append_columns(line, "x", nx);
  append_columns(line, "u", nu);
  append_columns(line, "unom", nu);
  append_columns(line, "psi", np);
  line += ",b,mu\n";
  out << line;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (traj.states[k].size() != nx || traj.inputs[k].size() != nu ||
        traj.nominal_inputs[k].size() != nu || traj.psi_values[k].size() != np) {
      throw InvalidInput("trajectory row sizes vary");
    }
    line = format_real(traj.times[k]);
    append_values(line, traj.states[k]);
    append_values(line, traj.inputs[k]);
    append_values(line, traj.nominal_inputs[k]);
    append_values(line, traj.psi_values[k]);
    line += "," + format_real(traj.barrier_b[k]) + "," + format_real(traj.mu[k]) + "\n";
    out << line;
  }
  finish(out, path);
}

Trajectory read_trajectory_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("trajectory file is empty");
  const std::vector<std::string> header = split_commas(line);
  std::size_t pos = 0;
  if (header.empty() || header[pos++] != "t") throw InvalidInput("trajectory header must start with t");
  const Eigen::Index nx = count_prefix(header, pos, "x");
  const Eigen::Index nu = count_prefix(header, pos, "u");
  const Eigen::Index nu_nom = count_prefix(header, pos, "unom");
  const Eigen::Index np = count_prefix(header, pos, "psi");
  if (nu_nom != nu || pos + 2 != header.size() || header[pos] != "b" || header[pos + 1] != "mu") {
    throw InvalidInput("unrecognized trajectory header");
  }

  Trajectory traj;
  while (std::getline(in, line)) {
    const std::vector<std::string> f = split_commas(line);
    if (f.size() != header.size()) throw InvalidInput("trajectory row has wrong field count");
    std::size_t i = 0;
    auto take = [&](Eigen::Index n) {
      Vector v(n);
      for (Eigen::Index j = 0; j < n; ++j) v[j] = parse_real(f[i++]);
      return v;
    };
    ControlSample s;
    const double t = parse_real(f[i++]);
    const Vector x = take(nx);
    s.u = take(nu);
    s.u_nom = take(nu);
    s.psi = take(np);
    s.b = parse_real(f[i++]);
    s.mu = parse_real(f[i++]);
    traj.push(t, x, s);
  }
  return traj;
}

void emit_psi_csv(const Trajectory& traj, const std::string& path) {
  traj.check_consistent();
  const Eigen::Index np = traj.empty() ? 0 : traj.psi_values.front().size();
  std::ofstream out = open_for_writing(path);
  std::string line = "t";
  append_columns(line, "psi", np);
  out << line << ",b\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    line = format_real(traj.times[k]);
    append_values(line, traj.psi_values[k]);
    out << line << "," << format_real(traj.barrier_b[k]) << "\n";
  }
  finish(out, path);
}

void emit_events_csv(const std::vector<EventRecord>& events, const std::string& path) {
  std::ofstream out = open_for_writing(path);
  out << "kind,t_enter,t_exit\n";
  for (const EventRecord& e : events) {
    out << e.kind << "," << format_real(e.interval.enter) << "," << format_real(e.interval.exit)
        << "\n";
  }
  finish(out, path);
}

}  // namespace hocbf
