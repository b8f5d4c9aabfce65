#pragma once

#include <string>
#include <vector>

#include "hocbf/simulator.hpp"

namespace hocbf {

/// Text that reads back to the same double ("%.17g").
std::string format_real(double v);

/// Header t, x0.., u0.., unom0.., psi0.., b, mu, then one row per sample.
/// Refuses (InvalidInput) to write non-finite values; IoError when the file
/// cannot be written.
void emit_csv(const Trajectory& traj, const std::string& path);

/// Inverse of emit_csv; values come back bit-exactly. Throws IoError on a
/// missing file and InvalidInput on malformed content.
Trajectory read_trajectory_csv(const std::string& path);

/// t, psi0.., b for plotting.
void emit_psi_csv(const Trajectory& traj, const std::string& path);

struct EventRecord {
  std::string kind;
  TimeInterval interval;
};

/// kind, t_enter, t_exit
void emit_events_csv(const std::vector<EventRecord>& events, const std::string& path);

}  // namespace hocbf
