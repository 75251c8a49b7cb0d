#pragma once

#include <iosfwd>
#include <string>

#include "lexctrl/simulator.hpp"

namespace lexctrl {

// Column layout, 12 significant digits, comma separated, LF line endings:
//   t, q_0..q_{n-1}, qd_0.., qdd_0.., tau_0.., wnorm_L1..Lp, mode_L1..Lp, asiter, solve_us
// solve_us is written as 0 unless include_timing is set, keeping the
// emitted bytes reproducible across runs.
void write_csv(const TrajectoryLog& log, std::ostream& os, bool include_timing = false);
void write_csv_file(const TrajectoryLog& log, const std::string& path, bool include_timing = false);

// Parses a log written by write_csv; validates the header shape.
TrajectoryLog read_csv(std::istream& is);
TrajectoryLog read_csv_file(const std::string& path);

// Plot-ready damping-study table: t plus one q column per run.
void write_study_csv(const std::vector<PointMassLog>& logs, std::ostream& os);

}  // namespace lexctrl
