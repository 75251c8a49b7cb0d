#include "lexctrl/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace lexctrl {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

void write_csv(const TrajectoryLog& log, std::ostream& os, bool include_timing) {
  const int n = log.njoints;
  const int p = log.nlevels;
  os << "t";
  for (int i = 0; i < n; ++i) os << ",q_" << i;
  for (int i = 0; i < n; ++i) os << ",qd_" << i;
  for (int i = 0; i < n; ++i) os << ",qdd_" << i;
  for (int i = 0; i < n; ++i) os << ",tau_" << i;
  for (int l = 0; l < p; ++l) os << ",wnorm_L" << (l + 1);
  for (int l = 0; l < p; ++l) os << ",mode_L" << (l + 1);
  os << ",asiter,solve_us\n";
  for (const LogRow& row : log.rows) {
    os << fmt(row.t);
    for (int i = 0; i < n; ++i) os << ',' << fmt(row.q[i]);
    for (int i = 0; i < n; ++i) os << ',' << fmt(row.qd[i]);
    for (int i = 0; i < n; ++i) os << ',' << fmt(row.qdd[i]);
    for (int i = 0; i < n; ++i) os << ',' << fmt(row.tau[i]);
    for (int l = 0; l < p; ++l) os << ',' << fmt(row.wnorm[l]);
    for (int l = 0; l < p; ++l) os << ',' << row.mode[l];
    os << ',' << row.as_iterations << ',' << fmt(include_timing ? row.solve_us : 0.0) << "\n";
  }
}

void write_csv_file(const TrajectoryLog& log, const std::string& path, bool include_timing) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open output file: " + path);
  write_csv(log, os, include_timing);
}

TrajectoryLog read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("csv: empty input");
  const std::vector<std::string> header = split(line, ',');
  int n = 0, p = 0;
  for (const std::string& h : header) {
    if (h.rfind("q_", 0) == 0) ++n;
    if (h.rfind("wnorm_L", 0) == 0) ++p;
  }
  const size_t expected = 1 + 4 * static_cast<size_t>(n) + 2 * static_cast<size_t>(p) + 2;
  if (n == 0 || header.size() != expected || header[0] != "t")
    throw ConfigError("csv: unexpected header layout");

  TrajectoryLog log;
  log.njoints = n;
  log.nlevels = p;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != expected) throw ConfigError("csv: row width disagrees with header");
    LogRow row;
    size_t at = 0;
    row.t = std::stod(f[at++]);
    auto take_vec = [&](int count) {
      Eigen::VectorXd v(count);
      for (int i = 0; i < count; ++i) v[i] = std::stod(f[at++]);
      return v;
    };
    row.q = take_vec(n);
    row.qd = take_vec(n);
    row.qdd = take_vec(n);
    row.tau = take_vec(n);
    row.wnorm = take_vec(p);
    row.mode.resize(p);
    for (int l = 0; l < p; ++l) row.mode[l] = std::stoi(f[at++]);
    row.as_iterations = std::stoi(f[at++]);
    row.solve_us = std::stod(f[at++]);
    log.rows.push_back(std::move(row));
  }
  return log;
}

TrajectoryLog read_csv_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open csv file: " + path);
  return read_csv(is);
}

void write_study_csv(const std::vector<PointMassLog>& logs, std::ostream& os) {
  if (logs.empty()) return;
  os << "t";
  for (const PointMassLog& log : logs) os << ",q[mu=" << fmt(log.mu) << ";kv=" << fmt(log.kv) << "]";
  os << "\n";
  const size_t rows = logs.front().t.size();
  for (size_t k = 0; k < rows; ++k) {
    os << fmt(logs.front().t[k]);
    for (const PointMassLog& log : logs) os << ',' << fmt(log.q[k]);
    os << "\n";
  }
}

}  // namespace lexctrl
