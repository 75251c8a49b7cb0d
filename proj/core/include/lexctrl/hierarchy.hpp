#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "lexctrl/errors.hpp"

namespace lexctrl {

// Row semantics against the slack w of its level:
//   kEqual:  A x + b  = w
//   kUpper:  A x + b <= w   (w picks up positive violation only)
//   kLower:  A x + b >= w   (w picks up negative violation only)
enum class Relation { kEqual, kUpper, kLower };

struct PriorityLevel {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  std::vector<Relation> relations;
  int level_index = 0;

  int rows() const { return static_cast<int>(A.rows()); }
};

struct Hierarchy {
  int num_vars = 0;
  std::vector<PriorityLevel> levels;

  int num_levels() const { return static_cast<int>(levels.size()); }
  int total_rows() const;
  int inequality_rows() const;
  // Stacked row offset of level l, counting rows of levels 0..l-1.
  int row_offset(int level) const;
  // Throws DimensionMismatch / std::invalid_argument on malformed input.
  void validate() const;
};

// Plain-text dump of every level (matrix, offset, relations) for triage.
void dump_hierarchy(const Hierarchy& h, std::ostream& os);

}  // namespace lexctrl
