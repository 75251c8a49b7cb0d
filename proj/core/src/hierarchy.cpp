#include "lexctrl/hierarchy.hpp"

#include <ostream>

namespace lexctrl {

int Hierarchy::total_rows() const {
  int rows = 0;
  for (const PriorityLevel& level : levels) rows += level.rows();
  return rows;
}

int Hierarchy::inequality_rows() const {
  int rows = 0;
  for (const PriorityLevel& level : levels)
    for (Relation r : level.relations)
      if (r != Relation::kEqual) ++rows;
  return rows;
}

int Hierarchy::row_offset(int level) const {
  int off = 0;
  for (int l = 0; l < level; ++l) off += levels[l].rows();
  return off;
}

void Hierarchy::validate() const {
  if (num_vars <= 0) throw std::invalid_argument("Hierarchy: num_vars must be positive");
  if (levels.empty()) throw std::invalid_argument("Hierarchy: no levels");
  int prev_index = -1;
  for (const PriorityLevel& level : levels) {
    if (level.A.cols() != num_vars)
      throw DimensionMismatch("Hierarchy: level matrix has wrong column count");
    if (level.A.rows() != level.b.size())
      throw DimensionMismatch("Hierarchy: A and b row counts disagree");
    if (static_cast<int>(level.relations.size()) != level.rows())
      throw DimensionMismatch("Hierarchy: relations size disagrees with row count");
    if (!level.A.allFinite() || !level.b.allFinite())
      throw std::invalid_argument("Hierarchy: non-finite entries");
    if (level.level_index <= prev_index)
      throw std::invalid_argument("Hierarchy: level indices must be strictly increasing");
    prev_index = level.level_index;
  }
}

void dump_hierarchy(const Hierarchy& h, std::ostream& os) {
  os << "%%HlspHierarchy vars " << h.num_vars << " levels " << h.num_levels() << "\n";
  for (const PriorityLevel& level : h.levels) {
    os << "%% level " << level.level_index << " rows " << level.rows() << "\n";
    os << "%% relations";
    for (Relation r : level.relations)
      os << ' ' << (r == Relation::kEqual ? 'E' : (r == Relation::kUpper ? 'U' : 'L'));
    os << "\n";
    for (int i = 0; i < level.rows(); ++i) {
      for (int j = 0; j < h.num_vars; ++j) os << level.A(i, j) << ' ';
      os << "| " << level.b[i] << "\n";
    }
  }
}

}  // namespace lexctrl
