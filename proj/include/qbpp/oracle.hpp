#pragma once

#include <utility>
#include <vector>

#include "qbpp/core.hpp"

namespace qbpp::oracle {

// Side constraints for validating branch-and-price nodes: pairs that must
// not share a bin and groups that must stay together.
struct Constraints {
  std::vector<std::pair<int, int>> conflicts;   // 0-indexed item pairs
  std::vector<std::vector<int>> merged_groups;  // disjoint item groups
};

struct Result {
  Solution solution;
  long long objective = 0;
};

// Exact QBPP solver by set-partition enumeration in restricted-growth-string
// order with capacity pruning. Guarded to at most 12 effective units
// (items after merging); throws std::invalid_argument beyond that and
// std::runtime_error when the constraints admit no feasible partition.
Result solve_exact(const Instance& inst, const Constraints& cons = {});

}  // namespace qbpp::oracle
