#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace qbpp::pricing {

using Mask = std::uint64_t;
inline constexpr int kMaxItems = 64;

inline int popcount(Mask m) { return __builtin_popcountll(m); }
inline int lowest_bit(Mask m) { return __builtin_ctzll(m); }

// The pricing problem: maximize sum of linear profits plus pairwise
// quadratic profits of the chosen items, subject to a knapsack capacity and
// hard pairwise conflicts. Linear and quadratic profits may be negative.
// Items heavier than the capacity are dropped at construction and recorded.
// Immutable after make(); safe to share across threads.
struct PricingProblem {
  int n = 0;
  std::vector<long long> weights;
  long long capacity = 0;
  std::vector<double> linear;              // per-item profit pi*
  std::vector<std::vector<double>> quad;   // symmetric, zero diagonal
  std::vector<Mask> conflict_adj;          // per-item conflict neighbours
  double threshold = 0.0;                  // column acceptance constant
  Mask live = 0;                           // items that fit the capacity
  std::vector<int> dropped;

  static PricingProblem make(std::vector<long long> weights, long long capacity,
                             std::vector<double> linear,
                             std::vector<std::vector<double>> quad,
                             const std::vector<std::pair<int, int>>& conflicts = {},
                             double threshold = 0.0);

  long long mask_weight(Mask m) const;
  bool has_conflict(Mask m) const;
  bool feasible(Mask m) const;  // live, weight, conflicts
};

// Exact profit of a feasible pattern; throws std::invalid_argument otherwise.
double pattern_value(const PricingProblem& pp, Mask pattern);

struct RankedPattern {
  Mask items = 0;
  double value = 0.0;
};

// Multiple Constructive Heuristic: stage/weight DP keeping the h best
// patterns per state; returns the globally best distinct non-empty feasible
// patterns (at most h*(W+1)), best first, values recomputed exactly.
std::vector<RankedPattern> mch_solve(const PricingProblem& pp, int h);

// Item processing order of the MCH: non-increasing
// (linear[i] + sum_j quad[i][j]) / w_i over live items, ties by index.
std::vector<int> mch_item_order(const PricingProblem& pp);

// A branch-and-bound node: partial filling with items packed (inside),
// excluded (outside) and undecided.
struct BBNode {
  Mask inside = 0;
  Mask outside = 0;
  Mask undecided = 0;
  long long inside_weight = 0;
  double inside_value = 0.0;
  double ub = 0.0;
};

struct GreedyResult {
  Mask pattern = 0;
  double value = 0.0;
};

// Completes `inside` greedily by largest positive gain-to-weight ratio.
GreedyResult greedy_lower_bound(const PricingProblem& pp, const BBNode& node);

// For each item i, the other items sorted by max(0, quad[i][j]) / w_j
// non-increasing (ties by index); computed once per B&B run.
using RatioOrders = std::vector<std::vector<int>>;
RatioOrders precompute_ratio_orders(const PricingProblem& pp);

// Upper bound on the best pattern extending node.inside: per-item caps from
// fractional knapsack relaxations, combined by an exact 0-1 knapsack DP.
double node_upper_bound(const PricingProblem& pp, const BBNode& node,
                        const RatioOrders& orders);

struct BBLimits {
  std::uint64_t max_nodes = ~0ull;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  // Test hook: called for every expanded node with its greedy LB and UB.
  std::function<void(const BBNode&, double lb, double ub)> observer;
};

struct BBStats {
  std::uint64_t created = 0;
  std::uint64_t expanded = 0;
  std::uint64_t pruned = 0;
};

struct BBResult {
  Mask pattern = 0;
  double value = 0.0;
  bool proven = false;  // true iff the search terminated naturally
  BBStats stats;
};

// Exact best-first B&B for the pricing problem. The initial incumbent must
// be feasible (typically the best MCH pattern); its value is recomputed.
BBResult bb_solve(const PricingProblem& pp, Mask incumbent_pattern,
                  const BBLimits& limits = {});

struct EnumResult {
  Mask pattern = 0;
  double value = 0.0;
};

// Exhaustive subset scan, n <= 20. The test oracle for bb_solve and mch.
EnumResult enumerate_solve(const PricingProblem& pp);

// GQKP text format round-trip for the standalone CLI (see docs).
PricingProblem read_pricing_problem(const std::string& text);
std::string write_pricing_problem(const PricingProblem& pp);

}  // namespace qbpp::pricing
