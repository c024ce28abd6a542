#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qbpp {

// Sign regime of the dissimilarity values.
enum class Sigma { minus, plus, mixed };

std::string to_string(Sigma s);
std::optional<Sigma> sigma_from_string(const std::string& s);

struct InstanceMeta {
  std::optional<double> mu;
  std::optional<double> delta;
  std::optional<Sigma> sigma;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> group;
  bool clamped = false;  // capacity was raised to the max item weight
  bool operator==(const InstanceMeta&) const = default;
};

// A QBPP instance: n items with positive integer weights, identical bins of
// capacity W, a fixed cost alpha per used bin, and a symmetric integer
// dissimilarity matrix with zero diagonal. Items are 0-indexed in memory;
// the file format and all user-facing output are 1-indexed.
// Immutable after construction; safe to share across threads.
struct Instance {
  int n = 0;
  std::vector<int> weights;
  long long capacity = 0;
  long long bin_cost = 0;
  std::vector<std::vector<int>> dissim;
  InstanceMeta meta;

  int d(int i, int j) const { return dissim[i][j]; }
  long long total_weight() const;
  int max_weight() const;
  bool operator==(const Instance& o) const {
    return n == o.n && weights == o.weights && capacity == o.capacity &&
           bin_cost == o.bin_cost && dissim == o.dissim && meta == o.meta;
  }
};

// Throws std::invalid_argument when an instance invariant is broken
// (non-positive weight, capacity below the largest weight, asymmetric or
// nonzero-diagonal dissimilarity, ...).
void check_instance(const Instance& inst);

// A feasible subset of items with cached weight and cost.
struct Pattern {
  std::vector<int> items;  // sorted, 0-indexed
  long long weight = 0;
  long long cost = 0;
};

struct Solution {
  std::vector<Pattern> bins;
  long long objective = 0;
};

// cost(P) = alpha + sum of d_ij over unordered pairs inside `items`.
// Does not check capacity. Throws std::invalid_argument on an empty set or
// an out-of-range index.
long long pattern_cost(const Instance& inst, const std::vector<int>& items);

// Builds a Pattern with cached weight/cost; rejects over-capacity sets.
Pattern make_pattern(const Instance& inst, std::vector<int> items);

struct ValidationReport {
  std::vector<int> missing;        // items in no bin (0-indexed)
  std::vector<int> duplicated;     // items in more than one bin
  std::vector<int> over_capacity;  // indices of bins exceeding W
  long long recomputed_objective = 0;
  bool objective_matches = true;
  bool pass() const {
    return missing.empty() && duplicated.empty() && over_capacity.empty() &&
           objective_matches;
  }
  std::string describe() const;  // human-readable, 1-indexed
};

// Violations are report entries, never exceptions.
ValidationReport validate_solution(const Instance& inst, const Solution& sol);

// Sum of pattern costs; throws std::invalid_argument if the solution does
// not validate.
long long solution_cost(const Instance& inst, const Solution& sol);

// Canonical .qbpp text format (see docs/file-formats.md). Parse errors are
// std::runtime_error naming the offending line.
Instance read_instance(const std::string& text);
std::string write_instance(const Instance& inst);
Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

// Solution files: one bin per line as 1-indexed item ids; optional
// "# objective N" comment carries the stored objective. Reading does not
// validate -- feed the result to validate_solution.
Solution read_solution(const Instance& inst, const std::string& text);
std::string write_solution(const Solution& sol);

// Shortest decimal representation that re-parses to the same double.
std::string format_double(double v);

}  // namespace qbpp
