#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qbpp/core.hpp"
#include "qbpp/rng.hpp"

namespace qbpp::gen {

struct GeneratorConfig {
  int n = 25;
  double mu = 1.0;       // > 0
  double delta = 0.5;    // density in (0, 1]
  Sigma sigma = Sigma::mixed;
  std::uint64_t seed = 1;
  int copies = 5;
};

struct DerivedParams {
  long long total_weight = 0;
  long long capacity = 0;  // max(1, floor(0.2 * total / mu)), unclamped
  long long m = 0;         // ceil(total / W)
  double n_bar = 0.0;      // n / m
  double d_bar = 0.0;      // n_bar * sum(d) / C(n,2), 0 when n < 2
  long long alpha = 0;     // ceil(mu * |d_bar|)
};

struct ItemData {
  std::vector<int> weights;
  std::vector<std::vector<int>> dissim;
};

// Item stream for one (seed, n, delta, sigma, copy); mu is deliberately
// excluded so that instances of a mu-group share item data bit-exactly.
std::uint64_t item_stream_seed(std::uint64_t seed, int n, double delta, Sigma sigma,
                               int copy);

// Weights ~ U{1..50}; each pair gets a dissimilarity draw with probability
// delta, from U{0..100} / U{-100..0} / U{-50..50} by sign regime.
ItemData generate_items(int n, double delta, Sigma sigma, Xoshiro256ss& rng);

DerivedParams derive_capacity_and_cost(const std::vector<int>& weights,
                                       const std::vector<std::vector<int>>& dissim,
                                       double mu);

// Full pipeline for one instance; clamps the capacity up to the largest
// weight when the derived value would leave an item unpackable (recorded in
// meta.clamped).
Instance make_instance(const GeneratorConfig& cfg, int copy);

// One shared item draw, one instance per mu.
std::vector<Instance> generate_group(int n, double delta, Sigma sigma,
                                     std::uint64_t seed, int copy,
                                     const std::vector<double>& mus);

struct ManifestRow {
  std::string file;
  int n;
  double mu;
  double delta;
  Sigma sigma;
  int copy;
  std::uint64_t group;
  long long capacity;
  long long alpha;
  std::uint64_t seed;
};

struct Manifest {
  std::vector<ManifestRow> rows;
  std::string to_csv() const;
};

// The benchmark cross product: n in {25,30,35,40,45} (or `only_n` when
// non-empty), mu in {0.6,1,2}, delta in {0.25,0.5,0.75}, all three sign
// regimes, five copies. Writes .qbpp files plus manifest.csv into out_dir.
Manifest generate_benchmark(const std::string& out_dir, std::uint64_t master_seed,
                            const std::vector<int>& only_n = {});

std::string instance_file_name(int n, double mu, double delta, Sigma sigma, int copy);

}  // namespace qbpp::gen
