#include "qbpp/generator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qbpp::gen {

namespace {

std::uint64_t sigma_tag(Sigma s) {
  switch (s) {
    case Sigma::minus: return 1;
    case Sigma::plus: return 2;
    case Sigma::mixed: return 3;
  }
  return 0;
}

}  // namespace

std::uint64_t item_stream_seed(std::uint64_t seed, int n, double delta, Sigma sigma,
                               int copy) {
  return derive_stream_seed(seed, {static_cast<std::uint64_t>(n),
                                   std::bit_cast<std::uint64_t>(delta),
                                   sigma_tag(sigma),
                                   static_cast<std::uint64_t>(copy)});
}

ItemData generate_items(int n, double delta, Sigma sigma, Xoshiro256ss& rng) {
  if (n < 1) throw std::invalid_argument("generate_items: n must be >= 1");
  if (delta < 0.0 || delta > 1.0)
    throw std::invalid_argument("generate_items: delta must be in [0,1]");
  ItemData data;
  data.weights.resize(n);
  for (int i = 0; i < n; ++i)
    data.weights[i] = static_cast<int>(rng.uniform_int(1, 50));

  // Bernoulli(delta) through a 64-bit threshold; exact for the dyadic
  // densities 0.25/0.5/0.75 of the benchmark.
  const bool always = delta >= 1.0;
  const std::uint64_t threshold =
      always ? ~0ull : static_cast<std::uint64_t>(delta * 18446744073709551616.0);

  data.dissim.assign(n, std::vector<int>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      std::uint64_t u = rng.next();
      if (!always && u >= threshold) continue;
      long long d = 0;
      switch (sigma) {
        case Sigma::plus: d = rng.uniform_int(0, 100); break;
        case Sigma::minus: d = -rng.uniform_int(0, 100); break;
        case Sigma::mixed: d = rng.uniform_int(-50, 50); break;
      }
      data.dissim[i][j] = static_cast<int>(d);
      data.dissim[j][i] = static_cast<int>(d);
    }
  return data;
}

DerivedParams derive_capacity_and_cost(const std::vector<int>& weights,
                                       const std::vector<std::vector<int>>& dissim,
                                       double mu) {
  if (weights.empty()) throw std::invalid_argument("derive: no weights");
  if (mu <= 0.0) throw std::invalid_argument("derive: mu must be positive");
  const int n = static_cast<int>(weights.size());
  DerivedParams p;
  for (int w : weights) p.total_weight += w;
  // +1e-9 guards the floor/ceil against float noise on integer-valued targets
  p.capacity = std::max<long long>(
      1, static_cast<long long>(std::floor(0.2 * static_cast<double>(p.total_weight) / mu + 1e-9)));
  p.m = (p.total_weight + p.capacity - 1) / p.capacity;
  p.n_bar = static_cast<double>(n) / static_cast<double>(p.m);
  if (n >= 2) {
    long long sum_d = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) sum_d += dissim[i][j];
    double pairs = 0.5 * n * (n - 1);
    p.d_bar = p.n_bar * static_cast<double>(sum_d) / pairs;
  }
  p.alpha = static_cast<long long>(std::ceil(mu * std::abs(p.d_bar) - 1e-9));
  if (p.alpha < 0) p.alpha = 0;
  return p;
}

Instance make_instance(const GeneratorConfig& cfg, int copy) {
  std::uint64_t stream = item_stream_seed(cfg.seed, cfg.n, cfg.delta, cfg.sigma, copy);
  Xoshiro256ss rng(stream);
  ItemData items = generate_items(cfg.n, cfg.delta, cfg.sigma, rng);
  DerivedParams dp = derive_capacity_and_cost(items.weights, items.dissim, cfg.mu);

  Instance inst;
  inst.n = cfg.n;
  inst.weights = std::move(items.weights);
  inst.dissim = std::move(items.dissim);
  inst.capacity = dp.capacity;
  inst.bin_cost = dp.alpha;
  int max_w = inst.max_weight();
  if (inst.capacity < max_w) {
    inst.capacity = max_w;
    inst.meta.clamped = true;
  }
  inst.meta.mu = cfg.mu;
  inst.meta.delta = cfg.delta;
  inst.meta.sigma = cfg.sigma;
  inst.meta.seed = cfg.seed;
  inst.meta.group = stream;
  check_instance(inst);
  return inst;
}

std::vector<Instance> generate_group(int n, double delta, Sigma sigma,
                                     std::uint64_t seed, int copy,
                                     const std::vector<double>& mus) {
  if (mus.empty()) throw std::invalid_argument("generate_group: empty mu list");
  std::vector<Instance> out;
  out.reserve(mus.size());
  for (double mu : mus) {
    GeneratorConfig cfg;
    cfg.n = n;
    cfg.mu = mu;
    cfg.delta = delta;
    cfg.sigma = sigma;
    cfg.seed = seed;
    out.push_back(make_instance(cfg, copy));
  }
  return out;
}

std::string instance_file_name(int n, double mu, double delta, Sigma sigma, int copy) {
  std::ostringstream os;
  os << "n" << n << "_mu" << format_double(mu) << "_d" << format_double(delta) << "_"
     << to_string(sigma) << "_c" << copy << ".qbpp";
  return os.str();
}

std::string Manifest::to_csv() const {
  std::ostringstream os;
  os << "file,n,mu,delta,sigma,copy,group,W,alpha,seed\n";
  for (const ManifestRow& r : rows)
    os << r.file << ',' << r.n << ',' << format_double(r.mu) << ','
       << format_double(r.delta) << ',' << to_string(r.sigma) << ',' << r.copy << ','
       << r.group << ',' << r.capacity << ',' << r.alpha << ',' << r.seed << '\n';
  return os.str();
}

Manifest generate_benchmark(const std::string& out_dir, std::uint64_t master_seed,
                            const std::vector<int>& only_n) {
  namespace fs = std::filesystem;
  const std::vector<int> all_n = {25, 30, 35, 40, 45};
  const std::vector<double> mus = {0.6, 1.0, 2.0};
  const std::vector<double> deltas = {0.25, 0.5, 0.75};
  const std::vector<Sigma> sigmas = {Sigma::minus, Sigma::plus, Sigma::mixed};
  const int copies = 5;

  std::vector<int> ns = only_n.empty() ? all_n : only_n;
  fs::create_directories(out_dir);

  Manifest manifest;
  for (int n : ns)
    for (double delta : deltas)
      for (Sigma sigma : sigmas)
        for (int copy = 1; copy <= copies; ++copy) {
          auto group = generate_group(n, delta, sigma, master_seed, copy, mus);
          for (std::size_t k = 0; k < mus.size(); ++k) {
            const Instance& inst = group[k];
            std::string name = instance_file_name(n, mus[k], delta, sigma, copy);
            save_instance(inst, (fs::path(out_dir) / name).string());
            manifest.rows.push_back({name, n, mus[k], delta, sigma, copy,
                                     *inst.meta.group, inst.capacity, inst.bin_cost,
                                     master_seed});
          }
        }

  std::ofstream mf(fs::path(out_dir) / "manifest.csv");
  if (!mf) throw std::runtime_error("cannot write manifest.csv in " + out_dir);
  mf << manifest.to_csv();
  return manifest;
}

}  // namespace qbpp::gen
