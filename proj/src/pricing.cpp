#include "qbpp/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace qbpp::pricing {

namespace {

constexpr double kPruneEps = 1e-9;

inline Mask bit(int i) { return Mask{1} << i; }

// Conflicting pairs contribute nothing to the p+ relaxations: a conflict is
// an infinite dissimilarity, i.e. profit -inf, clipped to zero.
inline double pplus(const PricingProblem& pp, int i, int j) {
  if (pp.conflict_adj[i] & bit(j)) return 0.0;
  return std::max(0.0, pp.quad[i][j]);
}

inline double marginal(const PricingProblem& pp, int item, Mask pattern) {
  double v = pp.linear[item];
  for (Mask m = pattern; m;) {
    int j = lowest_bit(m);
    m &= m - 1;
    v += pp.quad[item][j];
  }
  return v;
}

}  // namespace

PricingProblem PricingProblem::make(std::vector<long long> weights, long long capacity,
                                    std::vector<double> linear,
                                    std::vector<std::vector<double>> quad,
                                    const std::vector<std::pair<int, int>>& conflicts,
                                    double threshold) {
  PricingProblem pp;
  pp.n = static_cast<int>(weights.size());
  if (pp.n > kMaxItems)
    throw std::invalid_argument("pricing: at most 64 items supported");
  if (capacity < 0) throw std::invalid_argument("pricing: negative capacity");
  if (static_cast<int>(linear.size()) != pp.n ||
      static_cast<int>(quad.size()) != pp.n)
    throw std::invalid_argument("pricing: profit arrays must match item count");
  for (int i = 0; i < pp.n; ++i) {
    if (weights[i] < 1) throw std::invalid_argument("pricing: weights must be positive");
    if (static_cast<int>(quad[i].size()) != pp.n || quad[i][i] != 0.0)
      throw std::invalid_argument("pricing: quad must be n x n with zero diagonal");
    for (int j = i + 1; j < pp.n; ++j)
      if (quad[i][j] != quad[j][i])
        throw std::invalid_argument("pricing: quad must be symmetric");
  }
  pp.weights = std::move(weights);
  pp.capacity = capacity;
  pp.linear = std::move(linear);
  pp.quad = std::move(quad);
  pp.threshold = threshold;
  pp.conflict_adj.assign(pp.n, 0);
  for (auto [i, j] : conflicts) {
    if (i < 0 || j < 0 || i >= pp.n || j >= pp.n || i == j)
      throw std::invalid_argument("pricing: bad conflict pair");
    pp.conflict_adj[i] |= bit(j);
    pp.conflict_adj[j] |= bit(i);
  }
  for (int i = 0; i < pp.n; ++i) {
    if (pp.weights[i] <= pp.capacity)
      pp.live |= bit(i);
    else
      pp.dropped.push_back(i);
  }
  return pp;
}

long long PricingProblem::mask_weight(Mask m) const {
  long long w = 0;
  while (m) {
    w += weights[lowest_bit(m)];
    m &= m - 1;
  }
  return w;
}

bool PricingProblem::has_conflict(Mask m) const {
  for (Mask r = m; r;) {
    int i = lowest_bit(r);
    r &= r - 1;
    if (conflict_adj[i] & r) return true;
  }
  return false;
}

bool PricingProblem::feasible(Mask m) const {
  if (m & ~live) return false;
  if (mask_weight(m) > capacity) return false;
  return !has_conflict(m);
}

double pattern_value(const PricingProblem& pp, Mask pattern) {
  if (!pp.feasible(pattern))
    throw std::invalid_argument("pattern_value: infeasible pattern");
  double v = 0.0;
  for (Mask m = pattern; m;) {
    int i = lowest_bit(m);
    m &= m - 1;
    v += pp.linear[i];
    for (Mask r = m; r;) {
      int j = lowest_bit(r);
      r &= r - 1;
      v += pp.quad[i][j];
    }
  }
  return v;
}

std::vector<int> mch_item_order(const PricingProblem& pp) {
  std::vector<int> order;
  std::vector<double> key(pp.n, 0.0);
  for (int i = 0; i < pp.n; ++i) {
    if (!(pp.live & bit(i))) continue;
    double s = pp.linear[i];
    for (int j = 0; j < pp.n; ++j)
      if (j != i) s += pp.quad[i][j];
    key[i] = s / static_cast<double>(pp.weights[i]);
    order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return key[a] > key[b]; });
  return order;
}

std::vector<RankedPattern> mch_solve(const PricingProblem& pp, int h) {
  if (h < 1) throw std::invalid_argument("mch_solve: h must be >= 1");
  const long long W = pp.capacity;

  struct Entry {
    double value;
    Mask pattern;
  };
  // state[w]: up to h best patterns with weight exactly w, value-descending;
  // an empty list is the -inf base case.
  std::vector<std::vector<Entry>> state(static_cast<std::size_t>(W) + 1);
  state[0].push_back({0.0, 0});

  std::vector<Entry> cand;
  for (int item : mch_item_order(pp)) {
    const long long wi = pp.weights[item];
    for (long long w = W; w >= wi; --w) {
      const auto& from = state[static_cast<std::size_t>(w - wi)];
      if (from.empty()) continue;
      auto& cur = state[static_cast<std::size_t>(w)];
      cand.clear();
      cand.insert(cand.end(), cur.begin(), cur.end());
      bool inserted = false;
      for (const Entry& e : from) {
        if (e.pattern & pp.conflict_adj[item]) continue;
        cand.push_back({e.value + marginal(pp, item, e.pattern), e.pattern | bit(item)});
        inserted = true;
      }
      if (!inserted) continue;
      // stable: on value ties the inherited entries (listed first) win
      std::stable_sort(cand.begin(), cand.end(),
                       [](const Entry& a, const Entry& b) { return a.value > b.value; });
      if (static_cast<int>(cand.size()) > h) cand.resize(static_cast<std::size_t>(h));
      cur = cand;
    }
  }

  std::vector<RankedPattern> out;
  for (const auto& list : state)
    for (const Entry& e : list)
      if (e.pattern != 0) out.push_back({e.pattern, pattern_value(pp, e.pattern)});
  std::sort(out.begin(), out.end(), [](const RankedPattern& a, const RankedPattern& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.items < b.items;
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const RankedPattern& a, const RankedPattern& b) {
                          return a.items == b.items;
                        }),
            out.end());
  std::size_t cap = static_cast<std::size_t>(h) * (static_cast<std::size_t>(W) + 1);
  if (out.size() > cap) out.resize(cap);
  return out;
}

GreedyResult greedy_lower_bound(const PricingProblem& pp, const BBNode& node) {
  Mask cur = node.inside;
  Mask cands = node.undecided;
  long long weight = node.inside_weight;
  double value = node.inside_value;
  while (cands) {
    int best = -1;
    double best_ratio = 0.0, best_gain = 0.0;
    for (Mask m = cands; m;) {
      int i = lowest_bit(m);
      m &= m - 1;
      if (weight + pp.weights[i] > pp.capacity) continue;
      if (pp.conflict_adj[i] & cur) continue;
      double gain = marginal(pp, i, cur);
      if (gain <= 0.0) continue;
      double ratio = gain / static_cast<double>(pp.weights[i]);
      if (best == -1 || ratio > best_ratio) {  // ties keep the smaller index
        best = i;
        best_ratio = ratio;
        best_gain = gain;
      }
    }
    if (best == -1) break;
    cur |= bit(best);
    weight += pp.weights[best];
    value += best_gain;
    cands &= ~bit(best);
  }
  return {cur, value};
}

RatioOrders precompute_ratio_orders(const PricingProblem& pp) {
  RatioOrders orders(static_cast<std::size_t>(pp.n));
  for (int i = 0; i < pp.n; ++i) {
    auto& ord = orders[static_cast<std::size_t>(i)];
    ord.reserve(static_cast<std::size_t>(pp.n) - 1);
    for (int j = 0; j < pp.n; ++j)
      if (j != i) ord.push_back(j);
    std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) {
      return pplus(pp, i, a) / static_cast<double>(pp.weights[a]) >
             pplus(pp, i, b) / static_cast<double>(pp.weights[b]);
    });
  }
  return orders;
}

double node_upper_bound(const PricingProblem& pp, const BBNode& node,
                        const RatioOrders& orders) {
  const long long residual = pp.capacity - node.inside_weight;

  // p_bar[i]: cap on the contribution of inserting i into the current
  // filling, using the fractional relaxation of the p+ knapsack over the
  // other undecided items.
  struct Cand {
    int item;
    double pbar;
  };
  std::vector<Cand> cands;
  for (Mask m = node.undecided; m;) {
    int i = lowest_bit(m);
    m &= m - 1;
    if (pp.weights[i] > residual) continue;
    long long rem = residual - pp.weights[i];
    double frac = 0.0;
    for (int j : orders[static_cast<std::size_t>(i)]) {
      if (!(node.undecided & bit(j))) continue;
      double pij = pplus(pp, i, j);
      if (pij <= 0.0) break;  // ratio-sorted, the rest contribute nothing
      if (pp.weights[j] <= rem) {
        frac += pij;
        rem -= pp.weights[j];
      } else {
        frac += pij * static_cast<double>(rem) / static_cast<double>(pp.weights[j]);
        break;
      }
    }
    double pbar = marginal(pp, i, node.inside) + 0.5 * frac;
    if (pbar > 0.0) cands.push_back({i, pbar});
  }

  // exact 0-1 knapsack over the positive caps
  double extension = 0.0;
  if (!cands.empty() && residual > 0) {
    std::vector<double> dp(static_cast<std::size_t>(residual) + 1, 0.0);
    for (const Cand& c : cands) {
      const long long wi = pp.weights[c.item];
      for (long long w = residual; w >= wi; --w) {
        double via = dp[static_cast<std::size_t>(w - wi)] + c.pbar;
        if (via > dp[static_cast<std::size_t>(w)]) dp[static_cast<std::size_t>(w)] = via;
      }
    }
    extension = dp[static_cast<std::size_t>(residual)];
  }
  return node.inside_value + extension;
}

namespace {

BBNode child_with(const PricingProblem& pp, const BBNode& v, int j, bool inside) {
  BBNode c = v;
  c.undecided &= ~bit(j);
  if (inside) {
    c.inside_value += marginal(pp, j, c.inside);
    c.inside |= bit(j);
    c.inside_weight += pp.weights[j];
  } else {
    c.outside |= bit(j);
  }
  return c;
}

}  // namespace

BBResult bb_solve(const PricingProblem& pp, Mask incumbent_pattern,
                  const BBLimits& limits) {
  if (!pp.feasible(incumbent_pattern))
    throw std::invalid_argument("bb_solve: infeasible initial incumbent");

  BBResult res;
  res.pattern = incumbent_pattern;
  res.value = incumbent_pattern ? pattern_value(pp, incumbent_pattern) : 0.0;

  RatioOrders orders = precompute_ratio_orders(pp);

  auto cmp = [](const BBNode& a, const BBNode& b) { return a.ub < b.ub; };
  std::priority_queue<BBNode, std::vector<BBNode>, decltype(cmp)> open(cmp);

  BBNode root;
  root.undecided = pp.live;
  root.ub = node_upper_bound(pp, root, orders);
  open.push(root);
  res.stats.created = 1;

  bool hit_limit = false;
  while (!open.empty()) {
    if (res.stats.expanded >= limits.max_nodes ||
        (limits.deadline && std::chrono::steady_clock::now() >= *limits.deadline)) {
      hit_limit = true;
      break;
    }
    BBNode v = open.top();
    open.pop();
    if (v.ub <= res.value + kPruneEps) {
      ++res.stats.pruned;
      continue;
    }
    ++res.stats.expanded;

    // undecided items that no longer fit or clash with the filling are out
    for (Mask m = v.undecided; m;) {
      int i = lowest_bit(m);
      m &= m - 1;
      if (v.inside_weight + pp.weights[i] > pp.capacity ||
          (pp.conflict_adj[i] & v.inside)) {
        v.undecided &= ~bit(i);
        v.outside |= bit(i);
      }
    }

    if (v.undecided == 0) {
      if (v.inside_value > res.value) {
        res.value = v.inside_value;
        res.pattern = v.inside;
      }
      continue;
    }

    GreedyResult lb = greedy_lower_bound(pp, v);
    if (lb.value > res.value) {
      res.value = lb.value;
      res.pattern = lb.pattern;
    }
    if (limits.observer) limits.observer(v, lb.value, v.ub);
    if (v.ub <= res.value + kPruneEps) {
      ++res.stats.pruned;
      continue;
    }

    // branch on argmin over undecided j of max(ub_in, ub_out); ties prefer
    // the smaller partner bound, then the smaller index
    int best_j = -1;
    double best_max = 0.0, best_min = 0.0;
    BBNode best_in, best_out;
    for (Mask m = v.undecided; m;) {
      int j = lowest_bit(m);
      m &= m - 1;
      BBNode cin = child_with(pp, v, j, true);
      cin.ub = node_upper_bound(pp, cin, orders);
      BBNode cout = child_with(pp, v, j, false);
      cout.ub = node_upper_bound(pp, cout, orders);
      double mx = std::max(cin.ub, cout.ub);
      double mn = std::min(cin.ub, cout.ub);
      if (best_j == -1 || mx < best_max || (mx == best_max && mn < best_min)) {
        best_j = j;
        best_max = mx;
        best_min = mn;
        best_in = cin;
        best_out = cout;
      }
    }
    for (const BBNode& c : {best_in, best_out}) {
      if (c.ub > res.value + kPruneEps) {
        open.push(c);
        ++res.stats.created;
      } else {
        ++res.stats.pruned;
      }
    }
  }

  res.proven = !hit_limit;
  // exact recomputation so the reported value is reproducible from the mask
  res.value = res.pattern ? pattern_value(pp, res.pattern) : 0.0;
  return res;
}

EnumResult enumerate_solve(const PricingProblem& pp) {
  if (pp.n > 20) throw std::invalid_argument("enumerate_solve: n > 20 refused");
  const std::size_t total = std::size_t{1} << pp.n;
  std::vector<double> val(total, 0.0);
  std::vector<long long> wt(total, 0);
  std::vector<char> ok(total, 1);
  EnumResult best;
  for (std::size_t m = 1; m < total; ++m) {
    int i = lowest_bit(m);
    std::size_t rest = m & (m - 1);
    wt[m] = wt[rest] + pp.weights[i];
    val[m] = val[rest] + marginal(pp, i, static_cast<Mask>(rest));
    ok[m] = ok[rest] && (pp.live & bit(i)) && wt[m] <= pp.capacity &&
            !(pp.conflict_adj[i] & rest);
    if (ok[m] && val[m] > best.value) {
      best.value = val[m];
      best.pattern = static_cast<Mask>(m);
    }
  }
  // canonical summation, comparable bit-for-bit with the other solvers
  if (best.pattern) best.value = pattern_value(pp, best.pattern);
  return best;
}

PricingProblem read_pricing_problem(const std::string& text) {
  std::istringstream in(text);
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "GQKP" || version != 1)
    throw std::runtime_error("pricing file: malformed header, expected 'GQKP 1'");
  int n;
  long long W;
  if (!(in >> n >> W) || n < 1) throw std::runtime_error("pricing file: expected 'n W'");
  std::vector<long long> weights(static_cast<std::size_t>(n));
  for (auto& w : weights)
    if (!(in >> w)) throw std::runtime_error("pricing file: expected weights");
  std::string tag;
  if (!(in >> tag) || tag != "linear")
    throw std::runtime_error("pricing file: expected 'linear' line");
  std::vector<double> linear(static_cast<std::size_t>(n));
  for (auto& v : linear)
    if (!(in >> v)) throw std::runtime_error("pricing file: expected linear profits");
  int m;
  if (!(in >> m) || m < 0) throw std::runtime_error("pricing file: expected pair count");
  std::vector<std::vector<double>> quad(static_cast<std::size_t>(n),
                                        std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int e = 0; e < m; ++e) {
    int i, j;
    double p;
    if (!(in >> i >> j >> p)) throw std::runtime_error("pricing file: expected 'i j p'");
    if (i < 1 || j < 1 || i > n || j > n || i >= j)
      throw std::runtime_error("pricing file: bad pair indices");
    quad[i - 1][j - 1] = p;
    quad[j - 1][i - 1] = p;
  }
  std::vector<std::pair<int, int>> conflicts;
  int c;
  if (in >> c) {
    for (int e = 0; e < c; ++e) {
      int i, j;
      if (!(in >> i >> j) || i < 1 || j < 1 || i > n || j > n || i == j)
        throw std::runtime_error("pricing file: bad conflict pair");
      conflicts.push_back({i - 1, j - 1});
    }
  }
  return PricingProblem::make(std::move(weights), W, std::move(linear), std::move(quad),
                              conflicts);
}

std::string write_pricing_problem(const PricingProblem& pp) {
  std::ostringstream os;
  os << "GQKP 1\n" << pp.n << ' ' << pp.capacity << '\n';
  for (int i = 0; i < pp.n; ++i) os << pp.weights[i] << (i + 1 == pp.n ? '\n' : ' ');
  os << "linear";
  for (int i = 0; i < pp.n; ++i) os << ' ' << pp.linear[i];
  os << '\n';
  std::vector<std::pair<int, int>> entries;
  for (int i = 0; i < pp.n; ++i)
    for (int j = i + 1; j < pp.n; ++j)
      if (pp.quad[i][j] != 0.0) entries.push_back({i, j});
  os << entries.size() << '\n';
  for (auto [i, j] : entries) os << i + 1 << ' ' << j + 1 << ' ' << pp.quad[i][j] << '\n';
  std::vector<std::pair<int, int>> conf;
  for (int i = 0; i < pp.n; ++i)
    for (int j = i + 1; j < pp.n; ++j)
      if (pp.conflict_adj[i] & bit(j)) conf.push_back({i, j});
  os << conf.size() << '\n';
  for (auto [i, j] : conf) os << i + 1 << ' ' << j + 1 << '\n';
  return os.str();
}

}  // namespace qbpp::pricing
