#include "qbpp/oracle.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace qbpp::oracle {

namespace {

struct Unit {
  std::vector<int> items;  // sorted constituents
  long long weight = 0;
  long long internal_d = 0;  // sum of d over pairs inside the unit
};

struct Enumerator {
  const Instance& inst;
  std::vector<Unit> units;
  std::vector<std::vector<bool>> unit_conflict;  // unit-level conflicts
  std::vector<std::vector<long long>> cross_d;   // unit-level cross dissimilarity

  std::vector<int> assign;       // unit -> block
  std::vector<long long> load;   // block weight
  std::vector<long long> bcost;  // block cost (alpha + internal pair sums)
  int open_blocks = 0;
  long long current = 0;

  long long best = std::numeric_limits<long long>::max();
  std::vector<int> best_assign;

  explicit Enumerator(const Instance& i) : inst(i) {}

  void dfs(std::size_t u) {
    if (u == units.size()) {
      if (current < best) {
        best = current;
        best_assign = assign;
      }
      return;
    }
    const Unit& unit = units[u];
    int limit = std::min<int>(open_blocks + 1, static_cast<int>(units.size()));
    for (int b = 0; b < limit; ++b) {
      bool fresh = (b == open_blocks);
      if (!fresh) {
        if (load[b] + unit.weight > inst.capacity) continue;
        bool clash = false;
        for (std::size_t v = 0; v < u && !clash; ++v)
          if (assign[v] == b && unit_conflict[u][v]) clash = true;
        if (clash) continue;
      }
      long long delta = fresh ? inst.bin_cost + unit.internal_d : unit.internal_d;
      if (!fresh)
        for (std::size_t v = 0; v < u; ++v)
          if (assign[v] == b) delta += cross_d[u][v];
      assign[u] = b;
      load[b] += unit.weight;
      current += delta;
      if (fresh) ++open_blocks;
      dfs(u + 1);
      if (fresh) --open_blocks;
      current -= delta;
      load[b] -= unit.weight;
    }
    assign[u] = -1;
  }
};

}  // namespace

Result solve_exact(const Instance& inst, const Constraints& cons) {
  check_instance(inst);

  // Glue merged groups into units; remaining items are singleton units.
  std::vector<int> group_of(inst.n, -1);
  for (std::size_t g = 0; g < cons.merged_groups.size(); ++g)
    for (int i : cons.merged_groups[g]) {
      if (i < 0 || i >= inst.n)
        throw std::invalid_argument("solve_exact: merged item out of range");
      if (group_of[i] != -1)
        throw std::invalid_argument("solve_exact: merged groups must be disjoint");
      group_of[i] = static_cast<int>(g);
    }

  Enumerator en(inst);
  std::vector<int> unit_of(inst.n, -1);
  std::vector<int> group_unit(cons.merged_groups.size(), -1);
  for (int i = 0; i < inst.n; ++i) {
    int g = group_of[i];
    if (g != -1 && group_unit[g] != -1) {
      en.units[group_unit[g]].items.push_back(i);
      unit_of[i] = group_unit[g];
      continue;
    }
    Unit u;
    u.items.push_back(i);
    en.units.push_back(std::move(u));
    unit_of[i] = static_cast<int>(en.units.size()) - 1;
    if (g != -1) group_unit[g] = unit_of[i];
  }
  for (Unit& u : en.units) {
    for (int i : u.items) u.weight += inst.weights[i];
    for (std::size_t a = 0; a < u.items.size(); ++a)
      for (std::size_t b = a + 1; b < u.items.size(); ++b)
        u.internal_d += inst.d(u.items[a], u.items[b]);
    if (u.weight > inst.capacity)
      throw std::runtime_error("solve_exact: merged group exceeds capacity");
  }

  std::size_t nu = en.units.size();
  if (nu > 12)
    throw std::invalid_argument("solve_exact: more than 12 effective units");

  en.cross_d.assign(nu, std::vector<long long>(nu, 0));
  en.unit_conflict.assign(nu, std::vector<bool>(nu, false));
  for (std::size_t a = 0; a < nu; ++a)
    for (std::size_t b = 0; b < nu; ++b) {
      if (a == b) continue;
      for (int i : en.units[a].items)
        for (int j : en.units[b].items) en.cross_d[a][b] += inst.d(i, j);
    }
  for (auto [i, j] : cons.conflicts) {
    if (i < 0 || i >= inst.n || j < 0 || j >= inst.n || i == j)
      throw std::invalid_argument("solve_exact: bad conflict pair");
    int a = unit_of[i], b = unit_of[j];
    if (a == b) throw std::runtime_error("solve_exact: conflict inside a merged group");
    en.unit_conflict[a][b] = en.unit_conflict[b][a] = true;
  }

  en.assign.assign(nu, -1);
  en.load.assign(nu, 0);
  en.dfs(0);
  if (en.best_assign.empty())
    throw std::runtime_error("solve_exact: no feasible partition");

  int blocks = *std::max_element(en.best_assign.begin(), en.best_assign.end()) + 1;
  Result res;
  std::vector<std::vector<int>> bins(blocks);
  for (std::size_t u = 0; u < nu; ++u)
    for (int i : en.units[u].items) bins[en.best_assign[u]].push_back(i);
  for (auto& b : bins) {
    std::sort(b.begin(), b.end());
    res.solution.bins.push_back(make_pattern(inst, b));
  }
  for (const Pattern& p : res.solution.bins) res.solution.objective += p.cost;
  res.objective = res.solution.objective;
  return res;
}

}  // namespace qbpp::oracle
