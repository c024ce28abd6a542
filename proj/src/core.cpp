#include "qbpp/core.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qbpp {

std::string to_string(Sigma s) {
  switch (s) {
    case Sigma::minus: return "minus";
    case Sigma::plus: return "plus";
    case Sigma::mixed: return "mixed";
  }
  return "?";
}

std::optional<Sigma> sigma_from_string(const std::string& s) {
  if (s == "minus" || s == "-") return Sigma::minus;
  if (s == "plus" || s == "+") return Sigma::plus;
  if (s == "mixed" || s == "+-" || s == "pm") return Sigma::mixed;
  return std::nullopt;
}

long long Instance::total_weight() const {
  long long t = 0;
  for (int w : weights) t += w;
  return t;
}

int Instance::max_weight() const {
  int m = 0;
  for (int w : weights) m = std::max(m, w);
  return m;
}

void check_instance(const Instance& inst) {
  if (inst.n < 1) throw std::invalid_argument("instance: n must be >= 1");
  if (static_cast<int>(inst.weights.size()) != inst.n)
    throw std::invalid_argument("instance: weight count != n");
  for (int i = 0; i < inst.n; ++i)
    if (inst.weights[i] < 1)
      throw std::invalid_argument("instance: weight of item " +
                                  std::to_string(i + 1) + " must be positive");
  if (inst.capacity < 1) throw std::invalid_argument("instance: capacity must be >= 1");
  if (inst.capacity < inst.max_weight())
    throw std::invalid_argument(
        "instance: capacity " + std::to_string(inst.capacity) +
        " below largest weight " + std::to_string(inst.max_weight()) +
        "; some item fits in no bin");
  if (inst.bin_cost < 0) throw std::invalid_argument("instance: bin cost must be >= 0");
  if (static_cast<int>(inst.dissim.size()) != inst.n)
    throw std::invalid_argument("instance: dissimilarity matrix must be n x n");
  for (int i = 0; i < inst.n; ++i) {
    if (static_cast<int>(inst.dissim[i].size()) != inst.n)
      throw std::invalid_argument("instance: dissimilarity matrix must be n x n");
    if (inst.dissim[i][i] != 0)
      throw std::invalid_argument("instance: nonzero diagonal at item " +
                                  std::to_string(i + 1));
    for (int j = i + 1; j < inst.n; ++j)
      if (inst.dissim[i][j] != inst.dissim[j][i])
        throw std::invalid_argument("instance: asymmetric entry (" +
                                    std::to_string(i + 1) + "," +
                                    std::to_string(j + 1) + ")");
  }
}

long long pattern_cost(const Instance& inst, const std::vector<int>& items) {
  if (items.empty()) throw std::invalid_argument("pattern_cost: empty item set");
  for (int i : items)
    if (i < 0 || i >= inst.n)
      throw std::invalid_argument("pattern_cost: item index out of range");
  long long c = inst.bin_cost;
  for (std::size_t a = 0; a < items.size(); ++a)
    for (std::size_t b = a + 1; b < items.size(); ++b)
      c += inst.dissim[items[a]][items[b]];
  return c;
}

Pattern make_pattern(const Instance& inst, std::vector<int> items) {
  Pattern p;
  p.cost = pattern_cost(inst, items);  // also range-checks
  std::sort(items.begin(), items.end());
  if (std::adjacent_find(items.begin(), items.end()) != items.end())
    throw std::invalid_argument("make_pattern: duplicate item");
  for (int i : items) p.weight += inst.weights[i];
  if (p.weight > inst.capacity)
    throw std::invalid_argument("make_pattern: weight exceeds capacity");
  p.items = std::move(items);
  return p;
}

ValidationReport validate_solution(const Instance& inst, const Solution& sol) {
  ValidationReport rep;
  std::vector<int> count(inst.n, 0);
  for (std::size_t b = 0; b < sol.bins.size(); ++b) {
    const Pattern& bin = sol.bins[b];
    long long w = 0;
    for (int i : bin.items) {
      if (i >= 0 && i < inst.n) {
        ++count[i];
        w += inst.weights[i];
      }
    }
    if (w > inst.capacity) rep.over_capacity.push_back(static_cast<int>(b));
  }
  for (int i = 0; i < inst.n; ++i) {
    if (count[i] == 0) rep.missing.push_back(i);
    if (count[i] > 1) rep.duplicated.push_back(i);
  }
  long long obj = 0;
  if (rep.missing.empty() && rep.duplicated.empty()) {
    for (const Pattern& bin : sol.bins)
      if (!bin.items.empty()) obj += pattern_cost(inst, bin.items);
  }
  rep.recomputed_objective = obj;
  rep.objective_matches = (obj == sol.objective) || !rep.missing.empty() ||
                          !rep.duplicated.empty();
  return rep;
}

long long solution_cost(const Instance& inst, const Solution& sol) {
  ValidationReport rep = validate_solution(inst, sol);
  if (!rep.pass())
    throw std::invalid_argument("solution_cost: invalid solution: " + rep.describe());
  return rep.recomputed_objective;
}

std::string ValidationReport::describe() const {
  std::ostringstream os;
  if (pass()) {
    os << "valid, objective " << recomputed_objective;
    return os.str();
  }
  for (int i : missing) os << "missing item " << (i + 1) << "; ";
  for (int i : duplicated) os << "duplicated item " << (i + 1) << "; ";
  for (int b : over_capacity) os << "bin " << (b + 1) << " over capacity; ";
  if (!objective_matches) os << "stored objective differs from recomputed "
                             << recomputed_objective << "; ";
  return os.str();
}

std::string format_double(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

namespace {

struct LineReader {
  std::istringstream in;
  int lineno = 0;
  explicit LineReader(const std::string& text) : in(text) {}
  // Returns the next non-empty line; '#' lines are surfaced to the caller.
  bool next(std::string& line) {
    while (std::getline(in, line)) {
      ++lineno;
      while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
        line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw std::runtime_error("line " + std::to_string(lineno) + ": " + msg);
  }
};

}  // namespace

Instance read_instance(const std::string& text) {
  LineReader rd(text);
  std::string line;

  if (!rd.next(line)) rd.fail("empty file");
  {
    std::istringstream ls(line);
    std::string magic;
    int version = 0;
    if (!(ls >> magic >> version) || magic != "QBPP" || version != 1)
      rd.fail("malformed header, expected 'QBPP 1'");
  }

  Instance inst;
  if (!rd.next(line)) rd.fail("missing 'n W alpha' line");
  {
    std::istringstream ls(line);
    if (!(ls >> inst.n >> inst.capacity >> inst.bin_cost))
      rd.fail("expected 'n W alpha'");
    if (inst.n < 1) rd.fail("n must be >= 1");
  }

  if (!rd.next(line)) rd.fail("missing weights line");
  {
    std::istringstream ls(line);
    inst.weights.resize(inst.n);
    for (int i = 0; i < inst.n; ++i)
      if (!(ls >> inst.weights[i])) rd.fail("expected " + std::to_string(inst.n) + " weights");
    int extra;
    if (ls >> extra) rd.fail("too many weights");
  }

  int m = 0;
  if (!rd.next(line)) rd.fail("missing entry count line");
  {
    std::istringstream ls(line);
    if (!(ls >> m) || m < 0) rd.fail("expected nonzero-entry count m");
  }

  inst.dissim.assign(inst.n, std::vector<int>(inst.n, 0));
  std::set<std::pair<int, int>> seen;
  for (int e = 0; e < m; ++e) {
    if (!rd.next(line)) rd.fail("expected " + std::to_string(m) + " entries, got " +
                                std::to_string(e));
    std::istringstream ls(line);
    int i, j;
    long long d;
    if (!(ls >> i >> j >> d)) rd.fail("expected 'i j d'");
    if (i == j) rd.fail("diagonal entry (" + std::to_string(i) + "," + std::to_string(j) +
                        ") must be zero and is not listed");
    if (i > j) rd.fail("entry must have i < j");
    if (i < 1 || j > inst.n) rd.fail("item index out of range");
    if (d == 0) rd.fail("listed entry must be nonzero");
    if (!seen.insert({i, j}).second) rd.fail("duplicate pair (" + std::to_string(i) + "," +
                                             std::to_string(j) + ")");
    inst.dissim[i - 1][j - 1] = static_cast<int>(d);
    inst.dissim[j - 1][i - 1] = static_cast<int>(d);
  }

  // optional trailing meta comments: "# key value"
  while (rd.next(line)) {
    if (line[0] != '#') rd.fail("unexpected content after entries");
    std::istringstream ls(line.substr(1));
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "mu") { double v; if (ls >> v) inst.meta.mu = v; }
    else if (key == "delta") { double v; if (ls >> v) inst.meta.delta = v; }
    else if (key == "sigma") {
      std::string v;
      if (ls >> v) {
        auto s = sigma_from_string(v);
        if (!s) rd.fail("unknown sigma tag '" + v + "'");
        inst.meta.sigma = *s;
      }
    } else if (key == "seed") { std::uint64_t v; if (ls >> v) inst.meta.seed = v; }
    else if (key == "group") { std::uint64_t v; if (ls >> v) inst.meta.group = v; }
    else if (key == "clamped") { int v; if (ls >> v) inst.meta.clamped = v != 0; }
    // unknown keys are ignored
  }

  check_instance(inst);
  return inst;
}

std::string write_instance(const Instance& inst) {
  std::ostringstream os;
  os << "QBPP 1\n";
  os << inst.n << ' ' << inst.capacity << ' ' << inst.bin_cost << '\n';
  for (int i = 0; i < inst.n; ++i) os << inst.weights[i] << (i + 1 == inst.n ? '\n' : ' ');
  std::vector<std::pair<int, int>> entries;
  for (int i = 0; i < inst.n; ++i)
    for (int j = i + 1; j < inst.n; ++j)
      if (inst.dissim[i][j] != 0) entries.push_back({i, j});
  os << entries.size() << '\n';
  for (auto [i, j] : entries)
    os << (i + 1) << ' ' << (j + 1) << ' ' << inst.dissim[i][j] << '\n';
  if (inst.meta.mu) os << "# mu " << format_double(*inst.meta.mu) << '\n';
  if (inst.meta.delta) os << "# delta " << format_double(*inst.meta.delta) << '\n';
  if (inst.meta.sigma) os << "# sigma " << to_string(*inst.meta.sigma) << '\n';
  if (inst.meta.seed) os << "# seed " << *inst.meta.seed << '\n';
  if (inst.meta.group) os << "# group " << *inst.meta.group << '\n';
  if (inst.meta.clamped) os << "# clamped 1\n";
  return os.str();
}

Instance load_instance(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open instance file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  try {
    return read_instance(ss.str());
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write instance file: " + path);
  f << write_instance(inst);
  if (!f) throw std::runtime_error("write failed: " + path);
}

Solution read_solution(const Instance& inst, const std::string& text) {
  Solution sol;
  std::optional<long long> stored;
  LineReader rd(text);
  std::string line;
  while (rd.next(line)) {
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string key;
      long long v;
      if (ls >> key >> v && key == "objective") stored = v;
      continue;
    }
    std::istringstream ls(line);
    Pattern bin;
    int item;
    while (ls >> item) {
      if (item < 1 || item > inst.n) rd.fail("item index out of range");
      bin.items.push_back(item - 1);
      bin.weight += inst.weights[item - 1];
    }
    if (!ls.eof()) rd.fail("expected item indices");
    if (bin.items.empty()) rd.fail("empty bin line");
    std::sort(bin.items.begin(), bin.items.end());
    bool dup = std::adjacent_find(bin.items.begin(), bin.items.end()) != bin.items.end();
    bin.cost = dup ? 0 : pattern_cost(inst, bin.items);
    sol.bins.push_back(std::move(bin));
  }
  long long obj = 0;
  for (const Pattern& b : sol.bins) obj += b.cost;
  sol.objective = stored.value_or(obj);
  return sol;
}

std::string write_solution(const Solution& sol) {
  std::ostringstream os;
  os << "# objective " << sol.objective << '\n';
  for (const Pattern& bin : sol.bins) {
    for (std::size_t k = 0; k < bin.items.size(); ++k)
      os << bin.items[k] + 1 << (k + 1 == bin.items.size() ? '\n' : ' ');
  }
  return os.str();
}

}  // namespace qbpp
