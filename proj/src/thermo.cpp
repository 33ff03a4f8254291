#include "sturm/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <list>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "sturm/bands.hpp"
#include "sturm/errors.hpp"

namespace sturm {

namespace {

BandTree::Id walk_block(BandTree& tree, BandTree::Id node, const BlockLetter& b) {
  for (const Letter& e : b) node = tree.child(node, e);
  return node;
}

// Band at the end of iota applied to the one-block word v.
BandTree::Id first_block(BandTree& tree, const BlockSystem& s, int v) {
  BandTree::Id node;
  if (s.head_type[v] == 2)
    node = tree.child(tree.root(3), Letter{1, 1, 1});
  else
    node = tree.child(tree.root(1), Letter{2, 1, 1});
  return walk_block(tree, node, s.blocks[v]);
}

std::shared_ptr<BandTree> tree_for(const std::vector<int>& a, double lambda) {
  return shared_tree(check_alpha(a), lambda);
}

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

std::int64_t weight_int(const std::vector<int>& a, const BlockLetter& b) {
  std::int64_t f = -static_cast<std::int64_t>(a.size());
  for (std::size_t j = 0; j < b.size(); ++j)
    if (b[j].type == 2) f += 2 - a[j];
  return f;
}

// Cycle of least mean among the cycles of a closed-walk decomposition.
std::vector<int> best_cycle(const std::vector<int>& walk, const std::vector<std::int64_t>& f) {
  std::vector<int> stack;
  std::vector<int> best;
  Rational best_mean;
  for (int v : walk) {
    auto it = std::find(stack.begin(), stack.end(), v);
    if (it != stack.end()) {
      std::vector<int> cyc(it, stack.end());
      std::int64_t sum = 0;
      for (int u : cyc) sum += f[u];
      Rational m(sum, static_cast<std::int64_t>(cyc.size()));
      if (best.empty() || m < best_mean) {
        best = cyc;
        best_mean = m;
      }
      stack.erase(it + 1, stack.end());
    } else {
      stack.push_back(v);
    }
  }
  return best;
}

// Karp: least cycle mean of the vertex-weighted graph, with a witness.
std::pair<Rational, std::vector<int>> karp_min(const BlockSystem& s, const std::vector<std::int64_t>& f) {
  const int n = s.size();
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::vector<std::int64_t>> D(n + 1, std::vector<std::int64_t>(n, kInf));
  std::vector<std::vector<int>> pred(n + 1, std::vector<int>(n, -1));
  for (int v = 0; v < n; ++v) D[0][v] = 0;
  for (int k = 1; k <= n; ++k)
    for (int u = 0; u < n; ++u) {
      if (D[k - 1][u] >= kInf) continue;
      for (int v : s.succ[u]) {
        const std::int64_t c = D[k - 1][u] + f[v];
        if (c < D[k][v]) {
          D[k][v] = c;
          pred[k][v] = u;
        }
      }
    }
  bool have = false;
  Rational best;
  int arg = -1;
  for (int v = 0; v < n; ++v) {
    if (D[n][v] >= kInf) continue;
    bool first = true;
    Rational worst;
    for (int k = 0; k < n; ++k) {
      if (D[k][v] >= kInf) continue;
      Rational r(D[n][v] - D[k][v], static_cast<std::int64_t>(n - k));
      if (first || r > worst) worst = r;
      first = false;
    }
    if (first) continue;
    if (!have || worst < best) {
      best = worst;
      arg = v;
      have = true;
    }
  }
  if (!have) throw StructuralError("block graph has no cycle");
  std::vector<int> walk(n + 1);
  walk[n] = arg;
  for (int k = n; k > 0; --k) walk[k - 1] = pred[k][walk[k]];
  std::vector<int> cyc = best_cycle(walk, f);
  std::int64_t sum = 0;
  for (int u : cyc) sum += f[u];
  if (Rational(sum, static_cast<std::int64_t>(cyc.size())) != best)
    throw InvariantViolation("Karp witness cycle does not attain the reported mean");
  return {best, cyc};
}

struct TableCache {
  std::mutex mu;
  std::list<PsiTable> tables;
};

TableCache& table_cache() {
  static TableCache c;
  return c;
}

void fill(BandTree& tree, const BlockSystem& s, int v, BandTree::Id node, int n, PsiTable& t) {
  t.psi[n - 1].push_back(tree.band(node).log_length());
  if (n == t.depth()) return;
  for (int w : s.succ[v]) fill(tree, s, w, walk_block(tree, node, s.blocks[w]), n + 1, t);
}

}  // namespace

PotentialSample psi(const std::vector<int>& a, double lambda, const BlockWord& w) {
  if (!is_admissible(a, w)) throw std::invalid_argument("inadmissible block word");
  if (!(lambda > 20)) throw DomainError("lambda must exceed 20");
  auto tree = tree_for(a, lambda);
  return {w, tree->band(tree->find(iota(a, w))).log_length()};
}

PsiCorridor psi_corridor(const std::vector<int>& a, double lambda, const BlockWord& w) {
  const double lt1 = std::log((lambda - 8) / 3), lt2 = std::log(2 * (lambda + 5));
  const double S = static_cast<double>(birkhoff_sum(a, w));
  double sl = 0;
  for (int x : a) sl += std::log(static_cast<double>(x));
  const double n = static_cast<double>(w.size());
  return {S * lt2 - 3 * n * sl - lt2, S * lt1 + std::log(4.0)};
}

double weak_gibbs_distance(const std::vector<int>& a, double lambda, const BlockWord& v, const BlockWord& w) {
  if (v == w) return 0;
  std::size_t n = 0;
  while (n < v.size() && n < w.size() && v[n] == w[n]) ++n;
  if (n == 0) return 1;
  return std::exp(psi(a, lambda, BlockWord(v.begin(), v.begin() + n)).value);
}

Rational birkhoff_weight(const std::vector<int>& a, const BlockLetter& b) {
  if (b.size() != a.size() || block_system(a).index_of(b) < 0)
    throw std::invalid_argument("not a letter of the block alphabet");
  return Rational(weight_int(a, b));
}

Rational birkhoff_sum(const std::vector<int>& a, const BlockWord& w) {
  const BlockSystem& s = block_system(a);
  std::int64_t t = 0;
  for (int v : w) t += weight_int(a, s.blocks.at(v));
  return Rational(t);
}

MeanCycleResult mean_cycles(const std::vector<int>& a) {
  const BlockSystem& s = block_system(a);
  std::vector<std::int64_t> f(s.size()), g(s.size());
  for (int v = 0; v < s.size(); ++v) {
    f[v] = weight_int(a, s.blocks[v]);
    g[v] = -f[v];
  }
  MeanCycleResult r;
  auto lo = karp_min(s, f);
  auto hi = karp_min(s, g);
  r.F_lower = lo.first;
  r.witness_lower = lo.second;
  r.F_upper = -hi.first;
  r.witness_upper = hi.second;
  return r;
}

Rational cycle_mean(const std::vector<int>& a, const std::vector<int>& cycle) {
  const BlockSystem& s = block_system(a);
  if (cycle.empty()) throw std::invalid_argument("empty cycle");
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const int u = cycle[i], v = cycle[(i + 1) % cycle.size()];
    if (!s.A(u, v)) throw std::invalid_argument("not a cycle of the block graph");
  }
  std::int64_t t = 0;
  for (int v : cycle) t += weight_int(a, s.blocks[v]);
  return Rational(t, static_cast<std::int64_t>(cycle.size()));
}

double parry_integral(const std::vector<int>& a) {
  const BlockSystem& s = block_system(a);
  const PerronData& p = perron_cached(a);
  double t = 0;
  for (int v = 0; v < s.size(); ++v) t += static_cast<double>(weight_int(a, s.blocks[v])) * p.left[v] * p.right[v];
  return t;
}

std::size_t word_cap() {
  if (const char* env = std::getenv("STURM_WORD_CAP")) {
    try {
      const long long v = std::stoll(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return 10000;
}

int auto_depth(const std::vector<int>& a, std::size_t cap, int max_depth) {
  int n = 0;
  while (n < max_depth && word_count(a, n + 1) <= cap) ++n;
  return n;
}

const PsiTable& psi_table(const std::vector<int>& a, double lambda, int depth, int threads) {
  if (depth < 1) throw std::invalid_argument("psi table depth must be >= 1");
  if (!(lambda > 20)) throw DomainError("lambda must exceed 20");
  TableCache& c = table_cache();
  {
    std::lock_guard lock(c.mu);
    for (const PsiTable& t : c.tables)
      if (t.a == a && t.lambda == lambda && t.depth() >= depth) return t;
  }
  const BlockSystem& s = block_system(a);
  auto tree = tree_for(a, lambda);
  if (threads > 1) tree->level(depth * static_cast<int>(a.size()) + 1, std::numeric_limits<std::size_t>::max(), threads);
  PsiTable t;
  t.a = a;
  t.lambda = lambda;
  t.psi.resize(depth);
  for (int v = 0; v < s.size(); ++v) fill(*tree, s, v, first_block(*tree, s, v), 1, t);
  std::lock_guard lock(c.mu);
  c.tables.push_back(std::move(t));
  return c.tables.back();
}

std::vector<double> psi_along(const std::vector<int>& a, double lambda, const BlockWord& path) {
  if (!is_admissible(a, path)) throw std::invalid_argument("inadmissible path");
  const BlockSystem& s = block_system(a);
  auto tree = tree_for(a, lambda);
  std::vector<double> out;
  if (path.empty()) return out;
  BandTree::Id node = first_block(*tree, s, path[0]);
  out.push_back(tree->band(node).log_length());
  for (std::size_t i = 1; i < path.size(); ++i) {
    node = walk_block(*tree, node, s.blocks[path[i]]);
    out.push_back(tree->band(node).log_length());
  }
  return out;
}

// Order-n Markov approximation of the potential: states are words of length
// n-1, edges are words v of length n, weighted by exp(s * (psi_n(v) - psi_{n-1}(v|n-1))).
struct MarkovChain {
  int states = 0;
  std::vector<int> from, to;
  std::vector<double> phi;
  double phi_min = 0, phi_max = 0;
  std::mutex mu;
  // Perron vectors computed from the all-ones start at s = key / 4; used as the
  // start for nearby s so results do not depend on the call history
  std::map<int, std::vector<double>> right, left;
};

namespace {

// number of admissible words of length L starting with each block
std::vector<std::vector<std::uint64_t>> start_counts(const BlockSystem& s, int L) {
  std::vector<std::vector<std::uint64_t>> c(L + 1, std::vector<std::uint64_t>(s.size(), 0));
  for (int v = 0; v < s.size(); ++v) c[1][v] = 1;
  for (int l = 2; l <= L; ++l)
    for (int v = 0; v < s.size(); ++v)
      for (int u : s.succ[v]) c[l][v] += c[l - 1][u];
  return c;
}

std::size_t word_rank(const BlockSystem& s, const std::vector<std::vector<std::uint64_t>>& cnt, const int* w,
                      int len) {
  std::size_t r = 0;
  for (int j = 0; j < len; ++j)
    for (int c = 0; c < w[j]; ++c)
      if (j == 0 || s.A(w[j - 1], c)) r += cnt[len - j][c];
  return r;
}

std::shared_ptr<MarkovChain> build_chain(const std::vector<int>& a, const PsiTable& t, int n) {
  const BlockSystem& s = block_system(a);
  const auto cnt = start_counts(s, n);
  auto c = std::make_shared<MarkovChain>();
  c->states = static_cast<int>(t.psi[n - 2].size());
  const std::vector<double>& top = t.psi[n - 1];
  const std::vector<double>& below = t.psi[n - 2];
  c->from.reserve(top.size());
  c->to.reserve(top.size());
  c->phi.reserve(top.size());
  std::size_t i = 0;
  enumerate_words(a, n, [&](const BlockWord& w) {
    const std::size_t pre = word_rank(s, cnt, w.data(), n - 1), suf = word_rank(s, cnt, w.data() + 1, n - 1);
    c->from.push_back(static_cast<int>(pre));
    c->to.push_back(static_cast<int>(suf));
    c->phi.push_back(top[i++] - below[pre]);
  });
  c->phi_min = *std::min_element(c->phi.begin(), c->phi.end());
  c->phi_max = *std::max_element(c->phi.begin(), c->phi.end());
  return c;
}

// log of the Perron root of M_s (M[to][from] = exp(s phi)), by power iteration on
// M/rho + I with Collatz-Wielandt stopping. x is the warm start and receives the
// Perron vector (left one if transpose).
double perron_log(const MarkovChain& c, double s, std::vector<double>& x, bool transpose) {
  const double shift = s >= 0 ? s * c.phi_max : s * c.phi_min;
  thread_local std::vector<double> w, y;
  w.resize(c.phi.size());
  for (std::size_t e = 0; e < w.size(); ++e) w[e] = std::exp(s * c.phi[e] - shift);
  if (x.size() != static_cast<std::size_t>(c.states)) x.assign(c.states, 1.0);
  y.resize(c.states);
  const std::size_t budget = std::max<std::size_t>(4000, 400000000 / std::max<std::size_t>(1, w.size()));
  double rho = 1;
  for (std::size_t it = 0; it < budget; ++it) {
    std::fill(y.begin(), y.end(), 0.0);
    if (transpose)
      for (std::size_t e = 0; e < w.size(); ++e) y[c.from[e]] += w[e] * x[c.to[e]];
    else
      for (std::size_t e = 0; e < w.size(); ++e) y[c.to[e]] += w[e] * x[c.from[e]];
    double lo = INFINITY, hi = 0;
    for (int i = 0; i < c.states; ++i) {
      const double r = y[i] / x[i];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    rho = lo > 0 ? std::sqrt(lo * hi) : hi;
    if (hi <= lo * (1 + 1e-14)) break;
    double mx = 0;
    for (int i = 0; i < c.states; ++i) {
      x[i] += y[i] / rho;
      mx = std::max(mx, x[i]);
    }
    for (double& v : x) v /= mx;
  }
  return std::log(rho) + shift;
}

std::vector<double> seed_vector(MarkovChain& c, double s, bool transpose) {
  const double k = std::round(4 * s);
  if (!(std::abs(k) < 1e6)) return {};
  auto& cache = transpose ? c.left : c.right;
  auto it = cache.find(static_cast<int>(k));
  if (it == cache.end()) {
    std::vector<double> x;
    perron_log(c, k / 4, x, transpose);
    it = cache.emplace(static_cast<int>(k), std::move(x)).first;
  }
  return it->second;
}

}  // namespace

PressureModel::PressureModel(const std::vector<int>& a, double lambda, int depth, int threads)
    : a_(a), lambda_(lambda) {
  if (!(lambda > 20)) throw DomainError("lambda must exceed 20");
  block_system(a);
  const int feasible = auto_depth(a, word_cap(), kMaxPressureDepth);
  if (depth <= 0) {
    depth_ = feasible;
  } else if (depth > auto_depth(a, word_cap())) {
    depth_ = auto_depth(a, word_cap());
    partial_ = true;
  } else {
    depth_ = depth;
  }
  if (depth_ < 3) throw BudgetExceeded("word cap leaves fewer than 3 levels", static_cast<std::size_t>(depth_));
  logE_ = std::log(perron_value(a));
  table_ = &psi_table(a, lambda, depth_, threads);
  chains_.resize(depth_ + 1);
  for (int n = 2; n <= depth_; ++n) chains_[n] = build_chain(a, *table_, n);
}

double PressureModel::log_z(int n, double s) const {
  if (n < 1 || n > depth_) throw std::out_of_range("pressure level out of range");
  const std::vector<double>& v = table_->psi[n - 1];
  double m = -INFINITY;
  for (double x : v) m = std::max(m, s * x);
  thread_local std::vector<double> buf;
  buf.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) buf[i] = std::exp(s * v[i] - m);
  return m + std::log(pairwise_sum(buf.data(), buf.size()));
}

std::vector<double> PressureModel::P_levels(double s) const {
  std::vector<double> out;
  for (int n = 1; n <= depth_; ++n) out.push_back(P_n(n, s));
  return out;
}

double PressureModel::estimate(int n, double s) const {
  if (n < 2 || n > depth_) throw std::out_of_range("Markov order out of range");
  MarkovChain& c = *chains_[n];
  std::lock_guard lock(c.mu);
  std::vector<double> x = seed_vector(c, s, false);
  return perron_log(c, s, x, false);
}

double PressureModel::P_err(double s) const { return std::abs(P(s) - estimate(depth_ - 1, s)); }

double PressureModel::dP(double s) const {
  const double h = 1e-4;
  auto D = [&](double hh) { return (P(s + hh) - P(s - hh)) / (2 * hh); };
  return (4 * D(h / 2) - D(h)) / 3;
}

double PressureModel::dP_exact(int n, double s) const {
  if (n < 2 || n > depth_) throw std::out_of_range("Markov order out of range");
  MarkovChain& c = *chains_[n];
  std::lock_guard lock(c.mu);
  std::vector<double> r = seed_vector(c, s, false), l = seed_vector(c, s, true);
  perron_log(c, s, r, false);
  perron_log(c, s, l, true);
  // rho'/rho = l^T (M o phi) r / (rho l^T r); the shift cancels
  double num = 0, mass = 0;
  const double shift = s >= 0 ? s * c.phi_max : s * c.phi_min;
  for (std::size_t e = 0; e < c.phi.size(); ++e) {
    const double t = l[c.to[e]] * std::exp(s * c.phi[e] - shift) * r[c.from[e]];
    num += t * c.phi[e];
    mass += t;
  }
  return num / mass;
}

double PressureModel::dP_err(double s) const {
  return std::abs(dP_exact(depth_, s) - dP_exact(depth_ - 1, s));
}

PressureLimits pressure_limits(const PressureModel& model) {
  const std::vector<int>& a = model.period();
  const int k = static_cast<int>(a.size());
  const int N = model.depth();
  auto tree = tree_for(a, model.lambda());
  std::vector<double> lo(N + 1), hi(N + 1);
  for (int n = 1; n <= N; ++n) {
    const LevelExtremes ex = level_extremes(*tree, n * k + 1);
    lo[n] = ex.log_min;
    hi[n] = ex.log_max;
  }
  struct Fit {
    double slope = 0, spread = 0;
    int period = 1;
  };
  auto fit = [&](const std::vector<double>& m) {
    auto slope = [&](int n, int p) { return (m[n] - m[n - p]) / p; };
    Fit best;
    double bs = INFINITY;
    const int pmax = std::max(1, std::min(8, (N - 1) / 2));
    for (int p = 1; p <= pmax; ++p) {
      if (N - 1 - p < 1) break;
      const double score = std::abs(slope(N, p) - slope(N - 1, p));
      if (score < bs * (1 - 1e-9) - 1e-15) {
        bs = score;
        best.period = p;
      }
    }
    const int p = best.period;
    best.slope = slope(N, p);
    for (int j = 1; j < p + 1 && N - j - p >= 1; ++j)
      best.spread = std::max(best.spread, std::abs(slope(N - j, p) - best.slope));
    return best;
  };
  const Fit fmin = fit(lo), fmax = fit(hi);
  PressureLimits r;
  r.minus_inf = fmin.slope;
  r.plus_inf = fmax.slope;
  r.period_min = fmin.period;
  r.period_max = fmax.period;
  r.far_minus = model.dP_exact(N, -8);
  r.far_plus = model.dP_exact(N, 8);
  r.minus_lo = std::min(fmin.slope - fmin.spread, r.far_minus);
  r.minus_hi = std::max(fmin.slope + fmin.spread, r.far_minus);
  r.plus_lo = std::min(fmax.slope - fmax.spread, r.far_plus);
  r.plus_hi = std::max(fmax.slope + fmax.spread, r.far_plus);
  r.consistent = std::abs(r.far_minus - r.minus_inf) <= 0.05 * std::abs(r.minus_inf) &&
                 std::abs(r.far_plus - r.plus_inf) <= 0.05 * std::abs(r.plus_inf);
  return r;
}

PressureLimits pressure_limits(const std::vector<int>& a, double lambda, int depth) {
  return pressure_limits(PressureModel(a, lambda, depth));
}

PressurePoint pressure(const PressureModel& model, double s) {
  PressurePoint p;
  p.s = s;
  p.P_n = model.P_levels(s);
  p.P = model.P(s);
  p.P_err = model.P_err(s);
  p.dP = model.dP(s);
  return p;
}

PressurePoint pressure(const std::vector<int>& a, double lambda, double s, int depth) {
  return pressure(PressureModel(a, lambda, depth), s);
}

double pressure_derivative(const std::vector<int>& a, double lambda, double s, int depth) {
  return PressureModel(a, lambda, depth).dP(s);
}

BowenRoot bowen_root(const PressureModel& model) {
  auto f = [&](double s) { return model.P(s); };
  const double f0 = f(0), f1 = f(1);
  if (!(f0 > 0 && f1 < 0))
    throw DomainError("pressure has no sign change on [0,1] (P(0)=" + std::to_string(f0) +
                      ", P(1)=" + std::to_string(f1) + "); more levels are needed");
  std::uintmax_t iters = 200;
  auto tol = [](double x, double y) { return std::abs(y - x) < 1e-12; };
  const auto br = boost::math::tools::toms748_solve(f, 0.0, 1.0, f0, f1, tol, iters);
  BowenRoot r;
  r.D = 0.5 * (br.first + br.second);
  r.residual = std::abs(f(r.D));
  r.err = model.P_err(r.D) / std::abs(model.dP(r.D)) + 1e-10;
  return r;
}

BowenRoot bowen_root(const std::vector<int>& a, double lambda, int depth) {
  return bowen_root(PressureModel(a, lambda, depth));
}

PressureCurve pressure_curve(const PressureModel& model, double s_min, double s_max, int steps) {
  if (!(s_min < s_max) || steps < 2) throw std::invalid_argument("need s_min < s_max and steps >= 2");
  PressureCurve c;
  c.a = model.period();
  c.lambda = model.lambda();
  c.depth = model.depth();
  c.partial = model.partial();
  for (int i = 0; i < steps; ++i) {
    const double s = s_min + (s_max - s_min) * i / (steps - 1);
    c.grid.push_back(pressure(model, s));
  }
  c.limits = pressure_limits(model);
  c.bowen = bowen_root(model);
  return c;
}

}  // namespace sturm
