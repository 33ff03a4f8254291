#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>

#include "doctest.h"
#include "sturm/bands.hpp"
#include "sturm/errors.hpp"
#include "sturm/thermo.hpp"

using namespace sturm;

namespace {

Rational f_weight(const std::vector<int>& a, const BlockLetter& b) {
  Rational r = -static_cast<int>(a.size());
  for (std::size_t j = 0; j < b.size(); ++j)
    if (b[j].type == 2) r += 2 - a[j];
  return r;
}

double log_band(const std::vector<int>& a, double lambda, const BlockWord& w) {
  const TransferContext ctx(check_alpha(a), lambda);
  return band_for_word(ctx, iota(a, w)).log_length();
}

// min and max cycle mean by DFS over simple cycles rooted at their least vertex
std::pair<Rational, Rational> brute_means(const std::vector<int>& a) {
  const auto A = incidence_matrix(a);
  const auto blocks = block_alphabet(a);
  std::vector<long> f;
  for (const auto& b : blocks) f.push_back(static_cast<long>(numerator(f_weight(a, b))));
  bool any = false;
  Rational lo, hi;
  std::vector<char> on(A.n, 0);
  std::function<void(int, int, long, long)> dfs = [&](int root, int v, long len, long sum) {
    for (int u = root; u < A.n; ++u) {
      if (!A(v, u)) continue;
      if (u == root) {
        const Rational m(sum, len);
        if (!any || m < lo) lo = m;
        if (!any || m > hi) hi = m;
        any = true;
      } else if (!on[u]) {
        on[u] = 1;
        dfs(root, u, len + 1, sum + f[u]);
        on[u] = 0;
      }
    }
  };
  for (int r = 0; r < A.n; ++r) {
    on[r] = 1;
    dfs(r, r, 1, f[r]);
    on[r] = 0;
  }
  return {lo, hi};
}

}  // namespace

TEST_CASE("Birkhoff weights") {
  CHECK(birkhoff_weight({1}, {{2, 1, 1}}) == 0);
  CHECK(birkhoff_weight({1}, {{1, 1, 1}}) == -1);
  CHECK(birkhoff_weight({2, 3}, {{1, 1, 2}, {2, 1, 3}}) == -2 + (2 - 3));
  CHECK(birkhoff_weight({2, 3}, {{3, 1, 2}, {1, 1, 3}}) == -2);
  for (const std::vector<int>& a : std::vector<std::vector<int>>{{1}, {1, 2}, {3, 1}})
    for (const BlockWord& w : words(a, 3)) {
      Rational s = 0;
      for (int v : w) s += f_weight(a, block_alphabet(a)[v]);
      CHECK(birkhoff_sum(a, w) == s);
    }
}

TEST_CASE("mean cycles: closed forms and brute force") {
  auto mc = mean_cycles({1, 1});
  CHECK(mc.F_lower == Rational(-4, 3));
  CHECK(mc.F_upper == -1);
  mc = mean_cycles({2, 3});
  CHECK(mc.F_lower == -3);
  CHECK(mc.F_upper == -2);
  mc = mean_cycles({2, 2});
  CHECK(mc.F_lower == -2);
  CHECK(mc.F_upper == -2);
  mc = mean_cycles({1});
  CHECK(mc.F_lower == Rational(-2, 3));
  CHECK(mc.F_upper == Rational(-1, 2));
  for (const std::vector<int>& a : std::vector<std::vector<int>>{{1}, {2}, {3}, {1, 1}, {1, 2}, {2, 2}, {2, 3}}) {
    const auto r = mean_cycles(a);
    if (block_alphabet(a).size() <= 12) {
      const auto [lo, hi] = brute_means(a);
      CHECK(r.F_lower == lo);
      CHECK(r.F_upper == hi);
    }
    CHECK(cycle_mean(a, r.witness_lower) == r.F_lower);
    CHECK(cycle_mean(a, r.witness_upper) == r.F_upper);
    // witnesses are closed walks of the graph
    const auto A = incidence_matrix(a);
    for (const auto& c : {r.witness_lower, r.witness_upper})
      for (std::size_t i = 0; i < c.size(); ++i) CHECK(A(c[i], c[(i + 1) % c.size()]) == 1);
    // Parry average of f lies between the cycle means
    double integral = 0;
    for (int b = 0; b < A.n; ++b) integral += f_weight(a, block_alphabet(a)[b]).convert_to<double>() * parry_measure(a, {b});
    CHECK(parry_integral(a) == doctest::Approx(integral).epsilon(1e-12));
    CHECK(r.F_lower.convert_to<double>() <= integral + 1e-12);
    CHECK(integral <= r.F_upper.convert_to<double>() + 1e-12);
  }
}

TEST_CASE("potential, corridor and weak-Gibbs distance") {
  const double lam = 24, t1 = (lam - 8) / 3, t2 = 2 * (lam + 5);
  for (const std::vector<int>& a : std::vector<std::vector<int>>{{1}, {2}, {1, 2}}) {
    const int k = a.size();
    double log_a = 0;
    for (int x : a) log_a += std::log(static_cast<double>(x));
    for (int n = 1; n <= (k == 1 ? 5 : 3); ++n)
      for (const BlockWord& w : words(a, n)) {
        const PotentialSample p = psi(a, lam, w);
        CHECK(p.word == w);
        CHECK(p.value == doctest::Approx(log_band(a, lam, w)).epsilon(1e-12));
        CHECK(p.value < 0);
        CHECK(p.value <= (1 - n * k) * std::log(2.0) + 1e-12);
        const double S = birkhoff_sum(a, w).convert_to<double>();
        CHECK(p.value >= S * std::log(t2) - 3 * n * log_a - std::log(t2) - 1e-9);
        CHECK(p.value <= S * std::log(t1) + std::log(4.0) + 1e-9);
        const PsiCorridor c = psi_corridor(a, lam, w);
        CHECK(c.lower <= p.value);
        CHECK(p.value <= c.upper);
      }
  }
  const std::vector<int> a = {1};
  const auto W = words(a, 4);
  CHECK(weak_gibbs_distance(a, lam, W[0], W[0]) == 0);
  for (std::size_t i = 0; i < W.size(); ++i)
    for (std::size_t j = i + 1; j < W.size(); ++j) {
      std::size_t n = 0;
      while (W[i][n] == W[j][n]) ++n;
      const double want = n == 0 ? 1.0 : std::exp(log_band(a, lam, BlockWord(W[i].begin(), W[i].begin() + n)));
      CHECK(weak_gibbs_distance(a, lam, W[i], W[j]) == doctest::Approx(want).epsilon(1e-12));
      CHECK(weak_gibbs_distance(a, lam, W[j], W[i]) == weak_gibbs_distance(a, lam, W[i], W[j]));
    }
}

TEST_CASE("psi table and paths agree with direct band lengths") {
  const std::vector<int> a = {1, 2};
  const PsiTable& t = psi_table(a, 24, 4);
  REQUIRE(t.depth() >= 4);
  for (int n = 1; n <= 4; ++n) {
    const auto W = words(a, n);
    REQUIRE(t.psi[n - 1].size() == W.size());
    for (std::size_t i = 0; i < W.size(); i += 7) CHECK(t.psi[n - 1][i] == doctest::Approx(log_band(a, 24, W[i])).epsilon(1e-12));
  }
  const BlockWord path = words(a, 4)[11];
  const auto along = psi_along(a, 24, path);
  REQUIRE(along.size() == 4);
  for (int n = 1; n <= 4; ++n)
    CHECK(along[n - 1] == doctest::Approx(log_band(a, 24, BlockWord(path.begin(), path.begin() + n))).epsilon(1e-12));
}

TEST_CASE("finite-level pressure") {
  const std::vector<int> a = {1};
  const PressureModel m(a, 24, 12);
  CHECK(m.depth() == 12);
  CHECK_FALSE(m.partial());
  CHECK(m.log_E() == doctest::Approx(std::log((1 + std::sqrt(5.0)) / 2)).epsilon(1e-14));
  for (int n = 1; n <= 12; ++n) {
    const double count = word_count(a, n).convert_to<double>();
    CHECK(std::abs(m.P_n(n, 0) - std::log(count) / n) < 1e-12);
    CHECK(std::abs(m.P_n(n, 0) - m.log_E()) <= 3.0 / n);
  }
  // brute sum over bands at a low level
  for (double s : {-1.0, 0.5, 2.0}) {
    double z = 0;
    for (const BlockWord& w : words(a, 4)) z += std::exp(s * log_band(a, 24, w));
    CHECK(m.log_z(4, s) == doctest::Approx(std::log(z)).epsilon(1e-12));
  }
  // strictly decreasing at every level, convex extrapolation
  std::vector<double> grid;
  for (int i = 0; i <= 50; ++i) grid.push_back(-2 + 0.1 * i);
  for (int n = 2; n <= 12; ++n)
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(m.P_n(n, grid[i]) < m.P_n(n, grid[i - 1]));
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    CHECK(m.P(grid[i]) < m.P(grid[i - 1]));
    CHECK(m.P(grid[i - 1]) - 2 * m.P(grid[i]) + m.P(grid[i + 1]) >= -1e-8);
  }
  CHECK(std::abs(m.P(0) - m.log_E()) < 1e-6);
  for (double s : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    CHECK(m.dP(s) < 0);
    CHECK(m.dP(s) == doctest::Approx(m.dP_exact(m.depth(), s)).epsilon(1e-6));
    CHECK(m.P_err(s) >= 0);
  }
  for (double s = -2; s < 2; s += 1) CHECK(m.dP(s) < m.dP(s + 1));
  const PressurePoint pt = pressure(m, 0.25);
  CHECK(pt.P_n.size() == 12);
  CHECK(pt.P == m.P(0.25));
}

TEST_CASE("Bowen root and slope limits") {
  const PressureModel m({1}, 24, 12);
  const BowenRoot b = bowen_root(m);
  CHECK(b.D > 0);
  CHECK(b.D < 1);
  CHECK(std::abs(m.P(b.D)) < 1e-9);
  CHECK(b.residual == doctest::Approx(std::abs(m.P(b.D))).epsilon(1e-6));
  const PressureLimits L = pressure_limits(m);
  CHECK(L.minus_inf < m.dP(0));
  CHECK(m.dP(0) < m.dP(b.D));
  CHECK(m.dP(b.D) < L.plus_inf);
  CHECK(L.plus_inf < 0);
  CHECK(L.minus_lo <= L.minus_inf);
  CHECK(L.minus_inf <= L.minus_hi);
  CHECK(L.plus_lo <= L.plus_inf);
  CHECK(L.plus_inf <= L.plus_hi);
  CHECK(L.consistent);
  // the far-field slopes must lie between the limits and P'(0)
  CHECK(L.minus_lo <= L.far_minus);
  CHECK(L.far_plus <= L.plus_hi);
  const PressureCurve c = pressure_curve(m, -1, 2, 31);
  CHECK(c.grid.size() == 31);
  CHECK(c.grid.front().s == -1);
  CHECK(c.grid.back().s == doctest::Approx(2));
  CHECK(c.bowen.D == b.D);
}

TEST_CASE("budgets") {
  CHECK(auto_depth({1}, 10) == 3);  // counts 4, 6, 10, 16
  for (const std::vector<int>& a : std::vector<std::vector<int>>{{1}, {2}, {1, 2}}) {
    const int N = auto_depth(a, 10000);
    CHECK(word_count(a, N) <= 10000);
    CHECK((N == 40 || word_count(a, N + 1) > 10000));
  }
  setenv("STURM_WORD_CAP", "200", 1);
  CHECK(word_cap() == 200);
  {
    const PressureModel clipped({1}, 24, 30);
    CHECK(clipped.partial());
    CHECK(clipped.depth() == auto_depth({1}, 200));
  }
  setenv("STURM_WORD_CAP", "8", 1);
  CHECK_THROWS_AS(PressureModel({1}, 24, 0), BudgetExceeded);
  unsetenv("STURM_WORD_CAP");
  CHECK(word_cap() == 10000);
}
