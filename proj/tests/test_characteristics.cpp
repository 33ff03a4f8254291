#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "sturm/characteristics.hpp"
#include "sturm/errors.hpp"

using namespace sturm;

namespace {

const double kPhi = (1 + std::sqrt(5.0)) / 2;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TEST_CASE("quadratic surds") {
  const QuadSurd r5(0, 1, 5), one = QuadSurd::rational(1, 5);
  CHECK((r5 * r5) == QuadSurd::rational(5, 5));
  CHECK(((one + r5) / QuadSurd::rational(2, 5)).to_double() == doctest::Approx(kPhi).epsilon(1e-15));
  const QuadSurd x(Rational(3, 2), Rational(-1, 4), 5);
  CHECK((x * x.conj()) == QuadSurd::rational(Rational(9, 4) - Rational(5, 16), 5));
  CHECK(((x / x) - one).is_zero());
  CHECK((-x + x).is_zero());
  CHECK((x - x).is_zero());
  CHECK(QuadSurd::rational(Rational(-2, 3), 1).str() == "(-2)/3");
}

TEST_CASE("exact Perron value and Parry integral") {
  CHECK(perron_exact({1}).to_double() == doctest::Approx(kPhi).epsilon(1e-15));
  CHECK(perron_exact({1}).str() == "(1+sqrt(5))/2");
  CHECK(perron_exact({1, 2}).to_double() == doctest::Approx(2 + std::sqrt(3.0)).epsilon(1e-15));
  CHECK(perron_exact({2}).to_double() == doctest::Approx(1 + std::sqrt(2.0)).epsilon(1e-15));
  // -(1 - 1/sqrt5)
  CHECK(parry_integral_exact({1}) == QuadSurd(-1, Rational(1, 5), 5));
  for (const std::vector<int>& a : std::vector<std::vector<int>>{{1}, {2}, {1, 2}, {2, 3}, {1, 1, 3}}) {
    CHECK(perron_exact(a).to_double() == doctest::Approx(perron_value(a)).epsilon(1e-13));
    CHECK(parry_integral_exact(a).to_double() == doctest::Approx(parry_integral(a)).epsilon(1e-11));
  }
}

TEST_CASE("canonical period") {
  CHECK(canonical_period({1, 1}) == std::vector<int>{1});
  CHECK(canonical_period({2, 1}) == std::vector<int>{1, 2});
  CHECK(canonical_period({3, 1, 2, 3, 1, 2}) == std::vector<int>{1, 2, 3});
  CHECK(canonical_period({2, 2, 1}) == std::vector<int>{1, 2, 2});
  CHECK_THROWS(canonical_period({}));
}

TEST_CASE("asymptotic constants for the golden mean") {
  const AsymptoticConstants c = asymptotic_constants({1}, false);
  CHECK(c.F_lower == Rational(-2, 3));
  CHECK(c.F_upper == Rational(-1, 2));
  CHECK(c.rho_gamma.exact == "(3/2)*log((1+sqrt(5))/2)");
  CHECK(c.rho_d.exact == "((5+sqrt(5))/4)*log((1+sqrt(5))/2)");
  CHECK(c.rho_T.exact == "2*log((1+sqrt(5))/2)");
  const double L = std::log(kPhi);
  CHECK(std::abs(c.rho_gamma.value - 1.5 * L) < 1e-12);
  CHECK(std::abs(c.rho_d.value - (5 + std::sqrt(5.0)) / 4 * L) < 1e-12);
  CHECK(std::abs(c.rho_T.value - 2 * L) < 1e-12);
  CHECK(c.chain);
  // log E and the mean cycles both scale with the period length
  const AsymptoticConstants d = asymptotic_constants({1, 1}, false);
  CHECK(d.rho_gamma.value == doctest::Approx(c.rho_gamma.value).epsilon(1e-12));
  CHECK(d.rho_T.value == doctest::Approx(c.rho_T.value).epsilon(1e-12));
  CHECK(d.rho_d.value == doctest::Approx(c.rho_d.value).epsilon(1e-12));
}

TEST_CASE("characteristics at lambda=24") {
  const Characteristics c = compute_characteristics({1}, 24);
  CHECK(c.depth == kMaxPressureDepth);
  CHECK_FALSE(c.partial);
  CHECK(c.P0 == doctest::Approx(std::log(kPhi)).epsilon(1e-14));
  CHECK(c.gamma > 0);
  CHECK(c.chain);
  CHECK(c.gamma < c.d);
  CHECK(c.d < c.D);
  CHECK(c.D < c.T);
  CHECK(c.T < 1);
  CHECK(c.margin == doctest::Approx(std::min({c.d - c.gamma, c.D - c.d, c.T - c.D})));
  // repeated periods describe the same tail
  const Characteristics r = compute_characteristics({1, 1}, 24);
  CHECK(r.D == doctest::Approx(c.D).epsilon(1e-12));
  CHECK_THROWS_AS(compute_characteristics({1}, 20), DomainError);
}

TEST_CASE("rotation invariance") {
  const Characteristics x = compute_characteristics({1, 2}, 24), y = compute_characteristics({2, 1}, 24);
  CHECK(std::abs(x.gamma - y.gamma) < 1e-8);
  CHECK(std::abs(x.d - y.d) < 1e-8);
  CHECK(std::abs(x.D - y.D) < 1e-8);
  CHECK(std::abs(x.T - y.T) < 1e-8);
  const AsymptoticConstants p = asymptotic_constants({1, 2}, false), q = asymptotic_constants({2, 1}, false);
  CHECK(std::abs(p.rho_d.value - q.rho_d.value) < 1e-8);
  CHECK(std::abs(p.rho_gamma.value - q.rho_gamma.value) < 1e-8);
}

TEST_CASE("multifractal spectrum") {
  const PressureModel m({1}, 24);
  const Characteristics c = compute_characteristics({1}, 24);
  const auto [lo, hi] = local_dimension_range(m);
  CHECK(lo == doctest::Approx(c.gamma).epsilon(1e-12));
  CHECK(hi == doctest::Approx(c.T).epsilon(1e-12));
  CHECK(std::abs(tau_of_q(m, 0) - c.D) < 1e-8);
  CHECK(std::abs(tau_of_q(m, 1)) < 1e-8);
  std::vector<double> betas;
  for (int i = 1; i <= 11; ++i) betas.push_back(lo + (hi - lo) * i / 12);
  const auto s = multifractal_spectrum(m, betas);
  REQUIRE(s.size() == betas.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s[i].dim <= c.D + 1e-8);
    CHECK(s[i].dim >= 0);
    if (i && i + 1 < s.size()) CHECK(s[i - 1].dim - 2 * s[i].dim + s[i + 1].dim <= 1e-8);
  }
  // the spectrum touches the diagonal at d
  const auto at_d = multifractal_spectrum(m, {c.d});
  CHECK(at_d[0].dim == doctest::Approx(c.d).epsilon(1e-6));
  CHECK(at_d[0].q == doctest::Approx(1).epsilon(1e-3));
  CHECK_THROWS(multifractal_spectrum(m, {hi + 0.1}));
}

TEST_CASE("dos mass") {
  const std::vector<int> a = {1};
  const double E = perron_value(a);
  for (int n = 1; n <= 8; ++n) {
    double total = 0, lo = 1e300, hi = 0;
    for (const BlockWord& w : words(a, n)) {
      const double m = dos_mass(a, 24, w);
      total += m;
      lo = std::min(lo, m * std::pow(E, n));
      hi = std::max(hi, m * std::pow(E, n));
    }
    CHECK(total == doctest::Approx(1).epsilon(1e-12));
    CHECK(lo > 0.1);
    CHECK(hi < 10);
  }
  CHECK_THROWS_AS(dos_mass(a, 10, words(a, 1)[0]), DomainError);
}

TEST_CASE("local dimensions along periodic and random paths") {
  const std::vector<int> a = {1};
  const Characteristics c = compute_characteristics(a, 24);
  const MeanCycleResult mc = mean_cycles(a);
  // the minimal and maximal mean cycles drive gamma and T
  const LocalDimension lmin = local_dimension_estimate(a, 24, periodic_path(a, {}, mc.witness_lower, 30), 30);
  const LocalDimension lmax = local_dimension_estimate(a, 24, periodic_path(a, {}, mc.witness_upper, 30), 30);
  CHECK(lmin.at_depth == doctest::Approx(c.gamma).epsilon(0.02));
  CHECK(lmax.at_depth == doctest::Approx(c.T).epsilon(0.02));
  CHECK(lmin.lower <= lmin.at_depth);
  CHECK(lmin.at_depth <= lmin.upper);
  CHECK(lmin.sequence.size() == 30);
  // extreme words are admissible and invert iota
  for (bool longest : {false, true}) {
    const BlockWord w = extreme_word(a, 24, 5, longest);
    CHECK(w.size() == 5);
    CHECK(is_admissible(a, w));
    CHECK(iota_inverse(a, iota(a, w)) == w);
  }
  std::mt19937_64 rng(99);
  std::vector<double> est;
  for (int i = 0; i < 40; ++i) {
    const BlockWord p = parry_path(a, 12, rng);
    REQUIRE(p.size() == 12);
    CHECK(is_admissible(a, p));
    est.push_back(local_dimension_estimate(a, 24, p, 12).at_depth);
  }
  CHECK(median(est) == doctest::Approx(c.d).epsilon(0.03));
  CHECK_THROWS(local_dimension_estimate(a, 24, BlockWord{0}, 3));
  CHECK_THROWS(periodic_path(a, {}, BlockWord{0}, 3));
}

TEST_CASE("Parry path statistics") {
  const std::vector<int> a = {1, 2};
  std::mt19937_64 rng(5);
  const int N = static_cast<int>(block_alphabet(a).size());
  std::vector<double> freq(N, 0);
  const int L = 200000;
  const BlockWord p = parry_path(a, L, rng);
  CHECK(is_admissible(a, p));
  for (int v : p) freq[v] += 1.0 / L;
  for (int v = 0; v < N; ++v) CHECK(std::abs(freq[v] - parry_measure(a, {v})) < 0.01);
  std::mt19937_64 r1(3), r2(3);
  CHECK(parry_path(a, 50, r1) == parry_path(a, 50, r2));
}
