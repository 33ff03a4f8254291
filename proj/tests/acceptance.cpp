#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "sturm/characteristics.hpp"
#include "sturm/charpoly.hpp"
#include "sturm/verify.hpp"

using namespace sturm;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " FAILED[" << what << "]";
    }
  }
};

double quantile(std::vector<double> v, double f) {
  std::sort(v.begin(), v.end());
  const double x = f * (v.size() - 1);
  const std::size_t i = static_cast<std::size_t>(x);
  if (i + 1 >= v.size()) return v.back();
  return v[i] + (x - i) * (v[i + 1] - v[i]);
}

std::vector<std::vector<int>> small_periods() {
  std::vector<std::vector<int>> out;
  for (int k = 1; k <= 3; ++k) {
    std::vector<int> a(k, 1);
    while (true) {
      out.push_back(a);
      int i = k - 1;
      while (i >= 0 && a[i] == 4) a[i--] = 1;
      if (i < 0) break;
      ++a[i];
    }
  }
  return out;
}

// 1. large-coupling limits for the golden mean
void fibonacci_asymptotics(Outcome& o) {
  // exact limits: (3/2)log phi, ((5+sqrt5)/4)log phi, log(1+sqrt2), 2 log phi
  const double lp = std::log((1 + std::sqrt(5.0)) / 2);
  const double target[4] = {1.5 * lp, (5 + std::sqrt(5.0)) / 4 * lp, std::log(1 + std::sqrt(2.0)), 2 * lp};
  const double quoted[4] = {0.7218, 0.8706, 0.8814, 0.9624};
  const char* name[4] = {"gamma", "d", "D", "T"};
  const double lambdas[3] = {50, 100, 500};
  double v[3][4];
  for (int i = 0; i < 3; ++i) {
    const Characteristics c = compute_characteristics({1}, lambdas[i]);
    o.require(c.depth >= 12, "depth >= 12");
    const double L = std::log(lambdas[i]);
    v[i][0] = c.gamma * L;
    v[i][1] = c.d * L;
    v[i][2] = c.D * L;
    v[i][3] = c.T * L;
  }
  for (int j = 0; j < 4; ++j) {
    o.detail << " " << name[j] << "*log(lambda)=";
    for (int i = 0; i < 3; ++i) o.detail << (i ? "," : "") << v[i][j];
    const bool within = std::abs(v[2][j] - quoted[j]) <= 0.1 * quoted[j];
    o.require(within, std::string(name[j]) + " within 10% at lambda=500");
    const bool monotone = std::abs(v[1][j] - target[j]) < std::abs(v[0][j] - target[j]) &&
                          std::abs(v[2][j] - target[j]) < std::abs(v[1][j] - target[j]) &&
                          (v[1][j] - v[0][j]) * (v[2][j] - v[1][j]) > 0;
    o.require(monotone, std::string(name[j]) + " monotone approach");
  }
}

// 2. exact constants for the golden mean
void exact_constants(Outcome& o) {
  const AsymptoticConstants c = asymptotic_constants({1}, false);
  const double L = std::log((1 + std::sqrt(5.0)) / 2);
  o.require(c.F_lower == Rational(-2, 3) && c.F_upper == Rational(-1, 2), "mean cycles -2/3, -1/2");
  o.require(parry_integral_exact({1}) == QuadSurd(-1, Rational(1, 5), 5), "Parry integral -(1-1/sqrt5)");
  o.require(c.rho_gamma.exact == "(3/2)*log((1+sqrt(5))/2)", "rho_gamma string");
  o.require(c.rho_d.exact == "((5+sqrt(5))/4)*log((1+sqrt(5))/2)", "rho_d string");
  o.require(c.rho_T.exact == "2*log((1+sqrt(5))/2)", "rho_T string");
  const double e1 = std::abs(c.rho_gamma.value - 1.5 * L), e2 = std::abs(c.rho_d.value - (5 + std::sqrt(5.0)) / 4 * L),
               e3 = std::abs(c.rho_T.value - 2 * L);
  o.require(std::max({e1, e2, e3}) <= 1e-12, "decimals to 1e-12");
  o.detail << " rho_gamma=" << c.rho_gamma.exact << " rho_d=" << c.rho_d.exact << " rho_T=" << c.rho_T.exact
           << " max decimal error " << std::max({e1, e2, e3});
}

// 3. mean-cycle table
void mean_cycle_table(Outcome& o) {
  struct Row {
    std::vector<int> a;
    Rational lo, hi;
  };
  for (const Row& r : {Row{{1, 1}, Rational(-4, 3), -1}, Row{{2, 3}, -3, -2}, Row{{2, 2}, -2, -2}}) {
    const MeanCycleResult k = mean_cycles(r.a);
    // simple cycles on small graphs, closed walks of length <= #blocks otherwise
    std::optional<std::pair<Rational, Rational>> brute;
    const char* how = "simple cycles";
    if (block_alphabet(r.a).size() <= 12) brute = simple_cycle_means(r.a);
    if (!brute) {
      brute = closed_walk_means(r.a);
      how = "closed walks";
    }
    o.detail << " (" << r.a[0] << "," << r.a[1] << "): (" << k.F_lower.str() << ", " << k.F_upper.str() << ") "
             << how << " (" << brute->first.str() << ", " << brute->second.str() << ")";
    o.require(k.F_lower == r.lo && k.F_upper == r.hi, "exact table values");
    o.require(brute->first == k.F_lower && brute->second == k.F_upper, "brute-force cross-check");
  }
}

// 4. characteristic-polynomial identity
void charpoly_cases(Outcome& o) {
  int n = 0, bad = 0;
  for (const auto& a : small_periods()) {
    ++n;
    if (!charpoly_identity(a)) ++bad;
  }
  o.detail << " " << n << " periods, " << bad << " failures";
  o.require(bad == 0, "identity");
}

// 5. primitivity of the auxiliary matrix
void primitivity(Outcome& o) {
  int n = 0, bad = 0;
  for (const auto& a : small_periods()) {
    ++n;
    const Mat3 p = mat3_pow(auxiliary_matrix(a), 5);
    bool pos = true;
    for (const auto& r : p)
      for (const auto& x : r) pos = pos && x > 0;
    bad += !pos;
  }
  o.detail << " " << n << " periods, " << bad << " failures";
  o.require(bad == 0, "hat A^5 > 0");
}

// 6. band structure
void band_audit(Outcome& o) {
  for (const std::vector<int>& a : std::vector<std::vector<int>>{{1}, {2}, {1, 2}}) {
    const AuditReport r = audit_bands(a, 24, 6);
    o.detail << " " << r.instance << ": " << r.detail << ", " << r.witnesses.size() << " violations;";
    o.require(r.pass, r.instance);
  }
}

// 7. pressure sanity and the strict chain
void pressure_sanity(Outcome& o) {
  setenv("STURM_WORD_CAP", "200000", 1);
  for (const std::vector<int>& a : std::vector<std::vector<int>>{{1}, {2}}) {
    const PressureModel m(a, 24, 12);
    o.require(m.depth() == 12 && !m.partial(), "depth 12");
    double worst = 0;
    for (int n = 1; n <= m.depth(); ++n) {
      const double gap = std::abs(m.P_n(n, 0) - m.log_E()) * n;
      worst = std::max(worst, gap);
    }
    o.require(worst <= 3, "|P_n(0) - log E| <= 3/n");
    std::vector<double> P;
    for (int i = 0; i <= 50; ++i) P.push_back(m.P(-2 + 0.1 * i));
    double min_second = INFINITY;
    bool decreasing = true;
    for (std::size_t i = 1; i < P.size(); ++i) decreasing = decreasing && P[i] < P[i - 1];
    for (std::size_t i = 1; i + 1 < P.size(); ++i) min_second = std::min(min_second, P[i - 1] - 2 * P[i] + P[i + 1]);
    o.require(decreasing, "strictly decreasing");
    o.require(min_second >= -1e-8, "convex");
    o.detail << " a=(" << a[0] << "): max n|P_n(0)-logE|=" << worst << " min second difference " << min_second << ";";
  }
  unsetenv("STURM_WORD_CAP");
  for (const std::vector<int>& a : std::vector<std::vector<int>>{{1}, {2}, {1, 2}, {2, 3}}) {
    const Characteristics c = compute_characteristics(a, 24);
    o.detail << " chain a=(" << a[0] << (a.size() > 1 ? "," + std::to_string(a[1]) : "") << ") gamma=" << c.gamma
             << " d=" << c.d << " D=" << c.D << " T=" << c.T << " margin=" << c.margin << ";";
    o.require(c.chain, "strict chain");
    o.require(c.margin >= 1e-3, "chain margin >= 1e-3");
  }
}

// 8. growth of the convergent denominators
void convergent_growth(Outcome& o) {
  using Float = boost::multiprecision::cpp_bin_float_100;
  const std::vector<int> a = {1, 2};
  const int k = a.size();
  const Convergents c = convergents(check_alpha(a), k * 40);
  const Float E = (Float(4) + sqrt(Float(12))) / 2;  // 2 + sqrt 3
  o.require(std::abs(E.convert_to<double>() - perron_value(a)) < 1e-13, "E_a");
  std::vector<Float> r;
  Float En = 1;
  for (int n = 1; n <= 40; ++n) {
    En *= E;
    r.push_back(Float(c.Q(k * n)) / En);
  }
  const double lo = (*std::min_element(r.begin(), r.end())).convert_to<double>();
  const double hi = (*std::max_element(r.begin(), r.end())).convert_to<double>();
  double last = 0;
  for (std::size_t i = 30; i + 1 < r.size(); ++i) last = std::max(last, abs(r[i + 1] / r[i] - 1).convert_to<double>());
  o.detail << " q_(2n)/E^n in [" << lo << ", " << hi << "], max |ratio-1| over n >= 31: " << last;
  o.require(lo > 0 && hi / lo < 2, "bounded");
  o.require(last < 1e-9, "successive ratio -> 1");
}

// 9. bounded covariation
void covariation(Outcome& o) {
  const CovariationAudit c = audit_covariation({1}, 24, 500, 50, 2024);
  o.detail << " " << c.report.detail << ", failures " << c.report.witnesses.size();
  o.require(c.report.pass && c.samples == 500, "double ratio in [1/50, 50]");
}

// 10. local dimensions along Parry-random paths
void parry_local_dimension(Outcome& o) {
  const std::vector<int> a = {1};
  const Characteristics c = compute_characteristics(a, 24);
  std::mt19937_64 rng(20240611);
  std::vector<double> at8, at12;
  for (int i = 0; i < 100; ++i) {
    const BlockWord p = parry_path(a, 12, rng);
    const LocalDimension L = local_dimension_estimate(a, 24, p, 12);
    at8.push_back(L.sequence[7]);
    at12.push_back(L.at_depth);
  }
  const double med = quantile(at12, 0.5);
  const double iqr8 = quantile(at8, 0.75) - quantile(at8, 0.25), iqr12 = quantile(at12, 0.75) - quantile(at12, 0.25);
  o.detail << " seed 20240611, d=" << c.d << " median(depth 12)=" << med << " rel " << std::abs(med - c.d) / c.d
           << " IQR depth 8=" << iqr8 << " depth 12=" << iqr12;
  o.require(std::abs(med - c.d) <= 0.02 * c.d, "median within 2% of d");
  o.require(iqr8 > iqr12, "IQR shrinks");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double limit;  // seconds
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> all = {
      {1, "Fibonacci asymptotics", 600, fibonacci_asymptotics},
      {2, "exact asymptotic constants", 1, exact_constants},
      {3, "mean-cycle table", 1, mean_cycle_table},
      {4, "char-poly identity", 30, charpoly_cases},
      {5, "primitivity", 1, primitivity},
      {6, "band structure audit", 300, band_audit},
      {7, "pressure sanity and strict chain", 300, pressure_sanity},
      {8, "convergent growth", 1, convergent_growth},
      {9, "bounded covariation", 120, covariation},
      {10, "Parry local dimensions", 300, parry_local_dimension},
  };
  int failed = 0;
  for (const Criterion& c : all) {
    Outcome o;
    o.detail.precision(6);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " exception: " << e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(s <= c.limit, "runtime");
    failed += !o.pass;
    std::printf("criterion %2d %s: %s (%.2f s of %.0f s)%s\n", c.id, c.title, o.pass ? "PASS" : "FAIL", s, c.limit,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed ? 1 : 0;
}
