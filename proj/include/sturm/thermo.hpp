#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "sturm/symbolic.hpp"

namespace sturm {

using Rational = boost::multiprecision::cpp_rational;

struct PotentialSample {
  BlockWord word;
  double value = 0;  // log band length, nats
};

PotentialSample psi(const std::vector<int>& a, double lambda, const BlockWord& w);

// [lower, upper] corridor for psi_n(w) built from the Birkhoff sum of f.
struct PsiCorridor {
  double lower = 0;
  double upper = 0;
};
PsiCorridor psi_corridor(const std::vector<int>& a, double lambda, const BlockWord& w);

// v, w are finite prefixes of the two paths; 0 iff equal.
double weak_gibbs_distance(const std::vector<int>& a, double lambda, const BlockWord& v, const BlockWord& w);

Rational birkhoff_weight(const std::vector<int>& a, const BlockLetter& b);
// S_n f(w)
Rational birkhoff_sum(const std::vector<int>& a, const BlockWord& w);

struct MeanCycleResult {
  Rational F_lower, F_upper;
  std::vector<int> witness_lower, witness_upper;  // block indices, first vertex not repeated
};

MeanCycleResult mean_cycles(const std::vector<int>& a);
Rational cycle_mean(const std::vector<int>& a, const std::vector<int>& cycle);
// Parry integral of f in floating point.
double parry_integral(const std::vector<int>& a);

// Words per level allowed for pressure sums; STURM_WORD_CAP overrides.
std::size_t word_cap();
// Largest n <= max_depth with #Omega_{a,n} <= cap.
int auto_depth(const std::vector<int>& a, std::size_t cap, int max_depth = 40);

// psi_n over Omega_{a,n} in canonical word order, n = 1..depth.
struct PsiTable {
  std::vector<int> a;
  double lambda = 0;
  std::vector<std::vector<double>> psi;  // psi[n-1]
  int depth() const { return static_cast<int>(psi.size()); }
};

const PsiTable& psi_table(const std::vector<int>& a, double lambda, int depth, int threads = 1);

// psi_1..psi_n along a path (n = path length).
std::vector<double> psi_along(const std::vector<int>& a, double lambda, const BlockWord& path);

struct MarkovChain;

// Default depth ceiling when PressureModel picks the depth itself.
inline constexpr int kMaxPressureDepth = 12;

// Finite-level pressure sums Z_n(s) and the extrapolated pressure: the log Perron
// root of the order-N Markov approximation of psi, whose transitions are words v of
// length N weighted by exp(s (psi_N(v) - psi_{N-1}(v|N-1))). Convex in s, equal to
// log E_a at s = 0.
class PressureModel {
 public:
  // depth 0 picks auto_depth(word_cap(), kMaxPressureDepth); a larger depth than
  // the cap allows is clipped and flagged partial.
  PressureModel(const std::vector<int>& a, double lambda, int depth = 0, int threads = 1);

  const std::vector<int>& period() const { return a_; }
  double lambda() const { return lambda_; }
  int depth() const { return depth_; }
  bool partial() const { return partial_; }
  double log_E() const { return logE_; }

  double log_z(int n, double s) const;
  double P_n(int n, double s) const { return log_z(n, s) / n; }
  std::vector<double> P_levels(double s) const;
  // Markov approximation of order n, 2 <= n <= depth
  double estimate(int n, double s) const;
  double P(double s) const { return estimate(depth_, s); }
  double P_err(double s) const;
  // central difference, h = 1e-4, one Richardson step
  double dP(double s) const;
  // derivative of estimate(n, .) from the left and right Perron vectors
  double dP_exact(int n, double s) const;
  double dP_err(double s) const;
  const PsiTable& table() const { return *table_; }

 private:
  std::vector<int> a_;
  double lambda_;
  int depth_ = 0;
  bool partial_ = false;
  double logE_ = 0;
  const PsiTable* table_ = nullptr;
  std::vector<std::shared_ptr<MarkovChain>> chains_;  // by order
};

struct PressureLimits {
  double minus_inf = 0, plus_inf = 0;
  double minus_lo = 0, minus_hi = 0, plus_lo = 0, plus_hi = 0;
  double far_minus = 0, far_plus = 0;  // P'(-8), P'(+8)
  int period_min = 1, period_max = 1;
  bool consistent = true;
};

PressureLimits pressure_limits(const PressureModel& model);
PressureLimits pressure_limits(const std::vector<int>& a, double lambda, int depth = 0);

struct PressurePoint {
  double s = 0;
  std::vector<double> P_n;  // n = 1..N
  double P = 0, P_err = 0, dP = 0;
};

PressurePoint pressure(const PressureModel& model, double s);
PressurePoint pressure(const std::vector<int>& a, double lambda, double s, int depth = 0);
double pressure_derivative(const std::vector<int>& a, double lambda, double s, int depth = 0);

struct BowenRoot {
  double D = 0;
  double residual = 0;
  double err = 0;
};

// Throws DomainError if P has no sign change on [0, 1].
BowenRoot bowen_root(const PressureModel& model);
BowenRoot bowen_root(const std::vector<int>& a, double lambda, int depth = 0);

struct PressureCurve {
  std::vector<int> a;
  double lambda = 0;
  int depth = 0;
  bool partial = false;
  std::vector<PressurePoint> grid;
  PressureLimits limits;
  BowenRoot bowen;
};

PressureCurve pressure_curve(const PressureModel& model, double s_min, double s_max, int steps);

}  // namespace sturm
