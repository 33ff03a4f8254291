#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sturm/thermo.hpp"

namespace sturm {

// x + y*sqrt(d), d squarefree (d = 1 means rational)
struct QuadSurd {
  Rational x, y;
  BigInt d = 1;

  QuadSurd() = default;
  QuadSurd(Rational xx, Rational yy, BigInt dd) : x(std::move(xx)), y(std::move(yy)), d(std::move(dd)) {}
  static QuadSurd rational(const Rational& r, const BigInt& d) { return {r, 0, d}; }

  bool is_zero() const { return x == 0 && y == 0; }
  QuadSurd conj() const { return {x, -y, d}; }
  double to_double() const;
  std::string str() const;  // "(X+Y*sqrt(d))/Z"
};

QuadSurd operator+(const QuadSurd& a, const QuadSurd& b);
QuadSurd operator-(const QuadSurd& a, const QuadSurd& b);
QuadSurd operator-(const QuadSurd& a);
QuadSurd operator*(const QuadSurd& a, const QuadSurd& b);
QuadSurd operator/(const QuadSurd& a, const QuadSurd& b);
bool operator==(const QuadSurd& a, const QuadSurd& b);

// E_a = (t + s*sqrt(d))/2 exactly.
QuadSurd perron_exact(const std::vector<int>& a);
// Parry integral of f, exact.
QuadSurd parry_integral_exact(const std::vector<int>& a);

// Primitive root of a, rotated to its lexicographically least rotation.
std::vector<int> canonical_period(const std::vector<int>& a);

struct Characteristics {
  std::vector<int> a;
  double lambda = 0;
  double gamma = 0, d = 0, D = 0, T = 0;
  double gamma_err = 0, d_err = 0, D_err = 0, T_err = 0;
  double P0 = 0, dP0 = 0, Pprime_minus_inf = 0, Pprime_plus_inf = 0;
  int depth = 0;
  bool partial = false;
  bool chain = false;  // gamma < d < D < T
  double margin = 0;   // smallest gap in the chain
};

// Computed on canonical_period(a); no chain check.
Characteristics compute_characteristics(const std::vector<int>& a, double lambda, int depth = 0, int threads = 1);
// Throws InvariantViolation if the strict chain fails.
Characteristics spectral_characteristics(const std::vector<int>& a, double lambda, int depth = 0, int threads = 1);

struct ExactConstant {
  std::string exact;  // empty if not available in closed form
  double value = 0;
};

struct SweepPoint {
  double lambda = 0;
  double D = 0;
  double D_log_lambda = 0;
  int depth = 0;
};

struct AsymptoticConstants {
  std::vector<int> a;
  Rational F_lower, F_upper;
  std::vector<int> witness_lower, witness_upper;
  QuadSurd E;
  QuadSurd parry_f;  // integral of f against the Parry measure
  std::string log_E;
  ExactConstant rho_gamma, rho_d, rho_T;
  // rho_D: fit of 1/(D log lambda) linear in 1/log lambda through the two largest lambdas
  double rho_D = 0;
  std::vector<SweepPoint> sweep;
  bool chain = true;
};

AsymptoticConstants asymptotic_constants(const std::vector<int>& a, bool sweep = true,
                                         const std::vector<double>& lambdas = {1e2, 1e3, 1e4}, int depth = 0);

struct MultifractalPoint {
  double beta = 0;
  double dim = 0;
  double q = 0;  // minimizer; at the search bound when the infimum is a limit
  bool limit = false;
};

// Solves P(tau) = q*P(0).
double tau_of_q(const PressureModel& model, double q);
// Interval L of attainable local dimensions.
std::pair<double, double> local_dimension_range(const PressureModel& model);
std::vector<MultifractalPoint> multifractal_spectrum(const PressureModel& model, const std::vector<double>& betas);
std::vector<MultifractalPoint> multifractal_spectrum(const std::vector<int>& a, double lambda,
                                                     const std::vector<double>& betas, int depth = 0);

double dos_mass(const std::vector<int>& a, double lambda, const BlockWord& w);

struct LocalDimension {
  double lower = 0, upper = 0;
  double at_depth = 0;
  std::vector<double> sequence;  // -P(0) n / psi_n, n = 1..depth
};

LocalDimension local_dimension_estimate(const std::vector<int>& a, double lambda, const BlockWord& path, int depth);
// prefix followed by repetitions of cycle, cut at depth
BlockWord periodic_path(const std::vector<int>& a, const BlockWord& prefix, const BlockWord& cycle, int depth);
// Block word coding the longest (max) or shortest band of level depth*k+1.
BlockWord extreme_word(const std::vector<int>& a, double lambda, int depth, bool longest);
BlockWord iota_inverse(const std::vector<int>& a, const SymbolWord& w);

// Path of the Parry Markov chain.
BlockWord parry_path(const std::vector<int>& a, int length, std::mt19937_64& rng);

}  // namespace sturm
