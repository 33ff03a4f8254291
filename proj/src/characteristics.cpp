#include "sturm/characteristics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>
#include <boost/multiprecision/integer.hpp>

#include "sturm/bands.hpp"
#include "sturm/errors.hpp"

namespace sturm {

using Dec = boost::multiprecision::cpp_dec_float_50;

namespace {

BigInt common_d(const QuadSurd& a, const QuadSurd& b) {
  if (a.y == 0) return b.d;
  if (b.y == 0) return a.d;
  if (a.d != b.d) throw std::invalid_argument("quadratic surds from different fields");
  return a.d;
}

Dec to_dec(const Rational& r) {
  return Dec(boost::multiprecision::numerator(r)) / Dec(boost::multiprecision::denominator(r));
}

Dec dec_value(const QuadSurd& q) {
  Dec v = to_dec(q.x);
  if (q.y != 0) v += to_dec(q.y) * boost::multiprecision::sqrt(Dec(q.d));
  return v;
}

// n = s^2 * d with d squarefree (up to prime factors above 10^6 occurring squared)
std::pair<BigInt, BigInt> square_split(BigInt n) {
  if (n <= 0) throw std::invalid_argument("square_split needs a positive integer");
  BigInt s = 1, d = 1;
  for (std::uint32_t p = 2; p < 1000000 && BigInt(p) * p <= n; p += (p == 2 ? 1 : 2)) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    for (int i = 0; i + 1 < e; i += 2) s *= p;
    if (e % 2) d *= p;
  }
  const BigInt r = boost::multiprecision::sqrt(n);
  if (r * r == n)
    s *= r;
  else
    d *= n;
  return {s, d};
}

std::string int_str(const BigInt& v) { return v.str(); }

// Integer form X + Y*sqrt(d) over Z.
struct SurdParts {
  BigInt X, Y, Z;
};

SurdParts parts(const QuadSurd& q) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  const BigInt dx = denominator(q.x), dy = denominator(q.y);
  const BigInt Z = boost::multiprecision::lcm(dx, dy);
  return {numerator(q.x) * (Z / dx), numerator(q.y) * (Z / dy), Z};
}

std::string numerator_str(const SurdParts& p, const BigInt& d) {
  std::string out;
  if (p.X != 0) out = int_str(p.X);
  if (p.Y != 0) {
    const BigInt ay = p.Y < 0 ? BigInt(-p.Y) : p.Y;
    if (p.Y < 0)
      out += "-";
    else if (!out.empty())
      out += "+";
    if (ay != 1) out += int_str(ay) + "*";
    out += "sqrt(" + int_str(d) + ")";
  }
  if (out.empty()) out = "0";
  return out;
}

// c*log(arg)
std::string coefficient_log(const QuadSurd& c, const std::string& arg) {
  const SurdParts p = parts(c);
  const std::string log = "log(" + arg + ")";
  if (p.Y == 0) {
    if (p.Z == 1) {
      if (p.X == 1) return log;
      if (p.X == -1) return "-" + log;
      return int_str(p.X) + "*" + log;
    }
    return "(" + int_str(p.X) + "/" + int_str(p.Z) + ")*" + log;
  }
  const std::string num = numerator_str(p, c.d);
  if (p.Z == 1) return "(" + num + ")*" + log;
  return "((" + num + ")/" + int_str(p.Z) + ")*" + log;
}

std::string log_argument(const QuadSurd& E) {
  const SurdParts p = parts(E);
  const std::string num = numerator_str(p, E.d);
  if (p.Z == 1) return num;
  return "(" + num + ")/" + int_str(p.Z);
}

int type_index(int t) { return t - 1; }

using SurdMat = std::vector<std::vector<QuadSurd>>;

// Nonzero kernel vector of an n x n matrix with one-dimensional kernel.
std::vector<QuadSurd> kernel_vector(SurdMat m, const BigInt& d) {
  const int n = static_cast<int>(m.size());
  std::vector<int> pivot_col;
  int row = 0;
  for (int c = 0; c < n && row < n; ++c) {
    int piv = -1;
    for (int r = row; r < n; ++r)
      if (!m[r][c].is_zero()) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[row], m[piv]);
    const QuadSurd inv = QuadSurd::rational(1, d) / m[row][c];
    for (int j = 0; j < n; ++j) m[row][j] = m[row][j] * inv;
    for (int r = 0; r < n; ++r) {
      if (r == row || m[r][c].is_zero()) continue;
      const QuadSurd f = m[r][c];
      for (int j = 0; j < n; ++j) m[r][j] = m[r][j] - f * m[row][j];
    }
    pivot_col.push_back(c);
    ++row;
  }
  int free_col = -1;
  for (int c = 0; c < n; ++c)
    if (std::find(pivot_col.begin(), pivot_col.end(), c) == pivot_col.end()) {
      free_col = c;
      break;
    }
  if (free_col < 0) throw InvariantViolation("eigenvalue is not a root of the characteristic polynomial");
  std::vector<QuadSurd> v(n, QuadSurd::rational(0, d));
  v[free_col] = QuadSurd::rational(1, d);
  for (int r = 0; r < static_cast<int>(pivot_col.size()); ++r) v[pivot_col[r]] = -m[r][free_col];
  return v;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

int pick(const std::vector<double>& w, double u) {
  double total = 0;
  for (double x : w) total += x;
  double acc = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i] / total;
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(w.size()) - 1;
}

}  // namespace

QuadSurd operator+(const QuadSurd& a, const QuadSurd& b) { return {a.x + b.x, a.y + b.y, common_d(a, b)}; }
QuadSurd operator-(const QuadSurd& a, const QuadSurd& b) { return {a.x - b.x, a.y - b.y, common_d(a, b)}; }
QuadSurd operator-(const QuadSurd& a) { return {-a.x, -a.y, a.d}; }
QuadSurd operator*(const QuadSurd& a, const QuadSurd& b) {
  const BigInt d = common_d(a, b);
  return {a.x * b.x + a.y * b.y * Rational(d), a.x * b.y + a.y * b.x, d};
}
QuadSurd operator/(const QuadSurd& a, const QuadSurd& b) {
  const BigInt d = common_d(a, b);
  const Rational n = b.x * b.x - b.y * b.y * Rational(d);
  if (n == 0) throw std::domain_error("division by zero surd");
  const QuadSurd t = a * QuadSurd{b.x, -b.y, d};
  return {t.x / n, t.y / n, d};
}
bool operator==(const QuadSurd& a, const QuadSurd& b) {
  if (a.y == 0 && b.y == 0) return a.x == b.x;
  return a.x == b.x && a.y == b.y && a.d == b.d;
}

double QuadSurd::to_double() const { return static_cast<double>(dec_value(*this)); }

std::string QuadSurd::str() const {
  const SurdParts p = parts(*this);
  const std::string num = numerator_str(p, d);
  if (p.Z == 1) return num;
  return "(" + num + ")/" + int_str(p.Z);
}

QuadSurd perron_exact(const std::vector<int>& a) {
  const Mat2 B = b_matrix(a);
  const BigInt t = B[0][0] + B[1][1];
  const BigInt det = B[0][0] * B[1][1] - B[0][1] * B[1][0];
  const auto [s, d] = square_split(t * t - 4 * det);
  if (d == 1) return {Rational(t + s, 2), 0, 1};
  return {Rational(t, 2), Rational(s, 2), d};
}

QuadSurd parry_integral_exact(const std::vector<int>& a) {
  const BlockSystem& sys = block_system(a);
  const QuadSurd E = perron_exact(a);
  const BigInt& d = E.d;
  // type-level transition counts: rows by tail type, columns by tail type of the successor
  std::array<std::array<long long, 3>, 3> C{};
  for (int t = 1; t <= 3; ++t)
    for (int w = 0; w < sys.size(); ++w)
      if (admissible(t, sys.blocks[w].front())) ++C[type_index(t)][type_index(sys.tail_type[w])];
  SurdMat right(3, std::vector<QuadSurd>(3)), left(3, std::vector<QuadSurd>(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      right[i][j] = QuadSurd::rational(Rational(C[i][j]), d) - (i == j ? E : QuadSurd::rational(0, d));
      left[i][j] = QuadSurd::rational(Rational(C[j][i]), d) - (i == j ? E : QuadSurd::rational(0, d));
    }
  const std::vector<QuadSurd> R = kernel_vector(right, d), L = kernel_vector(left, d);
  QuadSurd num = QuadSurd::rational(0, d), den = QuadSurd::rational(0, d);
  for (int v = 0; v < sys.size(); ++v) {
    QuadSurd lv = QuadSurd::rational(0, d);
    for (int t = 1; t <= 3; ++t)
      if (admissible(t, sys.blocks[v].front())) lv = lv + L[type_index(t)];
    lv = lv / E;
    const QuadSurd m = lv * R[type_index(sys.tail_type[v])];
    den = den + m;
    num = num + QuadSurd::rational(birkhoff_weight(a, sys.blocks[v]), d) * m;
  }
  return num / den;
}

std::vector<int> canonical_period(const std::vector<int>& a) {
  if (a.empty()) throw std::invalid_argument("empty period");
  const std::size_t k = a.size();
  std::size_t p = k;
  for (std::size_t q = 1; q < k; ++q) {
    if (k % q) continue;
    bool ok = true;
    for (std::size_t i = q; i < k && ok; ++i) ok = a[i] == a[i - q];
    if (ok) {
      p = q;
      break;
    }
  }
  std::vector<int> root(a.begin(), a.begin() + p), best = root;
  for (std::size_t r = 1; r < p; ++r) {
    std::vector<int> rot(root.begin() + r, root.end());
    rot.insert(rot.end(), root.begin(), root.begin() + r);
    best = std::min(best, rot);
  }
  return best;
}

Characteristics compute_characteristics(const std::vector<int>& a, double lambda, int depth, int threads) {
  if (!(lambda > 20)) throw DomainError("lambda must exceed 20");
  const std::vector<int> c = canonical_period(a);
  if (depth > 0) depth = std::max(1, depth * static_cast<int>(a.size()) / static_cast<int>(c.size()));
  PressureModel m(c, lambda, depth, threads);
  const PressureLimits lim = pressure_limits(m);
  const BowenRoot br = bowen_root(m);
  Characteristics r;
  r.a = a;
  r.lambda = lambda;
  r.P0 = std::log(perron_value(c));
  r.dP0 = m.dP(0);
  r.Pprime_minus_inf = lim.minus_inf;
  r.Pprime_plus_inf = lim.plus_inf;
  r.gamma = -r.P0 / lim.minus_inf;
  r.d = -r.P0 / r.dP0;
  r.D = br.D;
  r.T = -r.P0 / lim.plus_inf;
  r.gamma_err = r.gamma * 0.5 * (lim.minus_hi - lim.minus_lo) / std::abs(lim.minus_inf);
  r.d_err = r.d * m.dP_err(0) / std::abs(r.dP0);
  r.D_err = br.err;
  r.T_err = r.T * 0.5 * (lim.plus_hi - lim.plus_lo) / std::abs(lim.plus_inf);
  r.depth = m.depth();
  r.partial = m.partial();
  r.margin = std::min({r.d - r.gamma, r.D - r.d, r.T - r.D});
  r.chain = r.margin > 0 && r.gamma > 0 && r.T < 1;
  return r;
}

Characteristics spectral_characteristics(const std::vector<int>& a, double lambda, int depth, int threads) {
  Characteristics r = compute_characteristics(a, lambda, depth, threads);
  if (!r.chain) {
    std::ostringstream os;
    os.precision(10);
    os << "strict chain gamma < d < D < T failed: gamma=" << r.gamma << " d=" << r.d << " D=" << r.D
       << " T=" << r.T;
    throw InvariantViolation(os.str());
  }
  return r;
}

AsymptoticConstants asymptotic_constants(const std::vector<int>& a, bool sweep, const std::vector<double>& lambdas,
                                         int depth) {
  AsymptoticConstants r;
  r.a = a;
  const MeanCycleResult mc = mean_cycles(a);
  r.F_lower = mc.F_lower;
  r.F_upper = mc.F_upper;
  r.witness_lower = mc.witness_lower;
  r.witness_upper = mc.witness_upper;
  r.E = perron_exact(a);
  r.parry_f = parry_integral_exact(a);
  const std::string arg = log_argument(r.E);
  r.log_E = "log(" + arg + ")";
  const Dec logE = boost::multiprecision::log(dec_value(r.E));
  auto constant = [&](const QuadSurd& c) {
    return ExactConstant{coefficient_log(c, arg), static_cast<double>(dec_value(c) * logE)};
  };
  const BigInt& d = r.E.d;
  r.rho_gamma = constant(QuadSurd::rational(-1 / r.F_lower, d));
  r.rho_T = constant(QuadSurd::rational(-1 / r.F_upper, d));
  r.rho_d = constant(QuadSurd::rational(-1, d) / r.parry_f);
  if (sweep) {
    if (lambdas.size() < 2) throw std::invalid_argument("the lambda sweep needs two values");
    const std::vector<int> c = canonical_period(a);
    for (double lam : lambdas) {
      PressureModel m(c, lam, depth);
      const BowenRoot br = bowen_root(m);
      r.sweep.push_back({lam, br.D, br.D * std::log(lam), m.depth()});
    }
    std::vector<SweepPoint> s = r.sweep;
    std::sort(s.begin(), s.end(), [](const SweepPoint& x, const SweepPoint& y) { return x.lambda < y.lambda; });
    const SweepPoint &p = s[s.size() - 2], &q = s.back();
    const double x1 = 1 / std::log(p.lambda), x2 = 1 / std::log(q.lambda);
    const double y1 = 1 / p.D_log_lambda, y2 = 1 / q.D_log_lambda;
    const double slope = (y2 - y1) / (x2 - x1);
    r.rho_D = 1 / (y2 - slope * x2);
    r.chain = r.rho_gamma.value <= r.rho_d.value && r.rho_d.value <= r.rho_D && r.rho_D <= r.rho_T.value;
  } else {
    r.chain = r.rho_gamma.value <= r.rho_d.value && r.rho_d.value <= r.rho_T.value;
  }
  r.chain = r.chain && r.rho_gamma.value > 0;
  return r;
}

double tau_of_q(const PressureModel& model, double q) {
  const double target = q * model.log_E();
  auto g = [&](double t) { return model.P(t) - target; };
  double lo = -1, hi = 1;
  double glo = g(lo), ghi = g(hi);
  while (glo < 0) {
    hi = lo;
    ghi = glo;
    lo *= 2;
    if (lo < -1e6) throw DomainError("tau(q) out of range");
    glo = g(lo);
  }
  while (ghi > 0) {
    lo = hi;
    glo = ghi;
    hi *= 2;
    if (hi > 1e6) throw DomainError("tau(q) out of range");
    ghi = g(hi);
  }
  if (glo == 0) return lo;
  if (ghi == 0) return hi;
  std::uintmax_t it = 300;
  auto tol = [](double x, double y) { return std::abs(y - x) <= 1e-13 * std::max(1.0, std::abs(x)); };
  const auto br = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi, tol, it);
  return 0.5 * (br.first + br.second);
}

std::pair<double, double> local_dimension_range(const PressureModel& model) {
  const PressureLimits lim = pressure_limits(model);
  return {-model.log_E() / lim.minus_inf, -model.log_E() / lim.plus_inf};
}

std::vector<MultifractalPoint> multifractal_spectrum(const PressureModel& model, const std::vector<double>& betas) {
  const auto L = local_dimension_range(model);
  std::vector<MultifractalPoint> out;
  for (double beta : betas) {
    if (beta < L.first - 1e-12 || beta > L.second + 1e-12)
      throw DomainError("beta " + std::to_string(beta) + " outside [" + std::to_string(L.first) + ", " +
                        std::to_string(L.second) + "]");
    auto h = [&](double q) { return tau_of_q(model, q) + q * beta; };
    MultifractalPoint pt;
    pt.beta = beta;
    double Q = 16;
    int n = 33;
    std::vector<double> qs, hs;
    int arg = 0;
    for (;;) {
      qs.clear();
      hs.clear();
      for (int i = 0; i < n; ++i) {
        qs.push_back(-Q + 2 * Q * i / (n - 1));
        hs.push_back(h(qs.back()));
      }
      arg = static_cast<int>(std::min_element(hs.begin(), hs.end()) - hs.begin());
      if ((arg > 0 && arg < n - 1) || Q >= 4096) break;
      Q *= 4;
    }
    if (arg == 0 || arg == n - 1) {
      pt.q = qs[arg];
      pt.dim = hs[arg];
      pt.limit = true;
    } else {
      // golden section on the bracketing cell pair
      const double gr = (std::sqrt(5.0) - 1) / 2;
      double a = qs[arg - 1], b = qs[arg + 1];
      double c = b - gr * (b - a), d = a + gr * (b - a);
      double hc = h(c), hd = h(d);
      while (b - a > 1e-9 * std::max(1.0, std::abs(a))) {
        if (hc < hd) {
          b = d;
          d = c;
          hd = hc;
          c = b - gr * (b - a);
          hc = h(c);
        } else {
          a = c;
          c = d;
          hc = hd;
          d = a + gr * (b - a);
          hd = h(d);
        }
      }
      pt.q = 0.5 * (a + b);
      pt.dim = std::min({hc, hd, hs[arg]});
    }
    out.push_back(pt);
  }
  return out;
}

std::vector<MultifractalPoint> multifractal_spectrum(const std::vector<int>& a, double lambda,
                                                     const std::vector<double>& betas, int depth) {
  return multifractal_spectrum(PressureModel(a, lambda, depth), betas);
}

double dos_mass(const std::vector<int>& a, double lambda, const BlockWord& w) {
  if (!(lambda > 20)) throw DomainError("lambda must exceed 20");
  return parry_measure(a, w);
}

LocalDimension local_dimension_estimate(const std::vector<int>& a, double lambda, const BlockWord& path, int depth) {
  if (depth < 1 || static_cast<int>(path.size()) < depth)
    throw std::invalid_argument("path shorter than the requested depth");
  const std::vector<double> ps = psi_along(a, lambda, BlockWord(path.begin(), path.begin() + depth));
  const double P0 = std::log(perron_value(a));
  LocalDimension r;
  for (int n = 1; n <= depth; ++n) r.sequence.push_back(-P0 * n / ps[n - 1]);
  r.at_depth = r.sequence.back();
  r.lower = INFINITY;
  r.upper = -INFINITY;
  for (int n = (depth + 1) / 2; n <= depth; ++n) {
    r.lower = std::min(r.lower, r.sequence[n - 1]);
    r.upper = std::max(r.upper, r.sequence[n - 1]);
  }
  return r;
}

BlockWord periodic_path(const std::vector<int>& a, const BlockWord& prefix, const BlockWord& cycle, int depth) {
  if (cycle.empty()) throw std::invalid_argument("empty cycle");
  BlockWord w = prefix;
  while (static_cast<int>(w.size()) < depth) w.insert(w.end(), cycle.begin(), cycle.end());
  w.resize(depth);
  if (!is_admissible(a, w)) throw std::invalid_argument("periodic path is not admissible");
  return w;
}

BlockWord iota_inverse(const std::vector<int>& a, const SymbolWord& w) {
  const BlockSystem& s = block_system(a);
  const int k = static_cast<int>(a.size());
  if (w.level() < 1 || (w.level() - 1) % k) throw std::invalid_argument("word level is not n*k+1");
  BlockWord out;
  for (int i = 1; i < w.level(); i += k) {
    const BlockLetter b(w.letters.begin() + i, w.letters.begin() + i + k);
    const int idx = s.index_of(b);
    if (idx < 0) throw std::invalid_argument("not in the image of iota: " + to_string(w));
    out.push_back(idx);
  }
  if (!(iota(a, out) == w)) throw std::invalid_argument("not in the image of iota: " + to_string(w));
  return out;
}

BlockWord extreme_word(const std::vector<int>& a, double lambda, int depth, bool longest) {
  auto tree = shared_tree(check_alpha(a), lambda);
  const LevelExtremes ex = level_extremes(*tree, depth * static_cast<int>(a.size()) + 1);
  return iota_inverse(a, longest ? ex.argmax : ex.argmin);
}

BlockWord parry_path(const std::vector<int>& a, int length, std::mt19937_64& rng) {
  const BlockSystem& s = block_system(a);
  const PerronData& p = perron_cached(a);
  BlockWord w;
  if (length < 1) return w;
  std::vector<double> init(s.size());
  for (int v = 0; v < s.size(); ++v) init[v] = p.left[v] * p.right[v];
  w.push_back(pick(init, uniform01(rng)));
  while (static_cast<int>(w.size()) < length) {
    const std::vector<int>& nx = s.succ[w.back()];
    std::vector<double> wt;
    for (int x : nx) wt.push_back(p.right[x]);
    w.push_back(nx[pick(wt, uniform01(rng))]);
  }
  return w;
}

}  // namespace sturm
