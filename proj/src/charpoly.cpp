#include "sturm/charpoly.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/multiprecision/miller_rabin.hpp>

namespace sturm {

void poly_trim(IntPoly& x) {
  while (x.size() > 1 && x.back() == 0) x.pop_back();
}

IntPoly poly_mul(const IntPoly& x, const IntPoly& y) {
  IntPoly r(x.size() + y.size() - 1, 0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) r[i + j] += x[i] * y[j];
  poly_trim(r);
  return r;
}

IntPoly poly_shift(const IntPoly& x, int k) {
  IntPoly r(k, 0);
  r.insert(r.end(), x.begin(), x.end());
  return r;
}

IntPoly poly_div_linear(const IntPoly& x, const BigInt& r, BigInt& remainder) {
  // synthetic division
  const int n = static_cast<int>(x.size()) - 1;
  if (n < 1) {
    remainder = x.empty() ? BigInt(0) : x[0];
    return {0};
  }
  IntPoly q(n, 0);
  BigInt carry = 0;
  for (int i = n; i >= 1; --i) {
    carry = x[i] + carry * r;
    q[i - 1] = carry;
  }
  remainder = x[0] + carry * r;
  return q;
}

std::string to_string(const IntPoly& p) {
  std::ostringstream os;
  bool first = true;
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i) {
    if (p[i] == 0) continue;
    BigInt c = p[i];
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    if (c < 0) c = -c;
    if (c != 1 || i == 0) os << c;
    if (i > 0) os << (c != 1 ? "*" : "") << "x" << (i > 1 ? "^" + std::to_string(i) : "");
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

IntPoly charpoly_faddeev(const BigMatrix& a) {
  const int n = static_cast<int>(a.size());
  IntPoly c(n + 1, 0);
  c[n] = 1;
  BigMatrix m(n, std::vector<BigInt>(n, 0)), am(n, std::vector<BigInt>(n, 0));
  for (int k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{n-k+1} I
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        BigInt s = 0;
        for (int l = 0; l < n; ++l)
          if (a[i][l] != 0 && m[l][j] != 0) s += a[i][l] * m[l][j];
        am[i][j] = s;
      }
    for (int i = 0; i < n; ++i) am[i][i] += c[n - k + 1];
    std::swap(m, am);
    BigInt tr = 0;
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l)
        if (a[i][l] != 0) tr += a[i][l] * m[l][i];
    if (tr % k != 0) throw std::logic_error("Faddeev-LeVerrier: non-integral trace quotient");
    c[n - k] = -tr / k;
  }
  return c;
}

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }

u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

std::vector<u64> charpoly_mod(std::vector<std::vector<u64>> h, u64 p) {
  const int n = static_cast<int>(h.size());
  for (int m = 1; m + 1 < n; ++m) {
    int i = m;
    while (i < n && h[i][m - 1] == 0) ++i;
    if (i == n) continue;
    if (i != m) {
      std::swap(h[i], h[m]);
      for (int j = 0; j < n; ++j) std::swap(h[j][i], h[j][m]);
    }
    const u64 inv = invmod(h[m][m - 1], p);
    for (i = m + 1; i < n; ++i) {
      if (h[i][m - 1] == 0) continue;
      const u64 u = mulmod(h[i][m - 1], inv, p);
      for (int j = 0; j < n; ++j) h[i][j] = (h[i][j] + p - mulmod(u, h[m][j], p)) % p;
      for (int j = 0; j < n; ++j) h[j][m] = (h[j][m] + mulmod(u, h[j][i], p)) % p;
    }
  }
  // p_m = (x - h_mm) p_{m-1} - sum_i h_{m-i,m} prod_{j=m-i+1}^{m} h_{j,j-1} p_{m-i-1}
  std::vector<std::vector<u64>> P(n + 1);
  P[0] = {1};
  for (int m = 1; m <= n; ++m) {
    std::vector<u64> cur(m + 1, 0);
    const u64 hmm = h[m - 1][m - 1];
    for (int d = 0; d < m; ++d) {
      cur[d + 1] = (cur[d + 1] + P[m - 1][d]) % p;
      cur[d] = (cur[d] + p - mulmod(hmm, P[m - 1][d], p)) % p;
    }
    u64 t = 1;
    for (int i = 1; i < m; ++i) {
      t = mulmod(t, h[m - i][m - i - 1], p);
      const u64 coef = mulmod(t, h[m - i - 1][m - 1], p);
      if (coef == 0) continue;
      for (std::size_t d = 0; d < P[m - i - 1].size(); ++d)
        cur[d] = (cur[d] + p - mulmod(coef, P[m - i - 1][d], p)) % p;
    }
    P[m] = std::move(cur);
  }
  return P[n];
}

}  // namespace

IntPoly charpoly_multimodular(const std::vector<std::vector<std::int64_t>>& a) {
  const int n = static_cast<int>(a.size());
  if (n == 0) return {1};
  double maxabs = 1;
  for (const auto& row : a)
    for (auto x : row) maxabs = std::max(maxabs, std::abs(static_cast<double>(x)));
  // |c_{n-k}| <= C(n,k) (sqrt(k) maxabs)^k
  double bound_bits = 0;
  for (int k = 1; k <= n; ++k) {
    const double lc = (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) / std::log(2.0);
    bound_bits = std::max(bound_bits, lc + k * (0.5 * std::log2(k) + std::log2(maxabs)));
  }
  const double need_bits = bound_bits + 2;

  std::vector<u64> primes;
  double have_bits = 0;
  for (u64 c = (u64(1) << 62) - 57; have_bits < need_bits; c -= 2) {
    if (boost::multiprecision::miller_rabin_test(BigInt(c), 25)) {
      primes.push_back(c);
      have_bits += std::log2(static_cast<double>(c));
    }
  }

  IntPoly x(n + 1, 0);
  BigInt mod = 1;
  for (u64 p : primes) {
    std::vector<std::vector<u64>> h(n, std::vector<u64>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        std::int64_t v = a[i][j] % static_cast<std::int64_t>(p);
        h[i][j] = static_cast<u64>(v < 0 ? v + static_cast<std::int64_t>(p) : v);
      }
    const std::vector<u64> r = charpoly_mod(std::move(h), p);
    const u64 minv = invmod(static_cast<u64>(mod % p), p);
    for (int d = 0; d <= n; ++d) {
      const u64 xm = static_cast<u64>(x[d] % p);
      const u64 delta = mulmod((r[d] + p - xm) % p, minv, p);
      x[d] += mod * delta;
    }
    mod *= p;
  }
  const BigInt half = mod / 2;
  for (BigInt& c : x)
    if (c > half) c -= mod;
  return x;
}

IntPoly charpoly(const Mat3& m) {
  const BigInt tr = m[0][0] + m[1][1] + m[2][2];
  const BigInt minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0] +
                        m[1][1] * m[2][2] - m[1][2] * m[2][1];
  const BigInt det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  return {-det, minors, -tr, 1};
}

IntPoly charpoly(const Mat2& m) {
  return {m[0][0] * m[1][1] - m[0][1] * m[1][0], -(m[0][0] + m[1][1]), 1};
}

CharpolyCheck charpoly_check(const std::vector<int>& a) {
  const BlockSystem& s = block_system(a);
  CharpolyCheck c;
  c.N = s.size();
  std::vector<std::vector<std::int64_t>> m(c.N, std::vector<std::int64_t>(c.N));
  for (int i = 0; i < c.N; ++i)
    for (int j = 0; j < c.N; ++j) m[i][j] = s.A(i, j);
  c.full = charpoly_multimodular(m);
  c.reduced = charpoly(auxiliary_matrix(a));
  c.b = charpoly(b_matrix(a));
  c.identity = c.N >= 3 && c.full == poly_shift(c.reduced, c.N - 3);
  const BigInt sign = a.size() % 2 == 0 ? 1 : -1;
  c.factor = c.reduced == poly_mul({-sign, 1}, c.b);
  return c;
}

bool charpoly_identity(const std::vector<int>& a) { return charpoly_check(a).identity; }

}  // namespace sturm
