#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "sturm/bands.hpp"

using namespace sturm;

namespace {

// tr of T(v_q)...T(v_1), T(v) = [[E - v, -1], [1, 0]], v_j = lambda [ {j alpha} >= 1 - alpha ]
double sites_trace(double alpha, double lambda, long q, double E) {
  double a = 1, b = 0, c = 0, d = 1;
  for (long j = 1; j <= q; ++j) {
    const double x = std::fmod(j * alpha, 1.0);
    const double v = x >= 1 - alpha ? lambda : 0.0;
    const double na = (E - v) * a - c, nb = (E - v) * b - d;
    c = a;
    d = b;
    a = na;
    b = nb;
  }
  return a + d;
}

std::pair<double, double> corridor(double lambda, const SymbolWord& w) {
  const double t1 = (lambda - 8) / 3, t2 = 2 * (lambda + 5);
  const int n = w.level();
  double lo = -n * std::log(t2), hi = std::log(4.0) - n * std::log(t1);
  for (const Letter& e : w.letters) {
    lo -= 3 * std::log(static_cast<double>(e.order));
    if (e.type == 2) {
      lo += (2 - e.order) * std::log(t2);
      hi += (2 - e.order) * std::log(t1);
    }
  }
  return {lo, hi};
}

std::vector<int> child_types(const std::vector<Band>& kids) {
  std::vector<int> t;
  for (const Band& b : kids) t.push_back(b.type);
  return t;
}

}  // namespace

TEST_CASE("generating polynomials at low level") {
  const TransferContext ctx(check_alpha({1}), 24);
  for (double E : {-3.0, 0.0, 1.5, 24.0, 30.0}) {
    CHECK(trace(ctx, 0, 1, E) == doctest::Approx(E - 24).epsilon(1e-14));
    CHECK(trace(ctx, 1, 0, E) == doctest::Approx(E).epsilon(1e-14));
  }
  // outside both root bands every level-0 polynomial exceeds 2
  for (double E : {-5.0, 10.0, 40.0}) CHECK(std::abs(trace(ctx, 0, 1, E)) > 2);
}

TEST_CASE("trace recursion agrees with site products") {
  std::mt19937_64 rng(7);
  for (const std::vector<int>& a : std::vector<std::vector<int>>{{1}, {2}, {1, 2}}) {
    const FrequencySpec spec = check_alpha(a);
    const double alpha = value(spec, 1e-15);
    const TransferContext ctx(spec, 24);
    const Convergents cv = convergents(spec, 12);
    for (int n = 1; n <= 12 && cv.Q(n) <= 200; ++n) {
      std::uniform_real_distribution<double> U(-4, 28);
      for (int r = 0; r < 10; ++r) {
        const double E = U(rng);
        const double want = sites_trace(alpha, 24, static_cast<long>(cv.Q(n)), E);
        // h_(n+1,0) = tr M_n
        CHECK(std::abs(trace(ctx, n + 1, 0, E) - want) <= 1e-9 * std::max(1.0, std::abs(want)));
      }
    }
  }
  // multiprecision evaluation matches double
  const TransferContext ctx(check_alpha({1}), 24, 200);
  const BigFloat E(0.37, 200);
  CHECK(trace(ctx, 6, 1, E).to_double() == doctest::Approx(trace(ctx, 6, 1, 0.37)).epsilon(1e-10));
}

TEST_CASE("root bands") {
  for (double lam : {24.0, 100.0}) {
    const TransferContext ctx(check_alpha({1}), lam);
    const auto r = root_bands(ctx);
    CHECK(r[0].type == 1);
    CHECK(r[0].lo.to_double() == lam - 2);
    CHECK(r[0].hi.to_double() == lam + 2);
    CHECK(r[1].type == 3);
    CHECK(r[1].lo.to_double() == -2);
    CHECK(r[1].hi.to_double() == 2);
    CHECK(r[1].hi < r[0].lo);
  }
  const TransferContext ctx(check_alpha({1}), 24);
  CHECK(band_for_word(ctx, SymbolWord{1, {}}).lo.to_double() == 22);
  CHECK(band_for_word(ctx, SymbolWord{3, {}}).hi.to_double() == 2);
}

TEST_CASE("refinement follows the covering rules") {
  for (const std::vector<int>& a : std::vector<std::vector<int>>{{1}, {2}, {1, 2}, {3}}) {
    const FrequencySpec spec = check_alpha(a);
    BandTree tree(TransferContext(spec, 24));
    for (int n = 0; n <= 3; ++n) {
      const int m = spec.quotient(n + 1);
      for (BandTree::Id id : tree.level(n)) {
        const Band& p = tree.band(id);
        const auto kids_ids = tree.children(id);
        std::vector<Band> kids;
        for (auto k : kids_ids) kids.push_back(tree.band(k));
        const auto t = child_types(kids);
        const auto ones = std::count(t.begin(), t.end(), 1), threes = std::count(t.begin(), t.end(), 3);
        if (p.type == 1) {
          CHECK(t == std::vector<int>{2});
        } else if (p.type == 2) {
          CHECK(kids.size() == static_cast<std::size_t>(2 * m + 1));
          CHECK(ones == m + 1);
          CHECK(threes == m);
        } else {
          CHECK(kids.size() == static_cast<std::size_t>(2 * m - 1));
          CHECK(ones == m);
          CHECK(threes == m - 1);
        }
        if (p.type != 1)
          for (std::size_t i = 0; i < t.size(); ++i) CHECK(t[i] == (i % 2 == 0 ? 1 : 3));
        for (std::size_t i = 0; i < kids.size(); ++i) {
          const Band& c = kids[i];
          CHECK(c.level == n + 1);
          CHECK(c.lo < c.hi);
          CHECK(p.lo <= c.lo);
          CHECK(c.hi <= p.hi);
          if (i) CHECK(kids[i - 1].hi < c.lo);
          CHECK(tree.parent(kids_ids[i]) == id);
          CHECK(tree.find(c.word) == kids_ids[i]);
          // endpoints sit on |h| = 2 with opposite signs
          const double hl = trace(tree.context(), c.handle.m, c.handle.p, c.lo).to_double();
          const double hh = trace(tree.context(), c.handle.m, c.handle.p, c.hi).to_double();
          CHECK(std::abs(std::abs(hl) - 2) < 1e-6);
          CHECK(std::abs(std::abs(hh) - 2) < 1e-6);
          CHECK(hl * hh < 0);
          CHECK(admissible(spec, c.word));
        }
      }
    }
  }
}

TEST_CASE("band lengths stay inside the two-sided corridor") {
  for (const auto& [a, levels] : std::vector<std::pair<std::vector<int>, int>>{{{1}, 6}, {{2, 3}, 4}}) {
    BandTree tree(TransferContext(check_alpha(a), 24));
    for (int n = 0; n <= levels; ++n)
      for (BandTree::Id id : tree.level(n)) {
        const Band& b = tree.band(id);
        const auto [lo, hi] = corridor(24, b.word);
        CHECK(b.log_length() >= lo - 1e-12);
        CHECK(b.log_length() <= hi + 1e-12);
        CHECK(length_bounds_audit(tree.context(), b));
        const LengthBounds lb = length_bounds(tree.context(), b.word);
        CHECK(lb.log_lower == doctest::Approx(lo).epsilon(1e-12));
        CHECK(lb.log_upper == doctest::Approx(hi).epsilon(1e-12));
      }
  }
}

TEST_CASE("level counts and extremes") {
  const FrequencySpec spec = check_alpha({1});
  BandTree tree(TransferContext(spec, 24));
  // per-type counts under the covering rules with a = 1: n1' = 2 n2 + n3, n2' = n1, n3' = n2
  long n1 = 1, n2 = 0, n3 = 1;
  for (int n = 0; n <= 7; ++n) {
    const auto ids = tree.level(n);
    CHECK(static_cast<long>(ids.size()) == n1 + n2 + n3);
    double mn = 1e300, mx = 0;
    for (auto id : ids) {
      mn = std::min(mn, tree.band(id).length());
      mx = std::max(mx, tree.band(id).length());
    }
    const LevelExtremes e = level_extremes(tree, n);
    CHECK(e.count == ids.size());
    CHECK(e.min_length == doctest::Approx(mn).epsilon(1e-12));
    CHECK(e.max_length == doctest::Approx(mx).epsilon(1e-12));
    CHECK(e.min_length <= e.max_length);
    CHECK(std::exp(e.log_min) == doctest::Approx(mn).epsilon(1e-9));
    CHECK(band_for_word(tree.context(), e.argmin).length() == doctest::Approx(mn).epsilon(1e-9));
    const long t1 = 2 * n2 + n3, t2 = n1, t3 = n2;
    n1 = t1;
    n2 = t2;
    n3 = t3;
  }
  const LevelExtremes root = level_extremes(tree, 0);
  CHECK(root.min_length == doctest::Approx(4).epsilon(1e-14));
  CHECK(root.max_length == doctest::Approx(4).epsilon(1e-14));
  CHECK_THROWS_AS(tree.level(12, 100), BudgetExceeded);
}

TEST_CASE("deep band along the leftmost branch") {
  const TransferContext ctx(check_alpha({1}), 24);
  // walk the leftmost child repeatedly
  BandTree tree(ctx);
  BandTree::Id id = tree.root(3);
  for (int n = 0; n < 18; ++n) id = tree.children(id).front();
  const Band& b = tree.band(id);
  CHECK(b.level == 18);
  CHECK(b.lo < b.hi);
  const auto [lo, hi] = corridor(24, b.word);
  CHECK(b.log_length() >= lo);
  CHECK(b.log_length() <= hi);
}
