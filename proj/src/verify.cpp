#include "sturm/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "sturm/bands.hpp"
#include "sturm/charpoly.hpp"
#include "sturm/errors.hpp"

namespace sturm {

namespace {

constexpr std::uint64_t kTraceSeed = 20240611;
constexpr std::size_t kMaxWitnesses = 10;

std::string period_str(const std::vector<int>& a) {
  std::string s = "a=(";
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
  return s + ")";
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

void witness(AuditReport& r, const std::string& w) {
  r.pass = false;
  if (r.witnesses.size() < kMaxWitnesses) r.witnesses.push_back(w);
}

std::vector<std::int64_t> weights(const std::vector<int>& a) {
  const BlockSystem& s = block_system(a);
  std::vector<std::int64_t> f;
  for (const BlockLetter& b : s.blocks) f.push_back(static_cast<std::int64_t>(birkhoff_weight(a, b)));
  return f;
}

BigFloat lerp(const BigFloat& lo, const BigFloat& hi, double t) {
  BigFloat w = hi - lo;
  mpfr_mul_d(w.get(), w.get(), t, MPFR_RNDN);
  return lo + w;
}

}  // namespace

AuditReport audit_counts(const std::vector<int>& a, int n) {
  Timer tm;
  AuditReport r{"counts", period_str(a) + " n=" + std::to_string(n), true, {}, {}, 0};
  std::size_t count = 0;
  enumerate_words(a, n, [&](const BlockWord&) { ++count; });
  const BigInt expect = word_count(a, n);
  r.detail = "enumerated " + std::to_string(count) + ", 1^T A^(n-1) 1 = " + expect.str();
  if (BigInt(count) != expect) witness(r, r.detail);
  r.seconds = tm.seconds();
  return r;
}

AuditReport audit_charpoly(const std::vector<int>& a) {
  Timer tm;
  AuditReport r{"charpoly", period_str(a), true, {}, {}, 0};
  const CharpolyCheck c = charpoly_check(a);
  r.detail = "N=" + std::to_string(c.N) + ", det(xI-hatA)=" + to_string(c.reduced);
  if (!c.identity) witness(r, "det(xI-A) = " + to_string(c.full) + " differs from x^(N-3) det(xI-hatA)");
  if (!c.factor) witness(r, "x-(-1)^k times det(xI-B) = " + to_string(c.b) + " does not match");
  r.seconds = tm.seconds();
  return r;
}

AuditReport audit_bands(const std::vector<int>& a, double lambda, int levels) {
  Timer tm;
  std::ostringstream inst;
  inst << period_str(a) << " lambda=" << lambda << " levels=" << levels;
  AuditReport r{"bands", inst.str(), true, {}, {}, 0};
  const FrequencySpec spec = check_alpha(a);
  auto tree = shared_tree(spec, lambda);
  const TransferContext& ctx = tree->context();
  std::vector<BandTree::Id> cur = {tree->root(1), tree->root(3)};
  std::size_t checked = 0;
  auto check_band = [&](const Band& b) {
    const std::string w = to_string(b.word);
    if (!(b.lo < b.hi)) witness(r, w + ": empty interval");
    if (!length_bounds_audit(ctx, b)) {
      const LengthBounds lb = length_bounds(ctx, b.word);
      std::ostringstream os;
      os << w << ": log length " << b.log_length() << " outside [" << lb.log_lower << ", " << lb.log_upper << "]";
      witness(r, os.str());
    }
    // monotone trace: endpoints at -2/+2, 16 interior probes in between
    std::vector<double> h;
    h.push_back(trace(ctx, b.handle.m, b.handle.p, b.lo).to_double());
    for (int i = 0; i < 16; ++i) h.push_back(trace(ctx, b.handle.m, b.handle.p, lerp(b.lo, b.hi, (i + 0.5) / 16)).to_double());
    h.push_back(trace(ctx, b.handle.m, b.handle.p, b.hi).to_double());
    const double h0 = h.front(), h1 = h.back();
    if (std::abs(std::abs(h0) - 2) > 1e-6 || std::abs(std::abs(h1) - 2) > 1e-6 || h0 * h1 > 0) {
      std::ostringstream os;
      os << w << ": endpoint traces " << h0 << ", " << h1;
      witness(r, os.str());
    }
    const double dir = h1 > h0 ? 1 : -1;
    for (std::size_t i = 1; i < h.size(); ++i)
      if (!((h[i] - h[i - 1]) * dir > 0)) {
        witness(r, w + ": trace not monotone on the probe grid");
        break;
      }
    ++checked;
  };
  for (BandTree::Id id : cur) check_band(tree->band(id));
  for (int l = 0; l < levels; ++l) {
    std::vector<BandTree::Id> next;
    for (BandTree::Id id : cur) {
      const Band& p = tree->band(id);
      const std::string pw = to_string(p.word);
      const int an = spec.quotient(l + 1);
      const std::vector<BandTree::Id> kids = tree->children(id);
      int want1 = 0, want2 = 0, want3 = 0;
      if (p.type == 1) want2 = 1;
      if (p.type == 2) {
        want1 = an + 1;
        want3 = an;
      }
      if (p.type == 3) {
        want1 = an;
        want3 = an - 1;
      }
      int n1 = 0, n2 = 0, n3 = 0;
      for (BandTree::Id c : kids) {
        const int t = tree->band(c).type;
        n1 += t == 1;
        n2 += t == 2;
        n3 += t == 3;
      }
      if (n1 != want1 || n2 != want2 || n3 != want3) {
        std::ostringstream os;
        os << pw << ": children types (" << n1 << "," << n2 << "," << n3 << "), expected (" << want1 << ","
           << want2 << "," << want3 << ")";
        witness(r, os.str());
      }
      for (std::size_t i = 0; i < kids.size(); ++i) {
        const Band& c = tree->band(kids[i]);
        if (c.level != p.level + 1) witness(r, to_string(c.word) + ": wrong level");
        if (!(p.lo <= c.lo && c.hi <= p.hi)) witness(r, to_string(c.word) + ": not nested in " + pw);
        if (i > 0) {
          const Band& prev = tree->band(kids[i - 1]);
          if (!(prev.hi < c.lo)) witness(r, to_string(c.word) + ": overlaps its left sibling");
          if (p.type != 1 && prev.type == c.type) witness(r, pw + ": children do not interlace");
        }
        if (p.type != 1 && (i == 0 || i + 1 == kids.size()) && c.type != 1)
          witness(r, pw + ": outermost child is not of type 1");
        check_band(c);
        next.push_back(kids[i]);
      }
    }
    cur = std::move(next);
  }
  r.detail = std::to_string(checked) + " bands checked";
  r.seconds = tm.seconds();
  return r;
}

std::optional<std::pair<Rational, Rational>> simple_cycle_means(const std::vector<int>& a, std::size_t cap) {
  const BlockSystem& s = block_system(a);
  const std::vector<std::int64_t> f = weights(a);
  const int n = s.size();
  bool have = false;
  Rational lo, hi;
  std::size_t cycles = 0;
  bool over = false;
  std::vector<char> on(n, 0);
  std::vector<int> path;
  std::int64_t sum = 0;
  // cycles whose least vertex is `start`
  std::function<void(int, int)> dfs = [&](int start, int v) {
    for (int w : s.succ[v]) {
      if (over) return;
      if (w == start) {
        Rational m(sum, static_cast<std::int64_t>(path.size()));
        if (!have || m < lo) lo = m;
        if (!have || m > hi) hi = m;
        have = true;
        if (++cycles > cap) over = true;
      } else if (w > start && !on[w]) {
        on[w] = 1;
        path.push_back(w);
        sum += f[w];
        dfs(start, w);
        sum -= f[w];
        path.pop_back();
        on[w] = 0;
      }
    }
  };
  for (int st = 0; st < n && !over; ++st) {
    on[st] = 1;
    path = {st};
    sum = f[st];
    dfs(st, st);
    on[st] = 0;
  }
  if (over || !have) return std::nullopt;
  return std::make_pair(lo, hi);
}

std::pair<Rational, Rational> closed_walk_means(const std::vector<int>& a) {
  const BlockSystem& s = block_system(a);
  const std::vector<std::int64_t> f = weights(a);
  const int n = s.size();
  constexpr std::int64_t kNone = std::numeric_limits<std::int64_t>::min();
  bool have = false;
  Rational lo, hi;
  for (int st = 0; st < n; ++st) {
    // best weights of walks st -> v of the current length
    std::vector<std::int64_t> mn(n, kNone), mx(n, kNone);
    for (int v : s.succ[st]) mn[v] = mx[v] = f[v];
    for (int L = 1; L <= n; ++L) {
      if (mn[st] != kNone) {
        const Rational a1(mn[st], L), a2(mx[st], L);
        if (!have || a1 < lo) lo = a1;
        if (!have || a2 > hi) hi = a2;
        have = true;
      }
      std::vector<std::int64_t> nmn(n, kNone), nmx(n, kNone);
      for (int u = 0; u < n; ++u) {
        if (mn[u] == kNone) continue;
        for (int v : s.succ[u]) {
          if (nmn[v] == kNone || mn[u] + f[v] < nmn[v]) nmn[v] = mn[u] + f[v];
          if (nmx[v] == kNone || mx[u] + f[v] > nmx[v]) nmx[v] = mx[u] + f[v];
        }
      }
      mn.swap(nmn);
      mx.swap(nmx);
    }
  }
  if (!have) throw StructuralError("block graph has no closed walk");
  return {lo, hi};
}

AuditReport audit_mean_cycle(const std::vector<int>& a) {
  Timer tm;
  AuditReport r{"mean_cycle", period_str(a), true, {}, {}, 0};
  const MeanCycleResult k = mean_cycles(a);
  if (cycle_mean(a, k.witness_lower) != k.F_lower) witness(r, "lower witness cycle mean differs");
  if (cycle_mean(a, k.witness_upper) != k.F_upper) witness(r, "upper witness cycle mean differs");
  std::string method;
  std::pair<Rational, Rational> other;
  const int n = block_system(a).size();
  std::optional<std::pair<Rational, Rational>> sc;
  if (n <= 16) sc = simple_cycle_means(a);
  if (sc) {
    other = *sc;
    method = "simple-cycle enumeration";
  } else {
    other = closed_walk_means(a);
    method = "closed walks of length <= " + std::to_string(n);
  }
  r.detail = "Karp (" + k.F_lower.str() + ", " + k.F_upper.str() + "), " + method + " (" + other.first.str() +
             ", " + other.second.str() + ")";
  if (other.first != k.F_lower || other.second != k.F_upper) witness(r, r.detail);
  r.seconds = tm.seconds();
  return r;
}

CovariationAudit audit_covariation(const std::vector<int>& a, double lambda, std::size_t samples, double eta,
                                   std::uint64_t seed, int max_level, int max_extension) {
  Timer tm;
  CovariationAudit out;
  AuditReport& r = out.report;
  r = {"covariation", period_str(a) + " lambda=" + std::to_string(static_cast<int>(lambda)), true, {}, {}, 0};
  BandTree& tree = *shared_tree(check_alpha(a), lambda);
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  auto descend = [&](BandTree::Id id, int steps) {
    for (int i = 0; i < steps; ++i) {
      const auto kids = tree.children(id);
      id = kids[pick(kids.size())];
    }
    return id;
  };
  double lo = 0, hi = 0;
  while (out.samples < samples) {
    const int n = 1 + static_cast<int>(pick(max_level));
    const int m = 1 + static_cast<int>(pick(max_extension));
    const BandTree::Id w = descend(tree.root(pick(2) ? 1 : 3), n);
    BandTree::Id v = w;
    for (int tries = 0; tries < 64 && (v == w || tree.band(v).type != tree.band(w).type); ++tries)
      v = descend(tree.root(pick(2) ? 1 : 3), n);
    if (tree.band(v).type != tree.band(w).type) continue;
    BandTree::Id wu = w, vu = v;
    for (int i = 0; i < m; ++i) {
      const auto kw = tree.children(wu), kv = tree.children(vu);
      if (kw.size() != kv.size()) {
        witness(r, "children differ under " + to_string(tree.band(w).word) + " and " + to_string(tree.band(v).word));
        break;
      }
      const std::size_t j = pick(kw.size());
      wu = kw[j];
      vu = kv[j];
    }
    const double x = tree.band(wu).log_length() - tree.band(w).log_length() -
                     (tree.band(vu).log_length() - tree.band(v).log_length());
    const double ratio = std::exp(x);
    if (!out.samples || ratio < lo) lo = ratio;
    if (!out.samples || ratio > hi) hi = ratio;
    ++out.samples;
    if (ratio < 1 / eta || ratio > eta)
      witness(r, to_string(tree.band(wu).word) + " vs " + to_string(tree.band(vu).word) + " ratio " + std::to_string(ratio));
  }
  out.min_ratio = lo;
  out.max_ratio = hi;
  out.eta_hat = std::max(hi, 1 / lo);
  std::ostringstream d;
  d.precision(6);
  d << out.samples << " quadruples, ratio in [" << lo << ", " << hi << "], eta_hat " << out.eta_hat;
  r.detail = d.str();
  r.seconds = tm.seconds();
  return out;
}

std::array<double, 4> site_matrix(const FrequencySpec& spec, double lambda, long sites, double E) {
  const double alpha = value(spec, 1e-15);
  double m00 = 1, m01 = 0, m10 = 0, m11 = 1;
  for (long j = 1; j <= sites; ++j) {
    double x = std::fmod(static_cast<double>(j) * alpha, 1.0);
    const double v = x >= 1 - alpha ? lambda : 0;
    // T = [[E - v, -1], [1, 0]] applied on the left
    const double n00 = (E - v) * m00 - m10, n01 = (E - v) * m01 - m11;
    m10 = m00;
    m11 = m01;
    m00 = n00;
    m01 = n01;
  }
  return {m00, m01, m10, m11};
}

double site_trace(const FrequencySpec& spec, double lambda, long sites, double E) {
  const auto m = site_matrix(spec, lambda, sites, E);
  return m[0] + m[3];
}

AuditReport audit_trace(const TransferContext& ctx, int n_max) {
  Timer tm;
  std::ostringstream inst;
  inst << to_string(ctx.spec) << " lambda=" << ctx.lambda << " n<=" << n_max;
  AuditReport r{"trace", inst.str(), true, {}, {}, 0};
  const Convergents cv = convergents(ctx.spec, n_max);
  if (cv.Q(n_max) > 200) throw std::invalid_argument("audit_trace needs q_n <= 200");
  std::mt19937_64 rng(kTraceSeed);
  std::uniform_real_distribution<double> uni(-4, ctx.lambda + 4);
  std::vector<double> energies;
  for (int i = 0; i < 25; ++i) energies.push_back(uni(rng));
  double worst = 0;
  auto cmp = [&](double got, double want, const std::string& what) {
    const double e = std::abs(got - want) / std::max(1.0, std::abs(want));
    worst = std::max(worst, e);
    if (!(e <= 1e-9)) {
      std::ostringstream os;
      os.precision(17);
      os << what << ": recursion " << got << " vs site product " << want;
      witness(r, os.str());
    }
  };
  for (int n = 1; n <= n_max; ++n) {
    const long qn = static_cast<long>(cv.Q(n)), qm = static_cast<long>(cv.Q(n - 1));
    for (double E : energies) {
      std::ostringstream what;
      what.precision(17);
      what << "n=" << n << " E=" << E;
      // h_(n+1,0) = tr M_n
      cmp(trace(ctx, n + 1, 0, E), site_trace(ctx.spec, ctx.lambda, qn, E), "tr M_n " + what.str());
      if (n >= 2) {
        // h_(n,1) = tr(P_{q_{n-1}} P_{q_n}) with P_q the product over sites 1..q
        const auto x = site_matrix(ctx.spec, ctx.lambda, qm, E), y = site_matrix(ctx.spec, ctx.lambda, qn, E);
        const double tr = x[0] * y[0] + x[1] * y[2] + x[2] * y[1] + x[3] * y[3];
        cmp(trace(ctx, n, 1, E), tr, "h_(n,1) " + what.str());
      }
    }
  }
  for (double E : energies) {
    if (std::abs(E - ctx.lambda) > 2 && std::abs(E) > 2) {
      if (!(std::abs(trace(ctx, 0, 1, E)) > 2) || !(std::abs(trace(ctx, 1, 0, E)) > 2))
        witness(r, "root trace inside [-2,2] outside the root bands at E=" + std::to_string(E));
    }
  }
  std::ostringstream os;
  os << "worst relative error " << worst;
  r.detail = os.str();
  r.seconds = tm.seconds();
  return r;
}

std::vector<AuditReport> run_suite(const SuiteConfig& cfg) {
  auto want = [&](const std::string& name) { return cfg.only.empty() || cfg.only == name; };
  std::vector<std::vector<int>> periods = {cfg.a};
  auto add = [&](const std::vector<int>& p) {
    if (std::find(periods.begin(), periods.end(), p) == periods.end()) periods.push_back(p);
  };
  add({1});
  add({1, 2});
  if (cfg.deep) {
    add({2});
    add({2, 3});
    add({1, 1});
    add({2, 2});
  }
  std::vector<AuditReport> out;
  auto run = [&](auto&& f) {
    try {
      out.push_back(f());
    } catch (const std::exception& e) {
      AuditReport r;
      r.name = "error";
      r.pass = false;
      r.witnesses.push_back(e.what());
      out.push_back(r);
    }
  };
  for (const auto& p : periods) {
    const double wc = static_cast<double>(word_count(p, 1));
    int n = 1;
    while (n < 10 && wc * std::pow(perron_value(p), n) <= 2e5) ++n;
    if (want("counts")) run([&] { return audit_counts(p, n); });
    if (want("charpoly")) run([&] { return audit_charpoly(p); });
    if (want("mean_cycle")) run([&] { return audit_mean_cycle(p); });
    if (want("trace")) {
      const TransferContext ctx(check_alpha(p), cfg.lambda);
      const Convergents cv = convergents(ctx.spec, 40);
      int nm = 1;
      while (cv.Q(nm + 1) <= 200) ++nm;
      run([&] { return audit_trace(ctx, nm); });
    }
    if (want("bands")) {
      const int levels = p.size() == 1 ? 6 : (p == cfg.a || p == std::vector<int>{1, 2} ? 6 : 5);
      run([&] { return audit_bands(p, cfg.lambda, levels); });
    }
  }
  if (cfg.deep && want("bands")) run([&] { return audit_bands({1}, 100, 6); });
  if (want("covariation")) run([&] { return audit_covariation(cfg.a, cfg.lambda, cfg.deep ? 500 : 100, 50).report; });
  if (cfg.deep && want("charpoly"))
    for (const auto& p : std::vector<std::vector<int>>{{3}, {1, 2, 1}, {4, 4, 4}}) run([&] { return audit_charpoly(p); });
  std::stable_sort(out.begin(), out.end(), [](const AuditReport& x, const AuditReport& y) {
    return std::tie(x.name, x.instance) < std::tie(y.name, y.instance);
  });
  return out;
}

}  // namespace sturm
