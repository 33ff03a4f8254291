#include "sturm/bands.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

#include <boost/math/tools/roots.hpp>

namespace sturm {

std::array<Band, 2> root_bands(const TransferContext& ctx) {
  std::array<Band, 2> r;
  const int bits = 128;
  r[0].word = {1, {}};
  r[0].type = 1;
  r[0].lo = BigFloat(ctx.lambda - 2, bits);
  r[0].hi = BigFloat(ctx.lambda + 2, bits);
  r[0].handle = {0, 1};
  r[1].word = {3, {}};
  r[1].type = 3;
  r[1].lo = BigFloat(-2.0, bits);
  r[1].hi = BigFloat(2.0, bits);
  r[1].handle = {1, 0};
  for (Band& b : r) b.growth = std::log2(ctx.lambda + 2);
  return r;
}

namespace {

int round_bits(double need) {
  if (need <= 53) return 53;
  int b = 128;
  while (b < need) b += 64;
  return b;
}

double needed_bits(const Band& p, double growth) {
  const double mag = std::log2(std::max({std::abs(p.lo.to_double()), std::abs(p.hi.to_double()), 1.0}));
  const double w = p.length_exact().log_abs() / std::log(2.0);
  return 56 + mag - w + 2 * std::max(0.0, growth);
}

struct Expected {
  int ones;
  int others;
  int other_type;
};

Expected expected_children(int parent_type, int a) {
  if (parent_type == 1) return {0, 1, 2};
  if (parent_type == 2) return {a + 1, a, 3};
  return {a, a - 1, 3};
}

enum class Outcome { ok, miscount, precision };

struct Attempt {
  Outcome outcome = Outcome::ok;
  std::vector<Band> children;
  int bits = 0;
  std::string detail;
};

struct Crossing {
  int poly;  // 0: tr(M_n M_{n+1}), 1: tr(M_{n+1})
  int i;     // between samples i and i+1
};

using Solver = std::function<double(double)>;

// Root of g on [a,b] (g(a), g(b) of opposite signs) to width tol.
double solve(const Solver& g, double a, double b, double ga, double gb, double tol) {
  if (ga == 0) return a;
  if (gb == 0) return b;
  std::uintmax_t iters = 200;
  auto res = boost::math::tools::toms748_solve(
      g, a, b, ga, gb, [tol](double x, double y) { return std::abs(y - x) <= tol; }, iters);
  return 0.5 * (res.first + res.second);
}

Attempt attempt(const TransferContext& ctx, const Band& parent, int a, int bits, int grid) {
  Attempt out;
  out.bits = bits;
  const int n = parent.level;
  ChildEvaluator f(ctx, n, bits, parent.lo, parent.hi);
  std::vector<double> ts(grid + 1), h1(grid + 1), h2(grid + 1);
  double growth = 0;
  for (int i = 0; i <= grid; ++i) {
    ts[i] = static_cast<double>(i) / grid;
    auto [x, y] = f(ts[i]);
    h1[i] = x;
    h2[i] = y;
    growth = std::max(growth, f.log2_max_entry());
  }
  const int need = round_bits(needed_bits(parent, growth));
  if (need > bits) {
    out.outcome = Outcome::precision;
    out.bits = need;
    return out;
  }
  const Expected ex = expected_children(parent.type, a);
  std::vector<Crossing> cross;
  int c1 = 0, c2 = 0;
  for (int i = 0; i < grid; ++i) {
    if (ex.ones > 0 && std::signbit(h1[i]) != std::signbit(h1[i + 1])) {
      cross.push_back({0, i});
      ++c1;
    }
    if (std::signbit(h2[i]) != std::signbit(h2[i + 1])) {
      cross.push_back({1, i});
      ++c2;
    }
  }
  if (c1 != ex.ones || c2 != ex.others) {
    out.outcome = Outcome::miscount;
    std::ostringstream os;
    os << "found " << c1 << "+" << c2 << " zeros, expected " << ex.ones << "+" << ex.others << " on grid "
       << grid << " at " << bits << " bits";
    out.detail = os.str();
    return out;
  }

  constexpr double kTol = 1e-14;
  struct Raw {
    double tl, tr;
    int type;
  };
  std::vector<Raw> raws;
  for (const Crossing& c : cross) {
    const std::vector<double>& h = c.poly == 0 ? h1 : h2;
    Solver g = [&f, which = c.poly](double t) {
      auto v = f(t);
      return which == 0 ? v.first : v.second;
    };
    const double z = solve(g, ts[c.i], ts[c.i + 1], h[c.i], h[c.i + 1], kTol);
    // left edge
    int j = c.i;
    while (j >= 0 && std::abs(h[j]) <= 2) --j;
    if (j < 0) {
      out.outcome = Outcome::miscount;
      out.detail = "child touches the left end of its parent";
      return out;
    }
    double target = std::copysign(2.0, h[j]);
    Solver gl = [&g, target](double t) { return g(t) - target; };
    const double lb = j < c.i ? ts[j + 1] : z;
    const double tl = solve(gl, ts[j], lb, h[j] - target, g(lb) - target, kTol);
    j = c.i + 1;
    while (j <= grid && std::abs(h[j]) <= 2) ++j;
    if (j > grid) {
      out.outcome = Outcome::miscount;
      out.detail = "child touches the right end of its parent";
      return out;
    }
    target = std::copysign(2.0, h[j]);
    Solver gr = [&g, target](double t) { return g(t) - target; };
    const double rb = j > c.i + 1 ? ts[j - 1] : z;
    const double tr = solve(gr, rb, ts[j], g(rb) - target, h[j] - target, kTol);
    const int type = c.poly == 0 ? 1 : ex.other_type;
    raws.push_back({tl, tr, type});
  }
  std::sort(raws.begin(), raws.end(), [](const Raw& x, const Raw& y) { return x.tl < y.tl; });

  for (std::size_t i = 0; i < raws.size(); ++i) {
    if (!(raws[i].tl < raws[i].tr) || raws[i].tl < 0 || raws[i].tr > 1 ||
        (i + 1 < raws.size() && !(raws[i].tr < raws[i + 1].tl))) {
      out.outcome = Outcome::miscount;
      out.detail = "children overlap or leave the parent";
      return out;
    }
    if (parent.type != 1 && raws[i].type != (i % 2 == 0 ? 1 : 3)) {
      out.outcome = Outcome::miscount;
      out.detail = "children do not interlace";
      return out;
    }
    if (raws[i].tr - raws[i].tl < 1e-9) {
      // Resolve narrow children in their own coordinate.
      const double pad = 4 * kTol;
      const BigFloat elo = f.energy(std::max(0.0, raws[i].tl - pad));
      const BigFloat ehi = f.energy(std::min(1.0, raws[i].tr + pad));
      ChildEvaluator sub(ctx, n, bits, elo, ehi);
      const int which = raws[i].type == 1 ? 0 : 1;
      Solver gs = [&sub, which](double t) {
        auto v = sub(t);
        return which == 0 ? v.first : v.second;
      };
      const double g0 = gs(0), g1 = gs(1);
      if (std::abs(g0) <= 2 || std::abs(g1) <= 2) {
        out.outcome = Outcome::precision;
        out.bits = bits + 64;
        return out;
      }
      const double zz = solve(gs, 0, 1, g0, g1, kTol);
      const double t0 = std::copysign(2.0, g0), t1 = std::copysign(2.0, g1);
      const double ul = solve([&](double t) { return gs(t) - t0; }, 0, zz, g0 - t0, -t0, kTol);
      const double ur = solve([&](double t) { return gs(t) - t1; }, zz, 1, -t1, g1 - t1, kTol);
      Band b;
      b.lo = sub.energy(ul);
      b.hi = sub.energy(ur);
      b.type = raws[i].type;
      out.children.push_back(std::move(b));
      continue;
    }
    Band b;
    b.lo = f.energy(raws[i].tl);
    b.hi = f.energy(raws[i].tr);
    b.type = raws[i].type;
    out.children.push_back(std::move(b));
  }
  int idx1 = 0, idx3 = 0;
  for (Band& b : out.children) {
    b.level = n + 1;
    b.growth = growth;
    b.word = parent.word;
    const int index = b.type == 1 ? ++idx1 : (b.type == 3 ? ++idx3 : 1);
    b.word.letters.push_back({b.type, index, a});
    b.handle = b.type == 1 ? TraceHandle{n + 1, 1} : TraceHandle{n + 2, 0};
  }
  return out;
}

}  // namespace

int refine_bits(const Band& parent) { return round_bits(needed_bits(parent, parent.growth)); }

std::vector<Band> refine(const TransferContext& ctx, const Band& parent, int a_next, RefineStats* stats) {
  const int n = parent.level;
  if (a_next != ctx.spec.quotient(n + 1))
    throw std::invalid_argument("a_next does not match the frequency");
  if (stats) ++stats->refines;
  if (parent.type == 1 && a_next == 1) {
    // tr M_{n+1} = tr(M_{n-1} M_n) when a_{n+1} = 1: the child is the parent itself.
    Band b = parent;
    b.level = n + 1;
    b.type = 2;
    b.word.letters.push_back({2, 1, 1});
    b.handle = {n + 2, 0};
    return {b};
  }
  int bits = std::max({128, ctx.bits, refine_bits(parent)});
  const int grid0 = 8 * (2 * a_next + 2);
  std::string last;
  int grid = grid0;
  for (int esc = 0; esc < 4; ++esc) {
    grid = grid0;
    for (int d = 0; d < 5; ++d) {
      Attempt r = attempt(ctx, parent, a_next, bits, grid);
      if (r.outcome == Outcome::ok) {
        if (stats) stats->max_bits = std::max(stats->max_bits, bits);
        return std::move(r.children);
      }
      if (r.outcome == Outcome::precision) {
        bits = std::max(r.bits, bits + 64);
        if (stats) ++stats->escalations;
        d = -1;
        grid = grid0;
        if (bits > 8192) throw PrecisionExhausted("precision ladder exhausted at " + to_string(parent.word));
        continue;
      }
      last = r.detail;
      grid *= 2;
      if (stats) ++stats->grid_doublings;
    }
    bits += 64;
    if (stats) ++stats->escalations;
  }
  std::ostringstream os;
  os << "child isolation failed for parent " << to_string(parent.word) << " (level " << n << ", type "
     << parent.type << "): " << last << "; last grid " << grid;
  throw StructuralError(os.str());
}

BandTree::BandTree(TransferContext ctx) : ctx_(std::move(ctx)) {
  for (Band& b : root_bands(ctx_)) {
    auto node = std::make_unique<Node>();
    node->band = std::move(b);
    node->parent = static_cast<Id>(-1);
    nodes_.push_back(std::move(node));
  }
}

const Band& BandTree::band(Id id) const {
  std::lock_guard lock(mu_);
  return nodes_.at(id)->band;
}

BandTree::Id BandTree::parent(Id id) const {
  std::lock_guard lock(mu_);
  return nodes_.at(id)->parent;
}

std::size_t BandTree::size() const {
  std::lock_guard lock(mu_);
  return nodes_.size();
}

RefineStats BandTree::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

std::vector<BandTree::Id> BandTree::children(Id id) {
  const Band* parent = nullptr;
  {
    std::lock_guard lock(mu_);
    Node& node = *nodes_.at(id);
    if (node.refined) return node.children;
    parent = &node.band;
  }
  RefineStats st;
  std::vector<Band> kids = refine(ctx_, *parent, ctx_.spec.quotient(parent->level + 1), &st);
  std::lock_guard lock(mu_);
  Node& node = *nodes_[id];
  if (node.refined) return node.children;
  for (Band& b : kids) {
    auto child = std::make_unique<Node>();
    child->band = std::move(b);
    child->parent = id;
    node.children.push_back(nodes_.size());
    nodes_.push_back(std::move(child));
  }
  node.refined = true;
  stats_.refines += st.refines;
  stats_.grid_doublings += st.grid_doublings;
  stats_.escalations += st.escalations;
  stats_.max_bits = std::max(stats_.max_bits, st.max_bits);
  return node.children;
}

BandTree::Id BandTree::child(Id id, const Letter& e) {
  for (Id c : children(id)) {
    const Band& b = band(c);
    if (b.word.letters.back() == e) return c;
  }
  throw std::invalid_argument("letter " + to_string(e) + " is not admissible below " + to_string(band(id).word));
}

BandTree::Id BandTree::find(const SymbolWord& w) {
  if (!admissible(ctx_.spec, w)) throw std::invalid_argument("inadmissible word " + to_string(w));
  Id id = root(w.head);
  for (const Letter& e : w.letters) id = child(id, e);
  return id;
}

std::vector<BandTree::Id> BandTree::level(int n, std::size_t cap, int threads) {
  std::vector<Id> cur = {root(1), root(3)};
  for (int l = 0; l < n; ++l) {
    if (threads > 1 && cur.size() > 1) {
      std::vector<std::thread> pool;
      for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
          for (std::size_t i = t; i < cur.size(); i += threads) children(cur[i]);
        });
      for (auto& th : pool) th.join();
    }
    std::vector<Id> next;
    for (Id id : cur) {
      for (Id c : children(id)) next.push_back(c);
      if (next.size() > cap) throw BudgetExceeded("band budget exceeded at level " + std::to_string(l + 1), next.size());
    }
    cur = std::move(next);
  }
  return cur;
}

std::shared_ptr<BandTree> shared_tree(const FrequencySpec& spec, double lambda) {
  static std::mutex mu;
  static std::map<std::pair<std::string, double>, std::shared_ptr<BandTree>> cache;
  std::lock_guard lock(mu);
  auto key = std::make_pair(to_string(spec), lambda);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_shared<BandTree>(TransferContext(spec, lambda))).first;
  return it->second;
}

Band band_for_word(const TransferContext& ctx, const SymbolWord& w) {
  auto tree = shared_tree(ctx.spec, ctx.lambda);
  return tree->band(tree->find(w));
}

LevelExtremes level_extremes(BandTree& tree, int n, std::size_t cap) {
  LevelExtremes ex;
  const std::vector<BandTree::Id> ids = tree.level(n, cap);
  ex.count = ids.size();
  ex.log_min = INFINITY;
  ex.log_max = -INFINITY;
  for (BandTree::Id id : ids) {
    const Band& b = tree.band(id);
    const double l = b.log_length();
    if (l < ex.log_min) {
      ex.log_min = l;
      ex.argmin = b.word;
    }
    if (l > ex.log_max) {
      ex.log_max = l;
      ex.argmax = b.word;
    }
  }
  ex.min_length = std::exp(ex.log_min);
  ex.max_length = std::exp(ex.log_max);
  return ex;
}

LevelExtremes level_extremes(const TransferContext& ctx, int n, std::size_t cap) {
  return level_extremes(*shared_tree(ctx.spec, ctx.lambda), n, cap);
}

LengthBounds length_bounds(const TransferContext& ctx, const SymbolWord& w) {
  const double lt1 = std::log((ctx.lambda - 8) / 3), lt2 = std::log(2 * (ctx.lambda + 5));
  LengthBounds b;
  const int n = w.level();
  b.log_lower = -n * lt2;
  b.log_upper = std::log(4.0) - n * lt1;
  for (int i = 1; i <= n; ++i) {
    const int a = ctx.spec.quotient(i);
    b.log_lower -= 3 * std::log(static_cast<double>(a));
    if (w.letters[i - 1].type == 2) {
      b.log_lower += (2 - a) * lt2;
      b.log_upper += (2 - a) * lt1;
    }
  }
  return b;
}

bool length_bounds_audit(const TransferContext& ctx, const Band& band) {
  const LengthBounds b = length_bounds(ctx, band.word);
  const double l = band.log_length();
  constexpr double kSlack = 1e-9;
  return b.log_lower - kSlack <= l && l <= b.log_upper + kSlack;
}

}  // namespace sturm
