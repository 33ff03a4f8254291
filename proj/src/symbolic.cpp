#include "sturm/symbolic.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace sturm {

std::vector<Letter> alphabet(int m) {
  if (m < 1) throw std::invalid_argument("alphabet order must be >= 1");
  std::vector<Letter> out;
  out.reserve(2 * m + 2);
  for (int i = 1; i <= m + 1; ++i) out.push_back({1, i, m});
  out.push_back({2, 1, m});
  for (int i = 1; i <= m; ++i) out.push_back({3, i, m});
  return out;
}

bool admissible(int t, const Letter& e) {
  const int m = e.order;
  switch (t) {
    case 1:
      return e.type == 2 && e.index == 1;
    case 2:
      return (e.type == 1 && e.index >= 1 && e.index <= m + 1) ||
             (e.type == 3 && e.index >= 1 && e.index <= m);
    case 3:
      return (e.type == 1 && e.index >= 1 && e.index <= m) ||
             (e.type == 3 && e.index >= 1 && e.index <= m - 1);
    default:
      return false;
  }
}

bool admissible(const FrequencySpec& spec, const SymbolWord& w) {
  if (w.head < 1 || w.head > 3 || w.head == 2) return false;
  int t = w.head;
  for (int n = 1; n <= w.level(); ++n) {
    const Letter& e = w.letters[n - 1];
    if (e.order != spec.quotient(n)) return false;
    if (!admissible(t, e)) return false;
    t = e.type;
  }
  return true;
}

int BlockSystem::index_of(const BlockLetter& b) const {
  for (int i = 0; i < size(); ++i)
    if (blocks[i] == b) return i;
  return -1;
}

namespace {

BlockSystem build_system(const std::vector<int>& a) {
  if (a.empty()) throw std::invalid_argument("period must be nonempty");
  for (int x : a)
    if (x < 1) throw std::invalid_argument("partial quotients must be >= 1");
  BlockSystem s;
  s.a = a;
  const int k = static_cast<int>(a.size());
  BlockLetter cur;
  std::function<void(int)> rec = [&](int i) {
    if (i == k) {
      s.blocks.push_back(cur);
      return;
    }
    for (const Letter& e : alphabet(a[i])) {
      if (i > 0 && !admissible(cur.back().type, e)) continue;
      cur.push_back(e);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  const int N = s.size();
  s.A.n = N;
  s.A.e.assign(static_cast<std::size_t>(N) * N, 0);
  s.succ.resize(N);
  for (const BlockLetter& b : s.blocks) {
    s.head_type.push_back(b.front().type);
    s.tail_type.push_back(b.back().type);
  }
  for (int v = 0; v < N; ++v)
    for (int w = 0; w < N; ++w)
      if (admissible(s.tail_type[v], s.blocks[w].front())) {
        s.A.e[static_cast<std::size_t>(v) * N + w] = 1;
        s.succ[v].push_back(w);
      }
  return s;
}

}  // namespace

const BlockSystem& block_system(const std::vector<int>& a) {
  static std::mutex mu;
  static std::map<std::vector<int>, std::unique_ptr<BlockSystem>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(a);
  if (it == cache.end())
    it = cache.emplace(a, std::make_unique<BlockSystem>(build_system(a))).first;
  return *it->second;
}

std::vector<BlockLetter> block_alphabet(const std::vector<int>& a) { return block_system(a).blocks; }

IncidenceMatrix incidence_matrix(const std::vector<int>& a) { return block_system(a).A; }

Mat3 hat_matrix(int m) {
  Mat3 h;
  h[0] = {0, 1, 0};
  h[1] = {m + 1, 0, m};
  h[2] = {m, 0, m - 1};
  return h;
}

Mat3 mat3_mul(const Mat3& x, const Mat3& y) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      BigInt s = 0;
      for (int l = 0; l < 3; ++l) s += x[i][l] * y[l][j];
      r[i][j] = s;
    }
  return r;
}

Mat3 mat3_pow(const Mat3& x, int e) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = i == j ? 1 : 0;
  for (int i = 0; i < e; ++i) r = mat3_mul(r, x);
  return r;
}

// \hat A_{a_k} ... \hat A_{a_1}
Mat3 auxiliary_matrix(const std::vector<int>& a) {
  Mat3 r = hat_matrix(a.at(0));
  for (std::size_t i = 1; i < a.size(); ++i) r = mat3_mul(hat_matrix(a[i]), r);
  return r;
}

// Q_{a_k} ... Q_{a_1}
Mat2 b_matrix(const std::vector<int>& a) {
  Mat2 r{{{1, 0}, {0, 1}}};
  for (int m : a) {
    Mat2 q{{{m, 1}, {1, 0}}};
    Mat2 t;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) t[i][j] = q[i][0] * r[0][j] + q[i][1] * r[1][j];
    r = t;
  }
  return r;
}

double perron_value(const std::vector<int>& a) {
  const Mat2 b = b_matrix(a);
  const double t = (b[0][0] + b[1][1]).convert_to<double>();
  const double d = (b[0][0] * b[1][1] - b[0][1] * b[1][0]).convert_to<double>();
  return 0.5 * (t + std::sqrt(t * t - 4 * d));
}

PerronData perron(const std::vector<int>& a) {
  const BlockSystem& s = block_system(a);
  const int N = s.size();
  PerronData pd;
  pd.E = perron_value(a);
  std::vector<double> r(N, 1.0), l(N, 1.0), tr(N), tl(N);
  double rq = 0;
  constexpr int kMaxIter = 100000;
  int it = 0;
  for (; it < kMaxIter; ++it) {
    std::fill(tr.begin(), tr.end(), 0.0);
    std::fill(tl.begin(), tl.end(), 0.0);
    for (int v = 0; v < N; ++v)
      for (int w : s.succ[v]) {
        tr[v] += r[w];
        tl[w] += l[v];
      }
    double nr = 0, nl = 0, num = 0, den = 0;
    for (int v = 0; v < N; ++v) {
      num += r[v] * tr[v];
      den += r[v] * r[v];
      nr = std::max(nr, tr[v]);
      nl = std::max(nl, tl[v]);
    }
    double change = 0;
    for (int v = 0; v < N; ++v) {
      const double x = tr[v] / nr, y = tl[v] / nl;
      change = std::max({change, std::abs(x - r[v]), std::abs(y - l[v])});
      r[v] = x;
      l[v] = y;
    }
    rq = num / den;
    if (change < 1e-15 && it > 10) break;
  }
  if (it == kMaxIter) throw std::runtime_error("power iteration did not converge");
  double dot = 0;
  for (int v = 0; v < N; ++v) dot += l[v] * r[v];
  for (double& x : r) x /= dot;
  pd.left = std::move(l);
  pd.right = std::move(r);
  pd.E_power = rq;
  pd.iterations = it;
  if (std::abs(pd.E - pd.E_power) > 1e-10 * pd.E)
    throw std::runtime_error("Perron eigenvalue of A_a disagrees with B_a");
  return pd;
}

const PerronData& perron_cached(const std::vector<int>& a) {
  static std::mutex mu;
  static std::map<std::vector<int>, std::unique_ptr<PerronData>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(a);
  if (it == cache.end()) it = cache.emplace(a, std::make_unique<PerronData>(perron(a))).first;
  return *it->second;
}

bool is_admissible(const std::vector<int>& a, const BlockWord& w) {
  const BlockSystem& s = block_system(a);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] < 0 || w[i] >= s.size()) return false;
    if (i > 0 && !s.A(w[i - 1], w[i])) return false;
  }
  return true;
}

double parry_measure(const std::vector<int>& a, const BlockWord& w) {
  if (w.empty() || !is_admissible(a, w)) throw std::invalid_argument("inadmissible word");
  const PerronData& pd = perron_cached(a);
  // left . right = 1
  return pd.left[w.front()] * pd.right[w.back()] * std::pow(pd.E, -static_cast<double>(w.size() - 1));
}

void enumerate_words(const std::vector<int>& a, int n,
                     const std::function<void(const BlockWord&)>& visit) {
  if (n < 1) throw std::invalid_argument("word length must be >= 1");
  const BlockSystem& s = block_system(a);
  BlockWord w;
  w.reserve(n);
  std::function<void()> rec = [&]() {
    if (static_cast<int>(w.size()) == n) {
      visit(w);
      return;
    }
    if (w.empty()) {
      for (int v = 0; v < s.size(); ++v) {
        w.push_back(v);
        rec();
        w.pop_back();
      }
    } else {
      for (int v : s.succ[w.back()]) {
        w.push_back(v);
        rec();
        w.pop_back();
      }
    }
  };
  rec();
}

std::vector<BlockWord> words(const std::vector<int>& a, int n) {
  std::vector<BlockWord> out;
  enumerate_words(a, n, [&](const BlockWord& w) { out.push_back(w); });
  return out;
}

BigInt word_count(const std::vector<int>& a, int n) {
  if (n < 1) throw std::invalid_argument("word length must be >= 1");
  const BlockSystem& s = block_system(a);
  std::vector<BigInt> v(s.size(), 1), t(s.size());
  for (int step = 1; step < n; ++step) {
    for (int i = 0; i < s.size(); ++i) {
      t[i] = 0;
      for (int j : s.succ[i]) t[i] += v[j];
    }
    std::swap(v, t);
  }
  BigInt total = 0;
  for (const BigInt& x : v) total += x;
  return total;
}

SymbolWord iota(const std::vector<int>& a, const BlockWord& w) {
  if (w.empty()) throw std::invalid_argument("iota needs a nonempty word");
  const BlockSystem& s = block_system(a);
  SymbolWord out;
  if (s.head_type[w.front()] == 2) {
    out.head = 3;
    out.letters.push_back({1, 1, 1});
  } else {
    out.head = 1;
    out.letters.push_back({2, 1, 1});
  }
  for (int v : w)
    for (const Letter& e : s.blocks[v]) out.letters.push_back(e);
  return out;
}

std::string to_string(const Letter& e) {
  return std::to_string(e.type) + ":" + std::to_string(e.index) + "@" + std::to_string(e.order);
}

std::string to_string(const BlockLetter& b) {
  std::string out;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (i) out += '.';
    out += to_string(b[i]);
  }
  return out;
}

std::string to_string(const std::vector<int>& a, const BlockWord& w) {
  const BlockSystem& s = block_system(a);
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += '|';
    out += to_string(s.blocks.at(w[i]));
  }
  return out;
}

std::string to_string(const SymbolWord& w) {
  std::string out = std::to_string(w.head);
  for (const Letter& e : w.letters) out += "." + to_string(e);
  return out;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

int parse_int(const std::string& s) {
  std::size_t pos = 0;
  const int v = std::stoi(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad integer: " + s);
  return v;
}

}  // namespace

Letter parse_letter(const std::string& s) {
  const auto c = s.find(':'), at = s.find('@');
  if (c == std::string::npos || at == std::string::npos || at < c)
    throw std::invalid_argument("bad letter: " + s);
  return {parse_int(s.substr(0, c)), parse_int(s.substr(c + 1, at - c - 1)), parse_int(s.substr(at + 1))};
}

BlockWord parse_block_word(const std::vector<int>& a, const std::string& s) {
  const BlockSystem& sys = block_system(a);
  BlockWord w;
  for (const std::string& part : split(s, '|')) {
    BlockLetter b;
    for (const std::string& l : split(part, '.')) b.push_back(parse_letter(l));
    const int idx = sys.index_of(b);
    if (idx < 0) throw std::invalid_argument("not a block letter of a: " + part);
    w.push_back(idx);
  }
  if (!is_admissible(a, w)) throw std::invalid_argument("inadmissible word: " + s);
  return w;
}

SymbolWord parse_symbol_word(const std::string& s) {
  auto parts = split(s, '.');
  SymbolWord w;
  w.head = parse_int(parts.at(0));
  for (std::size_t i = 1; i < parts.size(); ++i) w.letters.push_back(parse_letter(parts[i]));
  return w;
}

}  // namespace sturm
