#include "sturm/transfer.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace sturm {

TransferContext::TransferContext(FrequencySpec s, double lam, int b) : spec(std::move(s)), lambda(lam), bits(b) {
  spec.validate();
  if (!(lambda > 20)) throw std::invalid_argument("coupling must satisfy lambda > 20");
  if (bits < 53) throw std::invalid_argument("precision must be at least 53 bits");
}

namespace {

// r = a*b + c*d
inline void fmma(double& r, double a, double b, double c, double d) { r = a * b + c * d; }
inline void fmma(BigFloat& r, const BigFloat& a, const BigFloat& b, const BigFloat& c, const BigFloat& d) {
  mpfr_fmma(r.get(), a.get(), b.get(), c.get(), d.get(), MPFR_RNDN);
}
inline void setd(double& r, double x) { r = x; }
inline void setd(BigFloat& r, double x) { mpfr_set_d(r.get(), x, MPFR_RNDN); }
inline void copy(double& r, double x) { r = x; }
inline void copy(BigFloat& r, const BigFloat& x) { mpfr_set(r.get(), x.get(), MPFR_RNDN); }
inline void neg(double& r, double x) { r = -x; }
inline void neg(BigFloat& r, const BigFloat& x) { mpfr_neg(r.get(), x.get(), MPFR_RNDN); }
inline void add(double& r, double x, double y) { r = x + y; }
inline void add(BigFloat& r, const BigFloat& x, const BigFloat& y) { mpfr_add(r.get(), x.get(), y.get(), MPFR_RNDN); }
inline double to_d(double x) { return x; }
inline double to_d(const BigFloat& x) { return x.to_double(); }
inline double mag2(double x) {
  int e = 0;
  std::frexp(x, &e);
  return x == 0 ? -1e9 : e;
}
inline double mag2(const BigFloat& x) {
  return mpfr_zero_p(x.get()) ? -1e9 : static_cast<double>(mpfr_get_exp(x.get()));
}

template <class T>
T make(int bits);
template <>
double make<double>(int) {
  return 0.0;
}
template <>
BigFloat make<BigFloat>(int bits) {
  return BigFloat(bits);
}

template <class T>
struct M2 {
  T a, b, c, d;
  explicit M2(int bits) : a(make<T>(bits)), b(make<T>(bits)), c(make<T>(bits)), d(make<T>(bits)) {}
};

template <class T>
void swap_m(M2<T>& x, M2<T>& y) {
  using std::swap;
  swap(x.a, y.a);
  swap(x.b, y.b);
  swap(x.c, y.c);
  swap(x.d, y.d);
}

template <class T>
class Kernel {
 public:
  Kernel(const FrequencySpec& spec, double lambda, int bits)
      : spec_(spec), lambda_(lambda), prev_(bits), cur_(bits), next_(bits), pw_(bits), tmp_(bits),
        s1_(make<T>(bits)), s2_(make<T>(bits)) {}

  // Leaves prev_ = M_{n-1}, cur_ = M_n.
  void run(const T& E, int n, bool track = false) {
    track_ = track;
    maxmag_ = -1e9;
    setd(prev_.a, 1);
    setd(prev_.b, -lambda_);
    setd(prev_.c, 0);
    setd(prev_.d, 1);
    copy(cur_.a, E);
    setd(cur_.b, -1);
    setd(cur_.c, 1);
    setd(cur_.d, 0);
    if (track_) note(cur_);
    for (int j = 0; j < n; ++j) {
      power(spec_.quotient(j + 1));  // pw_ = cur_^a
      mul(next_, prev_, pw_);
      swap_m(prev_, cur_);
      swap_m(cur_, next_);
      if (track_) note(cur_);
    }
  }

  // tr(X Y)
  double trace_prod(const M2<T>& x, const M2<T>& y) {
    fmma(s1_, x.a, y.a, x.b, y.c);
    fmma(s2_, x.c, y.b, x.d, y.d);
    add(s1_, s1_, s2_);
    return to_d(s1_);
  }
  void trace_prod(T& out, const M2<T>& x, const M2<T>& y) {
    fmma(s1_, x.a, y.a, x.b, y.c);
    fmma(s2_, x.c, y.b, x.d, y.d);
    add(out, s1_, s2_);
  }

  // h_{(n,p)} after run(E, n)
  void handle_trace(T& out, int p) {
    if (p == 0) {
      add(out, prev_.a, prev_.d);
    } else if (p == -1) {
      // adj(M_n) = [[d,-b],[-c,a]]
      copy(pw_.a, cur_.d);
      neg(pw_.b, cur_.b);
      neg(pw_.c, cur_.c);
      copy(pw_.d, cur_.a);
      trace_prod(out, prev_, pw_);
    } else {
      power(p);
      trace_prod(out, prev_, pw_);
    }
  }

  const M2<T>& prev() const { return prev_; }
  const M2<T>& cur() const { return cur_; }
  double maxmag() const { return maxmag_; }

 private:
  void mul(M2<T>& out, const M2<T>& x, const M2<T>& y) {
    fmma(out.a, x.a, y.a, x.b, y.c);
    fmma(out.b, x.a, y.b, x.b, y.d);
    fmma(out.c, x.c, y.a, x.d, y.c);
    fmma(out.d, x.c, y.b, x.d, y.d);
  }
  // pw_ = cur_^e by repeated squaring, e >= 1
  void power(int e) {
    copy(pw_.a, cur_.a);
    copy(pw_.b, cur_.b);
    copy(pw_.c, cur_.c);
    copy(pw_.d, cur_.d);
    const int hb = std::bit_width(static_cast<unsigned>(e)) - 1;
    for (int bit = hb - 1; bit >= 0; --bit) {
      mul(tmp_, pw_, pw_);
      swap_m(tmp_, pw_);
      if (e >> bit & 1) {
        mul(tmp_, pw_, cur_);
        swap_m(tmp_, pw_);
      }
      if (track_) note(pw_);
    }
  }
  void note(const M2<T>& m) {
    maxmag_ = std::max({maxmag_, mag2(m.a), mag2(m.b), mag2(m.c), mag2(m.d)});
  }

  const FrequencySpec& spec_;
  double lambda_;
  M2<T> prev_, cur_, next_, pw_, tmp_;
  T s1_, s2_;
  bool track_ = false;
  double maxmag_ = -1e9;
};

}  // namespace

double trace(const TransferContext& ctx, int n, int p, double E) {
  if (n < 0 || p < -1) throw std::invalid_argument("trace needs n >= 0 and p >= -1");
  Kernel<double> k(ctx.spec, ctx.lambda, 53);
  k.run(E, n);
  double out = 0;
  k.handle_trace(out, p);
  return out;
}

BigFloat trace(const TransferContext& ctx, int n, int p, const BigFloat& E) {
  if (n < 0 || p < -1) throw std::invalid_argument("trace needs n >= 0 and p >= -1");
  const int bits = std::max(ctx.bits, E.bits());
  Kernel<BigFloat> k(ctx.spec, ctx.lambda, bits);
  k.run(E.rounded(bits), n);
  BigFloat out(bits);
  k.handle_trace(out, p);
  return out;
}

double log2_entry_growth(const TransferContext& ctx, int n, double E) {
  Kernel<double> k(ctx.spec, ctx.lambda, 53);
  k.run(E, n + 1, true);
  return k.maxmag();
}

struct ChildEvaluator::Impl {
  int level;
  bool use_double;
  Kernel<double> kd;
  Kernel<BigFloat> km;
  BigFloat lo, width, E, sum;
  double lo_d, w_d;
  double maxmag = 0;

  Impl(const TransferContext& ctx, int n, int bits, const BigFloat& l, const BigFloat& h)
      : level(n), use_double(bits <= 53), kd(ctx.spec, ctx.lambda, 53),
        km(ctx.spec, ctx.lambda, use_double ? 53 : bits), lo(l.rounded(bits)), width(h.rounded(bits)),
        E(bits), sum(bits) {
    mpfr_sub(width.get(), width.get(), lo.get(), MPFR_RNDN);
    lo_d = lo.to_double();
    w_d = width.to_double();
  }

  void energy(BigFloat& out, double t) const {
    mpfr_mul_d(out.get(), width.get(), t, MPFR_RNDN);
    mpfr_add(out.get(), out.get(), lo.get(), MPFR_RNDN);
  }
};

ChildEvaluator::ChildEvaluator(const TransferContext& ctx, int level, int bits, const BigFloat& lo,
                               const BigFloat& hi)
    : impl_(std::make_unique<Impl>(ctx, level, std::max(bits, 53), lo, hi)), bits_(std::max(bits, 53)) {}

ChildEvaluator::~ChildEvaluator() = default;

std::pair<double, double> ChildEvaluator::operator()(double t) {
  Impl& s = *impl_;
  if (s.use_double) {
    const double E = s.lo_d + t * s.w_d;
    s.kd.run(E, s.level + 1, true);
    s.maxmag = s.kd.maxmag();
    return {s.kd.trace_prod(s.kd.prev(), s.kd.cur()), s.kd.cur().a + s.kd.cur().d};
  }
  s.energy(s.E, t);
  s.km.run(s.E, s.level + 1, true);
  s.maxmag = s.km.maxmag();
  const auto& c = s.km.cur();
  mpfr_add(s.sum.get(), c.a.get(), c.d.get(), MPFR_RNDN);
  return {s.km.trace_prod(s.km.prev(), s.km.cur()), s.sum.to_double()};
}

BigFloat ChildEvaluator::energy(double t) const {
  BigFloat out(bits_);
  impl_->energy(out, t);
  return out;
}

double ChildEvaluator::log2_max_entry() const { return impl_->maxmag; }

}  // namespace sturm
