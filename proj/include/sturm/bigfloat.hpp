#pragma once

#include <string>
#include <utility>

#include <mpfr.h>

namespace sturm {

// Owning MPFR value. Copies keep the source precision.
class BigFloat {
 public:
  explicit BigFloat(int bits = 53) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }
  BigFloat(double x, int bits) { mpfr_init2(v_, bits); mpfr_set_d(v_, x, MPFR_RNDN); }
  BigFloat(const BigFloat& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  BigFloat(BigFloat&& o) noexcept { mpfr_init2(v_, MPFR_PREC_MIN); mpfr_swap(v_, o.v_); }
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigFloat& operator=(BigFloat&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  static BigFloat parse(const std::string& s, int bits);

  int bits() const { return static_cast<int>(mpfr_get_prec(v_)); }
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  // log of |x| as a double; works below the double range
  double log_abs() const;
  // Decimal string with all significant digits of the precision.
  std::string str() const;
  std::string str(int digits) const;
  BigFloat rounded(int bits) const;

  friend void swap(BigFloat& x, BigFloat& y) noexcept { mpfr_swap(x.v_, y.v_); }
  friend BigFloat operator-(const BigFloat& x, const BigFloat& y);
  friend BigFloat operator+(const BigFloat& x, const BigFloat& y);
  friend int compare(const BigFloat& x, const BigFloat& y) { return mpfr_cmp(x.v_, y.v_); }
  friend bool operator<(const BigFloat& x, const BigFloat& y) { return mpfr_less_p(x.v_, y.v_); }
  friend bool operator<=(const BigFloat& x, const BigFloat& y) { return mpfr_lessequal_p(x.v_, y.v_); }
  friend bool operator==(const BigFloat& x, const BigFloat& y) { return mpfr_equal_p(x.v_, y.v_); }

 private:
  mpfr_t v_;
};

}  // namespace sturm
