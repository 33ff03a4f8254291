#include "sturm/bigfloat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sturm {

BigFloat BigFloat::parse(const std::string& s, int bits) {
  BigFloat r(bits);
  if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0 && !mpfr_number_p(r.v_))
    throw std::invalid_argument("bad decimal: " + s);
  return r;
}

double BigFloat::log_abs() const {
  if (mpfr_zero_p(v_)) return -INFINITY;
  long e = 0;
  const double m = mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
  return std::log(std::abs(m)) + static_cast<double>(e) * std::log(2.0);
}

std::string BigFloat::str() const {
  // enough digits to round-trip
  return str(static_cast<int>(std::ceil(bits() * 0.30103)) + 1);
}

std::string BigFloat::str(int digits) const {
  if (mpfr_zero_p(v_)) return "0";
  if (!mpfr_number_p(v_)) return mpfr_nan_p(v_) ? "nan" : (mpfr_signbit(v_) ? "-inf" : "inf");
  mpfr_exp_t e = 0;
  char* raw = mpfr_get_str(nullptr, &e, 10, static_cast<std::size_t>(std::max(digits, 2)), v_, MPFR_RNDN);
  std::string m(raw);
  mpfr_free_str(raw);
  std::string sign;
  if (!m.empty() && m[0] == '-') {
    sign = "-";
    m.erase(0, 1);
  }
  // value = 0.m * 10^e
  std::string out = sign + m.substr(0, 1) + "." + m.substr(1);
  out += "e" + std::to_string(static_cast<long>(e) - 1);
  return out;
}

BigFloat BigFloat::rounded(int b) const {
  BigFloat r(b);
  mpfr_set(r.v_, v_, MPFR_RNDN);
  return r;
}

BigFloat operator-(const BigFloat& x, const BigFloat& y) {
  BigFloat r(std::max(x.bits(), y.bits()));
  mpfr_sub(r.v_, x.v_, y.v_, MPFR_RNDN);
  return r;
}

BigFloat operator+(const BigFloat& x, const BigFloat& y) {
  BigFloat r(std::max(x.bits(), y.bits()));
  mpfr_add(r.v_, x.v_, y.v_, MPFR_RNDN);
  return r;
}

}  // namespace sturm
