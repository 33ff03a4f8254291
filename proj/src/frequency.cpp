#include "sturm/frequency.hpp"

#include <sstream>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace sturm {

void FrequencySpec::validate() const {
  if (period.empty()) throw std::invalid_argument("period must be nonempty");
  for (int x : prefix)
    if (x < 1) throw std::invalid_argument("partial quotients must be >= 1");
  for (int x : period)
    if (x < 1) throw std::invalid_argument("partial quotients must be >= 1");
}

int FrequencySpec::quotient(int n) const {
  if (n < 1) throw std::out_of_range("quotient index starts at 1");
  const int m = static_cast<int>(prefix.size());
  if (n <= m) return prefix[n - 1];
  return period[(n - m - 1) % period.size()];
}

bool operator==(const FrequencySpec& x, const FrequencySpec& y) {
  return x.prefix == y.prefix && x.period == y.period;
}

Convergents convergents(const FrequencySpec& spec, int N) {
  spec.validate();
  if (N < 0) throw std::invalid_argument("N must be >= 0");
  Convergents c;
  c.p.reserve(N + 2);
  c.q.reserve(N + 2);
  c.p.push_back(1);  // p_{-1}
  c.q.push_back(0);  // q_{-1}
  c.p.push_back(0);  // p_0
  c.q.push_back(1);  // q_0
  for (int n = 1; n <= N; ++n) {
    const int a = spec.quotient(n);
    c.p.push_back(a * c.p[n] + c.p[n - 1]);
    c.q.push_back(a * c.q[n] + c.q[n - 1]);
  }
  return c;
}

FrequencySpec check_alpha(const std::vector<int>& period) {
  FrequencySpec s{{1}, period};
  s.validate();
  return s;
}

double value(const FrequencySpec& spec, double precision) {
  using boost::multiprecision::cpp_rational;
  if (!(precision > 0)) throw std::invalid_argument("precision must be positive");
  spec.validate();
  // alpha > 1/(b_1 + 1) >= 1/(max quotient + 1), so 1/q_n^2 < precision/(amax+1) suffices.
  int amax = 1;
  for (int x : spec.prefix) amax = std::max(amax, x);
  for (int x : spec.period) amax = std::max(amax, x);
  const double need = precision / (amax + 1);
  int n = 1;
  for (;; n *= 2) {
    Convergents c = convergents(spec, n);
    const double qn = c.Q(n).convert_to<double>();
    if (1.0 / (qn * qn) < need) {
      cpp_rational r(c.P(n), c.Q(n));
      return r.convert_to<double>();
    }
  }
}

std::string to_string(const FrequencySpec& spec) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < spec.prefix.size(); ++i) os << spec.prefix[i] << ',';
  os << "overline{";
  for (std::size_t i = 0; i < spec.period.size(); ++i) {
    if (i) os << ',';
    os << spec.period[i];
  }
  os << "}]";
  return os.str();
}

}  // namespace sturm
