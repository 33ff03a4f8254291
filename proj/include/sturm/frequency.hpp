#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace sturm {

using BigInt = boost::multiprecision::cpp_int;

// alpha = [b_1..b_m, overline{a_1..a_k}]
struct FrequencySpec {
  std::vector<int> prefix;
  std::vector<int> period;

  int k() const { return static_cast<int>(period.size()); }
  // n-th partial quotient, n >= 1
  int quotient(int n) const;
  void validate() const;
};

bool operator==(const FrequencySpec& x, const FrequencySpec& y);

// p_n, q_n for n = -1..N, stored at offset +1.
struct Convergents {
  std::vector<BigInt> p;
  std::vector<BigInt> q;

  int last() const { return static_cast<int>(q.size()) - 2; }
  const BigInt& P(int n) const { return p.at(n + 1); }
  const BigInt& Q(int n) const { return q.at(n + 1); }
};

Convergents convergents(const FrequencySpec& spec, int N);

// [1, overline{a}]
FrequencySpec check_alpha(const std::vector<int>& period);

double value(const FrequencySpec& spec, double precision);

std::string to_string(const FrequencySpec& spec);

}  // namespace sturm
