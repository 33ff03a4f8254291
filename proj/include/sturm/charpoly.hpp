#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sturm/symbolic.hpp"

namespace sturm {

// Coefficients of det(x I - M), lowest degree first.
using IntPoly = std::vector<BigInt>;
using BigMatrix = std::vector<std::vector<BigInt>>;

// Exact, O(N^4) big-integer operations.
IntPoly charpoly_faddeev(const BigMatrix& m);
// Exact: Hessenberg reduction modulo enough primes to cover a Hadamard bound, then CRT.
IntPoly charpoly_multimodular(const std::vector<std::vector<std::int64_t>>& m);

IntPoly charpoly(const Mat3& m);
IntPoly charpoly(const Mat2& m);

IntPoly poly_mul(const IntPoly& x, const IntPoly& y);
IntPoly poly_shift(const IntPoly& x, int k);  // x * X^k
void poly_trim(IntPoly& x);
// Divide by (X - r); returns quotient, sets remainder.
IntPoly poly_div_linear(const IntPoly& x, const BigInt& r, BigInt& remainder);
std::string to_string(const IntPoly& p);

struct CharpolyCheck {
  int N = 0;
  IntPoly full;     // charpoly(A_a)
  IntPoly reduced;  // charpoly(hat A_a)
  IntPoly b;        // charpoly(B_a)
  bool identity = false;  // full == X^{N-3} reduced
  bool factor = false;    // reduced == (X - (-1)^k) * b
};

CharpolyCheck charpoly_check(const std::vector<int>& a);
bool charpoly_identity(const std::vector<int>& a);

}  // namespace sturm
