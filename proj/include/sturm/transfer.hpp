#pragma once

#include <memory>
#include <utility>

#include "sturm/bigfloat.hpp"
#include "sturm/frequency.hpp"

namespace sturm {

struct TransferContext {
  FrequencySpec spec;
  double lambda = 24;
  int bits = 53;

  TransferContext() = default;
  TransferContext(FrequencySpec s, double lam, int b = 53);
};

// Generating polynomial h_{(m,p)}(E) = tr(M_{m-1}(E) M_m(E)^p)
struct TraceHandle {
  int m = 0;
  int p = 0;
  bool operator==(const TraceHandle&) const = default;
};

double trace(const TransferContext& ctx, int n, int p, double E);
// Evaluated at max(ctx.bits, E.bits()) bits.
BigFloat trace(const TransferContext& ctx, int n, int p, const BigFloat& E);

// Evaluates the two child polynomials of a level-n parent,
// tr(M_n M_{n+1}) and tr(M_{n+1}), at E = lo + t*(hi-lo).
class ChildEvaluator {
 public:
  ChildEvaluator(const TransferContext& ctx, int level, int bits, const BigFloat& lo, const BigFloat& hi);
  ~ChildEvaluator();
  ChildEvaluator(const ChildEvaluator&) = delete;
  ChildEvaluator& operator=(const ChildEvaluator&) = delete;

  std::pair<double, double> operator()(double t);
  // E(t) at the working precision
  BigFloat energy(double t) const;
  int bits() const { return bits_; }
  // largest |matrix entry| seen in the last evaluation (log2)
  double log2_max_entry() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int bits_;
};

// log2 of the largest matrix entry met while building M_0..M_{n+1} at E (double arithmetic).
double log2_entry_growth(const TransferContext& ctx, int n, double E);

}  // namespace sturm
