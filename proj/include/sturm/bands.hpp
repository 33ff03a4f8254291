#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <memory>
#include <mutex>
#include <vector>

#include "sturm/bigfloat.hpp"
#include "sturm/errors.hpp"
#include "sturm/symbolic.hpp"
#include "sturm/transfer.hpp"

namespace sturm {

struct Band {
  SymbolWord word;
  int level = 0;
  int type = 1;
  BigFloat lo, hi;
  TraceHandle handle;
  // log2 of the largest transfer-matrix entry seen while isolating this band
  double growth = 0;

  BigFloat length_exact() const { return hi - lo; }
  double length() const { return length_exact().to_double(); }
  double log_length() const { return length_exact().log_abs(); }
};

// [lambda-2, lambda+2] (type 1) and [-2, 2] (type 3)
std::array<Band, 2> root_bands(const TransferContext& ctx);

struct RefineStats {
  std::size_t refines = 0;
  std::size_t grid_doublings = 0;
  std::size_t escalations = 0;
  int max_bits = 0;
};

// Children of a level-n band in ascending energy, with coding letters assigned.
std::vector<Band> refine(const TransferContext& ctx, const Band& parent, int a_next, RefineStats* stats = nullptr);

// Working precision for isolating the children of a band.
int refine_bits(const Band& parent);

class BandTree {
 public:
  using Id = std::size_t;

  explicit BandTree(TransferContext ctx);

  const TransferContext& context() const { return ctx_; }
  Id root(int head) const { return head == 1 ? 0 : 1; }
  const Band& band(Id id) const;
  Id parent(Id id) const;
  // Lazily refines.
  std::vector<Id> children(Id id);
  Id child(Id id, const Letter& e);
  Id find(const SymbolWord& w);
  // All bands at level n in coding order; throws BudgetExceeded past the cap.
  std::vector<Id> level(int n, std::size_t cap = std::numeric_limits<std::size_t>::max(), int threads = 1);
  std::size_t size() const;
  RefineStats stats() const;

 private:
  struct Node {
    Band band;
    Id parent;
    std::vector<Id> children;
    bool refined = false;
  };
  TransferContext ctx_;
  mutable std::mutex mu_;
  std::vector<std::unique_ptr<Node>> nodes_;
  RefineStats stats_;
};

// Process-wide tree per (frequency, lambda).
std::shared_ptr<BandTree> shared_tree(const FrequencySpec& spec, double lambda);

Band band_for_word(const TransferContext& ctx, const SymbolWord& w);

struct LevelExtremes {
  double min_length = 0, max_length = 0;
  double log_min = 0, log_max = 0;
  SymbolWord argmin, argmax;
  std::size_t count = 0;
};

LevelExtremes level_extremes(BandTree& tree, int n, std::size_t cap = std::numeric_limits<std::size_t>::max());
LevelExtremes level_extremes(const TransferContext& ctx, int n,
                             std::size_t cap = std::numeric_limits<std::size_t>::max());

struct LengthBounds {
  double log_lower = 0;
  double log_upper = 0;
};

LengthBounds length_bounds(const TransferContext& ctx, const SymbolWord& w);
bool length_bounds_audit(const TransferContext& ctx, const Band& band);

}  // namespace sturm
