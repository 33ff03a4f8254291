#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sturm/thermo.hpp"
#include "sturm/transfer.hpp"

namespace sturm {

struct AuditReport {
  std::string name;      // counts | charpoly | bands | covariation | mean_cycle | trace
  std::string instance;  // e.g. "a=(1) n=6"
  bool pass = false;
  std::vector<std::string> witnesses;  // first failures
  std::string detail;
  double seconds = 0;
};

AuditReport audit_counts(const std::vector<int>& a, int n);
AuditReport audit_charpoly(const std::vector<int>& a);
AuditReport audit_bands(const std::vector<int>& a, double lambda, int levels);
AuditReport audit_mean_cycle(const std::vector<int>& a);
AuditReport audit_trace(const TransferContext& ctx, int n_max);

struct CovariationAudit {
  AuditReport report;
  std::size_t samples = 0;
  double min_ratio = 0, max_ratio = 0;
  double eta_hat = 0;  // max(max_ratio, 1/min_ratio)
};

// Samples w, w~ of equal level and type plus a common extension u and records
// (|B_wu|/|B_w|) / (|B_w~u|/|B_w~|); fails on ratios outside [1/eta, eta].
CovariationAudit audit_covariation(const std::vector<int>& a, double lambda, std::size_t samples, double eta,
                                   std::uint64_t seed = 1, int max_level = 6, int max_extension = 3);

// Min and max cycle means over all simple cycles; empty if more than cap cycles.
std::optional<std::pair<Rational, Rational>> simple_cycle_means(const std::vector<int>& a,
                                                                std::size_t cap = 5000000);
// Min and max of (closed-walk weight)/(length) over all closed walks of length <= #A_a.
std::pair<Rational, Rational> closed_walk_means(const std::vector<int>& a);

// T(v_q)...T(v_1) over the first `sites` sites of the Sturmian potential, row major.
std::array<double, 4> site_matrix(const FrequencySpec& spec, double lambda, long sites, double E);
double site_trace(const FrequencySpec& spec, double lambda, long sites, double E);

struct SuiteConfig {
  std::vector<int> a = {1};
  double lambda = 24;
  bool deep = false;
  std::string only;  // empty: all
  int threads = 1;
};

// Reports in canonical (name, instance) order.
std::vector<AuditReport> run_suite(const SuiteConfig& cfg);

}  // namespace sturm
