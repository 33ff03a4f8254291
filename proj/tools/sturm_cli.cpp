#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sturm/bands.hpp"
#include "sturm/characteristics.hpp"
#include "sturm/errors.hpp"
#include "sturm/json_io.hpp"
#include "sturm/thermo.hpp"
#include "sturm/verify.hpp"

using namespace sturm;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kBudget = 2, kInvariant = 3 };

struct RunConfig {
  std::string a = "1";
  double lambda = 24;
  int levels = -1;  // auto
  std::string format = "json";
  std::string out;
  std::uint64_t seed = 1;
  int threads = 1;
  double s_min = -1, s_max = 2;
  int steps = 61;
  int beta_steps = 21;
  bool deep = false;
  std::string only;
  bool no_sweep = false;
};

std::size_t env_cap(const char* name, std::size_t fallback) {
  if (const char* v = std::getenv(name)) {
    try {
      const long long x = std::stoll(v);
      if (x > 0) return static_cast<std::size_t>(x);
    } catch (const std::exception&) {
    }
  }
  return fallback;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + cfg.out);
  f << text;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--a", cfg.a, "period block, comma-separated positive integers")->capture_default_str();
  sub->add_option("--lambda", cfg.lambda, "coupling constant (> 20)")
      ->capture_default_str()
      ->check([](const std::string& s) -> std::string {
        double v = 0;
        try {
          std::size_t pos = 0;
          v = std::stod(s, &pos);
          if (pos != s.size()) return "lambda must be a decimal number";
        } catch (const std::exception&) {
          return "lambda must be a decimal number";
        }
        return v > 20 ? std::string() : "lambda must exceed 20";
      });
  sub->add_option("--levels", cfg.levels, "level depth (default: from the budget)");
  sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  sub->add_option("--out", cfg.out, "output file (default stdout)");
  sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  sub->add_option("--threads", cfg.threads, "worker cap")->check(CLI::PositiveNumber)->capture_default_str();
}

// #Omega^alpha_n by dynamic programming over the last letter type
BigInt band_count(const FrequencySpec& spec, int n) {
  std::array<BigInt, 4> c{0, 1, 0, 1};
  for (int l = 1; l <= n; ++l) {
    std::array<BigInt, 4> nx{0, 0, 0, 0};
    for (const Letter& e : alphabet(spec.quotient(l)))
      for (int t = 1; t <= 3; ++t)
        if (admissible(t, e)) nx[e.type] += c[t];
    c = nx;
  }
  return c[1] + c[2] + c[3];
}

int cmd_bands(const RunConfig& cfg) {
  const std::vector<int> a = parse_period(cfg.a);
  const FrequencySpec spec = check_alpha(a);
  const std::size_t cap = env_cap("STURM_BAND_CAP", 20000);
  int levels = cfg.levels;
  if (levels < 0) {
    levels = 0;
    while (levels < 60 && band_count(spec, levels + 1) <= cap) ++levels;
  }
  auto tree = shared_tree(spec, cfg.lambda);
  std::vector<std::vector<BandTree::Id>> per_level;
  bool partial = false;
  for (int l = 0; l <= levels; ++l) {
    if (band_count(spec, l) > cap) {
      partial = true;
      break;
    }
    std::vector<BandTree::Id> ids = tree->level(l, cap, cfg.threads);
    std::sort(ids.begin(), ids.end(), [&](BandTree::Id x, BandTree::Id y) { return tree->band(x).lo < tree->band(y).lo; });
    per_level.push_back(std::move(ids));
  }
  std::ostringstream os;
  if (cfg.format == "csv") {
    os << csv_header_bands() << '\n';
    for (const auto& ids : per_level)
      for (BandTree::Id id : ids) os << to_csv(tree->band(id)) << '\n';
  } else {
    Json j;
    Json arr = Json::array();
    j["a"] = a;
    j["lambda"] = decimal(cfg.lambda);
    j["levels"] = static_cast<int>(per_level.size()) - 1;
    j["requested_levels"] = levels;
    j["partial"] = partial;
    for (const auto& ids : per_level)
      for (BandTree::Id id : ids) arr.push_back(to_json(tree->band(id)));
    j["bands"] = arr;
    os << j.dump(2) << '\n';
  }
  emit(cfg, os.str());
  if (partial) {
    std::cerr << "band budget (" << cap << " per level) exhausted after level " << per_level.size() - 1 << '\n';
    return kBudget;
  }
  return kOk;
}

int cmd_pressure(const RunConfig& cfg) {
  if (!(cfg.s_min < cfg.s_max) || cfg.steps < 2) throw std::invalid_argument("need s-min < s-max and steps >= 2");
  const std::vector<int> a = parse_period(cfg.a);
  PressureModel m(a, cfg.lambda, std::max(0, cfg.levels), cfg.threads);
  const PressureCurve c = pressure_curve(m, cfg.s_min, cfg.s_max, cfg.steps);
  const Characteristics ch = compute_characteristics(a, cfg.lambda, m.depth(), cfg.threads);
  std::ostringstream os;
  if (cfg.format == "csv") {
    os << "s,P,P_err,dP\n";
    for (const PressurePoint& p : c.grid)
      os << decimal(p.s) << ',' << decimal(p.P) << ',' << decimal(p.P_err) << ',' << decimal(p.dP) << '\n';
  } else {
    Json j = to_json(c);
    j["P0"] = decimal(ch.P0);
    j["dP0"] = decimal(ch.dP0);
    // abscissae of the tangent/intersection construction
    j["gamma"] = decimal(ch.gamma);
    j["d"] = decimal(ch.d);
    j["D"] = decimal(ch.D);
    j["T"] = decimal(ch.T);
    os << j.dump(2) << '\n';
  }
  emit(cfg, os.str());
  if (c.partial) {
    std::cerr << "word budget exhausted; curve computed at depth " << c.depth << '\n';
    return kBudget;
  }
  return kOk;
}

int cmd_chars(const RunConfig& cfg) {
  const std::vector<int> a = parse_period(cfg.a);
  const Characteristics c = compute_characteristics(a, cfg.lambda, std::max(0, cfg.levels), cfg.threads);
  Json j = to_json(c);
  j["seed"] = cfg.seed;
  emit(cfg, j.dump(2) + "\n");
  if (!c.chain) {
    std::cerr << "strict chain gamma < d < D < T failed\n";
    return kInvariant;
  }
  if (c.partial) return kBudget;
  return kOk;
}

int cmd_asymptotics(const RunConfig& cfg) {
  const std::vector<int> a = parse_period(cfg.a);
  const AsymptoticConstants c = asymptotic_constants(a, !cfg.no_sweep, {1e2, 1e3, 1e4}, std::max(0, cfg.levels));
  emit(cfg, to_json(c).dump(2) + "\n");
  if (!c.chain) {
    std::cerr << "asymptotic constants violate 0 < rho_gamma <= rho_d <= rho_D <= rho_T\n";
    return kInvariant;
  }
  return kOk;
}

int cmd_multifractal(const RunConfig& cfg) {
  if (cfg.beta_steps < 3) throw std::invalid_argument("beta-steps must be >= 3");
  const std::vector<int> a = parse_period(cfg.a);
  PressureModel m(a, cfg.lambda, std::max(0, cfg.levels), cfg.threads);
  const auto L = local_dimension_range(m);
  std::vector<double> betas;
  for (int i = 0; i < cfg.beta_steps; ++i)
    betas.push_back(L.first + (L.second - L.first) * (i + 1) / (cfg.beta_steps + 1));
  const auto pts = multifractal_spectrum(m, betas);
  std::ostringstream os;
  if (cfg.format == "csv") {
    os << "beta,dim,q,limit\n";
    for (const auto& p : pts) os << decimal(p.beta) << ',' << decimal(p.dim) << ',' << decimal(p.q) << ',' << p.limit << '\n';
  } else {
    Json j;
    j["a"] = a;
    j["lambda"] = decimal(cfg.lambda);
    j["precision"] = kDecimalDigits;
    j["L"] = {decimal(L.first), decimal(L.second)};
    j["points"] = to_json(pts);
    os << j.dump(2) << '\n';
  }
  emit(cfg, os.str());
  return m.partial() ? kBudget : kOk;
}

int cmd_verify(const RunConfig& cfg) {
  SuiteConfig sc;
  sc.a = parse_period(cfg.a);
  sc.lambda = cfg.lambda;
  sc.deep = cfg.deep;
  sc.only = cfg.only;
  sc.threads = cfg.threads;
  const auto reports = run_suite(sc);
  Json arr = Json::array();
  bool ok = !reports.empty();
  for (const AuditReport& r : reports) {
    arr.push_back(to_json(r));
    ok = ok && r.pass;
  }
  emit(cfg, arr.dump(2) + "\n");
  return ok ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral bands, pressure and spectral characteristics of Sturm Hamiltonians"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* bands = app.add_subcommand("bands", "emit the band covering to a level");
  add_common(bands, cfg);

  auto* pressure = app.add_subcommand("pressure", "pressure curve with the tangent/intersection abscissae");
  add_common(pressure, cfg);
  pressure->add_option("--s-min", cfg.s_min)->capture_default_str();
  pressure->add_option("--s-max", cfg.s_max)->capture_default_str();
  pressure->add_option("--steps", cfg.steps)->capture_default_str();

  auto* chars = app.add_subcommand("chars", "gamma, d, D, T");
  add_common(chars, cfg);

  auto* asym = app.add_subcommand("asymptotics", "large-coupling constants");
  add_common(asym, cfg);
  asym->add_flag("--no-sweep", cfg.no_sweep, "skip the lambda sweep for rho_D");

  auto* mf = app.add_subcommand("multifractal", "dimension spectrum of the density of states");
  add_common(mf, cfg);
  mf->add_option("--beta-steps", cfg.beta_steps)->capture_default_str();

  auto* verify = app.add_subcommand("verify", "run the audit suite");
  add_common(verify, cfg);
  verify->add_flag("--deep", cfg.deep, "add the larger instances");
  verify->add_option("--only", cfg.only, "run one audit family")
      ->check(CLI::IsMember({"counts", "charpoly", "bands", "covariation", "mean_cycle", "trace"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (bands->parsed()) return cmd_bands(cfg);
    if (pressure->parsed()) return cmd_pressure(cfg);
    if (chars->parsed()) return cmd_chars(cfg);
    if (asym->parsed()) return cmd_asymptotics(cfg);
    if (mf->parsed()) return cmd_multifractal(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << " (" << e.enumerated << " enumerated)\n";
    return kBudget;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvariant;
  }
  return kOk;
}
