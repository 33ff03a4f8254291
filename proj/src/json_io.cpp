#include "sturm/json_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace sturm {

namespace {

Json period_json(const std::vector<int>& a) {
  Json j = Json::array();
  for (int x : a) j.push_back(x);
  return j;
}

Json decimals(const std::vector<double>& v) {
  Json j = Json::array();
  for (double x : v) j.push_back(decimal(x));
  return j;
}

Json block_word_json(const std::vector<int>& a, const BlockWord& w) { return to_string(a, w); }

}  // namespace

std::string decimal(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, kDecimalDigits);
  return std::string(buf, res.ptr);
}

std::vector<int> parse_period(const std::string& s) {
  std::vector<int> a;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    int v = 0;
    const auto res = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || res.ec != std::errc() || res.ptr != part.data() + part.size() || v < 1)
      throw std::invalid_argument("period entries must be positive integers: '" + s + "'");
    a.push_back(v);
  }
  if (a.empty()) throw std::invalid_argument("empty period");
  return a;
}

Json to_json(const Band& b) {
  Json j;
  j["word"] = to_string(b.word);
  j["level"] = b.level;
  j["type"] = b.type;
  j["lo"] = b.lo.str();
  j["hi"] = b.hi.str();
  j["length"] = b.length_exact().str();
  return j;
}

std::string csv_header_bands() { return "word,level,type,lo,hi,length"; }

std::string to_csv(const Band& b) {
  std::ostringstream os;
  os << to_string(b.word) << ',' << b.level << ',' << b.type << ',' << b.lo.str() << ',' << b.hi.str() << ','
     << b.length_exact().str();
  return os.str();
}

Json to_json(const PressureCurve& c) {
  Json j;
  j["a"] = period_json(c.a);
  j["lambda"] = decimal(c.lambda);
  j["precision"] = kDecimalDigits;
  j["depth"] = c.depth;
  j["partial"] = c.partial;
  Json grid = Json::array();
  for (const PressurePoint& p : c.grid) {
    Json g;
    g["s"] = decimal(p.s);
    g["P_n"] = decimals(p.P_n);
    g["P"] = decimal(p.P);
    g["P_err"] = decimal(p.P_err);
    g["dP"] = decimal(p.dP);
    grid.push_back(g);
  }
  j["grid"] = grid;
  j["Pprime_minus_inf"] = decimal(c.limits.minus_inf);
  j["Pprime_plus_inf"] = decimal(c.limits.plus_inf);
  j["Pprime_brackets"] = {{"minus_inf", {decimal(c.limits.minus_lo), decimal(c.limits.minus_hi)}},
                          {"plus_inf", {decimal(c.limits.plus_lo), decimal(c.limits.plus_hi)}},
                          {"far_field_minus", decimal(c.limits.far_minus)},
                          {"far_field_plus", decimal(c.limits.far_plus)},
                          {"consistent", c.limits.consistent}};
  j["bowen_root"] = decimal(c.bowen.D);
  j["bowen_residual"] = decimal(c.bowen.residual);
  return j;
}

Json to_json(const Characteristics& c) {
  Json j;
  j["a"] = period_json(c.a);
  j["lambda"] = decimal(c.lambda);
  j["precision"] = kDecimalDigits;
  j["gamma"] = decimal(c.gamma);
  j["d"] = decimal(c.d);
  j["D"] = decimal(c.D);
  j["T"] = decimal(c.T);
  j["errors"] = {{"gamma", decimal(c.gamma_err)}, {"d", decimal(c.d_err)}, {"D", decimal(c.D_err)},
                 {"T", decimal(c.T_err)}};
  j["P0"] = decimal(c.P0);
  j["dP0"] = decimal(c.dP0);
  j["Pprime_minus_inf"] = decimal(c.Pprime_minus_inf);
  j["Pprime_plus_inf"] = decimal(c.Pprime_plus_inf);
  j["depth"] = c.depth;
  j["partial"] = c.partial;
  j["chain"] = c.chain;
  j["margin"] = decimal(c.margin);
  return j;
}

Json to_json(const AsymptoticConstants& c) {
  Json j;
  j["a"] = period_json(c.a);
  j["precision"] = kDecimalDigits;
  j["F_lower"] = c.F_lower.str();
  j["F_upper"] = c.F_upper.str();
  j["witness_lower"] = block_word_json(c.a, c.witness_lower);
  j["witness_upper"] = block_word_json(c.a, c.witness_upper);
  j["E"] = {{"exact", c.E.str()}, {"value", decimal(c.E.to_double())}};
  j["parry_integral"] = {{"exact", c.parry_f.str()}, {"value", decimal(c.parry_f.to_double())}};
  auto constant = [](const ExactConstant& e) { return Json{{"exact", e.exact}, {"value", decimal(e.value)}}; };
  j["rho_gamma"] = constant(c.rho_gamma);
  j["rho_d"] = constant(c.rho_d);
  j["rho_T"] = constant(c.rho_T);
  Json sweep = Json::array();
  for (const SweepPoint& p : c.sweep)
    sweep.push_back({{"lambda", decimal(p.lambda)},
                     {"D", decimal(p.D)},
                     {"D_log_lambda", decimal(p.D_log_lambda)},
                     {"depth", p.depth}});
  if (c.sweep.empty())
    j["rho_D"] = nullptr;
  else
    j["rho_D"] = {{"estimate", decimal(c.rho_D)}, {"sweep", sweep}};
  j["chain"] = c.chain;
  return j;
}

Json to_json(const std::vector<MultifractalPoint>& pts) {
  Json j = Json::array();
  for (const MultifractalPoint& p : pts)
    j.push_back({{"beta", decimal(p.beta)}, {"dim", decimal(p.dim)}, {"q", decimal(p.q)}, {"limit", p.limit}});
  return j;
}

Json to_json(const AuditReport& r) {
  Json j;
  j["name"] = r.name;
  j["instance"] = r.instance;
  j["pass"] = r.pass;
  j["witnesses"] = r.witnesses;
  j["detail"] = r.detail;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", r.seconds);
  j["seconds"] = buf;
  return j;
}

}  // namespace sturm
