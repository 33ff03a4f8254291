#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "sturm/bands.hpp"
#include "sturm/characteristics.hpp"
#include "sturm/thermo.hpp"
#include "sturm/verify.hpp"

namespace sturm {

using Json = nlohmann::ordered_json;

inline constexpr int kDecimalDigits = 17;

// "%.17g", locale independent
std::string decimal(double x);
std::vector<int> parse_period(const std::string& s);

Json to_json(const Band& b);
std::string csv_header_bands();
std::string to_csv(const Band& b);

Json to_json(const PressureCurve& c);
Json to_json(const Characteristics& c);
Json to_json(const AsymptoticConstants& c);
Json to_json(const std::vector<MultifractalPoint>& pts);
Json to_json(const AuditReport& r);

}  // namespace sturm
