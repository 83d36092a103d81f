#pragma once

#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "apptsched/errors.hpp"
#include "apptsched/model.hpp"

namespace apptsched {

// Flat key-value form: alpha, p, mu, horizon, cs2, service_law, cw, co.
inline nlohmann::json params_to_json(const ModelParams& prm) {
  return {{"alpha", prm.alpha}, {"p", prm.p},     {"mu", prm.mu},
          {"horizon", prm.horizon}, {"cs2", prm.cs2}, {"service_law", std::string(to_string(prm.service_law))},
          {"cw", prm.cw},       {"co", prm.co}};
}

inline ModelParams params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DomainError("params must be a JSON object");
  static const char* const kKeys[] = {"alpha", "p", "mu", "horizon", "cs2", "service_law", "cw", "co"};
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : kKeys) known = known || key == k;
    if (!known) throw DomainError("unknown params key '" + key + "'");
  }
  auto number = [&](const char* key) -> double {
    if (!j.contains(key)) throw DomainError(std::string("missing params key '") + key + "'");
    const auto& v = j.at(key);
    if (!v.is_number()) throw DomainError(std::string("params key '") + key + "' must be a number");
    return v.get<double>();
  };
  ModelParams prm;
  prm.alpha = number("alpha");
  prm.p = number("p");
  prm.mu = number("mu");
  prm.horizon = number("horizon");
  prm.cw = number("cw");
  prm.co = number("co");
  prm.service_law = j.contains("service_law") ? parse_service_law(j.at("service_law").get<std::string>())
                                              : ServiceLaw::Gamma;
  if (j.contains("cs2")) {
    prm.cs2 = number("cs2");
  } else if (prm.service_law == ServiceLaw::Exponential) {
    prm.cs2 = 1.0;
  } else if (prm.service_law == ServiceLaw::Deterministic) {
    prm.cs2 = 0.0;
  } else {
    throw DomainError("missing params key 'cs2'");
  }
  return validate_params(prm);
}

// Shortest round-trip-safe text for a double: 17 significant digits.
inline std::string format_real(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

// One appointment time per line.
inline void write_schedule_csv(std::ostream& os, const Schedule& schedule) {
  for (const double t : schedule.times()) os << format_real(t) << '\n';
}

inline Schedule read_schedule_csv(std::istream& is, double horizon) {
  std::vector<double> times;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::size_t used = 0;
    double t = 0.0;
    try {
      t = std::stod(line, &used);
    } catch (const std::exception&) {
      throw DomainError("bad schedule line '" + line + "'");
    }
    if (line.find_first_not_of(" \t\r", used) != std::string::npos) {
      throw DomainError("bad schedule line '" + line + "'");
    }
    times.push_back(t);
  }
  return Schedule(std::move(times), horizon);
}

inline Schedule read_schedule_csv(const std::string& path, double horizon) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open schedule file '" + path + "'");
  return read_schedule_csv(in, horizon);
}

}  // namespace apptsched
