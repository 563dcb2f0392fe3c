#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

namespace nlsgs {

enum class Sense { AtMost, AtLeast };

/// One verdict: a measured value against a limit.
struct Check {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  Sense sense = Sense::AtMost;

  /// Signed distance to the limit, positive when passing.
  double margin() const { return sense == Sense::AtMost ? limit - value : value - limit; }
  bool pass() const { return std::isfinite(value) && margin() >= 0.0; }

  std::string line() const {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s %s: value=%.6g %s %.6g margin=%.3g", pass() ? "PASS" : "FAIL", name.c_str(),
                  value, sense == Sense::AtMost ? "<=" : ">=", limit, margin());
    return buf;
  }

  nlohmann::json to_json() const {
    return {{"name", name}, {"value", std::isfinite(value) ? nlohmann::json(value) : nlohmann::json(nullptr)},
            {"limit", limit}, {"sense", sense == Sense::AtMost ? "at_most" : "at_least"}, {"pass", pass()}};
  }
};

inline Check at_most(std::string name, double value, double limit) { return {std::move(name), value, limit, Sense::AtMost}; }
inline Check at_least(std::string name, double value, double limit) { return {std::move(name), value, limit, Sense::AtLeast}; }
inline Check holds(std::string name, bool ok) { return {std::move(name), ok ? 1.0 : 0.0, 1.0, Sense::AtLeast}; }

inline bool all_pass(const std::vector<Check>& cs) {
  for (const auto& c : cs)
    if (!c.pass()) return false;
  return true;
}

}  // namespace nlsgs
