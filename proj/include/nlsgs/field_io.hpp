#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "grid.hpp"

namespace nlsgs {

using json = nlohmann::json;

inline json domain_to_json(const Domain& d) {
  return {{"kind", to_string(d.kind())}, {"N", d.dimension()}, {"r_max", d.extent()}, {"n_points", d.points_per_axis()}};
}

inline Domain domain_from_json(const json& j) {
  for (const auto& [key, _] : j.items())
    if (key != "kind" && key != "N" && key != "r_max" && key != "n_points")
      throw std::invalid_argument("domain: unknown key '" + key + "'");
  const DomainKind kind = domain_kind_from_string(j.at("kind").get<std::string>());
  const double extent = j.at("r_max").get<double>();
  const auto n = j.at("n_points").get<std::size_t>();
  switch (kind) {
    case DomainKind::RadialN: return Domain::radial(j.at("N").get<int>(), extent, n);
    case DomainKind::BiRadial:
      if (j.contains("N") && j.at("N").get<int>() != 4) throw std::invalid_argument("BiRadial domains have N = 4");
      return Domain::biradial(extent, n);
    case DomainKind::PeriodicBox1D: return Domain::periodic_box(extent, n);
  }
  throw std::invalid_argument("domain: bad kind");
}

inline json field_to_json(const Field& u) { return {{"domain", domain_to_json(u.domain())}, {"components", u.data()}}; }

inline Field field_from_json(const json& j) {
  return Field(domain_from_json(j.at("domain")), j.at("components").get<std::vector<std::vector<double>>>());
}

/// One row per node: coordinates then components.
inline std::string field_to_csv(const Field& u) {
  std::ostringstream os;
  os << std::setprecision(17);
  const Domain& d = u.domain();
  const bool bi = d.kind() == DomainKind::BiRadial;
  os << (bi ? "r1,r2" : d.kind() == DomainKind::PeriodicBox1D ? "x" : "r");
  for (std::size_t j = 0; j < u.components(); ++j) os << ",u" << j + 1;
  os << '\n';
  const std::size_t n = d.points_per_axis();
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (bi)
      os << d.axis()[k / n] << ',' << d.axis()[k % n];
    else
      os << d.axis()[k];
    for (std::size_t j = 0; j < u.components(); ++j) os << ',' << u[j][k];
    os << '\n';
  }
  return os.str();
}

/// Write through a temporary file in the same directory, then rename.
inline void write_atomic(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << text;
    f.flush();
    if (!f) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace nlsgs
