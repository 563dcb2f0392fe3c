#pragma once

#include <initializer_list>
#include <string>

#include <json.hpp>

#include "nonlinearity.hpp"

namespace nlsgs {

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                                const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw std::invalid_argument(where + ": unknown key '" + key + "'");
  }
}

inline std::size_t component_from_json(const nlohmann::json& t) {
  const int j = t.at("j").get<int>();
  if (j < 1) throw std::invalid_argument("term: component index j is 1-based");
  return static_cast<std::size_t>(j - 1);
}

}  // namespace detail

inline nlohmann::json term_to_json(const NonlinearTerm& term) {
  using nlohmann::json;
  return std::visit(
      [](const auto& t) -> json {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, PowerTerm>)
          return {{"kind", "power"}, {"j", t.component + 1}, {"nu", t.nu}, {"p", t.p}};
        else if constexpr (std::is_same_v<T, ProductTerm>)
          return {{"kind", "product"}, {"alpha", t.alpha}, {"r", t.r}};
        else if constexpr (std::is_same_v<T, MinIntegralTerm>)
          return {{"kind", "min_integral"}, {"j", t.component + 1}, {"p", t.p}};
        else if constexpr (std::is_same_v<T, PiecewiseCriticalTerm>)
          return {{"kind", "piecewise_critical"}, {"j", t.component + 1}};
        else if constexpr (std::is_same_v<T, LogCuspTerm>)
          return {{"kind", "log_cusp"}, {"j", t.component + 1}};
        else
          return {{"kind", "tabulated"}, {"j", t.component + 1}, {"t", t.t}, {"F", t.value}, {"dF", t.slope}};
      },
      term);
}

inline NonlinearTerm term_from_json(const nlohmann::json& t) {
  const std::string kind = t.at("kind").get<std::string>();
  if (kind == "power") {
    detail::reject_unknown_keys(t, {"kind", "j", "nu", "p"}, "power term");
    return PowerTerm{detail::component_from_json(t), t.value("nu", 1.0), t.at("p").get<double>()};
  }
  if (kind == "product") {
    detail::reject_unknown_keys(t, {"kind", "alpha", "r"}, "product term");
    return ProductTerm{t.at("alpha").get<double>(), t.at("r").get<std::vector<double>>()};
  }
  if (kind == "min_integral") {
    detail::reject_unknown_keys(t, {"kind", "j", "p"}, "min_integral term");
    return MinIntegralTerm{detail::component_from_json(t), t.at("p").get<double>()};
  }
  if (kind == "piecewise_critical") {
    detail::reject_unknown_keys(t, {"kind", "j"}, "piecewise_critical term");
    return PiecewiseCriticalTerm{detail::component_from_json(t)};
  }
  if (kind == "log_cusp") {
    detail::reject_unknown_keys(t, {"kind", "j"}, "log_cusp term");
    return LogCuspTerm{detail::component_from_json(t)};
  }
  if (kind == "tabulated") {
    detail::reject_unknown_keys(t, {"kind", "j", "t", "F", "dF"}, "tabulated term");
    return TabulatedTerm{detail::component_from_json(t), t.at("t").get<std::vector<double>>(),
                         t.at("F").get<std::vector<double>>(), t.at("dF").get<std::vector<double>>()};
  }
  throw std::invalid_argument("unknown term kind '" + kind + "'");
}

inline nlohmann::json nonlinearity_to_json(const Nonlinearity& F) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : F.terms()) terms.push_back(term_to_json(t));
  return {{"M", F.components()}, {"N", F.dimension()}, {"form", to_string(F.form())}, {"terms", terms}};
}

inline Nonlinearity nonlinearity_from_json(const nlohmann::json& j) {
  detail::reject_unknown_keys(j, {"M", "N", "form", "terms"}, "nonlinearity");
  std::vector<NonlinearTerm> terms;
  for (const auto& t : j.at("terms")) terms.push_back(term_from_json(t));
  const auto M = j.at("M").get<std::size_t>();
  const StructuralForm form =
      j.contains("form") ? structural_form_from_string(j.at("form").get<std::string>())
                         : (M == 1 ? StructuralForm::Single : StructuralForm::Generic);
  return Nonlinearity(j.at("N").get<int>(), M, std::move(terms), form);
}

}  // namespace nlsgs
