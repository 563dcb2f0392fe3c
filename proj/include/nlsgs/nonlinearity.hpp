#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <boost/math/interpolators/cubic_hermite.hpp>

namespace nlsgs {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// L2-critical exponent 2 + 4/N.
inline double critical_exponent(int N) { return 2.0 + 4.0 / N; }

/// Sobolev exponent 2N/(N-2); infinite for N <= 2.
inline double sobolev_exponent(int N) { return N <= 2 ? kInf : 2.0 * N / (N - 2.0); }

// Single-component terms act on component `component` (0-based).

/// (nu/p)|u_j|^p
struct PowerTerm {
  std::size_t component = 0;
  double nu = 1.0;
  double p = 4.0;
};

/// alpha * prod_j |u_j|^{r_j}; r_j = 0 skips component j.
struct ProductTerm {
  double alpha = 1.0;
  std::vector<double> r;
};

/// F(t) = integral_0^t min{s^{2_#-1}, s^{p-1}} ds.
struct MinIntegralTerm {
  std::size_t component = 0;
  double p = 4.0;
};

/// Critical at zero and at infinity with different coefficients.
struct PiecewiseCriticalTerm {
  std::size_t component = 0;
};

/// -t^2/ln t near zero, compactly supported bump.
struct LogCuspTerm {
  std::size_t component = 0;
};

/// Cubic Hermite profile through samples (t_k, F_k, F'_k), t_0 = 0; linear beyond the last sample.
struct TabulatedTerm {
  std::size_t component = 0;
  std::vector<double> t, value, slope;
};

using NonlinearTerm =
    std::variant<PowerTerm, ProductTerm, MinIntegralTerm, PiecewiseCriticalTerm, LogCuspTerm, TabulatedTerm>;

enum class StructuralForm { Single, FormA, FormB, Generic };

inline std::string to_string(StructuralForm f) {
  switch (f) {
    case StructuralForm::Single: return "single";
    case StructuralForm::FormA: return "a";
    case StructuralForm::FormB: return "b";
    case StructuralForm::Generic: return "generic";
  }
  return "?";
}

inline StructuralForm structural_form_from_string(const std::string& s) {
  if (s == "single") return StructuralForm::Single;
  if (s == "a" || s == "form-a") return StructuralForm::FormA;
  if (s == "b" || s == "form-b") return StructuralForm::FormB;
  if (s == "generic") return StructuralForm::Generic;
  throw std::invalid_argument("unknown structural form '" + s + "'");
}

namespace profile {

struct ValueSlope {
  double value;
  double slope;
};

inline ValueSlope power(double t, double nu, double p) {
  if (t == 0.0) return {0.0, 0.0};
  const double tp1 = std::pow(t, p - 1.0);
  return {nu / p * tp1 * t, nu * tp1};
}

inline ValueSlope min_integral(double t, double p, double q) {
  if (t <= 1.0) {
    const double tq1 = std::pow(t, q - 1.0);
    return {tq1 * t / q, tq1};
  }
  const double tp1 = std::pow(t, p - 1.0);
  return {1.0 / q + (tp1 * t - 1.0) / p, tp1};
}

inline ValueSlope piecewise_critical(double t, double q) {
  if (t <= 1.0) {
    const double tq1 = std::pow(t, q - 1.0);
    return {tq1 * t / q, tq1};
  }
  if (t < 2.0) return {t - 1.0 + 1.0 / q, 1.0};
  const double scale = std::pow(2.0, q - 1.0);
  const double tq1 = std::pow(t, q - 1.0);
  return {tq1 * t / (scale * q) + 1.0 - 1.0 / q, tq1 / scale};
}

inline constexpr double kLogCuspB = 1.0 / std::numbers::ln2;
inline constexpr double kLogCuspC = kLogCuspB * (kLogCuspB + 2.0) / 4.0 + 1.0;

inline ValueSlope log_cusp(double t) {
  constexpr double b = kLogCuspB, c = kLogCuspC;
  if (t <= 0.0 || t >= 2.0 * c) return {0.0, 0.0};
  if (t < 0.5) {
    const double l = std::log(t);
    return {-t * t / l, -2.0 * t / l + t / (l * l)};
  }
  if (t <= 1.0) return {0.5 * b * ((b + 2.0) * t - 0.5 - 0.5 * b), 0.5 * b * (b + 2.0)};
  if (t <= c) return {-t * t + 2.0 * c * t - 1.0 - 0.25 * b * (b + 1.0), -2.0 * t + 2.0 * c};
  const auto m = log_cusp(2.0 * c - t);
  return {m.value, -m.slope};
}

}  // namespace profile

namespace detail {

class TabulatedProfile {
 public:
  explicit TabulatedProfile(const TabulatedTerm& term) {
    const auto& t = term.t;
    if (t.size() < 2 || term.value.size() != t.size() || term.slope.size() != t.size())
      throw std::invalid_argument("tabulated term: need >= 2 samples with matching value/slope arrays");
    if (t.front() != 0.0) throw std::invalid_argument("tabulated term: first sample must be at t = 0");
    if (term.value.front() != 0.0) throw std::invalid_argument("tabulated term: F(0) must be 0");
    for (std::size_t k = 1; k < t.size(); ++k)
      if (!(t[k] > t[k - 1])) throw std::invalid_argument("tabulated term: sample abscissae must increase");
    for (std::size_t k = 0; k < t.size(); ++k)
      if (!std::isfinite(term.value[k]) || !std::isfinite(term.slope[k]))
        throw std::invalid_argument("tabulated term: non-finite sample");
    t_last_ = t.back();
    v_last_ = term.value.back();
    s_last_ = term.slope.back();
    auto x = t, y = term.value, dy = term.slope;
    h_ = std::make_shared<const boost::math::interpolators::cubic_hermite<std::vector<double>>>(
        std::move(x), std::move(y), std::move(dy));
  }

  profile::ValueSlope operator()(double t) const {
    if (t >= t_last_) return {v_last_ + s_last_ * (t - t_last_), s_last_};
    return {(*h_)(t), h_->prime(t)};
  }

 private:
  double t_last_, v_last_, s_last_;
  std::shared_ptr<const boost::math::interpolators::cubic_hermite<std::vector<double>>> h_;
};

}  // namespace detail

/**
 * @brief F : R^M -> R as a sum of catalogued terms, with N fixing 2_#.
 *
 * Every term is even in each argument.  The constructor validates the
 * exponent ranges and the declared structural form; violations throw
 * std::invalid_argument.
 */
class Nonlinearity {
 public:
  Nonlinearity(int N, std::size_t M, std::vector<NonlinearTerm> terms, StructuralForm form = StructuralForm::Generic)
      : N_(N), M_(M), q_(critical_exponent(N)), form_(form), terms_(std::move(terms)) {
    if (N < 1) throw std::invalid_argument("nonlinearity: N must be >= 1");
    if (M < 1) throw std::invalid_argument("nonlinearity: M must be >= 1");
    validate();
    for (const auto& t : terms_)
      tabulated_.push_back(std::holds_alternative<TabulatedTerm>(t)
                               ? std::make_shared<const detail::TabulatedProfile>(std::get<TabulatedTerm>(t))
                               : nullptr);
  }

  /// Convenience: single-component (1/p)|u|^p.
  static Nonlinearity power(int N, double p, double nu = 1.0) {
    return Nonlinearity(N, 1, {PowerTerm{0, nu, p}}, StructuralForm::Single);
  }

  int dimension() const noexcept { return N_; }
  std::size_t components() const noexcept { return M_; }
  double two_sharp() const noexcept { return q_; }
  StructuralForm form() const noexcept { return form_; }
  const std::vector<NonlinearTerm>& terms() const noexcept { return terms_; }

  double value(std::span<const double> u) const {
    check_size(u);
    double f = 0.0;
    for (std::size_t k = 0; k < terms_.size(); ++k) f += term_value(k, u);
    return f;
  }

  std::vector<double> grad(std::span<const double> u) const {
    std::vector<double> g(M_, 0.0);
    value_and_grad(u, g);
    return g;
  }

  /// F(u) and grad F(u) in one pass; g must have size M.
  double value_and_grad(std::span<const double> u, std::span<double> g) const {
    check_size(u);
    std::fill(g.begin(), g.end(), 0.0);
    double f = 0.0;
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      const auto& term = terms_[k];
      if (const auto* pr = std::get_if<ProductTerm>(&term)) {
        f += product_value_grad(*pr, u, g);
        continue;
      }
      const std::size_t j = single_component(term);
      const double t = std::abs(u[j]);
      const auto vs = single_profile(k, t);
      f += vs.value;
      g[j] += u[j] > 0.0 ? vs.slope : u[j] < 0.0 ? -vs.slope : 0.0;
    }
    return f;
  }

  /// g_j(t) = d_jF(t)/t_j for moduli t >= 0, with the limit 0 at t_j = 0.
  void gauge_rates(std::span<const double> t, std::span<double> g) const {
    value_and_grad(t, g);
    for (std::size_t j = 0; j < M_; ++j) g[j] = t[j] > 0.0 ? g[j] / t[j] : 0.0;
  }

  /// Sum of the single-component terms of component j and its derivative at t >= 0.
  profile::ValueSlope additive_profile(std::size_t j, double t) const {
    profile::ValueSlope s{0.0, 0.0};
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      if (std::holds_alternative<ProductTerm>(terms_[k]) || single_component(terms_[k]) != j) continue;
      const auto vs = single_profile(k, t);
      s.value += vs.value;
      s.slope += vs.slope;
    }
    return s;
  }

  /// liminf_{u->0} F(u)/|u|^{2_#} when the catalogue knows it; nullopt otherwise.
  std::optional<double> eta0() const;
  /// limsup_{|u|->inf} F(u)/|u|^{2_#} when the catalogue knows it; nullopt otherwise.
  std::optional<double> eta_inf() const;

  /// True when every single-component profile is nonnegative and nondecreasing on [0, inf)
  /// and every product has alpha >= 0.
  bool monotone_profiles() const {
    for (std::size_t k = 0; k < terms_.size(); ++k)
      if (!monotone_term(k)) return false;
    return true;
  }

 private:
  void check_size(std::span<const double> u) const {
    if (u.size() != M_) throw std::invalid_argument("nonlinearity: argument has wrong number of components");
  }

  static std::size_t single_component(const NonlinearTerm& t) {
    return std::visit(
        [](const auto& x) -> std::size_t {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, ProductTerm>)
            return static_cast<std::size_t>(-1);
          else
            return x.component;
        },
        t);
  }

  profile::ValueSlope single_profile(std::size_t k, double t) const {
    const auto& term = terms_[k];
    if (const auto* p = std::get_if<PowerTerm>(&term)) return profile::power(t, p->nu, p->p);
    if (const auto* p = std::get_if<MinIntegralTerm>(&term)) return profile::min_integral(t, p->p, q_);
    if (std::holds_alternative<PiecewiseCriticalTerm>(term)) return profile::piecewise_critical(t, q_);
    if (std::holds_alternative<LogCuspTerm>(term)) return profile::log_cusp(t);
    return (*tabulated_[k])(t);
  }

  double term_value(std::size_t k, std::span<const double> u) const {
    const auto& term = terms_[k];
    if (const auto* pr = std::get_if<ProductTerm>(&term)) {
      double f = pr->alpha;
      for (std::size_t j = 0; j < M_; ++j)
        if (pr->r[j] != 0.0) f *= std::pow(std::abs(u[j]), pr->r[j]);
      return f;
    }
    return single_profile(k, std::abs(u[single_component(term)])).value;
  }

  double product_value_grad(const ProductTerm& pr, std::span<const double> u, std::span<double> g) const {
    if (pr.alpha == 0.0) return 0.0;
    double f = pr.alpha;
    for (std::size_t j = 0; j < M_; ++j)
      if (pr.r[j] != 0.0) f *= std::pow(std::abs(u[j]), pr.r[j]);
    for (std::size_t i = 0; i < M_; ++i) {
      if (pr.r[i] == 0.0 || u[i] == 0.0) continue;
      double d = pr.alpha * pr.r[i] * std::pow(std::abs(u[i]), pr.r[i] - 1.0);
      for (std::size_t j = 0; j < M_; ++j)
        if (j != i && pr.r[j] != 0.0) d *= std::pow(std::abs(u[j]), pr.r[j]);
      g[i] += u[i] > 0.0 ? d : -d;
    }
    return f;
  }

  bool monotone_term(std::size_t k) const {
    const auto& term = terms_[k];
    if (const auto* p = std::get_if<PowerTerm>(&term)) return p->nu >= 0.0;
    if (const auto* p = std::get_if<ProductTerm>(&term)) return p->alpha >= 0.0;
    if (std::holds_alternative<LogCuspTerm>(term)) return false;
    if (const auto* p = std::get_if<TabulatedTerm>(&term)) {
      for (std::size_t i = 0; i < p->t.size(); ++i) {
        if (p->value[i] < 0.0 || p->slope[i] < 0.0) return false;
        if (i > 0 && p->value[i] < p->value[i - 1]) return false;
      }
      return true;
    }
    return true;
  }

  void validate() const {
    const double two_star = sobolev_exponent(N_);
    for (const auto& term : terms_) {
      if (const auto* pr = std::get_if<ProductTerm>(&term)) {
        if (pr->r.size() != M_) throw std::invalid_argument("product term: exponent list must have M entries");
        if (!(pr->alpha >= 0.0) || !std::isfinite(pr->alpha)) throw std::invalid_argument("product term: alpha must be >= 0");
        double sum = 0.0;
        std::size_t active = 0;
        for (double r : pr->r) {
          if (r == 0.0) continue;
          if (!(r > 1.0) || !std::isfinite(r)) throw std::invalid_argument("product term: active exponents must be > 1");
          sum += r;
          ++active;
        }
        if (active == 0) throw std::invalid_argument("product term: no active component");
        if (!(sum < two_star)) throw std::invalid_argument("product term: total degree must be below 2^*");
        if (std::abs(sum - q_) <= 1e-12 * q_ && !(static_cast<double>(active) < q_))
          throw std::invalid_argument("product term: a critical product needs fewer active components than 2_#");
        continue;
      }
      const std::size_t j = single_component(term);
      if (j >= M_) throw std::invalid_argument("term component index out of range");
      if (const auto* p = std::get_if<PowerTerm>(&term)) {
        if (!std::isfinite(p->nu)) throw std::invalid_argument("power term: nu must be finite");
        if (!(p->p > 2.0 && p->p < two_star)) throw std::invalid_argument("power term: p must lie in (2, 2^*)");
      } else if (const auto* p = std::get_if<MinIntegralTerm>(&term)) {
        if (!(p->p > 2.0 && p->p < q_)) throw std::invalid_argument("min-integral term: p must lie in (2, 2_#)");
      } else if (const auto* p = std::get_if<TabulatedTerm>(&term)) {
        detail::TabulatedProfile check(*p);
      }
    }
    switch (form_) {
      case StructuralForm::Single:
        if (M_ != 1) throw std::invalid_argument("form 'single' requires M = 1");
        break;
      case StructuralForm::FormA: {
        bool coupled = false;
        for (std::size_t k = 0; k < terms_.size(); ++k) {
          if (const auto* pr = std::get_if<ProductTerm>(&terms_[k])) {
            for (double r : pr->r)
              if (r == 0.0) throw std::invalid_argument("form-a: every product must involve all M components");
            coupled = coupled || pr->alpha > 0.0;
          } else if (!monotone_term(k)) {
            throw std::invalid_argument("form-a: single-component profiles must be nonnegative and nondecreasing");
          }
        }
        if (!coupled) throw std::invalid_argument("form-a: needs a product term with alpha > 0");
        break;
      }
      case StructuralForm::FormB: {
        std::vector<char> paired(M_ * M_, 0);
        for (std::size_t k = 0; k < terms_.size(); ++k) {
          if (const auto* pr = std::get_if<ProductTerm>(&terms_[k])) {
            std::vector<std::size_t> act;
            for (std::size_t j = 0; j < M_; ++j)
              if (pr->r[j] != 0.0) act.push_back(j);
            if (act.size() < 2) throw std::invalid_argument("form-b: coupling terms need at least two components");
            if (act.size() == 2 && pr->alpha > 0.0) paired[act[0] * M_ + act[1]] = 1;
          } else if (!monotone_term(k)) {
            throw std::invalid_argument("form-b: single-component profiles must be nonnegative and nondecreasing");
          }
        }
        for (std::size_t i = 0; i < M_; ++i)
          for (std::size_t j = i + 1; j < M_; ++j)
            if (!paired[i * M_ + j])
              throw std::invalid_argument("form-b: every pair (i, j) needs a two-component product with alpha > 0");
        break;
      }
      case StructuralForm::Generic: break;
    }
  }

  int N_;
  std::size_t M_;
  double q_;
  StructuralForm form_;
  std::vector<NonlinearTerm> terms_;
  std::vector<std::shared_ptr<const detail::TabulatedProfile>> tabulated_;
};

inline std::optional<double> Nonlinearity::eta_inf() const {
  const double tol = 1e-12 * q_;
  std::vector<double> crit(M_, 0.0);
  std::vector<const ProductTerm*> crit_products;
  for (const auto& term : terms_) {
    if (const auto* p = std::get_if<PowerTerm>(&term)) {
      if (p->p < q_ - tol) continue;
      if (p->p <= q_ + tol) {
        crit[p->component] += p->nu / p->p;
        continue;
      }
      if (p->nu > 0.0) return kInf;
      if (p->nu < 0.0) return std::nullopt;
    } else if (const auto* p = std::get_if<ProductTerm>(&term)) {
      if (p->alpha == 0.0) continue;
      double s = 0.0;
      for (double r : p->r) s += r;
      if (s < q_ - tol) continue;
      if (s > q_ + tol) return kInf;
      crit_products.push_back(p);
    } else if (std::holds_alternative<PiecewiseCriticalTerm>(term)) {
      crit[std::get<PiecewiseCriticalTerm>(term).component] += 1.0 / (std::pow(2.0, q_ - 1.0) * q_);
    }
    // MinIntegral (order p < 2_#), LogCusp (compact support) and Tabulated (linear growth)
    // are all o(|u|^{2_#}) at infinity.
  }
  for (double c : crit)
    if (c < 0.0) return std::nullopt;
  if (crit_products.empty()) return *std::max_element(crit.begin(), crit.end());
  if (crit_products.size() == 1 && *std::max_element(crit.begin(), crit.end()) == 0.0) {
    std::vector<double> act;
    for (double r : crit_products[0]->r)
      if (r != 0.0) act.push_back(r);
    if (act.size() == 2)
      return crit_products[0]->alpha *
             std::sqrt(std::pow(act[0], act[0]) * std::pow(act[1], act[1]) / std::pow(q_, q_));
  }
  return std::nullopt;
}

inline std::optional<double> Nonlinearity::eta0() const {
  const double tol = 1e-12 * q_;
  std::vector<char> sub(M_, 0);
  std::vector<double> crit(M_, 0.0);
  bool low_product = false;
  for (const auto& term : terms_) {
    if (const auto* p = std::get_if<PowerTerm>(&term)) {
      if (p->p > q_ + tol || p->nu == 0.0) continue;
      if (p->nu < 0.0) return std::nullopt;
      if (p->p < q_ - tol)
        sub[p->component] = 1;
      else
        crit[p->component] += p->nu / p->p;
    } else if (const auto* p = std::get_if<ProductTerm>(&term)) {
      if (p->alpha == 0.0) continue;
      double s = 0.0;
      for (double r : p->r) s += r;
      if (s <= q_ + tol) low_product = true;
    } else if (const auto* p = std::get_if<MinIntegralTerm>(&term)) {
      crit[p->component] += 1.0 / q_;
    } else if (const auto* p = std::get_if<PiecewiseCriticalTerm>(&term)) {
      crit[p->component] += 1.0 / q_;
    } else if (const auto* p = std::get_if<LogCuspTerm>(&term)) {
      sub[p->component] = 1;
    } else {
      return std::nullopt;
    }
  }
  if (std::all_of(sub.begin(), sub.end(), [](char s) { return s != 0; })) return kInf;
  if (low_product) return std::nullopt;
  // Directions supported on components without a subcritical term; minimize
  // sum c_j x_j^{k} over the simplex, k = 2_#/2.
  const double k = 0.5 * q_;
  double acc = 0.0;
  for (std::size_t j = 0; j < M_; ++j) {
    if (sub[j]) continue;
    if (crit[j] == 0.0) return 0.0;
    acc += std::pow(crit[j], -1.0 / (k - 1.0));
  }
  return std::pow(acc, -(k - 1.0));
}

}  // namespace nlsgs
