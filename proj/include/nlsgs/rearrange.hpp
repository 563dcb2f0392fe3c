#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "grid.hpp"

namespace nlsgs {

/**
 * Distribution function of a grid function: distinct values in strictly
 * decreasing order, each with the measure of the cells taking it.
 */
class LayerCake {
 public:
  LayerCake() = default;

  /// Layer cake of |f| with cell measures `weights`.
  LayerCake(std::span<const double> f, std::span<const double> weights) {
    if (f.size() != weights.size()) throw std::invalid_argument("LayerCake: size mismatch");
    std::vector<std::pair<double, double>> pieces(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) pieces[k] = {std::abs(f[k]), weights[k]};
    std::stable_sort(pieces.begin(), pieces.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& [v, m] : pieces) push(v, m);
  }

  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> measures() const noexcept { return measures_; }
  std::size_t size() const noexcept { return values_.size(); }

  double total_measure() const {
    double s = 0.0;
    for (double m : measures_) s += m;
    return s;
  }

  /// mu(t) = |{|u| > t}|.
  double mu(double t) const {
    double s = 0.0;
    for (std::size_t k = 0; k < values_.size() && values_[k] > t; ++k) s += measures_[k];
    return s;
  }

  /// Distribution of the merge: mu = mu_a + mu_b. Symmetric in (a, b) bit for bit.
  static LayerCake merge(const LayerCake& a, const LayerCake& b) {
    LayerCake out;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a.values_[i] > b.values_[j])) {
        out.push(a.values_[i], a.measures_[i]);
        ++i;
      } else if (i == a.size() || b.values_[j] > a.values_[i]) {
        out.push(b.values_[j], b.measures_[j]);
        ++j;
      } else {
        out.push(a.values_[i], a.measures_[i] + b.measures_[j]);
        ++i;
        ++j;
      }
    }
    return out;
  }

 private:
  void push(double v, double m) {
    if (!values_.empty() && values_.back() == v)
      measures_.back() += m;
    else {
      values_.push_back(v);
      measures_.push_back(m);
    }
  }

  std::vector<double> values_, measures_;
};

/// Radial grid that receives rearrangements of functions on `d`.
inline Domain rearrangement_target(const Domain& d) {
  switch (d.kind()) {
    case DomainKind::RadialN:
      return d;
    case DomainKind::BiRadial:
      // Ball of the same measure: (pi R^2)^2 = pi^2 rho^4 / 2.
      return Domain::radial(4, d.extent() * std::pow(2.0, 0.25), 8 * d.points_per_axis());
    default:
      throw std::invalid_argument("rearrangement: RadialN or BiRadial domain required");
  }
}

/**
 * Inverse distribution onto the radial cells of `target`: cell i gets the mean
 * of the decreasing rearrangement over its cumulative measure interval, or the
 * exact piece value when a single piece covers it. Measure beyond the cake is 0.
 */
inline std::vector<double> rebin(const LayerCake& cake, const Domain& target) {
  if (target.kind() != DomainKind::RadialN) throw std::invalid_argument("rebin: radial target required");
  const auto w = target.weights();
  std::vector<double> out(w.size(), 0.0);
  const auto vals = cake.values();
  const auto meas = cake.measures();
  std::size_t k = 0;
  double rem = meas.empty() ? 0.0 : meas[0];
  for (std::size_t i = 0; i < w.size(); ++i) {
    // Cells near the origin are tiny for large N, so the tolerance is per cell.
    const double tol = 1e-12 * w[i];
    double need = w[i], acc = 0.0, single = 0.0;
    int contributors = 0;
    while (need > tol && k < vals.size()) {
      const double take = std::min(need, rem);
      if (take > tol) {
        acc += take * vals[k];
        single = vals[k];
        ++contributors;
      }
      need -= take;
      rem -= take;
      if (rem <= tol) {
        ++k;
        if (k < vals.size()) rem += meas[k];
      }
    }
    if (contributors == 1 && need <= tol)
      out[i] = single;
    else
      out[i] = acc / w[i];
  }
  return out;
}

/// Schwarz rearrangement of one grid function, returned on rearrangement_target(d).
inline std::vector<double> schwarz(const Domain& d, std::span<const double> f) {
  return rebin(LayerCake(f, d.weights()), rearrangement_target(d));
}

/// Componentwise rearrangement u* = (u_1*, ..., u_M*).
inline Field schwarz(const Field& u) {
  const Domain t = rearrangement_target(u.domain());
  Field out(t, u.components());
  for (std::size_t j = 0; j < u.components(); ++j) out[j] = schwarz(u.domain(), u[j]);
  return out;
}

/**
 * Two-function radial merge {u, v}*: the radial nonincreasing function whose
 * distribution is mu_u + mu_v. Defaults to the target of the larger domain.
 */
inline std::vector<double> merge_star(const Domain& du, std::span<const double> u, const Domain& dv,
                                      std::span<const double> v, std::optional<Domain> target = std::nullopt) {
  if (du.dimension() != dv.dimension()) throw std::invalid_argument("merge_star: ambient dimensions differ");
  if (!target) {
    const Domain tu = rearrangement_target(du), tv = rearrangement_target(dv);
    target = tv.measure() > tu.measure() ? tv : tu;
  }
  return rebin(LayerCake::merge(LayerCake(u, du.weights()), LayerCake(v, dv.weights())), *target);
}

inline std::vector<double> merge_star(const Field& u, const Field& v, std::optional<Domain> target = std::nullopt) {
  if (u.components() != 1 || v.components() != 1)
    throw std::invalid_argument("merge_star: single-component fields required");
  return merge_star(u.domain(), u[0], v.domain(), v[0], std::move(target));
}

using Profile = std::function<double(double)>;

namespace detail {

inline void require_monotone(const Profile& f, double t_max) {
  const int n = 4096;
  double prev = f(0.0);
  if (!(prev >= 0.0)) throw std::invalid_argument("profile must be nonnegative");
  for (int k = 1; k <= n; ++k) {
    // Dense on [0, t_max], then geometric out to 1e6 t_max.
    const double t = k <= n / 2 ? t_max * k / (n / 2) : t_max * std::pow(1e6, double(k - n / 2) / (n / 2));
    const double v = f(t);
    if (v < prev - 1e-14 * std::max(1.0, std::abs(prev)))
      throw std::invalid_argument("profile is not nondecreasing on [0, inf)");
    prev = v;
  }
}

inline double product_integral(const Domain& d, const std::vector<std::span<const double>>& fs,
                               const std::vector<Profile>& factors) {
  const auto w = d.weights();
  double s = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    double p = w[k];
    for (std::size_t j = 0; j < fs.size(); ++j) p *= factors[j](std::abs(fs[j][k]));
    s += p;
  }
  return s;
}

}  // namespace detail

/**
 * int F~(u*) - int F~(u) for F~(u) = prod_j f_j(|u_j|) with nondecreasing,
 * nonnegative factors. Nonnegative up to rebinning error.
 */
inline double product_rearrangement_gap(const std::vector<Profile>& factors, const Field& u) {
  if (factors.size() != u.components()) throw std::invalid_argument("product_rearrangement_gap: factor count");
  double t_max = 0.0;
  for (const auto& c : u.data())
    for (double x : c) t_max = std::max(t_max, std::abs(x));
  for (const auto& f : factors) detail::require_monotone(f, std::max(t_max, 1.0));
  const Field us = schwarz(u);
  std::vector<std::span<const double>> a, b;
  for (std::size_t j = 0; j < u.components(); ++j) {
    a.push_back(u[j]);
    b.push_back(us[j]);
  }
  return detail::product_integral(us.domain(), b, factors) - detail::product_integral(u.domain(), a, factors);
}

/// int prod_j {u_j, v_j}* - (int prod_j u_j + int prod_j v_j); nonnegative up to rebinning error.
inline double merge_product_check(const std::vector<Field>& us, const std::vector<Field>& vs,
                                  std::optional<Domain> target = std::nullopt) {
  if (us.size() != vs.size() || us.empty()) throw std::invalid_argument("merge_product_check: list sizes");
  auto check = [](const Field& f) {
    if (f.components() != 1) throw std::invalid_argument("merge_product_check: single-component fields required");
    for (double x : f[0])
      if (x < 0.0) throw std::invalid_argument("merge_product_check: negative input");
  };
  for (const auto& f : us) check(f);
  for (const auto& f : vs) check(f);
  auto prod = [](const std::vector<Field>& fs) {
    const Domain& d = fs[0].domain();
    for (const auto& f : fs)
      if (!(f.domain() == d)) throw std::invalid_argument("merge_product_check: fields on different domains");
    const auto w = d.weights();
    double s = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
      double p = w[k];
      for (const auto& f : fs) p *= f[0][k];
      s += p;
    }
    return s;
  };
  const double lhs = prod(us) + prod(vs);
  if (!target) {
    const Domain tu = rearrangement_target(us[0].domain()), tv = rearrangement_target(vs[0].domain());
    target = tv.measure() > tu.measure() ? tv : tu;
  }
  std::vector<double> p(target->size(), 1.0);
  for (std::size_t j = 0; j < us.size(); ++j) {
    const auto m = merge_star(us[j], vs[j], *target);
    for (std::size_t k = 0; k < p.size(); ++k) p[k] *= m[k];
  }
  return integrate(*target, p) - lhs;
}

/**
 * Right-continuous generalized inverse F^{-1}(t) = inf{s > 0 : F(s) > t} of a
 * nondecreasing profile sampled at increasing s, linear between samples and
 * constant after the last one. Returns +inf when t >= sup F.
 */
class GeneralizedInverse {
 public:
  GeneralizedInverse(std::vector<double> s, std::vector<double> F) : s_(std::move(s)), F_(std::move(F)) {
    if (s_.size() != F_.size() || s_.size() < 2) throw std::invalid_argument("GeneralizedInverse: need >= 2 samples");
    if (s_[0] != 0.0 || F_[0] != 0.0) throw std::invalid_argument("GeneralizedInverse: profile must start at F(0) = 0");
    for (std::size_t i = 1; i < s_.size(); ++i) {
      if (!(s_[i] > s_[i - 1])) throw std::invalid_argument("GeneralizedInverse: sample points must increase");
      if (F_[i] < F_[i - 1]) throw std::invalid_argument("GeneralizedInverse: profile is decreasing");
    }
  }

  static GeneralizedInverse sampled(const Profile& f, double s_max, std::size_t n) {
    std::vector<double> s(n + 1), F(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      s[i] = s_max * static_cast<double>(i) / static_cast<double>(n);
      F[i] = f(s[i]);
    }
    return GeneralizedInverse(std::move(s), std::move(F));
  }

  /// Piecewise-linear profile value.
  double profile(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= s_.back()) return F_.back();
    const auto it = std::upper_bound(s_.begin(), s_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - s_.begin()) - 1;
    const double th = (x - s_[i]) / (s_[i + 1] - s_[i]);
    return F_[i] + th * (F_[i + 1] - F_[i]);
  }

  double operator()(double t) const {
    if (t < 0.0) return 0.0;
    if (t >= F_.back()) return std::numeric_limits<double>::infinity();
    // First sample with F > t; the crossing lies in the segment before it.
    const auto it = std::upper_bound(F_.begin(), F_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - F_.begin());
    if (i == 0) return 0.0;
    const double th = (t - F_[i - 1]) / (F_[i] - F_[i - 1]);
    return s_[i - 1] + th * (s_[i] - s_[i - 1]);
  }

  double sup() const { return F_.back(); }

 private:
  std::vector<double> s_, F_;
};

}  // namespace nlsgs
