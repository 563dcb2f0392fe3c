#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "grid.hpp"
#include "hypotheses.hpp"
#include "nonlinearity.hpp"
#include "soliton.hpp"

namespace nlsgs {

/// Prescribed L2 norms a_j (not squared masses).
struct MassSpec {
  std::vector<double> a;

  MassSpec() = default;
  MassSpec(std::vector<double> values, bool allow_zero = false) : a(std::move(values)) {
    if (a.empty()) throw std::invalid_argument("MassSpec: empty");
    for (double x : a)
      if (!(allow_zero ? x >= 0.0 : x > 0.0) || !std::isfinite(x))
        throw std::invalid_argument("MassSpec: entries must be positive");
  }

  std::size_t size() const noexcept { return a.size(); }
  double operator[](std::size_t j) const { return a.at(j); }
  double norm() const {
    double s = 0.0;
    for (double x : a) s += x * x;
    return std::sqrt(s);
  }
  double min() const { return *std::min_element(a.begin(), a.end()); }
};

namespace detail {

inline void check_compatible(const Nonlinearity& F, const Field& u) {
  if (u.domain().kind() == DomainKind::PeriodicBox1D)
    throw std::invalid_argument("functional: RadialN or BiRadial domain required");
  if (F.components() != u.components()) throw std::invalid_argument("functional: component count mismatch");
  if (F.dimension() != u.domain().dimension()) throw std::invalid_argument("functional: dimension mismatch");
}

}  // namespace detail

/// integral of F(u); optionally fills the pointwise gradient (M x nodes).
inline double potential(const Nonlinearity& F, const Field& u, std::vector<std::vector<double>>* dF = nullptr) {
  const std::size_t M = u.components(), n = u.size();
  const auto w = u.domain().weights();
  if (dF) dF->assign(M, std::vector<double>(n, 0.0));
  std::vector<double> x(M), g(M);
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < M; ++j) x[j] = u[j][k];
    if (dF) {
      s += w[k] * F.value_and_grad(x, g);
      for (std::size_t j = 0; j < M; ++j) (*dF)[j][k] = g[j];
    } else {
      s += w[k] * F.value(x);
    }
  }
  return s;
}

/// J(u) = integral of |grad u|^2/2 - F(u).
inline double energy(const Nonlinearity& F, const Field& u) {
  detail::check_compatible(F, u);
  double kin = 0.0;
  for (std::size_t j = 0; j < u.components(); ++j) kin += grad_norm_sq(u, j);
  return 0.5 * kin - potential(F, u);
}

/// L2 gradient (-Lap u_j - d_jF(u))_j.
inline Field energy_gradient(const Nonlinearity& F, const Field& u) {
  detail::check_compatible(F, u);
  std::vector<std::vector<double>> dF;
  potential(F, u, &dF);
  Field g(u.domain(), u.components());
  for (std::size_t j = 0; j < u.components(); ++j) {
    const auto lap = laplacian(u, j);
    for (std::size_t k = 0; k < u.size(); ++k) g[j][k] = -lap[k] - dF[j][k];
  }
  return g;
}

/// Energy and gradient together (one nonlinearity pass).
inline double energy_and_gradient(const Nonlinearity& F, const Field& u, Field& g) {
  detail::check_compatible(F, u);
  std::vector<std::vector<double>> dF;
  const double pot = potential(F, u, &dF);
  double kin = 0.0;
  for (std::size_t j = 0; j < u.components(); ++j) {
    kin += grad_norm_sq(u, j);
    const auto lap = laplacian(u, j);
    for (std::size_t k = 0; k < u.size(); ++k) g[j][k] = -lap[k] - dF[j][k];
  }
  return 0.5 * kin - pot;
}

struct MultiplierResult {
  std::vector<double> lambda;
  /// ||-Lap u_j + lambda_j u_j - d_jF(u)||_2 per component.
  std::vector<double> residual;
  double max_residual() const { return residual.empty() ? 0.0 : *std::max_element(residual.begin(), residual.end()); }
};

/// Weighted L2 norms of -Lap u_j + lambda_j u_j - d_jF(u).
inline std::vector<double> pde_residual(const Nonlinearity& F, const Field& u, std::span<const double> lambda) {
  if (lambda.size() != u.components()) throw std::invalid_argument("pde_residual: lambda size mismatch");
  const Field g = energy_gradient(F, u);
  std::vector<double> res(u.components());
  std::vector<double> r(u.size());
  for (std::size_t j = 0; j < u.components(); ++j) {
    for (std::size_t k = 0; k < u.size(); ++k) r[k] = g[j][k] + lambda[j] * u[j][k];
    res[j] = std::sqrt(inner(u.domain(), r, r));
  }
  return res;
}

/// lambda_j = (integral of d_jF(u) u_j - |grad u_j|^2) / |u_j|^2, with the PDE residual alongside.
inline MultiplierResult multipliers(const Nonlinearity& F, const Field& u) {
  detail::check_compatible(F, u);
  std::vector<std::vector<double>> dF;
  potential(F, u, &dF);
  MultiplierResult out;
  for (std::size_t j = 0; j < u.components(); ++j) {
    const double m = mass(u, j);
    if (!(m > 0.0)) throw std::invalid_argument("multipliers: component " + std::to_string(j + 1) + " vanishes");
    out.lambda.push_back((inner(u.domain(), dF[j], u[j]) - grad_norm_sq(u, j)) / m);
  }
  out.residual = pde_residual(F, u, out.lambda);
  return out;
}

/// ((N-2) sum|grad u_j|^2 + N sum lambda_j |u_j|^2 - 2N integral F) / (N max(1, sum|grad u_j|^2)).
inline double pohozaev_residual(const Nonlinearity& F, const Field& u, std::span<const double> lambda) {
  detail::check_compatible(F, u);
  if (lambda.size() != u.components()) throw std::invalid_argument("pohozaev_residual: lambda size mismatch");
  const double N = u.domain().dimension();
  double kin = 0.0, lam = 0.0;
  for (std::size_t j = 0; j < u.components(); ++j) {
    kin += grad_norm_sq(u, j);
    lam += lambda[j] * mass(u, j);
  }
  const double pot = potential(F, u);
  return ((N - 2.0) * kin + N * lam - 2.0 * N * pot) / (N * std::max(1.0, kin));
}

/// |u|_{2_#} / (C |u|_2^{1-delta} |grad u|_2^{delta}); at most 1 by the sharp GN inequality.
inline double gn_check(const GNData& gn, const Field& u, std::size_t j = 0) {
  if (u.domain().dimension() != gn.N) throw std::invalid_argument("gn_check: dimension mismatch");
  if (j >= u.components()) throw std::out_of_range("gn_check: component index out of range");
  const Field one(u.domain(), {u[j]});
  const double l2 = std::sqrt(mass(one, 0));
  if (!(l2 > 0.0)) throw std::invalid_argument("gn_check: u = 0");
  const double g = std::sqrt(grad_norm_sq(one, 0));
  const double lq = lp_norm(one, gn.two_sharp);
  return lq / (gn.C * std::pow(l2, 1.0 - gn.delta) * std::pow(g, gn.delta));
}

struct ThresholdReport {
  double eta0 = 0.0, eta_inf = 0.0;
  bool eta0_estimated = false, eta_inf_estimated = false;
  /// Left-hand sides of the upper and lower mass bounds.
  double etas_lhs = 0.0, etal_lhs = 0.0;
  bool etas_ok = false, etal_ok = false;
  /// 1 - etas_lhs and etal_lhs - 1; positive when the condition holds.
  double etas_margin = 0.0, etal_margin = 0.0;
};

/**
 * Upper mass bound 2 eta_inf C^{2_#} |a|^{4/N} < 1 and
 * and lower mass bound 2 eta0 C^{2_#} M^{2/N} min a_j^{4/N} > 1.
 */
inline ThresholdReport check_thresholds(const Nonlinearity& F, const MassSpec& a, const GNData& gn,
                                        bool allow_estimate = true) {
  if (a.size() != F.components()) throw std::invalid_argument("check_thresholds: mass spec size mismatch");
  if (gn.N != F.dimension()) throw std::invalid_argument("check_thresholds: GN data for the wrong dimension");
  ThresholdReport t;
  auto e0 = F.eta0();
  auto ei = F.eta_inf();
  if ((!e0 || !ei) && !allow_estimate)
    throw std::runtime_error("check_thresholds: eta unavailable analytically and estimation disabled");
  if (!e0) {
    e0 = eta_estimate(F, EtaSide::Zero).value;
    t.eta0_estimated = true;
  }
  if (!ei) {
    ei = eta_estimate(F, EtaSide::Infinity).value;
    t.eta_inf_estimated = true;
  }
  t.eta0 = *e0;
  t.eta_inf = *ei;
  const double N = F.dimension();
  const double Cq = gn.C_power();
  t.etas_lhs = t.eta_inf == 0.0 ? 0.0 : 2.0 * t.eta_inf * Cq * std::pow(a.norm(), 4.0 / N);
  t.etal_lhs = t.eta0 == kInf ? kInf
                              : 2.0 * t.eta0 * Cq * std::pow(static_cast<double>(a.size()), 2.0 / N) *
                                    std::pow(a.min(), 4.0 / N);
  t.etas_ok = t.etas_lhs < 1.0;
  t.etal_ok = t.etal_lhs > 1.0;
  t.etas_margin = 1.0 - t.etas_lhs;
  t.etal_margin = t.etal_lhs - 1.0;
  return t;
}

struct CoercivityBound {
  double eps = 0.0;
  double c_eps = 0.0;
  /// 1/2 - (eps + eta_inf) |a|^{4/N} C^{2_#}
  double kinetic_coeff = 0.0;
  double eta_inf = 0.0;
  /// Lower bound kinetic_coeff |grad u|^2 - c_eps |a|^2 for u in D(a).
  double lower_bound(double grad_sq, const MassSpec& a) const {
    return kinetic_coeff * grad_sq - c_eps * a.norm() * a.norm();
  }
};

/// eps = half the margin of the upper mass bound; c_eps = sup of (F(u) - (eps + eta_inf)|u|^{2_#})/|u|^2 on samples.
inline CoercivityBound coercivity_bound(const Nonlinearity& F, const MassSpec& a, const GNData& gn) {
  const auto th = check_thresholds(F, a, gn);
  if (!th.etas_ok) throw std::invalid_argument("coercivity_bound: upper mass bound fails");
  const double q = F.two_sharp();
  const double kap = std::pow(a.norm(), 4.0 / F.dimension()) * gn.C_power();
  CoercivityBound b;
  b.eta_inf = th.eta_inf;
  b.eps = 0.5 * (0.5 / kap - th.eta_inf);
  b.kinetic_coeff = 0.5 - (b.eps + th.eta_inf) * kap;
  const std::size_t M = F.components();
  std::vector<std::vector<double>> dirs;
  if (M == 1) {
    dirs.push_back({1.0});
  } else {
    const int per = M == 2 ? 257 : 17;
    for (int k = 0; k < std::pow(per, static_cast<int>(M) - 1); ++k) {
      std::vector<double> ang(M - 1);
      int rem = k;
      for (std::size_t i = 0; i + 1 < M; ++i) {
        ang[i] = 0.5 * std::numbers::pi * (rem % per) / (per - 1);
        rem /= per;
      }
      std::vector<double> th_dir(M);
      detail::direction(ang, th_dir);
      dirs.push_back(th_dir);
    }
  }
  double c = 0.0;
  std::vector<double> u(M);
  for (const auto& d : dirs)
    for (int k = 0; k <= 1200; ++k) {
      const double t = std::pow(10.0, -6.0 + 0.01 * k);
      for (std::size_t j = 0; j < M; ++j) u[j] = t * d[j];
      c = std::max(c, (F.value(u) - (b.eps + th.eta_inf) * std::pow(t, q)) / (t * t));
    }
  b.c_eps = c;
  return b;
}

class TrialConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrialResult {
  Field u;
  double energy = 0.0;
  /// Chosen t of u(x) = W(tx); NaN on the eta0 = infinity branch.
  double t = std::numeric_limits<double>::quiet_NaN();
  /// Chosen dilation s of s * u.
  double s = 1.0;
  std::string branch{};
};

/// The admissible t-interval [lower, upper) for u(x) = W(tx); empty when lower >= upper.
inline std::pair<double, double> admissible_t_interval(const MassSpec& a, double eta0, const GNData& gn) {
  std::size_t Mstar = 0;
  double amin = kInf;
  for (double x : a.a)
    if (x > 0.0) {
      ++Mstar;
      amin = std::min(amin, x);
    }
  if (Mstar == 0) throw std::invalid_argument("admissible_t_interval: all a_j vanish");
  const double N = gn.N;
  const double a_eff = std::sqrt(static_cast<double>(Mstar)) * amin;
  const double lower = std::sqrt(1.0 + 2.0 / N) / (std::pow(a_eff, 2.0 / N) * std::pow(gn.C, 1.0 + 2.0 / N));
  const double upper = std::sqrt(gn.two_sharp * eta0);
  return {lower, upper};
}

/**
 * Negative-energy trial function in D(a): W = (w/sqrt(M*), ...) on the
 * components with a_j > 0, then a dilation scan s * u until J < 0.
 * Throws TrialConstructionError when the t-interval is empty or the scan fails.
 */
inline TrialResult trial_negative(const Nonlinearity& F, const MassSpec& a, const GNData& gn, const Domain& d,
                                  std::optional<double> eta0 = std::nullopt) {
  if (a.size() != F.components()) throw std::invalid_argument("trial_negative: mass spec size mismatch");
  if (d.dimension() != gn.N || F.dimension() != gn.N) throw std::invalid_argument("trial_negative: dimension mismatch");
  if (!eta0) eta0 = F.eta0();
  if (!eta0) eta0 = eta_estimate(F, EtaSide::Zero).value;
  const std::size_t M = F.components();
  std::size_t Mstar = 0;
  for (double x : a.a) Mstar += x > 0.0;
  if (Mstar == 0) throw TrialConstructionError("trial_negative: all a_j vanish");
  const double N = gn.N;

  TrialResult res{Field(d, M)};
  Field base(d, M);
  if (std::isfinite(*eta0)) {
    const auto [lower, upper] = admissible_t_interval(a, *eta0, gn);
    if (!(lower < upper)) {
      std::ostringstream os;
      os << "trial_negative: empty t-interval [" << lower << ", " << upper << ")";
      throw TrialConstructionError(os.str());
    }
    res.t = 0.5 * (lower + upper);
    res.branch = "t-interval";
    const Field w = sample(d, [&](double r) { return gn.value(res.t * r) / std::sqrt(static_cast<double>(Mstar)); });
    for (std::size_t j = 0; j < M; ++j)
      if (a[j] > 0.0) base[j] = w[0];
  } else {
    res.branch = "dilation";
    const Field w = gn.profile(d);
    const double nw = std::sqrt(mass(w, 0));
    for (std::size_t j = 0; j < M; ++j)
      if (a[j] > 0.0)
        for (std::size_t k = 0; k < d.size(); ++k) base[j][k] = a[j] / nw * w[0][k];
  }
  // Grid rounding can push the mass slightly above a_j^2.
  for (std::size_t j = 0; j < M; ++j) {
    const double m = std::sqrt(mass(base, j));
    if (a[j] > 0.0 && m > a[j])
      for (double& x : base[j]) x *= a[j] / m;
  }
  double last = kInf;
  for (double s = 1.0; s >= 1e-3; s *= 0.8) {
    const Field u = s == 1.0 ? base : dilate(base, s);
    Field v = u;
    for (std::size_t j = 0; j < M; ++j) {
      const double m = std::sqrt(mass(v, j));
      if (a[j] > 0.0 && m > a[j])
        for (double& x : v[j]) x *= a[j] / m;
    }
    const double e = energy(F, v);
    last = e;
    if (e < 0.0) {
      res.u = std::move(v);
      res.energy = e;
      res.s = s;
      return res;
    }
  }
  std::ostringstream os;
  os << "trial_negative: dilation scan found no negative energy (last J = " << last << ", N = " << N << ")";
  throw TrialConstructionError(os.str());
}

}  // namespace nlsgs
