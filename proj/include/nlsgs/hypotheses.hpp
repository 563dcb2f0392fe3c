#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "nonlinearity.hpp"

namespace nlsgs {

enum class EtaSide { Zero, Infinity };

struct EtaEstimate {
  double value = 0.0;
  std::vector<double> radii;
  /// inf (zero side) or sup (infinity side) of F/|u|^{2_#} over directions at each radius.
  std::vector<double> samples;
  /// Tail envelope: running sup (infinity) or inf (zero) of the remaining samples.
  std::vector<double> envelope;
};

namespace detail {

// Unit vector in the closed positive orthant from M-1 hyperspherical angles in [0, pi/2].
inline void direction(std::span<const double> angles, std::span<double> theta) {
  double s = 1.0;
  const std::size_t M = theta.size();
  for (std::size_t i = 0; i + 1 < M; ++i) {
    theta[i] = s * std::cos(angles[i]);
    s *= std::sin(angles[i]);
  }
  theta[M - 1] = s;
}

/// Extreme of F(R theta)/R^{2_#} over the positive orthant, with the maximizing/minimizing direction.
inline double directional_extreme(const Nonlinearity& F, double R, bool sup, std::vector<double>* best_dir = nullptr) {
  const std::size_t M = F.components();
  const double q = F.two_sharp();
  const double scale = std::pow(R, q);
  std::vector<double> theta(M), u(M);
  auto ratio = [&](std::span<const double> ang) {
    direction(ang, theta);
    for (std::size_t j = 0; j < M; ++j) u[j] = R * theta[j];
    const double g = F.value(u) / scale;
    if (!std::isfinite(g)) {
      std::ostringstream os;
      os << "eta_estimate: non-finite sample at |u| = " << R;
      throw std::domain_error(os.str());
    }
    return g;
  };
  if (M == 1) {
    if (best_dir) *best_dir = {1.0};
    const double zero[1] = {0.0};
    return ratio(std::span<const double>(zero, 0));
  }
  const std::size_t dims = M - 1;
  std::size_t per = M == 2 ? 1025 : M == 3 ? 129 : std::max<std::size_t>(5, static_cast<std::size_t>(std::pow(20000.0, 1.0 / dims)));
  const double half_pi = 0.5 * std::numbers::pi;
  const double step = half_pi / static_cast<double>(per - 1);
  std::vector<std::size_t> idx(dims, 0);
  std::vector<double> ang(dims), best(dims);
  double best_val = sup ? -kInf : kInf;
  for (;;) {
    for (std::size_t i = 0; i < dims; ++i) ang[i] = step * static_cast<double>(idx[i]);
    const double g = ratio(ang);
    if (sup ? g > best_val : g < best_val) {
      best_val = g;
      best = ang;
    }
    std::size_t k = 0;
    while (k < dims && ++idx[k] == per) idx[k++] = 0;
    if (k == dims) break;
  }
  ang = best;
  for (int sweep = 0; sweep < 3; ++sweep) {
    for (std::size_t i = 0; i < dims; ++i) {
      const double lo = std::max(0.0, ang[i] - step), hi = std::min(half_pi, ang[i] + step);
      auto obj = [&](double a) {
        std::vector<double> trial = ang;
        trial[i] = a;
        const double g = ratio(trial);
        return sup ? -g : g;
      };
      std::uintmax_t iters = 100;
      const auto r = boost::math::tools::brent_find_minima(obj, lo, hi, 52, iters);
      const double g = sup ? -r.second : r.second;
      if (sup ? g > best_val : g < best_val) {
        best_val = g;
        ang[i] = r.first;
      }
    }
  }
  if (best_dir) {
    best_dir->resize(M);
    direction(ang, *best_dir);
  }
  return best_val;
}

}  // namespace detail

inline std::vector<double> default_eta_radii(EtaSide side) {
  std::vector<double> r;
  for (int k = 1; k <= 8; ++k) r.push_back(side == EtaSide::Zero ? std::pow(10.0, -k) : std::pow(10.0, k));
  return r;
}

/**
 * @brief Numeric liminf (zero side) or limsup (infinity side) of F(u)/|u|^{2_#}.
 *
 * radii must move monotonically towards the limit point.  The estimate
 * is an Aitken extrapolation of the tail envelope; a power-law divergent
 * envelope is reported as +infinity.
 */
inline EtaEstimate eta_estimate(const Nonlinearity& F, EtaSide side, std::vector<double> radii = {}) {
  if (radii.empty()) radii = default_eta_radii(side);
  if (radii.size() < 3) throw std::invalid_argument("eta_estimate: need at least 3 radii");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0) || !std::isfinite(radii[k])) throw std::invalid_argument("eta_estimate: radii must be positive");
    if (k > 0 && (side == EtaSide::Zero ? !(radii[k] < radii[k - 1]) : !(radii[k] > radii[k - 1])))
      throw std::invalid_argument("eta_estimate: radii schedule must be monotone towards the limit");
  }
  const bool sup = side == EtaSide::Infinity;
  EtaEstimate e;
  e.radii = radii;
  for (double R : radii) e.samples.push_back(detail::directional_extreme(F, R, sup));
  const std::size_t n = e.samples.size();
  e.envelope.resize(n);
  double acc = e.samples[n - 1];
  for (std::size_t k = n; k-- > 0;) {
    acc = sup ? std::max(acc, e.samples[k]) : std::min(acc, e.samples[k]);
    e.envelope[k] = acc;
  }
  const double g0 = e.samples[n - 3], g1 = e.samples[n - 2], g2 = e.samples[n - 1];
  const double r1 = g1 / g0, r2 = g2 / g1;
  if (g0 > 0.0 && r1 > 1.0 + 1e-3 && r2 > 1.0 + 1e-3 && std::abs(std::log(r2) / std::log(r1) - 1.0) < 0.1) {
    e.value = kInf;
    return e;
  }
  // Monotone contracting tail: Aitken delta-squared; otherwise the envelope of the last three.
  const double d1 = g1 - g0, d2 = g2 - g1;
  if (d1 != 0.0 && d2 / d1 >= 0.0 && d2 / d1 < 1.0)
    e.value = g2 - d2 * d2 / (d2 - d1);
  else
    e.value = e.envelope[n - 3];
  if (std::abs(e.value) < 1e-15) e.value = 0.0;
  return e;
}

struct Verdict {
  bool pass = false;
  std::string detail;
  /// Offending u on failure.
  std::vector<double> witness;
};

struct HypothesisReport {
  Verdict F0, F1, F2, F3, P;
  /// Sampled constant in (F0).
  double S = 0.0;
  /// Best exponent q found for (P), per component (infinite when f vanishes near 0).
  std::vector<double> q_P;
  double q_P_bound = kInf;
  std::optional<double> eta0, eta_inf;
  bool all_pass() const { return F0.pass && F1.pass && F2.pass && F3.pass && P.pass; }
};

/// Sampling-based verdicts for (F0)-(F3) and (P) across 12 decades of |u|.
inline HypothesisReport check_hypotheses(const Nonlinearity& F, double b_exponential = 1.0) {
  HypothesisReport rep;
  const int N = F.dimension();
  const std::size_t M = F.components();
  const double two_star = sobolev_exponent(N);

  std::vector<std::vector<double>> dirs;
  for (std::size_t j = 0; j < M; ++j) {
    std::vector<double> e(M, 0.0);
    e[j] = 1.0;
    dirs.push_back(e);
  }
  if (M > 1) {
    dirs.push_back(std::vector<double>(M, 1.0 / std::sqrt(static_cast<double>(M))));
    for (std::size_t j = 0; j < M; ++j) {
      std::vector<double> v(M, 0.3);
      v[j] = 1.0;
      double n2 = 0.0;
      for (double x : v) n2 += x * x;
      for (double& x : v) x /= std::sqrt(n2);
      dirs.push_back(v);
    }
  }

  // (F0): ratio |grad F| / bound over decades.
  {
    const double lo = N == 1 ? -12.0 : -6.0, hi = N == 1 ? 0.0 : 6.0;
    const int per_decade = 10;
    const int count = static_cast<int>((hi - lo) * per_decade) + 1;
    std::vector<double> decade_max(static_cast<std::size_t>(hi - lo) + 1, 0.0);
    std::vector<double> worst_u;
    double S = 0.0;
    bool ok = true;
    for (const auto& d : dirs) {
      double maxabs = 0.0;
      for (double x : d) maxabs = std::max(maxabs, std::abs(x));
      for (int k = 0; k < count; ++k) {
        double t = std::pow(10.0, lo + static_cast<double>(k) / per_decade);
        if (N == 1) t /= maxabs;  // stay inside [-1, 1]^M
        std::vector<double> u(M);
        for (std::size_t j = 0; j < M; ++j) u[j] = t * d[j];
        const auto g = F.grad(u);
        double gn = 0.0;
        for (double x : g) gn += x * x;
        gn = std::sqrt(gn);
        double bound = t;
        if (N == 2) bound += std::expm1(std::min(700.0, b_exponential * t * t));
        if (N >= 3) bound += std::pow(t, two_star - 1.0);
        const double r = gn / bound;
        if (!std::isfinite(r)) {
          ok = false;
          worst_u = u;
          continue;
        }
        if (r > S) {
          S = r;
          worst_u = u;
        }
        const auto dec = static_cast<std::size_t>(std::min<double>(decade_max.size() - 1, std::floor(k / per_decade)));
        decade_max[dec] = std::max(decade_max[dec], r);
      }
    }
    // A bounded ratio must not keep growing towards either end of the sampled range.
    auto grows = [](double a, double b, double c) { return a > 0.0 && b > 1.5 * a && c > 1.5 * b; };
    const std::size_t D = decade_max.size();
    if (D >= 3 && grows(decade_max[2], decade_max[1], decade_max[0])) ok = false;
    if (N >= 2 && D >= 3 && grows(decade_max[D - 3], decade_max[D - 2], decade_max[D - 1])) ok = false;
    rep.S = S;
    rep.F0.pass = ok;
    std::ostringstream os;
    os << "S ~ " << S << (ok ? "" : " (ratio unbounded on samples)");
    rep.F0.detail = os.str();
    if (!ok) rep.F0.witness = worst_u;
  }

  // (F2): sup |F|/|u|^2 per decade nonincreasing towards 0, last below half the first.
  {
    std::vector<double> per;
    std::vector<std::vector<double>> arg;
    for (int dec = -1; dec >= -12; --dec) {
      double m = 0.0;
      std::vector<double> at;
      for (int s = 0; s < 10; ++s) {
        const double t = std::pow(10.0, dec - 0.1 * s);
        for (const auto& d : dirs) {
          std::vector<double> u(M);
          for (std::size_t j = 0; j < M; ++j) u[j] = t * d[j];
          const double r = std::abs(F.value(u)) / (t * t);
          if (r > m || at.empty()) {
            m = std::max(m, r);
            at = u;
          }
        }
      }
      per.push_back(m);
      arg.push_back(at);
    }
    bool ok = per.back() < 0.5 * per.front() || per.front() == 0.0;
    std::size_t bad = per.size() - 1;
    for (std::size_t k = 1; k < per.size(); ++k)
      if (per[k] > per[k - 1] * (1.0 + 1e-9) + 1e-300) {
        ok = false;
        bad = k;
        break;
      }
    rep.F2.pass = ok;
    std::ostringstream os;
    os << "sup|F|/|u|^2: " << per.front() << " at 1e-1 -> " << per.back() << " at 1e-12";
    rep.F2.detail = os.str();
    if (!ok) rep.F2.witness = arg[bad];
  }

  // (F1), (F3) via the catalogue, else estimates.
  rep.eta_inf = F.eta_inf();
  if (!rep.eta_inf) rep.eta_inf = eta_estimate(F, EtaSide::Infinity).value;
  rep.eta0 = F.eta0();
  if (!rep.eta0) rep.eta0 = eta_estimate(F, EtaSide::Zero).value;
  rep.F1.pass = std::isfinite(*rep.eta_inf);
  rep.F1.detail = "eta_inf = " + std::to_string(*rep.eta_inf);
  rep.F3.pass = *rep.eta0 > 0.0;
  rep.F3.detail = "eta0 = " + std::to_string(*rep.eta0);
  if (!rep.F1.pass) {
    std::vector<double> dir;
    detail::directional_extreme(F, 1e8, true, &dir);
    for (double& x : dir) x *= 1e8;
    rep.F1.witness = dir;
  }
  if (!rep.F3.pass) {
    std::vector<double> dir;
    detail::directional_extreme(F, 1e-8, false, &dir);
    for (double& x : dir) x *= 1e-8;
    rep.F3.witness = dir;
  }

  // (P): local log-log slope of the additive derivative f_j near 0.
  {
    rep.q_P_bound = N <= 2 ? kInf : static_cast<double>(N) / (N - 2.0);
    bool ok = true;
    for (std::size_t j = 0; j < M; ++j) {
      const double t1 = 1e-10, t2 = 1e-9;
      const double f1 = F.additive_profile(j, t1).slope, f2 = F.additive_profile(j, t2).slope;
      double q = kInf;
      if (f1 > 0.0 && f2 > 0.0) q = std::log(f2 / f1) / std::log(t2 / t1);
      rep.q_P.push_back(q);
      if (!(q <= rep.q_P_bound + 1e-9)) {
        ok = false;
        if (rep.P.witness.empty()) {
          rep.P.witness.assign(M, 0.0);
          rep.P.witness[j] = t1;
        }
      }
    }
    rep.P.pass = ok;
    std::ostringstream os;
    os << "best q =";
    for (double q : rep.q_P) os << ' ' << q;
    os << ", bound " << rep.q_P_bound;
    rep.P.detail = os.str();
  }
  return rep;
}

}  // namespace nlsgs
