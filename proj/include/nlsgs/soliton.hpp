#pragma once

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <boost/math/interpolators/cubic_hermite.hpp>
#include <json.hpp>

#include "grid.hpp"
#include "nonlinearity.hpp"

namespace nlsgs {

enum class Integrator { RK4, Heun };

struct SolitonOptions {
  double step = 1e-3;
  Integrator integrator = Integrator::RK4;
  /// Outer integration radius; 0 picks 40 + 10 N.
  double r_end = 0.0;
  /// Upper end of the w(0) bracket; 0 searches upwards by doubling.
  double w0_max = 0.0;
};

/**
 * @brief Kwong soliton w of -Lap w + (2/N) w = w^{2_#-1} and the sharp
 * Gagliardo-Nirenberg constant C_{N,2_#} derived from |w|_2.
 */
struct GNData {
  int N = 1;
  double two_sharp = 6.0;
  double w0 = 0.0;
  /// |w|_2^2
  double mass = 0.0;
  /// |grad w|_2^2
  double grad_sq = 0.0;
  /// |w|_{2_#}^{2_#}
  double lp_power = 0.0;
  double C = 0.0;
  /// delta at p = 2_#.
  double delta = 0.0;
  std::vector<double> r, w, dw;
  double r_cut = 0.0;
  double kappa = 0.0;

  double C_power() const { return std::pow(C, two_sharp); }
  double l2_norm() const { return std::sqrt(mass); }

  double value(double x) const {
    x = std::abs(x);
    if (x >= r_cut) {
      const double wc = w.back();
      return wc * std::pow(r_cut / x, 0.5 * (N - 1)) * std::exp(-kappa * (x - r_cut));
    }
    return (*interp_)(x);
  }

  /// Profile sampled on a radial domain of dimension N or on the bi-radial grid (N = 4).
  Field profile(const Domain& d) const {
    if (d.dimension() != N || d.kind() == DomainKind::PeriodicBox1D)
      throw std::invalid_argument("GNData::profile: domain dimension does not match the soliton");
    return sample(d, [this](double x) { return value(x); });
  }

  nlohmann::json to_json() const {
    return {{"N", N}, {"two_sharp", two_sharp}, {"w0", w0}, {"mass_w", mass}, {"C", C}};
  }

  void build_interpolant() {
    auto x = r, y = w, dy = dw;
    interp_ = std::make_shared<const boost::math::interpolators::cubic_hermite<std::vector<double>>>(
        std::move(x), std::move(y), std::move(dy));
  }

 private:
  std::shared_ptr<const boost::math::interpolators::cubic_hermite<std::vector<double>>> interp_;
};

namespace detail {

// State (w, w', |w|_2^2, |w'|_2^2, |w|_q^q) of the radial soliton ODE.
using SolitonState = std::array<double, 5>;

class SolitonOde {
 public:
  SolitonOde(int N, Integrator integ) : N_(N), q_(critical_exponent(N)), sigma_(unit_sphere_area(N)), integ_(integ) {}

  double g(double w) const { return (2.0 / N_) * w - std::pow(std::abs(w), q_ - 2.0) * w; }

  SolitonState rhs(double r, const SolitonState& y, bool integrals) const {
    const double wgt = integrals ? sigma_ * std::pow(r, N_ - 1) : 0.0;
    const double w = y[0], v = y[1];
    return {v, g(w) - (N_ - 1) / r * v, wgt * w * w, wgt * v * v, wgt * std::pow(std::abs(w), q_)};
  }

  SolitonState step(double r, const SolitonState& y, double h, bool integrals) const {
    auto axpy = [](const SolitonState& a, double c, const SolitonState& b) {
      SolitonState o;
      for (int i = 0; i < 5; ++i) o[i] = a[i] + c * b[i];
      return o;
    };
    SolitonState o;
    if (integ_ == Integrator::Heun) {
      const auto k1 = rhs(r, y, integrals);
      const auto k2 = rhs(r + h, axpy(y, h, k1), integrals);
      for (int i = 0; i < 5; ++i) o[i] = y[i] + 0.5 * h * (k1[i] + k2[i]);
      return o;
    }
    const auto k1 = rhs(r, y, integrals);
    const auto k2 = rhs(r + 0.5 * h, axpy(y, 0.5 * h, k1), integrals);
    const auto k3 = rhs(r + 0.5 * h, axpy(y, 0.5 * h, k2), integrals);
    const auto k4 = rhs(r + h, axpy(y, h, k3), integrals);
    for (int i = 0; i < 5; ++i) o[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return o;
  }

  // Taylor start at r = h: w = w0 + c2 r^2 + c4 r^4.
  SolitonState start(double w0, double h) const {
    const double c2 = g(w0) / (2.0 * N_);
    const double gp = 2.0 / N_ - (q_ - 1.0) * std::pow(w0, q_ - 2.0);
    const double c4 = gp * c2 / (4.0 * (N_ + 2.0));
    const double w = w0 + c2 * h * h + c4 * h * h * h * h;
    const double v = 2.0 * c2 * h + 4.0 * c4 * h * h * h;
    const double vol = sigma_ * std::pow(h, N_) / N_;
    return {w, v, vol * w0 * w0, sigma_ * 4.0 * c2 * c2 * std::pow(h, N_ + 2) / (N_ + 2.0), vol * std::pow(w0, q_)};
  }

  int N() const { return N_; }
  double q() const { return q_; }
  double sigma() const { return sigma_; }

 private:
  int N_;
  double q_, sigma_;
  Integrator integ_;
};

// +1 overshoot (crosses zero), -1 undershoot (turns up while positive), 0 neither before r_end.
inline int classify(const SolitonOde& ode, double w0, double h, double r_end) {
  double r = h;
  auto y = ode.start(w0, h);
  while (r < r_end) {
    y = ode.step(r, y, h, false);
    r += h;
    if (y[0] < 0.0) return 1;
    if (y[1] > 0.0) return -1;
    if (!std::isfinite(y[0])) return 1;
  }
  return 0;
}

}  // namespace detail

/// Shooting on w(0) with fixed-step integration and bisection.
inline GNData solve_soliton(int N, const SolitonOptions& opt = {}) {
  if (N < 1) throw std::invalid_argument("solve_soliton: N must be >= 1");
  if (!(opt.step > 0.0)) throw std::invalid_argument("solve_soliton: step must be positive");
  const detail::SolitonOde ode(N, opt.integrator);
  const double h = opt.step;
  const double r_end = opt.r_end > 0.0 ? opt.r_end : 40.0 + 10.0 * N;
  double lo = std::pow(2.0 / N, N / 4.0) * (1.0 + 1e-9);
  if (detail::classify(ode, lo, h, r_end) == 1) throw std::runtime_error("solve_soliton: lower bracket overshoots");
  double hi;
  if (opt.w0_max > 0.0) {
    hi = opt.w0_max;
    if (detail::classify(ode, hi, h, r_end) != 1)
      throw std::runtime_error("solve_soliton: bracket not found within the configured w(0) range");
  } else {
    hi = 2.0 * lo;
    while (detail::classify(ode, hi, h, r_end) != 1) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e8) throw std::runtime_error("solve_soliton: bracket not found");
    }
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const int c = detail::classify(ode, mid, h, r_end);
    if (c == 0) {
      lo = hi = mid;
      break;
    }
    (c > 0 ? hi : lo) = mid;
  }

  GNData gd;
  gd.N = N;
  gd.two_sharp = ode.q();
  gd.w0 = lo;
  gd.kappa = std::sqrt(2.0 / N);
  gd.delta = 2.0 / gd.two_sharp;

  std::vector<detail::SolitonState> ys;
  std::vector<double> rs;
  rs.push_back(0.0);
  ys.push_back({lo, 0.0, 0.0, 0.0, 0.0});
  double r = h;
  auto y = ode.start(lo, h);
  rs.push_back(r);
  ys.push_back(y);
  double wmin = y[0];
  while (r < r_end) {
    auto next = ode.step(r, y, h, true);
    if (next[0] <= 0.0 || next[1] > 0.0 || !std::isfinite(next[0])) break;
    y = next;
    r += h;
    rs.push_back(r);
    ys.push_back(y);
    wmin = y[0];
    if (y[0] < 1e-14 * lo) break;
  }
  // Cut before the unstable growing mode contaminates the profile.
  const double wcut = std::max(1e3 * wmin, 1e-12 * lo);
  std::size_t kc = ys.size() - 1;
  for (std::size_t k = 1; k < ys.size(); ++k)
    if (ys[k][0] <= wcut) {
      kc = k;
      break;
    }
  gd.r_cut = rs[kc];
  for (std::size_t k = 0; k <= kc; ++k) {
    gd.r.push_back(rs[k]);
    gd.w.push_back(ys[k][0]);
    gd.dw.push_back(ys[k][1]);
  }
  const double wc = ys[kc][0];
  const double area = ode.sigma() * std::pow(gd.r_cut, N - 1);
  const double tail_mass = area * wc * wc / (2.0 * gd.kappa);
  gd.mass = ys[kc][2] + tail_mass;
  gd.grad_sq = ys[kc][3] + gd.kappa * gd.kappa * tail_mass;
  gd.lp_power = ys[kc][4] + area * std::pow(wc, gd.two_sharp) / (gd.two_sharp * gd.kappa);
  gd.C = std::pow(gd.two_sharp / (2.0 * std::pow(gd.mass, 2.0 / N)), 1.0 / gd.two_sharp);
  gd.build_interpolant();
  return gd;
}

/// solve_soliton(N) with default options, computed once per N.
inline const GNData& soliton_for(int N) {
  static std::mutex mu;
  static std::map<int, GNData> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(N);
  if (it == cache.end()) it = cache.emplace(N, solve_soliton(N)).first;
  return it->second;
}

}  // namespace nlsgs
