#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <thread>
#include <vector>

#include "grid.hpp"
#include "rearrange.hpp"
#include "report.hpp"

namespace nlsgs {

namespace detail {

// Sum of three Gaussian rings off the origin; signed unless nonneg.
inline std::vector<double> random_rings(const Domain& d, std::mt19937_64& rng, bool nonneg) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<double> f(d.size(), 0.0);
  const double reach = 4.2;
  for (int g = 0; g < 3; ++g) {
    const double c = reach * U(rng), w = 0.6 + 1.5 * U(rng);
    const double amp = nonneg ? 0.2 + U(rng) : 2.0 * U(rng) - 0.8;
    for (std::size_t k = 0; k < d.size(); ++k) {
      const double x = (d.radius(k) - c) / w;
      f[k] += amp * std::exp(-x * x);
    }
  }
  return f;
}

inline double abs_power_integral(const Domain& d, std::span<const double> f, double p) {
  std::vector<double> g(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) g[k] = std::pow(std::abs(f[k]), p);
  return integrate(d, g);
}

struct CaseMetrics {
  double equimeasurability = 0.0;
  double polya_szego = -std::numeric_limits<double>::infinity();
  double idempotence_failures = 0.0;
  double symmetry_failures = 0.0;
  double level_set_cells = 0.0;
  double composition = 0.0;
  double mass_additivity = 0.0;
  double gradient_subadditivity = -std::numeric_limits<double>::infinity();
  double product_gap = std::numeric_limits<double>::infinity();
  double merge_product = std::numeric_limits<double>::infinity();
  double inverse_mismatches = 0.0;

  void absorb(const CaseMetrics& o) {
    equimeasurability = std::max(equimeasurability, o.equimeasurability);
    polya_szego = std::max(polya_szego, o.polya_szego);
    idempotence_failures += o.idempotence_failures;
    symmetry_failures += o.symmetry_failures;
    level_set_cells = std::max(level_set_cells, o.level_set_cells);
    composition = std::max(composition, o.composition);
    mass_additivity = std::max(mass_additivity, o.mass_additivity);
    gradient_subadditivity = std::max(gradient_subadditivity, o.gradient_subadditivity);
    product_gap = std::min(product_gap, o.product_gap);
    merge_product = std::min(merge_product, o.merge_product);
    inverse_mismatches += o.inverse_mismatches;
  }
};

inline CaseMetrics rearrangement_case(std::uint64_t seed, std::size_t index, double spacing = 0.01) {
  std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                   static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(ss);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  CaseMetrics m;
  const int N = 1 + static_cast<int>(index % 4);
  // Room for the merged support: measures add, so radii grow by 2^{1/N}.
  const double extent = std::ceil(14.0 * std::pow(2.0, 1.0 / N)) + 2.0;
  const auto d = Domain::radial(N, extent, static_cast<std::size_t>(extent / spacing));

  const auto u = random_rings(d, rng, false), v = random_rings(d, rng, false);
  const auto us = schwarz(d, u);
  for (double p : {2.0, 4.0}) {
    const double a = abs_power_integral(d, u, p);
    m.equimeasurability = std::max(m.equimeasurability, std::abs(abs_power_integral(d, us, p) - a) / a);
  }
  m.polya_szego = grad_norm_sq(d, us) / grad_norm_sq(d, u) - 1.0;
  m.idempotence_failures = schwarz(d, us) == us ? 0.0 : 1.0;

  const auto muv = merge_star(d, u, d, v);
  m.symmetry_failures = muv == merge_star(d, v, d, u) ? 0.0 : 1.0;

  // Level sets of the merge have measure mu_u + mu_v, up to one cell.
  {
    const LayerCake cu(u, d.weights()), cv(v, d.weights());
    const double top = *std::max_element(muv.begin(), muv.end());
    const double cell = *std::max_element(d.weights().begin(), d.weights().end());
    for (int t = 0; t < 100; ++t) {
      const double lvl = top * U(rng);
      double meas = 0.0;
      for (std::size_t k = 0; k < d.size(); ++k)
        if (muv[k] > lvl) meas += d.weights()[k];
      m.level_set_cells = std::max(m.level_set_cells, std::abs(meas - cu.mu(lvl) - cv.mu(lvl)) / cell);
    }
  }

  // Composition with monotone profiles. A cell average of a decreasing profile is
  // bracketed by the neighbouring cell averages, so Phi of those brackets the left side.
  {
    const std::vector<Profile> phis{[](double t) { return t * t; },
                                    [](double t) { return t < 0.5 ? t : (t < 1.0 ? 0.5 : t - 0.5); }};
    double peak = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) peak = std::max({peak, std::abs(u[k]), std::abs(v[k])});
    for (const auto& phi : phis) {
      std::vector<double> pu(d.size()), pv(d.size());
      for (std::size_t k = 0; k < d.size(); ++k) {
        pu[k] = phi(std::abs(u[k]));
        pv[k] = phi(std::abs(v[k]));
      }
      const auto lhs = merge_star(d, pu, d, pv);
      const double top = phi(peak);
      double e = 0.0;
      for (std::size_t k = 0; k < d.size(); ++k) {
        const double hi = k == 0 ? top : phi(muv[k - 1]);
        const double lo = k + 1 < d.size() ? phi(muv[k + 1]) : 0.0;
        e = std::max({e, lhs[k] - hi, lo - lhs[k]});
      }
      m.composition = std::max(m.composition, e / top);
    }
  }

  for (double p : {2.0, 4.0}) {
    const double a = abs_power_integral(d, u, p) + abs_power_integral(d, v, p);
    m.mass_additivity = std::max(m.mass_additivity, std::abs(abs_power_integral(d, muv, p) - a) / a);
  }
  m.gradient_subadditivity = grad_norm_sq(d, muv) / (grad_norm_sq(d, u) + grad_norm_sq(d, v)) - 1.0;

  {
    const Profile id = [](double t) { return t; };
    const Field w(d, {u, v, random_rings(d, rng, false)});
    m.product_gap = product_rearrangement_gap({id, id, id}, w);
  }
  {
    const std::size_t Mb = 2 + index % 2;
    std::vector<Field> a, b;
    for (std::size_t j = 0; j < Mb; ++j) {
      a.emplace_back(d, std::vector<std::vector<double>>{random_rings(d, rng, true)});
      b.emplace_back(d, std::vector<std::vector<double>>{random_rings(d, rng, true)});
    }
    m.merge_product = merge_product_check(a, b);
  }

  // {F(x) > t} = {x > F^{-1}(t)} on a random nondecreasing profile with a plateau.
  {
    const double p0 = 0.3 + U(rng), p1 = p0 + 0.2 + U(rng), slope = 0.5 + U(rng);
    const Profile f = [=](double s) { return s < p0 ? slope * s : (s < p1 ? slope * p0 : slope * (p0 + s - p1)); };
    const auto inv = GeneralizedInverse::sampled(f, 4.0, 400);
    for (int t = 0; t < 200; ++t) {
      const double x = 4.0 * U(rng), lvl = inv.sup() * 1.2 * U(rng);
      if ((inv.profile(x) > lvl) != (x > inv(lvl))) m.inverse_mismatches += 1.0;
    }
  }
  return m;
}

}  // namespace detail

/// Randomized rearrangement property suite; cases run on up to `threads` workers.
inline std::vector<Check> rearrangement_suite(std::size_t cases, std::uint64_t seed, unsigned threads = 1) {
  std::vector<detail::CaseMetrics> per(cases);
  const unsigned w = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(cases, 1))));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < w; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < cases; i += w) per[i] = detail::rearrangement_case(seed, i);
      });
  }
  detail::CaseMetrics all;
  for (const auto& m : per) all.absorb(m);

  // Strict gradient gap for positive decreasing C^1 profiles.
  double strict = std::numeric_limits<double>::infinity();
  for (int N : {1, 2, 3}) {
    const auto d = Domain::radial(N, 16.0, 3200);
    const Field u = sample(d, [](double r) { return std::exp(-r * r / 2.0); });
    const Field v = sample(d, [](double r) { return 0.7 / std::cosh(r); });
    strict = std::min(strict, grad_norm_sq(u, 0) + grad_norm_sq(v, 0) - grad_norm_sq(d, merge_star(u, v)));
  }

  return {
      at_most("equimeasurability relative error", all.equimeasurability, 1e-4),
      at_most("Polya-Szego excess", all.polya_szego, 1e-3),
      at_most("idempotence failures", all.idempotence_failures, 0.0),
      at_most("merge symmetry failures", all.symmetry_failures, 0.0),
      at_most("merge level-set error in cells", all.level_set_cells, 1.0),
      at_most("merge composition bracket violation", all.composition, 1e-12),
      at_most("merge mass additivity relative error", all.mass_additivity, 1e-4),
      at_most("merge gradient subadditivity excess", all.gradient_subadditivity, 1e-3),
      at_least("merge gradient strict gap", strict, 1e-6),
      at_least("product rearrangement gap", all.product_gap, -1e-4),
      at_least("merge product inequality", all.merge_product, -1e-4),
      at_most("generalized inverse level-set mismatches", all.inverse_mismatches, 0.0),
  };
}

}  // namespace nlsgs
