#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "nlsgs/rearrange.hpp"

using namespace nlsgs;
using Catch::Approx;

namespace {

double lp_power(const Domain& d, std::span<const double> f, double p) {
  std::vector<double> g(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) g[k] = std::pow(std::abs(f[k]), p);
  return integrate(d, g);
}

// Smooth bumps centered off the origin, so the field is not radially decreasing.
std::vector<double> random_smooth(const Domain& d, std::mt19937_64& rng, bool nonneg = false) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<double> f(d.size(), 0.0);
  for (int g = 0; g < 3; ++g) {
    const double c = 4.0 * U(rng), w = 0.6 + 1.5 * U(rng);
    const double amp = nonneg ? 0.2 + U(rng) : 2.0 * U(rng) - 0.8;
    for (std::size_t k = 0; k < d.size(); ++k) {
      const double x = (d.radius(k) - c) / w;
      f[k] += amp * std::exp(-x * x);
    }
  }
  return f;
}

bool nonincreasing(std::span<const double> f) {
  for (std::size_t k = 1; k < f.size(); ++k)
    if (f[k] > f[k - 1]) return false;
  return true;
}

std::vector<double> indicator(const Domain& d, double R, double h = 1.0) {
  std::vector<double> f(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) f[k] = d.radius(k) < R ? h : 0.0;
  return f;
}

}  // namespace

TEST_CASE("radial decreasing input is a fixed point") {
  const auto d = Domain::radial(3, 10.0, 500);
  const Field u = sample(d, [](double r) { return std::exp(-r * r) + 0.3 / (1.0 + r); });
  const auto us = schwarz(d, u[0]);
  for (std::size_t k = 0; k < d.size(); ++k) CHECK(us[k] == Approx(u[0][k]).margin(1e-12));

  // A plateau and a zero tail survive exactly.
  const auto p = indicator(d, 4.0, 2.5);
  CHECK(schwarz(d, p) == p);
}

TEST_CASE("schwarz is equimeasurable, decreasing and idempotent") {
  std::mt19937_64 rng(21);
  for (int N : {1, 2, 3, 5}) {
    const auto d = Domain::radial(N, 12.0, 2000);
    for (int t = 0; t < 10; ++t) {
      const auto f = random_smooth(d, rng);
      const auto fs = schwarz(d, f);
      CHECK(nonincreasing(fs));
      for (double p : {2.0, 4.0}) {
        const double a = lp_power(d, f, p), b = lp_power(d, fs, p);
        CHECK(std::abs(a - b) <= 1e-4 * a);
      }
      CHECK(schwarz(d, fs) == fs);
    }
  }
}

TEST_CASE("bi-radial fields rearrange into the four-dimensional ball") {
  const auto b = Domain::biradial(5.0, 96);
  const auto t = rearrangement_target(b);
  CHECK(t.dimension() == 4);
  CHECK(t.measure() == Approx(b.measure()).epsilon(1e-12));
  const Field u = sample2(b, [](double r1, double r2) {
    const double x = r1 - 1.5, y = r2 - 0.5;
    return std::exp(-x * x - 2.0 * y * y);
  });
  const Field us = schwarz(u);
  CHECK(us.domain() == t);
  CHECK(nonincreasing(us[0]));
  for (double p : {2.0, 4.0}) CHECK(lp_power(t, us[0], p) == Approx(lp_power(b, u[0], p)).epsilon(1e-4));
  CHECK(grad_norm_sq(us, 0) <= grad_norm_sq(u, 0));
}

TEST_CASE("discrete Polya-Szego on random smooth fields") {
  std::mt19937_64 rng(22);
  for (int N : {1, 2, 3, 4}) {
    const auto d = Domain::radial(N, 12.0, 1500);
    for (int t = 0; t < 25; ++t) {
      const auto f = random_smooth(d, rng);
      const auto fs = schwarz(d, f);
      CHECK(grad_norm_sq(d, fs) <= grad_norm_sq(d, f) * (1.0 + 1e-3));
    }
  }
}

TEST_CASE("merge_star basic identities") {
  const auto d = Domain::radial(2, 10.0, 1000);
  std::mt19937_64 rng(23);
  const auto u = random_smooth(d, rng), v = random_smooth(d, rng);
  const std::vector<double> zero(d.size(), 0.0);
  CHECK(merge_star(d, u, d, zero) == schwarz(d, u));
  CHECK(merge_star(d, u, d, v) == merge_star(d, v, d, u));

  // Indicators of balls: radii whose areas add.
  const double r = 1.9, rho = 2.7, h = 1.5;
  const auto m = merge_star(d, indicator(d, r, h), d, indicator(d, rho, h));
  const double R = std::sqrt(r * r + rho * rho);
  for (std::size_t k = 0; k < d.size(); ++k) {
    const double x = d.axis()[k];
    if (std::abs(x - R) < 2.0 * d.spacing()) continue;
    CHECK(m[k] == (x < R ? h : 0.0));
  }

  for (int t = 0; t < 20; ++t) {
    const auto a = random_smooth(d, rng), b = random_smooth(d, rng);
    const auto mab = merge_star(d, a, d, b);
    CHECK(nonincreasing(mab));
    for (double p : {2.0, 4.0})
      CHECK(lp_power(d, mab, p) == Approx(lp_power(d, a, p) + lp_power(d, b, p)).epsilon(1e-4));
  }
}

TEST_CASE("merge_star level sets have measure mu_u + mu_v") {
  const auto d = Domain::radial(3, 12.0, 1200);
  std::mt19937_64 rng(24);
  const auto u = random_smooth(d, rng), v = random_smooth(d, rng);
  const auto m = merge_star(d, u, d, v);
  const LayerCake cu(u, d.weights()), cv(v, d.weights());
  double top = 0.0;
  for (double x : m) top = std::max(top, x);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double max_cell = 0.0;
  for (double w : d.weights()) max_cell = std::max(max_cell, w);
  for (int t = 0; t < 100; ++t) {
    const double lvl = top * U(rng);
    double meas = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k)
      if (m[k] > lvl) meas += d.weights()[k];
    CHECK(std::abs(meas - (cu.mu(lvl) + cv.mu(lvl))) <= max_cell);
  }
}

TEST_CASE("merge_star commutes with monotone profiles") {
  const auto d = Domain::radial(1, 12.0, 4000);
  std::mt19937_64 rng(25);
  const std::vector<Profile> phis{[](double t) { return t * t; },
                                  [](double t) { return t < 1.0 ? t : (t < 2.0 ? 1.0 : t - 1.0); }};
  for (const auto& phi : phis)
    for (int t = 0; t < 5; ++t) {
      const auto u = random_smooth(d, rng), v = random_smooth(d, rng);
      std::vector<double> pu(u.size()), pv(v.size());
      for (std::size_t k = 0; k < u.size(); ++k) {
        pu[k] = phi(std::abs(u[k]));
        pv[k] = phi(std::abs(v[k]));
      }
      const auto lhs = merge_star(d, pu, d, pv);
      const auto m = merge_star(d, u, d, v);
      double e = 0.0;
      for (std::size_t k = 0; k < d.size(); ++k) e = std::max(e, std::abs(lhs[k] - phi(m[k])));
      CHECK(e < 1e-3);
    }
}

TEST_CASE("gradient subadditivity of the merge") {
  std::mt19937_64 rng(26);
  for (int N : {1, 2, 3}) {
    const auto d = Domain::radial(N, 14.0, 1400);
    for (int t = 0; t < 67; ++t) {
      const auto u = random_smooth(d, rng), v = random_smooth(d, rng);
      const double rhs = grad_norm_sq(d, u) + grad_norm_sq(d, v);
      CHECK(grad_norm_sq(d, merge_star(d, u, d, v)) <= rhs * (1.0 + 1e-3));
    }
  }
  // Strict for positive decreasing C^1 profiles.
  for (int N : {1, 2, 3}) {
    const auto d = Domain::radial(N, 16.0, 3200);
    const Field u = sample(d, [](double r) { return std::exp(-r * r / 2.0); });
    const Field v = sample(d, [](double r) { return 0.7 / std::cosh(r); });
    const double gap = grad_norm_sq(u, 0) + grad_norm_sq(v, 0) - grad_norm_sq(d, merge_star(u, v));
    CHECK(gap > 1e-3);
  }
}

TEST_CASE("product rearrangement gap") {
  const auto d = Domain::radial(2, 10.0, 1000);
  const Profile id = [](double t) { return t; };

  const Field rad(d, {sample(d, [](double r) { return std::exp(-r); })[0],
                      sample(d, [](double r) { return 1.0 / (1.0 + r * r); })[0]});
  CHECK(std::abs(product_rearrangement_gap({id, id}, rad)) < 1e-12);

  // Disjoint bumps: no overlap before, full overlap after.
  auto ring = [&](double c) {
    return sample(d, [c](double r) { return r > c - 1.0 && r < c + 1.0 ? std::pow(std::cos(0.5 * std::numbers::pi * (r - c)), 2) : 0.0; })[0];
  };
  const Field disj(d, {ring(2.0), ring(6.0)});
  const Field ds = schwarz(disj);
  std::vector<double> prod(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) prod[k] = ds[0][k] * ds[1][k];
  const double gap = product_rearrangement_gap({id, id}, disj);
  CHECK(gap > 0.1);
  CHECK(gap == Approx(integrate(d, prod)).epsilon(1e-12));

  std::mt19937_64 rng(27);
  for (int t = 0; t < 200; ++t) {
    const Field u(d, {random_smooth(d, rng), random_smooth(d, rng), random_smooth(d, rng)});
    CHECK(product_rearrangement_gap({id, id, id}, u) >= -1e-4);
  }
  const Profile bad = [](double t) { return std::exp(-t); };
  CHECK_THROWS_AS(product_rearrangement_gap({id, bad}, disj), std::invalid_argument);
}

TEST_CASE("merge product inequality") {
  const auto d = Domain::radial(3, 10.0, 1000);
  std::mt19937_64 rng(28);
  const Field zero(d, 1);
  const Field u1(d, {random_smooth(d, rng, true)}), u2(d, {random_smooth(d, rng, true)});
  CHECK(merge_product_check({u1, u2}, {zero, zero}) >= -1e-10);

  // Nested indicators: right side is the measure of the smallest |C_j| + |D_j| ball.
  const double rc1 = 2.0, rc2 = 3.0, rd1 = 2.5, rd2 = 1.5;
  const Field c1(d, {indicator(d, rc1)}), c2(d, {indicator(d, rc2)});
  const Field d1(d, {indicator(d, rd1)}), d2(d, {indicator(d, rd2)});
  auto ball = [&](double r) { return 4.0 / 3.0 * std::numbers::pi * r * r * r; };
  auto grid_ball = [&](double r) { return integrate(d, indicator(d, r)); };
  const double lhs = grid_ball(rc1) + grid_ball(rd2);
  const double rhs = std::min(grid_ball(rc1) + grid_ball(rd1), grid_ball(rc2) + grid_ball(rd2));
  CHECK(merge_product_check({c1, c2}, {d1, d2}) == Approx(rhs - lhs).margin(2.0 * ball(10.0) / 1000.0 * 0.03));
  CHECK(rhs - lhs > 0.0);

  for (int t = 0; t < 200; ++t) {
    const std::size_t Mb = 2 + t % 2;
    std::vector<Field> us, vs;
    for (std::size_t j = 0; j < Mb; ++j) {
      us.emplace_back(d, std::vector<std::vector<double>>{random_smooth(d, rng, true)});
      vs.emplace_back(d, std::vector<std::vector<double>>{random_smooth(d, rng, true)});
    }
    CHECK(merge_product_check(us, vs) >= -1e-4);
  }
  Field neg = u1;
  neg[0][3] = -1.0;
  CHECK_THROWS_AS(merge_product_check({neg}, {u1}), std::invalid_argument);
}

TEST_CASE("generalized inverse") {
  const auto sq = GeneralizedInverse::sampled([](double t) { return t * t; }, 4.0, 4000);
  for (double t : {0.01, 0.5, 2.0, 9.0}) CHECK(sq(t) == Approx(std::sqrt(t)).epsilon(1e-4));

  const auto plateau =
      GeneralizedInverse::sampled([](double t) { return t < 1.0 ? t : (t < 2.0 ? 1.0 : t - 1.0); }, 3.0, 300);
  CHECK(plateau(1.0) == Approx(2.0).margin(1e-12));
  CHECK(plateau(0.999) == Approx(0.999).margin(1e-9));
  CHECK(std::isinf(plateau(2.0)));
  CHECK(std::isinf(plateau(5.0)));

  // {F(v) > t} = {v > F^{-1}(t)} on samples.
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> U(0.0, 3.5);
  for (int k = 0; k < 2000; ++k) {
    const double v = U(rng), t = U(rng) * 0.7;
    CHECK((plateau.profile(v) > t) == (v > plateau(t)));
  }
  CHECK_THROWS_AS(GeneralizedInverse({0.0, 1.0, 2.0}, {0.0, 2.0, 1.0}), std::invalid_argument);
}
