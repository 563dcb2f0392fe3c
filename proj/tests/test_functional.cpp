#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "nlsgs/functional.hpp"

using namespace nlsgs;
using Catch::Approx;

namespace {

double sech(double x) { return 1.0 / std::cosh(x); }

const GNData& soliton(int N) {
  static std::map<int, GNData> cache;
  auto it = cache.find(N);
  if (it == cache.end()) it = cache.emplace(N, solve_soliton(N)).first;
  return it->second;
}

// u = sqrt(2) B sech(B x) solves -u'' + B^2 u = u^3 with mass 4B.
Field cubic_soliton(const Domain& d, double B) {
  return sample(d, [B](double x) { return std::sqrt(2.0) * B * sech(B * x); });
}

// Random smooth radial field: a few Gaussians with random centers and widths.
Field random_field(const Domain& d, std::size_t M, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Field u(d, M);
  for (std::size_t j = 0; j < M; ++j)
    for (int g = 0; g < 3; ++g) {
      const double c = 3.0 * U(rng), w = 0.5 + 2.0 * U(rng), amp = 2.0 * U(rng) - 0.5;
      for (std::size_t k = 0; k < d.size(); ++k) {
        const double x = (d.radius(k) - c) / w;
        u[j][k] += amp * std::exp(-x * x);
      }
    }
  return u;
}

}  // namespace

TEST_CASE("soliton N = 1 matches the sech-power solution") {
  const auto& gn = soliton(1);
  CHECK(gn.w0 == Approx(std::pow(6.0, 0.25)).margin(1e-5));
  CHECK(gn.mass == Approx(std::numbers::pi * std::sqrt(3.0) / 2.0).margin(1e-5));
  CHECK(gn.C_power() == Approx(4.0 / (std::numbers::pi * std::numbers::pi)).margin(1e-5));
  for (double x : {0.0, 0.3, 1.0, 2.5, 6.0})
    CHECK(gn.value(x) == Approx(std::pow(6.0, 0.25) * std::sqrt(sech(2.0 * std::sqrt(2.0) * x))).margin(1e-6));
  for (std::size_t k = 1; k < gn.w.size(); ++k) CHECK(gn.w[k] < gn.w[k - 1]);
  const auto j = gn.to_json();
  CHECK(j.at("N") == 1);
  CHECK(j.at("two_sharp").get<double>() == Approx(6.0));
}

TEST_CASE("soliton ODE residual is small in higher dimensions") {
  for (int N : {2, 3, 4}) {
    const auto& gn = soliton(N);
    CHECK(gn.w0 > 0.0);
    // -w'' - (N-1)/r w' + (2/N) w - w^{q-1} at interior samples, by differences of w'.
    double e = 0.0;
    for (std::size_t k = 10; k + 10 < gn.r.size(); k += 97) {
      const double r = gn.r[k], h = gn.r[k + 1] - gn.r[k];
      const double wpp = (gn.dw[k + 1] - gn.dw[k - 1]) / (2.0 * h);
      const double res = -wpp - (N - 1) / r * gn.dw[k] + (2.0 / N) * gn.w[k] - std::pow(gn.w[k], gn.two_sharp - 1.0);
      e = std::max(e, std::abs(res));
    }
    CHECK(e < 1e-5);
  }
  CHECK(soliton(4).w0 == Approx(4.336).margin(5e-3));
}

TEST_CASE("Heun shooting converges at second order") {
  const double exact = std::pow(6.0, 0.25);
  auto err = [&](double h) {
    SolitonOptions o;
    o.step = h;
    o.integrator = Integrator::Heun;
    return std::abs(solve_soliton(1, o).w0 - exact);
  };
  const double e1 = err(0.02), e2 = err(0.01), e3 = err(0.005);
  CHECK(e1 / e2 == Approx(4.0).margin(0.8));
  CHECK(e2 / e3 == Approx(4.0).margin(0.8));
  SolitonOptions bad;
  bad.w0_max = 1.2;
  CHECK_THROWS(solve_soliton(1, bad));
  CHECK_THROWS_AS(solve_soliton(0), std::invalid_argument);
}

TEST_CASE("cubic soliton energy, gradient, multipliers and Pohozaev") {
  const auto d = Domain::radial(1, 120.0, 24000);
  const auto F = Nonlinearity::power(1, 4.0);
  const double B = 0.25;
  const Field u = cubic_soliton(d, B);
  CHECK(mass(u, 0) == Approx(1.0).margin(1e-6));
  CHECK(energy(F, u) == Approx(-1.0 / 96.0).margin(1e-5));

  const auto mr = multipliers(F, u);
  CHECK(mr.lambda[0] == Approx(1.0 / 16.0).margin(1e-4));
  CHECK(mr.max_residual() < 1e-5);
  const double lam = B * B;
  CHECK(std::abs(pohozaev_residual(F, u, std::vector<double>{lam})) < 1e-5);

  const Field g = energy_gradient(F, u);
  double e = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) e = std::max(e, std::abs(g[0][k] + lam * u[0][k]));
  CHECK(e < 1e-6);

  const Field z(d, 1);
  CHECK(energy(F, z) == 0.0);
  const Field gz = energy_gradient(F, z);
  for (double x : gz[0]) CHECK(x == 0.0);
  CHECK(pohozaev_residual(F, z, std::vector<double>{3.0}) == 0.0);
  CHECK_THROWS_AS(multipliers(F, z), std::invalid_argument);
  CHECK_THROWS_AS(energy(Nonlinearity::power(2, 3.0), u), std::invalid_argument);
}

TEST_CASE("energy follows the dilation curve") {
  const auto d = Domain::radial(1, 120.0, 24000);
  const auto F = Nonlinearity::power(1, 4.0);
  const Field u = cubic_soliton(d, 0.25);
  const double K = 0.5 * grad_norm_sq(u, 0);
  for (double s : {0.6, 0.9, 1.3, 1.8}) {
    Field scaled = u;
    for (double& x : scaled[0]) x *= std::pow(s, 0.5);
    const double expected = s * s * K - potential(F, scaled) / s;
    CHECK(energy(F, dilate(u, s)) == Approx(expected).margin(1e-3));
  }
}

TEST_CASE("Kwong soliton is a critical point with lambda = 2/N") {
  for (int N : {1, 2}) {
    const auto& gn = soliton(N);
    const auto d = Domain::radial(N, 30.0, 12000);
    const Nonlinearity F = Nonlinearity::power(N, critical_exponent(N));
    const Field w = gn.profile(d);
    const auto mr = multipliers(F, w);
    CHECK(mr.lambda[0] == Approx(2.0 / N).margin(1e-4));
    CHECK(std::abs(pohozaev_residual(F, w, std::vector<double>{2.0 / N})) < 1e-4);
    CHECK(gn_check(gn, w) == Approx(1.0).margin(1e-4));
    for (double s : {0.7, 1.4}) {
      const Field ws = dilate(w, s);
      CHECK(gn_check(gn, ws) == Approx(gn_check(gn, w)).margin(1e-4));
      CHECK(multipliers(F, ws).max_residual() > 1e-3);
    }
  }
}

TEST_CASE("Gagliardo-Nirenberg ratio never exceeds one") {
  std::mt19937_64 rng(5);
  for (int N : {1, 2, 3}) {
    const auto& gn = soliton(N);
    const auto d = Domain::radial(N, 14.0, 1400);
    for (int t = 0; t < 334; ++t) {
      const Field u = random_field(d, 1, rng);
      if (mass(u, 0) < 1e-8) continue;
      CHECK(gn_check(gn, u) <= 1.0 + 1e-3);
    }
  }
  const auto d = Domain::radial(1, 20.0, 4000);
  const Field g = sample(d, [](double x) { return std::exp(-x * x); });
  CHECK(gn_check(soliton(1), g) < 1.0);
  CHECK_THROWS_AS(gn_check(soliton(1), Field(d, 1)), std::invalid_argument);
  CHECK_THROWS_AS(gn_check(soliton(2), g), std::invalid_argument);
}

TEST_CASE("energy gradient passes the directional finite-difference test") {
  std::mt19937_64 rng(9);
  const std::vector<Nonlinearity> fs{
      Nonlinearity::power(1, 4.0),
      Nonlinearity(3, 1, {PowerTerm{0, -0.5, 3.2}, PowerTerm{0, 2.0, 3.0}}),
      Nonlinearity(1, 2, {ProductTerm{1.0, {3.0, 3.0}}, PowerTerm{1, 1.0, 4.0}}),
      Nonlinearity(1, 3, {ProductTerm{0.7, {1.5, 0.0, 2.5}}}),
      Nonlinearity(1, 1, {MinIntegralTerm{0, 4.0}}),
      Nonlinearity(2, 1, {PiecewiseCriticalTerm{0}}),
      Nonlinearity(1, 1, {LogCuspTerm{0}}),
  };
  for (const auto& F : fs) {
    const auto d = Domain::radial(F.dimension(), 12.0, 1200);
    for (int t = 0; t < 3; ++t) {
      const Field u = random_field(d, F.components(), rng);
      const Field v = random_field(d, F.components(), rng);
      const Field g = energy_gradient(F, u);
      double dir = 0.0;
      for (std::size_t j = 0; j < F.components(); ++j) dir += inner(d, g[j], v[j]);
      const double eps = 1e-5;
      Field up = u, dn = u;
      for (std::size_t j = 0; j < F.components(); ++j)
        for (std::size_t k = 0; k < d.size(); ++k) {
          up[j][k] += eps * v[j][k];
          dn[j][k] -= eps * v[j][k];
        }
      const double fd = (energy(F, up) - energy(F, dn)) / (2.0 * eps);
      CHECK(std::abs(fd - dir) <= 1e-5 * std::max(1.0, std::abs(dir)));
    }
  }
}

TEST_CASE("threshold conditions") {
  const auto& gn = soliton(1);
  const Nonlinearity mi(1, 1, {MinIntegralTerm{0, 4.0}});
  const double a_star = std::pow(0.75 * std::numbers::pi * std::numbers::pi, 0.25);
  CHECK(a_star == Approx(gn.l2_norm()).margin(1e-5));
  CHECK(check_thresholds(mi, MassSpec({a_star * 1.001}), gn).etal_ok);
  CHECK_FALSE(check_thresholds(mi, MassSpec({a_star * 0.999}), gn).etal_ok);
  const auto big = check_thresholds(mi, MassSpec({1e6}), gn);
  CHECK(big.etas_ok);
  CHECK(big.etas_lhs == 0.0);
  CHECK(big.etas_margin == 1.0);

  const Nonlinearity inf0(1, 2, {PowerTerm{0, 1.0, 4.0}, PowerTerm{1, 1.0, 3.0}, ProductTerm{1.0, {3.0, 3.0}}});
  const auto small = check_thresholds(inf0, MassSpec({1e-3, 1e-3}), gn);
  CHECK(small.etal_ok);
  CHECK(small.eta0 == kInf);

  // eta_inf = 1/8 for the critical product: the upper bound holds iff |a|^4 < 1/(2 (1/8) C^6).
  const Nonlinearity prod(1, 2, {ProductTerm{1.0, {3.0, 3.0}}});
  const double a_crit = std::pow(4.0 / gn.C_power(), 0.25);
  CHECK(check_thresholds(prod, MassSpec({0.999 * a_crit / std::sqrt(2.0), 0.999 * a_crit / std::sqrt(2.0)}), gn).etas_ok);
  CHECK_FALSE(check_thresholds(prod, MassSpec({1.001 * a_crit / std::sqrt(2.0), 1.001 * a_crit / std::sqrt(2.0)}), gn).etas_ok);

  TabulatedTerm tab{0, {0.0, 1.0, 2.0}, {0.0, 0.25, 4.0}, {0.0, 1.0, 8.0}};
  const Nonlinearity F_tab(1, 1, {tab});
  CHECK_THROWS(check_thresholds(F_tab, MassSpec({1.0}), gn, false));
  CHECK_THROWS_AS(MassSpec({1.0, 0.0}), std::invalid_argument);
  CHECK_NOTHROW(MassSpec({1.0, 0.0}, true));
}

TEST_CASE("negative-energy trial functions") {
  const auto& gn = soliton(1);
  const Nonlinearity mi(1, 1, {MinIntegralTerm{0, 4.0}});
  const auto d = Domain::radial(1, 40.0, 8000);
  const auto tr = trial_negative(mi, MassSpec({2.0}), gn, d);
  CHECK(tr.branch == "t-interval");
  CHECK(tr.energy < 0.0);
  CHECK(energy(mi, tr.u) == Approx(tr.energy));
  CHECK(mass(tr.u, 0) <= 4.0 * (1.0 + 1e-12));
  const auto [lo, hi] = admissible_t_interval(MassSpec({2.0}), 1.0 / 6.0, gn);
  CHECK(tr.t >= lo);
  CHECK(tr.t < hi);

  CHECK_THROWS_AS(trial_negative(mi, MassSpec({1.5}), gn, d), TrialConstructionError);
  const auto [lo2, hi2] = admissible_t_interval(MassSpec({1.5}), 1.0 / 6.0, gn);
  CHECK(lo2 >= hi2);

  const auto wide = Domain::radial(1, 300.0, 6000);
  for (double a : {0.5, 1.0, 3.0}) {
    const auto r = trial_negative(Nonlinearity::power(1, 4.0), MassSpec({a}), gn, wide);
    CHECK(r.branch == "dilation");
    CHECK(r.energy < 0.0);
    CHECK(mass(r.u, 0) <= a * a * (1.0 + 1e-12));
  }

  // Two components, one vanishing mass; eta0 = 1/24 over both components.
  const Nonlinearity two(1, 2, {MinIntegralTerm{0, 4.0}, MinIntegralTerm{1, 4.0}});
  const auto r2 = trial_negative(two, MassSpec({3.0, 0.0}, true), gn, d);
  CHECK(r2.energy < 0.0);
  CHECK(mass(r2.u, 1) == 0.0);
}

TEST_CASE("coercivity lower bound holds on sampled fields") {
  const auto& gn = soliton(1);
  const auto d = Domain::radial(1, 20.0, 2000);
  std::mt19937_64 rng(13);
  const std::vector<std::pair<Nonlinearity, MassSpec>> cases{
      {Nonlinearity::power(1, 4.0), MassSpec({1.5})},
      {Nonlinearity(1, 1, {PiecewiseCriticalTerm{0}}), MassSpec({3.0})},
      {Nonlinearity(1, 2, {ProductTerm{1.0, {3.0, 3.0}}, PowerTerm{0, 1.0, 3.0}}), MassSpec({0.8, 0.8})},
  };
  for (const auto& [F, a] : cases) {
    const auto b = coercivity_bound(F, a, gn);
    CHECK(b.kinetic_coeff > 0.0);
    for (int t = 0; t < 100; ++t) {
      Field u = random_field(d, F.components(), rng);
      std::uniform_real_distribution<double> U(0.05, 1.0);
      for (std::size_t j = 0; j < F.components(); ++j) {
        const double m = std::sqrt(mass(u, j));
        if (m == 0.0) continue;
        const double scale = U(rng) * a[j] / m;
        for (double& x : u[j]) x *= scale;
      }
      double gsq = 0.0;
      for (std::size_t j = 0; j < F.components(); ++j) gsq += grad_norm_sq(u, j);
      CHECK(energy(F, u) >= b.lower_bound(gsq, a) - 1e-9);
    }
  }
  CHECK_THROWS_AS(coercivity_bound(Nonlinearity(1, 2, {ProductTerm{1.0, {3.0, 3.0}}}), MassSpec({3.0, 3.0}), gn),
                  std::invalid_argument);
}
