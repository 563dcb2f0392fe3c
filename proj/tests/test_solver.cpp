#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "nlsgs/solver.hpp"

using namespace nlsgs;
using Catch::Approx;

namespace {

double cubic_m(double a) { return -std::pow(a, 6) / 96.0; }

bool energy_nonincreasing(const MinimizeResult& r) {
  for (std::size_t k = 1; k < r.energy_log.size(); ++k)
    if (r.energy_log[k] > r.energy_log[k - 1] + 1e-12 * std::max(1.0, std::abs(r.energy_log[k - 1]))) return false;
  return true;
}

void check_ground_state_conclusions(const MinimizeResult& r) {
  if (!r.converged || !(r.energy < 0.0)) return;
  for (bool s : r.saturation) CHECK(s);
  for (double l : r.lambda) CHECK(l >= -1e-6);
}

}  // namespace

TEST_CASE("ball projection") {
  const auto d = Domain::radial(1, 20.0, 400);
  Field u = sample(d, [](double r) { return std::exp(-r * r); });
  const double m = std::sqrt(mass(u, 0));
  CHECK(project_D(u, MassSpec({2.0 * m})) == u);
  Field big = u;
  for (double& x : big[0]) x *= 2.0;
  const Field p = project_D(big, MassSpec({m}));
  CHECK(mass(p, 0) == Approx(m * m).epsilon(1e-14));
  for (std::size_t k = 0; k < d.size(); ++k) CHECK(p[0][k] == Approx(u[0][k]).epsilon(1e-14));
  CHECK(project_D(p, MassSpec({m})) == project_D(project_D(p, MassSpec({m})), MassSpec({m})));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> G(0.0, 3.0);
  for (int t = 0; t < 50; ++t) {
    Field v(d, 2);
    for (auto& c : v.data())
      for (double& x : c) x = G(rng);
    const MassSpec a({0.5, 1.5});
    const Field q = project_D(v, a);
    for (std::size_t j = 0; j < 2; ++j) CHECK(mass(q, j) <= a[j] * a[j] + 1e-12);
  }
}

TEST_CASE("preconditioner inverts the shifted discrete Laplacian") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> G(0.0, 1.0);
  for (const auto& d : {Domain::radial(1, 10.0, 300), Domain::radial(4, 8.0, 200), Domain::biradial(6.0, 40)}) {
    const double c = 0.37;
    const Preconditioner P(d, c);
    std::vector<double> f(d.size());
    for (double& x : f) x = G(rng);
    const auto x = P.apply(f);
    const auto lap = laplacian(d, x);
    for (std::size_t k = 0; k < d.size(); ++k) CHECK(-lap[k] + c * x[k] == Approx(f[k]).margin(1e-9));
  }
}

TEST_CASE("cubic ground state in one dimension") {
  const auto d = Domain::radial(1, 100.0, 8192);
  const auto F = Nonlinearity::power(1, 4.0);
  const auto r = minimize(F, MassSpec({1.0}), d);
  REQUIRE(r.converged);
  CHECK(r.energy == Approx(-1.0 / 96.0).epsilon(1e-4));
  CHECK(r.lambda[0] == Approx(1.0 / 16.0).margin(1e-3));
  CHECK(r.saturation[0]);
  CHECK(r.energy <= r.initial_energy);
  CHECK(energy_nonincreasing(r));
  const auto rep = verify_ground_state(F, MassSpec({1.0}), r);
  CHECK(rep.all_pass());
  CHECK(rep.monotonicity_violations == 0);
  check_ground_state_conclusions(r);

  // Sign and ordering are judged relative to the peak at the verification tolerance.
  {
    MinimizeResult q = r;
    const double top = q.u[0][0];
    q.u[0].back() = -1e-9 * top;
    CHECK(verify_ground_state(F, MassSpec({1.0}), q).components_positive);
    q.u[0].back() = -1e-5 * top;
    CHECK_FALSE(verify_ground_state(F, MassSpec({1.0}), q).components_positive);
    q.u[0][4000] = q.u[0][3999] + 1e-4 * top;
    CHECK(verify_ground_state(F, MassSpec({1.0}), q).monotonicity_violations > 0);
  }

  // A deliberately truncated run is flagged.
  MinimizeOptions o;
  o.init = InitStrategy::Gaussian;
  o.max_iter = 2;
  const auto early = minimize(F, MassSpec({1.0}), d, o);
  CHECK_FALSE(early.converged);
  CHECK(early.status == SolverStatus::NotConverged);
  const auto bad = verify_ground_state(F, MassSpec({1.0}), early);
  CHECK_FALSE(bad.pde_residual_ok);
  CHECK_FALSE(bad.all_pass());
}

TEST_CASE("decoupled two-component system") {
  const auto d = Domain::radial(1, 100.0, 4096);
  const Nonlinearity F(1, 2, {PowerTerm{0, 1.0, 4.0}, PowerTerm{1, 1.0, 4.0}});
  const auto r = minimize(F, MassSpec({1.0, 1.0}), d);
  REQUIRE(r.converged);
  CHECK(r.energy == Approx(-2.0 / 96.0).epsilon(1e-3));
  CHECK(r.lambda[0] == Approx(1.0 / 16.0).margin(1e-3));
  CHECK(r.lambda[1] == Approx(1.0 / 16.0).margin(1e-3));
  check_ground_state_conclusions(r);
}

TEST_CASE("coupled form-b system saturates both masses below the decoupled level") {
  const auto d = Domain::radial(1, 100.0, 4096);
  const Nonlinearity F(1, 2, {PowerTerm{0, 1.0, 4.0}, PowerTerm{1, 1.0, 4.0}, ProductTerm{0.5, {2.5, 2.5}}},
                       StructuralForm::FormB);
  const MassSpec a({1.0, 1.0});
  const auto r = minimize(F, a, d);
  REQUIRE(r.converged);
  CHECK(r.energy < -2.0 / 96.0);
  const auto rep = verify_ground_state(F, a, r);
  CHECK(rep.lambda_positive);
  CHECK(rep.all_saturated);
  CHECK(rep.components_positive);
  CHECK(rep.monotonicity_violations == 0);
  check_ground_state_conclusions(r);
}

TEST_CASE("Schwarz acceleration never raises the energy") {
  const auto d = Domain::radial(1, 60.0, 2048);
  const auto F = Nonlinearity::power(1, 4.0);
  MinimizeOptions o;
  o.init = InitStrategy::Given;
  o.initial = sample(d, [](double r) { return 0.3 * std::exp(-(r - 6.0) * (r - 6.0) / 8.0); });
  o.symmetry = Symmetry::Radial;
  o.rearrange_every = 3;
  const auto r = minimize(F, MassSpec({1.0}), d, o);
  REQUIRE(r.converged);
  REQUIRE_FALSE(r.schwarz_deltas.empty());
  for (double dj : r.schwarz_deltas) CHECK(dj <= 1e-6);
  CHECK(r.energy == Approx(-1.0 / 96.0).epsilon(1e-3));
  CHECK(energy_nonincreasing(r));
}

TEST_CASE("antisymmetrizer commutes with a gradient step") {
  const auto d = Domain::biradial(8.0, 48);
  const Nonlinearity F = Nonlinearity::power(4, 2.5);
  Field u = sample2(d, [](double r1, double r2) { return (r1 - r2) * std::exp(-0.3 * (r1 * r1 + r2 * r2)); });
  antisymmetrize(u);
  const Field g = energy_gradient(F, u);
  Field plain = u;
  for (std::size_t k = 0; k < d.size(); ++k) plain[0][k] -= 0.1 * g[0][k];
  Field sym = plain;
  antisymmetrize(sym);
  for (std::size_t k = 0; k < d.size(); ++k) CHECK(std::abs(sym[0][k] - plain[0][k]) <= 1e-12);
}

TEST_CASE("X class minimizer lies strictly above the radial level") {
  const Nonlinearity F = Nonlinearity::power(4, 2.5);
  const MassSpec a({40.0});
  MinimizeOptions o;
  o.symmetry = Symmetry::X;
  o.init = InitStrategy::AntisymmetricSeed;
  const auto rx = minimize(F, a, Domain::biradial(30.0, 128), o);
  REQUIRE(rx.converged);
  const auto rr = minimize(F, a, Domain::radial(4, 60.0, 2048));
  REQUIRE(rr.converged);
  CHECK(rx.energy < 0.0);
  CHECK(rx.energy > rr.energy);
  CHECK(energy_nonincreasing(rx));
  check_ground_state_conclusions(rx);
  check_ground_state_conclusions(rr);
  // The iterate stays in X.
  const std::size_t n = rx.u.domain().points_per_axis();
  for (std::size_t i = 0; i < n; i += 7)
    for (std::size_t j = 0; j < n; j += 5) CHECK(rx.u[0][i * n + j] == -rx.u[0][j * n + i]);
}

TEST_CASE("refusal when the upper mass bound fails") {
  const Nonlinearity F(1, 2, {ProductTerm{1.0, {3.0, 3.0}}});
  const auto d = Domain::radial(1, 30.0, 512);
  const auto r = minimize(F, MassSpec({3.0, 3.0}), d);
  CHECK(r.status == SolverStatus::Refused);
  CHECK_FALSE(r.converged);
  CHECK(r.reason.find("upper mass bound") != std::string::npos);
  CHECK_THROWS_AS(minimize(F, MassSpec({1.0}), d), std::invalid_argument);
  MinimizeOptions o;
  o.symmetry = Symmetry::X;
  CHECK_THROWS_AS(minimize(Nonlinearity::power(1, 4.0), MassSpec({1.0}), d, o), std::invalid_argument);
}

TEST_CASE("energy map of the cubic problem") {
  const auto d = Domain::radial(1, 400.0, 16384);
  const auto F = Nonlinearity::power(1, 4.0);
  std::vector<MassSpec> grid;
  for (double a = 0.5; a <= 2.0 + 1e-12; a += 0.25) grid.emplace_back(std::vector<double>{a});
  const auto recs = scan_energy_map(F, grid, d);
  REQUIRE(recs.size() == grid.size());
  for (std::size_t k = 0; k < recs.size(); ++k) {
    const double a = recs[k].a[0];
    CHECK(recs[k].converged);
    CHECK(recs[k].m == Approx(cubic_m(a)).epsilon(1e-3));
    CHECK(recs[k].m / std::pow(a, 6) == Approx(-1.0 / 96.0).epsilon(1e-3));
    if (k > 0) CHECK(recs[k].m < recs[k - 1].m);
    check_ground_state_conclusions(recs[k].result);
  }
  for (std::size_t i = 0; i < recs.size(); ++i)
    for (std::size_t j = 0; j < recs.size(); ++j)
      if (recs[i].a[0] <= recs[j].a[0]) CHECK(recs[i].m >= recs[j].m);
}

TEST_CASE("subadditivity of the cubic energy map") {
  const auto d = Domain::radial(1, 200.0, 8192);
  const auto F = Nonlinearity::power(1, 4.0);
  const auto rep = subadditivity_check(F, MassSpec({1.0}), MassSpec({1.0}), d);
  CHECK(rep.slack == Approx(6.0 / 96.0).margin(1e-3));
  CHECK(rep.saturated);
  REQUIRE(rep.scaling.size() == 2);
  for (const auto& s : rep.scaling) CHECK(s.ok);

  const auto small = subadditivity_check(F, MassSpec({1.0}), MassSpec({0.5}), d, {}, {});
  const double exact = (std::pow(1.25, 3) - 1.0 - std::pow(0.5, 6)) / 96.0;
  CHECK(small.slack == Approx(exact).margin(1e-5));
  CHECK(small.slack > 0.0);
}

TEST_CASE("multi-start runs are deterministic") {
  const auto d = Domain::radial(1, 60.0, 2048);
  const Nonlinearity F(1, 1, {MinIntegralTerm{0, 4.0}});
  MinimizeOptions o;
  o.starts = 3;
  o.seed = 42;
  const auto r1 = minimize(F, MassSpec({2.0}), d, o);
  const auto r2 = minimize(F, MassSpec({2.0}), d, o);
  REQUIRE(r1.converged);
  CHECK(r1.energy == r2.energy);
  CHECK(r1.u == r2.u);
  CHECK(r1.energy < 0.0);
  check_ground_state_conclusions(r1);
  // The best start may land on -u; the returned profile is the positive one.
  const auto rep = verify_ground_state(F, MassSpec({2.0}), r1);
  CHECK(rep.components_positive);
  CHECK(rep.monotonicity_violations == 0);
}
