#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "nlsgs/dynamics.hpp"

using namespace nlsgs;
using Catch::Approx;

namespace {

const Nonlinearity& cubic() {
  static const Nonlinearity F = Nonlinearity::power(1, 4.0);
  return F;
}

const BoxGroundState& cubic_ground_state() {
  static const BoxGroundState gs = box_ground_state(cubic(), MassSpec({2.0}), Domain::periodic_box(80.0, 1024));
  return gs;
}

double max_diff(const WaveState& a, const WaveState& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.components(); ++j)
    for (std::size_t k = 0; k < a.domain.size(); ++k) m = std::max(m, std::abs(a.phi[j][k] - b.phi[j][k]));
  return m;
}

WaveState gaussian_packet(const Domain& box, double amp, double v) {
  std::vector<cplx> c(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) {
    const double x = box.axis()[i];
    c[i] = std::polar(amp * std::exp(-x * x / 6.0), v * x);
  }
  return WaveState(box, {c});
}

}  // namespace

TEST_CASE("ground state evolves as a standing wave") {
  const auto& gs = cubic_ground_state();
  CHECK(gs.lambda[0] == Approx(1.0).margin(1e-3));
  const auto s0 = WaveState::from_field(gs.u);
  const auto r = evolve(cubic(), s0, {1e-3, 10.0, 1000});
  const auto& s = r.final_state;
  CHECK(s.t == Approx(10.0));
  double mod = 0.0, phase = 0.0;
  const cplx rot = std::polar(1.0, -gs.lambda[0] * 10.0);
  for (std::size_t k = 0; k < s.domain.size(); ++k) {
    mod = std::max(mod, std::abs(std::abs(s.phi[0][k]) - gs.u[0][k]));
    phase = std::max(phase, std::abs(s.phi[0][k] - rot * gs.u[0][k]));
  }
  CHECK(mod <= 1e-4);
  CHECK(phase <= 1e-3);
  const auto c = conservation_report(r.trajectory);
  CHECK(c.mass_drift[0] <= 1e-10);
  CHECK(c.energy_drift <= 1e-4);
  CHECK(c.max_edge_fraction < 1e-6);
}

TEST_CASE("linear flow conserves mass and energy") {
  const Nonlinearity F0(1, 1, {PowerTerm{0, 0.0, 4.0}});
  const auto box = Domain::periodic_box(60.0, 512);
  const auto r = evolve(F0, gaussian_packet(box, 1.0, 1.5), {1e-2, 2.0, 10});
  const auto c = conservation_report(r.trajectory);
  CHECK(c.mass_drift[0] <= 1e-12);
  CHECK(c.energy_drift <= 1e-12);
  // The packet moves at speed 2v in this sign convention.
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < box.size(); ++i) {
    const double w = std::norm(r.final_state.phi[0][i]);
    num += box.axis()[i] * w;
    den += w;
  }
  CHECK(num / den == Approx(-6.0).margin(1e-6));
}

TEST_CASE("Strang splitting is second order") {
  const auto box = Domain::periodic_box(80.0, 1024);
  const auto s0 = gaussian_packet(box, 0.8, 0.0);
  std::vector<double> drift, sol;
  WaveState prev = s0;
  for (double dt : {0.04, 0.02, 0.01, 0.005}) {
    const auto r = evolve(cubic(), s0, {dt, 10.0, 1});
    drift.push_back(conservation_report(r.trajectory).energy_drift);
    if (dt < 0.04) sol.push_back(max_diff(r.final_state, prev));
    prev = r.final_state;
  }
  for (std::size_t k = 1; k < drift.size(); ++k) CHECK(drift[k - 1] / drift[k] == Approx(4.0).margin(0.3));
  for (std::size_t k = 1; k < sol.size(); ++k) CHECK(sol[k - 1] / sol[k] == Approx(4.0).margin(0.3));
}

TEST_CASE("gauge covariance") {
  const auto box = Domain::periodic_box(40.0, 256);
  const Nonlinearity F(1, 2, {PowerTerm{0, 1.0, 4.0}, PowerTerm{1, 1.0, 4.0}, ProductTerm{0.5, {2.5, 2.5}}},
                       StructuralForm::FormB);
  auto a = gaussian_packet(box, 0.7, 0.3);
  a.phi.push_back(gaussian_packet(box, 0.5, -0.2).phi[0]);
  const double th = 0.83;
  WaveState b = a;
  for (auto& c : b.phi)
    for (auto& z : c) z *= std::polar(1.0, th);
  const auto ra = evolve(F, a, {1e-2, 2.0, 50}).final_state;
  const auto rb = evolve(F, b, {1e-2, 2.0, 50}).final_state;
  double m = 0.0;
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t k = 0; k < box.size(); ++k) m = std::max(m, std::abs(rb.phi[j][k] - std::polar(1.0, th) * ra.phi[j][k]));
  CHECK(m <= 1e-12);
}

TEST_CASE("orbital distance") {
  const auto& gs = cubic_ground_state();
  const std::vector<Field> orbit{gs.u};
  const auto s = WaveState::from_field(gs.u);
  CHECK(orbital_distance(s, orbit) <= 1e-6);

  // Off-grid translation and a global phase stay on the orbit.
  WaveState moved = translate(s, 3.37 * gs.u.domain().spacing() + 1.1);
  for (auto& z : moved.phi[0]) z *= std::polar(1.0, 2.1);
  CHECK(orbital_distance(moved, orbit) <= 1e-6);

  // An even real perturbation H^1-orthogonal to u is transverse to the orbit.
  const auto& d = gs.u.domain();
  Field p = sample(d, [](double x) { return std::cos(x) / std::cosh(x / 2.0); });
  const auto sp = WaveState::from_field(p);
  const auto pu = [&] {
    // <p, u>_{H^1} / <u, u>_{H^1} via the polarization identity.
    WaveState sum = sp, diff = sp;
    for (std::size_t i = 0; i < d.size(); ++i) {
      sum.phi[0][i] += gs.u[0][i];
      diff.phi[0][i] -= gs.u[0][i];
    }
    const double ip = 0.25 * (std::pow(h1_norm(sum), 2) - std::pow(h1_norm(diff), 2));
    return ip / std::pow(h1_norm(s), 2);
  }();
  for (std::size_t i = 0; i < d.size(); ++i) p[0][i] -= pu * gs.u[0][i];
  const double pn = h1_norm(WaveState::from_field(p));
  WaveState pert = s;
  for (std::size_t i = 0; i < d.size(); ++i) pert.phi[0][i] += 0.01 * p[0][i];
  CHECK(orbital_distance(pert, orbit) == Approx(0.01 * pn).epsilon(1e-2));

  CHECK_THROWS_AS(orbital_distance(s, {}), std::invalid_argument);
  CHECK_THROWS_AS(step(cubic(), s, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(step(cubic(), s, -1e-3), std::invalid_argument);
}

TEST_CASE("perturbed ground state stays near the orbit") {
  const auto& gs = cubic_ground_state();
  const auto& d = gs.u.domain();
  const std::vector<Field> orbit{gs.u};
  const Field p = sample(d, [](double x) { return std::cos(x) / std::cosh(x / 2.0); });
  const double sc = 0.01 * h1_norm(WaveState::from_field(gs.u)) / h1_norm(WaveState::from_field(p));
  Field u = gs.u;
  for (std::size_t i = 0; i < d.size(); ++i) u[0][i] += sc * p[0][i];
  const auto r = evolve(cubic(), WaveState::from_field(u), {1e-3, 20.0, 200}, &orbit);
  const auto c = conservation_report(r.trajectory);
  const double d0 = r.trajectory.front().orbital_distance;
  CHECK(d0 > 0.0);
  CHECK(c.max_orbital_distance <= 5.0 * d0);
  CHECK(c.mass_drift[0] <= 1e-10);
}

TEST_CASE("ensemble runs match sequential runs") {
  const auto box = Domain::periodic_box(40.0, 256);
  std::vector<WaveState> init;
  for (double amp : {0.4, 0.6, 0.8}) init.push_back(gaussian_packet(box, amp, 0.1));
  const EvolveOptions o{1e-2, 1.0, 10};
  const auto par = evolve_ensemble(cubic(), init, o, nullptr, 3);
  REQUIRE(par.size() == init.size());
  for (std::size_t i = 0; i < init.size(); ++i) {
    const auto seq = evolve(cubic(), init[i], o);
    CHECK(par[i].final_state.phi == seq.final_state.phi);
  }
}

TEST_CASE("trajectory CSV") {
  const auto box = Domain::periodic_box(40.0, 128);
  const auto r = evolve(cubic(), gaussian_packet(box, 0.5, 0.0), {1e-2, 0.1, 5});
  std::ostringstream os;
  write_trajectory_csv(os, r.trajectory);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "t,mass1,energy,orbital_distance");
  std::size_t rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == r.trajectory.size());
  CHECK(r.trajectory.size() == 3);
}
