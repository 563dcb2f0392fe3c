#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <exception>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <vector>

#include <fftw3.h>

#include <boost/math/tools/minima.hpp>

#include "functional.hpp"
#include "grid.hpp"
#include "nonlinearity.hpp"
#include "solver.hpp"

namespace nlsgs {

using cplx = std::complex<double>;

/// Complex M-component state on a PeriodicBox1D at time t.
struct WaveState {
  Domain domain;
  std::vector<std::vector<cplx>> phi;
  double t = 0.0;

  WaveState(Domain d, std::vector<std::vector<cplx>> values, double time = 0.0)
      : domain(std::move(d)), phi(std::move(values)), t(time) {
    if (domain.kind() != DomainKind::PeriodicBox1D) throw std::invalid_argument("WaveState needs a PeriodicBox1D");
    if (phi.empty()) throw std::invalid_argument("WaveState needs at least one component");
    for (const auto& c : phi)
      if (c.size() != domain.size()) throw std::invalid_argument("WaveState component size does not match the box");
  }

  static WaveState from_field(const Field& u, double time = 0.0) {
    std::vector<std::vector<cplx>> v(u.components());
    for (std::size_t j = 0; j < u.components(); ++j) v[j].assign(u[j].begin(), u[j].end());
    return WaveState(u.domain(), std::move(v), time);
  }

  std::size_t components() const noexcept { return phi.size(); }

  Field modulus() const {
    Field m(domain, phi.size());
    for (std::size_t j = 0; j < phi.size(); ++j)
      for (std::size_t k = 0; k < domain.size(); ++k) m[j][k] = std::abs(phi[j][k]);
    return m;
  }
};

namespace detail {

// FFTW planning is not thread-safe; execution on distinct plans is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

/// Unnormalized forward/backward DFT of one length, on an owned buffer.
class Fft {
 public:
  explicit Fft(std::size_t n) : n_(n) {
    buf_ = fftw_alloc_complex(n);
    std::lock_guard lock(fftw_planner_mutex());
    fwd_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;
  ~Fft() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(buf_);
  }

  cplx* data() noexcept { return reinterpret_cast<cplx*>(buf_); }
  std::size_t size() const noexcept { return n_; }
  void forward() { fftw_execute(fwd_); }
  void backward() { fftw_execute(bwd_); }

 private:
  std::size_t n_;
  fftw_complex* buf_;
  fftw_plan fwd_, bwd_;
};

/// Angular wavenumbers in FFTW order.
inline std::vector<double> wavenumbers(const Domain& box) {
  const std::size_t n = box.size();
  std::vector<double> k(n);
  const double base = 2.0 * std::numbers::pi / box.extent();
  for (std::size_t q = 0; q < n; ++q) {
    const double s = q <= n / 2 ? static_cast<double>(q) : static_cast<double>(q) - static_cast<double>(n);
    k[q] = base * s;
  }
  return k;
}

inline void check_box_model(const Nonlinearity& F, const Domain& box, std::size_t components) {
  if (box.kind() != DomainKind::PeriodicBox1D) throw std::invalid_argument("dynamics needs a PeriodicBox1D");
  if (F.dimension() != 1) throw std::invalid_argument("dynamics runs in one space dimension");
  if (F.components() != components) throw std::invalid_argument("nonlinearity and state have different M");
}

}  // namespace detail

/// Strang split-step propagator for i d_t Phi - Lap Phi = grad F(Phi) on a periodic box.
class SplitStep {
 public:
  SplitStep(const Nonlinearity& F, const Domain& box, double dt) : F_(F), box_(box), dt_(dt), fft_(box.size()) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
    detail::check_box_model(F, box, F.components());
    const auto k = detail::wavenumbers(box);
    linear_.resize(k.size());
    const double inv_n = 1.0 / static_cast<double>(k.size());
    for (std::size_t q = 0; q < k.size(); ++q) linear_[q] = std::polar(inv_n, k[q] * k[q] * dt);
  }

  double dt() const noexcept { return dt_; }

  void step(WaveState& s) {
    if (!(s.domain == box_)) throw std::invalid_argument("state lives on a different box");
    detail::check_box_model(F_, s.domain, s.components());
    nonlinear(s, 0.5 * dt_);
    for (auto& c : s.phi) {
      cplx* b = fft_.data();
      std::copy(c.begin(), c.end(), b);
      fft_.forward();
      for (std::size_t q = 0; q < c.size(); ++q) b[q] *= linear_[q];
      fft_.backward();
      std::copy(b, b + c.size(), c.begin());
    }
    nonlinear(s, 0.5 * dt_);
    s.t += dt_;
  }

 private:
  void nonlinear(WaveState& s, double tau) const {
    const std::size_t M = s.components();
    std::vector<double> t(M), g(M);
    for (std::size_t k = 0; k < box_.size(); ++k) {
      for (std::size_t j = 0; j < M; ++j) t[j] = std::abs(s.phi[j][k]);
      F_.gauge_rates(t, g);
      for (std::size_t j = 0; j < M; ++j)
        if (g[j] != 0.0) s.phi[j][k] *= std::polar(1.0, -tau * g[j]);
    }
  }

  Nonlinearity F_;
  Domain box_;
  double dt_;
  detail::Fft fft_;
  std::vector<cplx> linear_;
};

/// One Strang step of size dt.
inline WaveState step(const Nonlinearity& F, const WaveState& state, double dt) {
  SplitStep P(F, state.domain, dt);
  WaveState out = state;
  P.step(out);
  return out;
}

inline std::vector<double> wave_masses(const WaveState& s) {
  const double h = s.domain.spacing();
  std::vector<double> m;
  for (const auto& c : s.phi) {
    double a = 0.0;
    for (const cplx& z : c) a += std::norm(z);
    m.push_back(h * a);
  }
  return m;
}

/// Spectral kinetic energy minus the potential, on the box.
inline double wave_energy(const Nonlinearity& F, const WaveState& s) {
  detail::check_box_model(F, s.domain, s.components());
  const std::size_t n = s.domain.size();
  const double h = s.domain.spacing();
  const auto k = detail::wavenumbers(s.domain);
  detail::Fft fft(n);
  double kin = 0.0;
  for (const auto& c : s.phi) {
    std::copy(c.begin(), c.end(), fft.data());
    fft.forward();
    for (std::size_t q = 0; q < n; ++q) kin += k[q] * k[q] * std::norm(fft.data()[q]);
  }
  kin *= h / static_cast<double>(n);
  double pot = 0.0;
  std::vector<double> t(s.components());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < t.size(); ++j) t[j] = std::abs(s.phi[j][i]);
    pot += F.value(t);
  }
  return 0.5 * kin - h * pot;
}

/// Share of the mass lying in the outer tenth of the box on each side.
inline double edge_fraction(const WaveState& s) {
  const double L = s.domain.extent();
  const auto x = s.domain.axis();
  double edge = 0.0, all = 0.0;
  for (const auto& c : s.phi)
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double w = std::norm(c[i]);
      all += w;
      if (std::abs(x[i]) >= 0.4 * L) edge += w;
    }
  return all > 0.0 ? edge / all : 0.0;
}

/// Translate every component by y through the Fourier interpolant.
inline WaveState translate(const WaveState& s, double y) {
  const std::size_t n = s.domain.size();
  const auto k = detail::wavenumbers(s.domain);
  detail::Fft fft(n);
  WaveState out = s;
  for (auto& c : out.phi) {
    std::copy(c.begin(), c.end(), fft.data());
    fft.forward();
    for (std::size_t q = 0; q < n; ++q) {
      const double kq = (n % 2 == 0 && q == n / 2) ? 0.0 : k[q];
      fft.data()[q] *= std::polar(1.0 / static_cast<double>(n), -kq * y);
    }
    fft.backward();
    std::copy(fft.data(), fft.data() + n, c.begin());
  }
  return out;
}

/// Real box field from a one-dimensional radial profile, by monotone interpolation in |x|.
inline Field embed_radial(const Field& u, const Domain& box) {
  const Domain& d = u.domain();
  if (d.kind() != DomainKind::RadialN || d.dimension() != 1) throw std::invalid_argument("embed_radial needs RadialN with N = 1");
  if (box.kind() != DomainKind::PeriodicBox1D) throw std::invalid_argument("embed_radial needs a PeriodicBox1D target");
  Field out(box, u.components());
  for (std::size_t j = 0; j < u.components(); ++j) {
    const detail::RadialInterpolant p(d.axis(), u[j], d.extent());
    for (std::size_t i = 0; i < box.size(); ++i) out[j][i] = p(box.axis()[i]);
  }
  return out;
}

struct BoxGroundState {
  Field u;
  std::vector<double> lambda;
  MinimizeResult radial;
};

/// Minimizer on a half-line grid of the box, embedded into the box.
inline BoxGroundState box_ground_state(const Nonlinearity& F, const MassSpec& a, const Domain& box,
                                       MinimizeOptions o = {}, std::size_t refine = 8) {
  detail::check_box_model(F, box, a.size());
  const auto rd = Domain::radial(1, 0.5 * box.extent(), refine * box.size());
  auto r = minimize(F, a, rd, o);
  if (!r.converged) throw NonConvergenceError("ground state for the dynamics did not converge: " + r.reason);
  Field u = embed_radial(r.u, box);
  return {std::move(u), r.lambda, std::move(r)};
}

/**
 * @brief min over the sample, translations and per-component phases of the H^1 distance.
 *
 * Translations are searched on the grid by FFT cross-correlation, then refined
 * to sub-grid accuracy on the trigonometric interpolant.
 */
inline double orbital_distance(const WaveState& s, const std::vector<Field>& sample) {
  if (sample.empty()) throw std::invalid_argument("orbital_distance needs a non-empty ground-state sample");
  const Domain& box = s.domain;
  const std::size_t n = box.size();
  const std::size_t M = s.components();
  const double h = box.spacing();
  const auto k = detail::wavenumbers(box);
  detail::Fft fft(n);

  auto spectrum = [&](auto begin) {
    std::copy(begin, begin + static_cast<std::ptrdiff_t>(n), fft.data());
    fft.forward();
    return std::vector<cplx>(fft.data(), fft.data() + n);
  };
  auto h1_sq = [&](const std::vector<cplx>& F) {
    double a = 0.0;
    for (std::size_t q = 0; q < n; ++q) a += (1.0 + k[q] * k[q]) * std::norm(F[q]);
    return h / static_cast<double>(n) * a;
  };

  std::vector<std::vector<cplx>> P(M);
  double phi_sq = 0.0;
  for (std::size_t j = 0; j < M; ++j) {
    P[j] = spectrum(s.phi[j].begin());
    phi_sq += h1_sq(P[j]);
  }

  double best = std::numeric_limits<double>::infinity();
  for (const Field& u : sample) {
    if (!(u.domain() == box) || u.components() != M) throw std::invalid_argument("ground-state sample does not match the state");
    std::vector<std::vector<cplx>> cross(M);
    double u_sq = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
      std::vector<cplx> uc(u[j].begin(), u[j].end());
      const auto U = spectrum(uc.begin());
      u_sq += h1_sq(U);
      cross[j].resize(n);
      for (std::size_t q = 0; q < n; ++q) cross[j][q] = (1.0 + k[q] * k[q]) * P[j][q] * std::conj(U[q]);
    }
    // Grid scan: C_j(m h) is a backward DFT of the weighted cross spectrum.
    std::vector<double> score(n, 0.0);
    for (std::size_t j = 0; j < M; ++j) {
      std::copy(cross[j].begin(), cross[j].end(), fft.data());
      fft.backward();
      for (std::size_t m = 0; m < n; ++m) score[m] += std::abs(fft.data()[m]);
    }
    const auto m_best = static_cast<std::size_t>(std::max_element(score.begin(), score.end()) - score.begin());
    const double scale = h / static_cast<double>(n);
    auto overlap = [&](double y) {
      double s_total = 0.0;
      for (std::size_t j = 0; j < M; ++j) {
        cplx c = 0.0;
        for (std::size_t q = 0; q < n; ++q) {
          const double kq = (n % 2 == 0 && q == n / 2) ? 0.0 : k[q];
          c += cross[j][q] * std::polar(1.0, kq * y);
        }
        s_total += std::abs(c);
      }
      return scale * s_total;
    };
    const double y0 = static_cast<double>(m_best) * h;
    const auto [y_star, neg] = boost::math::tools::brent_find_minima(
        [&](double y) { return -overlap(y); }, y0 - h, y0 + h, std::numeric_limits<double>::digits / 2);
    const double grid_val = scale * score[m_best];
    const double ov = std::max(-neg, grid_val);
    best = std::min(best, phi_sq + u_sq - 2.0 * ov);
  }
  return std::sqrt(std::max(0.0, best));
}

/// H^1 norm of a state, spectrally.
inline double h1_norm(const WaveState& s) {
  const std::size_t n = s.domain.size();
  const auto k = detail::wavenumbers(s.domain);
  detail::Fft fft(n);
  double a = 0.0;
  for (const auto& c : s.phi) {
    std::copy(c.begin(), c.end(), fft.data());
    fft.forward();
    for (std::size_t q = 0; q < n; ++q) a += (1.0 + k[q] * k[q]) * std::norm(fft.data()[q]);
  }
  return std::sqrt(s.domain.spacing() / static_cast<double>(n) * a);
}

struct TrajectorySample {
  double t;
  std::vector<double> masses;
  double energy;
  double orbital_distance;  // NaN without a ground-state sample
  double edge_fraction;
};

struct EvolveOptions {
  double dt = 1e-3;
  double T = 10.0;
  std::size_t sample_every = 100;
};

struct EvolveResult {
  WaveState final_state;
  std::vector<TrajectorySample> trajectory;
};

inline TrajectorySample observe(const Nonlinearity& F, const WaveState& s, const std::vector<Field>* orbit) {
  return {s.t, wave_masses(s), wave_energy(F, s),
          orbit && !orbit->empty() ? orbital_distance(s, *orbit) : std::numeric_limits<double>::quiet_NaN(),
          edge_fraction(s)};
}

/// Evolve to T in round(T / dt) equal steps, sampling every sample_every steps and at the end.
inline EvolveResult evolve(const Nonlinearity& F, const WaveState& initial, const EvolveOptions& o,
                           const std::vector<Field>* orbit = nullptr) {
  if (!(o.dt > 0.0) || !(o.T >= 0.0) || !std::isfinite(o.T)) throw std::invalid_argument("evolve needs dt > 0 and T >= 0");
  if (o.sample_every == 0) throw std::invalid_argument("sample_every must be positive");
  const auto steps = static_cast<std::size_t>(std::llround(o.T / o.dt));
  const double dt = steps > 0 ? o.T / static_cast<double>(steps) : o.dt;
  SplitStep P(F, initial.domain, dt);
  EvolveResult r{initial, {}};
  r.trajectory.push_back(observe(F, r.final_state, orbit));
  for (std::size_t s = 1; s <= steps; ++s) {
    P.step(r.final_state);
    if (s % o.sample_every == 0 || s == steps) r.trajectory.push_back(observe(F, r.final_state, orbit));
  }
  return r;
}

/// Independent runs spread over up to `threads` workers; results keep input order.
inline std::vector<EvolveResult> evolve_ensemble(const Nonlinearity& F, const std::vector<WaveState>& initial,
                                                 const EvolveOptions& o, const std::vector<Field>* orbit,
                                                 unsigned threads) {
  std::vector<std::optional<EvolveResult>> slots(initial.size());
  std::vector<std::exception_ptr> errors(initial.size());
  const unsigned w = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(initial.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < w; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < initial.size(); i += w) {
          try {
            slots[i] = evolve(F, initial[i], o, orbit);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
  }
  std::vector<EvolveResult> out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

struct ConservationReport {
  std::vector<double> mass_drift;
  double energy_drift = 0.0;
  double max_edge_fraction = 0.0;
  double max_orbital_distance = std::numeric_limits<double>::quiet_NaN();
};

/// Max relative drift from the first sample; absolute when the initial value is zero.
inline ConservationReport conservation_report(const std::vector<TrajectorySample>& traj) {
  ConservationReport r;
  if (traj.empty()) return r;
  const auto& first = traj.front();
  auto rel = [](double v, double v0) { return v0 != 0.0 ? std::abs(v - v0) / std::abs(v0) : std::abs(v - v0); };
  r.mass_drift.assign(first.masses.size(), 0.0);
  for (const auto& s : traj) {
    for (std::size_t j = 0; j < s.masses.size(); ++j)
      r.mass_drift[j] = std::max(r.mass_drift[j], rel(s.masses[j], first.masses[j]));
    r.energy_drift = std::max(r.energy_drift, rel(s.energy, first.energy));
    r.max_edge_fraction = std::max(r.max_edge_fraction, s.edge_fraction);
    if (!std::isnan(s.orbital_distance))
      r.max_orbital_distance = std::isnan(r.max_orbital_distance) ? s.orbital_distance
                                                                  : std::max(r.max_orbital_distance, s.orbital_distance);
  }
  return r;
}

inline void write_trajectory_csv(std::ostream& os, const std::vector<TrajectorySample>& traj) {
  const std::size_t M = traj.empty() ? 0 : traj.front().masses.size();
  os << "t";
  for (std::size_t j = 0; j < M; ++j) os << ",mass" << j + 1;
  os << ",energy,orbital_distance\n";
  const auto old = os.precision(17);
  for (const auto& s : traj) {
    os << s.t;
    for (double m : s.masses) os << ',' << m;
    os << ',' << s.energy << ',';
    if (std::isnan(s.orbital_distance)) os << "nan";
    else os << s.orbital_distance;
    os << '\n';
  }
  os.precision(old);
}

}  // namespace nlsgs
