#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <math.h>  // pchip calls isnan unqualified

#include <boost/math/interpolators/pchip.hpp>

namespace nlsgs {

enum class DomainKind { RadialN, BiRadial, PeriodicBox1D };

inline std::string to_string(DomainKind k) {
  switch (k) {
    case DomainKind::RadialN: return "RadialN";
    case DomainKind::BiRadial: return "BiRadial";
    case DomainKind::PeriodicBox1D: return "PeriodicBox1D";
  }
  return "?";
}

inline DomainKind domain_kind_from_string(const std::string& s) {
  if (s == "RadialN") return DomainKind::RadialN;
  if (s == "BiRadial") return DomainKind::BiRadial;
  if (s == "PeriodicBox1D") return DomainKind::PeriodicBox1D;
  throw std::invalid_argument("unknown domain kind '" + s + "'");
}

/// Surface area of the unit sphere in R^N (2 for N = 1).
inline double unit_sphere_area(int N) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

/**
 * @brief Discretized geometry with quadrature weights.
 *
 * RadialN: cells [ih, (i+1)h] of [0, r_max], nodes at cell centres,
 * weight sigma_{N-1} r_i^{N-1} h.  BiRadial: tensor product of two
 * planar radial axes (N = 4, x = (x1, x2) in R^2 x R^2), node index
 * i * n + j for (r1_i, r2_j).  PeriodicBox1D: nodes x_i = -L/2 + i h.
 *
 * A Domain is an immutable handle; copies share the same tables.
 */
class Domain {
 public:
  static Domain radial(int N, double r_max, std::size_t n_points) {
    if (N < 1) throw std::invalid_argument("RadialN needs N >= 1");
    check_extent(r_max, n_points);
    return Domain(build(DomainKind::RadialN, N, r_max, n_points));
  }

  static Domain biradial(double r_max, std::size_t n_points) {
    check_extent(r_max, n_points);
    return Domain(build(DomainKind::BiRadial, 4, r_max, n_points));
  }

  static Domain periodic_box(double length, std::size_t n_points) {
    check_extent(length, n_points);
    return Domain(build(DomainKind::PeriodicBox1D, 1, length, n_points));
  }

  DomainKind kind() const noexcept { return d_->kind; }
  int dimension() const noexcept { return d_->N; }
  /// r_max for radial kinds, box length L for PeriodicBox1D.
  double extent() const noexcept { return d_->extent; }
  std::size_t points_per_axis() const noexcept { return d_->n; }
  std::size_t size() const noexcept { return d_->weights.size(); }
  double spacing() const noexcept { return d_->h; }
  /// Node coordinates along one axis (radii, or box abscissae).
  std::span<const double> axis() const noexcept { return d_->axis; }
  std::span<const double> weights() const noexcept { return d_->weights; }
  /// One-axis cell weights (radial kinds).
  std::span<const double> axis_weights() const noexcept { return d_->axis_weights; }
  /// sigma r^{m-1} at faces r = k h, k = 0..n (radial kinds, m the axis dimension).
  std::span<const double> face_areas() const noexcept { return d_->faces; }
  /// Exact measure of the truncated domain.
  double measure() const noexcept { return d_->measure; }
  /// Radial distance |x| of node k.
  double radius(std::size_t k) const {
    if (d_->kind == DomainKind::BiRadial) {
      const std::size_t n = d_->n;
      return std::hypot(d_->axis[k / n], d_->axis[k % n]);
    }
    return std::abs(d_->axis[k]);
  }

  bool operator==(const Domain& o) const noexcept {
    return d_ == o.d_ || (d_->kind == o.d_->kind && d_->N == o.d_->N &&
                          d_->extent == o.d_->extent && d_->n == o.d_->n);
  }

 private:
  struct Data {
    DomainKind kind;
    int N;
    double extent;
    std::size_t n;
    double h;
    std::vector<double> axis, axis_weights, faces, weights;
    double measure;
  };

  explicit Domain(std::shared_ptr<const Data> d) : d_(std::move(d)) {}

  static void check_extent(double extent, std::size_t n) {
    if (!(extent > 0.0) || !std::isfinite(extent)) throw std::invalid_argument("domain extent must be positive");
    if (n < 4) throw std::invalid_argument("domain needs at least 4 points per axis");
  }

  static std::shared_ptr<const Data> build(DomainKind kind, int N, double extent, std::size_t n) {
    auto d = std::make_shared<Data>();
    d->kind = kind;
    d->N = N;
    d->extent = extent;
    d->n = n;
    d->h = extent / static_cast<double>(n);
    const double h = d->h;
    d->axis.resize(n);
    if (kind == DomainKind::PeriodicBox1D) {
      for (std::size_t i = 0; i < n; ++i) d->axis[i] = -0.5 * extent + h * static_cast<double>(i);
      d->weights.assign(n, h);
      d->measure = extent;
      return d;
    }
    const int m = kind == DomainKind::BiRadial ? 2 : N;
    const double sigma = unit_sphere_area(m);
    d->axis_weights.resize(n);
    d->faces.resize(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
      d->axis[i] = (static_cast<double>(i) + 0.5) * h;
      d->axis_weights[i] = sigma * std::pow(d->axis[i], m - 1) * h;
    }
    for (std::size_t k = 0; k <= n; ++k) d->faces[k] = sigma * std::pow(static_cast<double>(k) * h, m - 1);
    if (kind == DomainKind::RadialN) {
      d->weights = d->axis_weights;
      d->measure = sigma / N * std::pow(extent, N);
    } else {
      d->weights.resize(n * n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d->weights[i * n + j] = d->axis_weights[i] * d->axis_weights[j];
      const double disc = std::numbers::pi * extent * extent;
      d->measure = disc * disc;
    }
    return d;
  }

  std::shared_ptr<const Data> d_;
};

/// M real component arrays over one Domain.
class Field {
 public:
  Field(Domain domain, std::size_t components)
      : domain_(std::move(domain)), values_(components, std::vector<double>(domain_.size(), 0.0)) {
    if (components == 0) throw std::invalid_argument("Field needs at least one component");
  }

  Field(Domain domain, std::vector<std::vector<double>> values)
      : domain_(std::move(domain)), values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("Field needs at least one component");
    for (const auto& c : values_) {
      if (c.size() != domain_.size()) throw std::invalid_argument("Field component size does not match the domain");
      for (double x : c)
        if (!std::isfinite(x)) throw std::invalid_argument("Field values must be finite");
    }
  }

  const Domain& domain() const noexcept { return domain_; }
  std::size_t components() const noexcept { return values_.size(); }
  std::size_t size() const noexcept { return domain_.size(); }

  std::vector<double>& operator[](std::size_t j) { return values_.at(j); }
  const std::vector<double>& operator[](std::size_t j) const { return values_.at(j); }
  const std::vector<std::vector<double>>& data() const noexcept { return values_; }
  std::vector<std::vector<double>>& data() noexcept { return values_; }

  /// Pointwise M-vector at node k.
  std::vector<double> at_node(std::size_t k) const {
    std::vector<double> u(values_.size());
    for (std::size_t j = 0; j < values_.size(); ++j) u[j] = values_[j][k];
    return u;
  }

  bool all_finite() const {
    for (const auto& c : values_)
      for (double x : c)
        if (!std::isfinite(x)) return false;
    return true;
  }

  bool operator==(const Field& o) const { return domain_ == o.domain_ && values_ == o.values_; }

 private:
  Domain domain_;
  std::vector<std::vector<double>> values_;
};

/// Field of one component sampled from f(r) (radial kinds use |x|, the box uses x).
inline Field sample(const Domain& d, const std::function<double(double)>& f) {
  std::vector<double> v(d.size());
  for (std::size_t k = 0; k < d.size(); ++k)
    v[k] = d.kind() == DomainKind::PeriodicBox1D ? f(d.axis()[k]) : f(d.radius(k));
  return Field(d, {std::move(v)});
}

/// Field of one component on a BiRadial domain sampled from f(r1, r2).
inline Field sample2(const Domain& d, const std::function<double(double, double)>& f) {
  if (d.kind() != DomainKind::BiRadial) throw std::invalid_argument("sample2 needs a BiRadial domain");
  const std::size_t n = d.points_per_axis();
  std::vector<double> v(d.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) v[i * n + j] = f(d.axis()[i], d.axis()[j]);
  return Field(d, {std::move(v)});
}

inline double integrate(const Domain& d, std::span<const double> f) {
  if (f.size() != d.size()) throw std::invalid_argument("integrate: grid function size does not match the domain");
  const auto w = d.weights();
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += w[k] * f[k];
  return s;
}

/// Weighted inner product of two grid functions.
inline double inner(const Domain& d, std::span<const double> a, std::span<const double> b) {
  if (a.size() != d.size() || b.size() != d.size()) throw std::invalid_argument("inner: size mismatch");
  const auto w = d.weights();
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += w[k] * a[k] * b[k];
  return s;
}

inline double mass(const Field& u, std::size_t j) {
  if (j >= u.components()) throw std::out_of_range("mass: component index out of range");
  return inner(u.domain(), u[j], u[j]);
}

namespace detail {

// Line operators for one radial axis with n cells: zero flux at r = 0,
// Dirichlet face at r_max (ghost value -u_{n-1} at distance h/2).
inline double line_grad_sq(const double* u, std::size_t stride, std::size_t n, std::span<const double> faces,
                           double h) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double du = u[(i + 1) * stride] - u[i * stride];
    s += faces[i + 1] * du * du;
  }
  const double ub = u[(n - 1) * stride];
  s += 2.0 * faces[n] * ub * ub;
  return s / h;
}

inline void line_laplacian(const double* u, std::size_t stride, std::size_t n, std::span<const double> faces,
                           std::span<const double> cell, double h, double* out, std::size_t out_stride) {
  double left = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ui = u[i * stride];
    const double right = i + 1 < n ? faces[i + 1] * (u[(i + 1) * stride] - ui) / h : faces[n] * (-ui) / (0.5 * h);
    out[i * out_stride] += (right - left) / cell[i];
    left = right;
  }
}

}  // namespace detail

/// Discrete Dirichlet energy of component j; <-laplacian(u,j), u_j> equals it exactly.
inline double grad_norm_sq(const Domain& d, std::span<const double> u) {
  if (u.size() != d.size()) throw std::invalid_argument("grad_norm_sq: size mismatch");
  const std::size_t n = d.points_per_axis();
  const double h = d.spacing();
  switch (d.kind()) {
    case DomainKind::RadialN: return detail::line_grad_sq(u.data(), 1, n, d.face_areas(), h);
    case DomainKind::BiRadial: {
      const auto aw = d.axis_weights();
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += aw[j] * detail::line_grad_sq(u.data() + j, n, n, d.face_areas(), h);
      for (std::size_t i = 0; i < n; ++i) s += aw[i] * detail::line_grad_sq(u.data() + i * n, 1, n, d.face_areas(), h);
      return s;
    }
    case DomainKind::PeriodicBox1D: {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double du = u[(i + 1) % n] - u[i];
        s += du * du;
      }
      return s / h;
    }
  }
  return 0.0;
}

inline double grad_norm_sq(const Field& u, std::size_t j) {
  if (j >= u.components()) throw std::out_of_range("grad_norm_sq: component index out of range");
  return grad_norm_sq(u.domain(), u[j]);
}

inline std::vector<double> laplacian(const Domain& d, std::span<const double> u) {
  if (u.size() != d.size()) throw std::invalid_argument("laplacian: size mismatch");
  const std::size_t n = d.points_per_axis();
  const double h = d.spacing();
  std::vector<double> out(d.size(), 0.0);
  switch (d.kind()) {
    case DomainKind::RadialN:
      detail::line_laplacian(u.data(), 1, n, d.face_areas(), d.axis_weights(), h, out.data(), 1);
      break;
    case DomainKind::BiRadial:
      for (std::size_t j = 0; j < n; ++j)
        detail::line_laplacian(u.data() + j, n, n, d.face_areas(), d.axis_weights(), h, out.data() + j, n);
      for (std::size_t i = 0; i < n; ++i)
        detail::line_laplacian(u.data() + i * n, 1, n, d.face_areas(), d.axis_weights(), h, out.data() + i * n, 1);
      break;
    case DomainKind::PeriodicBox1D:
      throw std::invalid_argument("laplacian: PeriodicBox1D uses the spectral propagator");
  }
  return out;
}

inline std::vector<double> laplacian(const Field& u, std::size_t j) {
  if (j >= u.components()) throw std::out_of_range("laplacian: component index out of range");
  return laplacian(u.domain(), u[j]);
}

/// (integral of |u|^p)^{1/p} with |u| the pointwise Euclidean length of the M-vector.
inline double lp_norm(const Field& u, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  const auto w = u.domain().weights();
  double s = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    double r2 = 0.0;
    for (std::size_t j = 0; j < u.components(); ++j) r2 += u[j][k] * u[j][k];
    s += w[k] * std::pow(r2, 0.5 * p);
  }
  return std::pow(s, 1.0 / p);
}

namespace detail {

// Monotone interpolant of an even radial profile that vanishes at r_max.
class RadialInterpolant {
 public:
  RadialInterpolant(std::span<const double> r, std::span<const double> v, double r_max) : r_max_(r_max) {
    const std::size_t n = r.size();
    std::vector<double> x(n + 2), y(n + 2);
    x[0] = -r[0];
    y[0] = v[0];
    for (std::size_t i = 0; i < n; ++i) {
      x[i + 1] = r[i];
      y[i + 1] = v[i];
    }
    x[n + 1] = r_max;
    y[n + 1] = 0.0;
    p_ = std::make_unique<boost::math::interpolators::pchip<std::vector<double>>>(std::move(x), std::move(y), 0.0);
  }

  double operator()(double r) const {
    r = std::abs(r);
    if (r >= r_max_) return 0.0;
    return (*p_)(r);
  }

 private:
  double r_max_;
  std::unique_ptr<boost::math::interpolators::pchip<std::vector<double>>> p_;
};

}  // namespace detail

/// s * u = s^{N/2} u(s x), by monotone interpolation; zero beyond r_max / s.
inline Field dilate(const Field& u, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("dilate: s must be positive");
  const Domain& d = u.domain();
  if (d.kind() == DomainKind::PeriodicBox1D) throw std::invalid_argument("dilate: radial domains only");
  const double amp = std::pow(s, 0.5 * d.dimension());
  const std::size_t n = d.points_per_axis();
  const auto r = d.axis();
  Field out(d, u.components());
  for (std::size_t c = 0; c < u.components(); ++c) {
    if (d.kind() == DomainKind::RadialN) {
      detail::RadialInterpolant f(r, u[c], d.extent());
      for (std::size_t i = 0; i < n; ++i) out[c][i] = amp * f(s * r[i]);
      continue;
    }
    std::vector<double> tmp(d.size()), line(n);
    for (std::size_t i = 0; i < n; ++i) {
      detail::RadialInterpolant f(r, std::span<const double>(u[c]).subspan(i * n, n), d.extent());
      for (std::size_t j = 0; j < n; ++j) tmp[i * n + j] = f(s * r[j]);
    }
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) line[i] = tmp[i * n + j];
      detail::RadialInterpolant f(r, line, d.extent());
      for (std::size_t i = 0; i < n; ++i) out[c][i * n + j] = amp * f(s * r[i]);
    }
  }
  return out;
}

}  // namespace nlsgs
