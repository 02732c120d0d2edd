#pragma once

// Discretization of the line and Fourier analysis with the non-unitary
// convention  f^(xi) = int e^{-i x xi} f(x) dx,
//             f(x)   = (1/2pi) int e^{i x xi} f^(xi) dxi.
// Every 2pi factor is carried explicitly; in particular
// ||f^||_2^2 = 2pi ||f||_2^2.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace strichartz {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Input outside an operation's mathematical domain (p < 1, zero vector, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Shape or grid mismatch between objects that must agree.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// n equispaced points x_j = x0 + j*dx, j = 0..n-1, periodic extent n*dx.
class UniformGrid {
 public:
  UniformGrid(std::size_t n, double dx, double x0);

  /// n points covering [-half_width, half_width).
  static UniformGrid symmetric(std::size_t n, double half_width);
  /// Default experiment grid: n = 1024 on [-20, 20).
  static UniformGrid standard() { return symmetric(1024, 20.0); }

  std::size_t size() const { return n_; }
  double dx() const { return dx_; }
  double x0() const { return x0_; }
  double length() const { return static_cast<double>(n_) * dx_; }
  double x(std::size_t j) const { return x0_ + static_cast<double>(j) * dx_; }

  // Dual (centered) frequency grid: xi_c = (c - n/2) * dxi, c = 0..n-1.
  double dxi() const { return kTwoPi / length(); }
  double xi_max() const { return kPi / dx_; }
  double xi(std::size_t c) const {
    return (static_cast<double>(c) - static_cast<double>(n_ / 2)) * dxi();
  }

  bool operator==(const UniformGrid& other) const = default;

 private:
  std::size_t n_;
  double dx_;
  double x0_;
};

/// Samples of a complex function on a UniformGrid.
class WaveFunction {
 public:
  WaveFunction(UniformGrid grid, cvec values);

  static WaveFunction zeros(const UniformGrid& grid);
  static WaveFunction sample(const UniformGrid& grid, const std::function<cplx(double)>& fn);

  const UniformGrid& grid() const { return grid_; }
  std::span<const cplx> values() const { return values_; }
  const cplx& operator[](std::size_t j) const { return values_[j]; }
  std::size_t size() const { return values_.size(); }

  WaveFunction scaled(cplx c) const;
  WaveFunction plus(const WaveFunction& other, cplx c = 1.0) const;  // this + c*other

 private:
  UniformGrid grid_;
  cvec values_;
};

/// Samples of a function of xi on the centered dual grid of a spatial grid.
class Spectrum {
 public:
  Spectrum(UniformGrid grid, cvec values);

  static Spectrum sample(const UniformGrid& grid, const std::function<cplx(double)>& fn);

  /// The spatial grid this spectrum is dual to.
  const UniformGrid& grid() const { return grid_; }
  std::span<const cplx> values() const { return values_; }
  const cplx& operator[](std::size_t c) const { return values_[c]; }
  std::size_t size() const { return values_.size(); }
  double xi(std::size_t c) const { return grid_.xi(c); }
  double dxi() const { return grid_.dxi(); }

  Spectrum scaled(cplx c) const;
  Spectrum plus(const Spectrum& other, cplx c = 1.0) const;
  /// Pointwise multiplication by m(xi).
  Spectrum multiplied(const std::function<cplx(double)>& m) const;

 private:
  UniformGrid grid_;
  cvec values_;
};

Spectrum forward_transform(const WaveFunction& f);
WaveFunction inverse_transform(const Spectrum& g);

/// Direct evaluation of f^(xi) at an arbitrary frequency (O(n)).
cplx transform_at(const WaveFunction& f, double xi);
/// Band-limited (trigonometric) interpolation of f at arbitrary points.
cvec interpolate_trigonometric(const WaveFunction& f, std::span<const double> points);

double lp_norm(const WaveFunction& f, double p);
double lp_norm(const Spectrum& g, double p);
double l2_norm(const WaveFunction& f);
double l2_norm(const Spectrum& g);

/// int conj(f) g dx, conjugate-linear in the first slot.
cplx inner_product(const WaveFunction& f, const WaveFunction& g);
/// int conj(f) g dxi.
cplx inner_product(const Spectrum& f, const Spectrum& g);

/// Fraction of ||f^||_2^2 carried by |xi| > cutoff.
double spectral_tail_fraction(const Spectrum& g, double cutoff);

/// Empty string when f^ is concentrated in |xi| <= xi_max/spread, otherwise a
/// warning describing the tail mass. `spread` is 6 for sextic products.
std::string band_limit_warning(const WaveFunction& f, double spread, double tolerance = 1e-8);

void require_same_grid(const UniformGrid& a, const UniformGrid& b, const char* what);

}  // namespace strichartz
