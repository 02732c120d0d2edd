#include "strichartz/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fft.hpp"

namespace strichartz {
namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void require_finite(std::span<const cplx> v, const char* what) {
  for (const auto& z : v) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw DomainError(std::string(what) + ": non-finite sample");
    }
  }
}

}  // namespace

UniformGrid::UniformGrid(std::size_t n, double dx, double x0) : n_(n), dx_(dx), x0_(x0) {
  if (n < 8 || !is_power_of_two(n)) {
    throw StructuralError("UniformGrid: n must be a power of two >= 8");
  }
  if (!(dx > 0.0) || !std::isfinite(dx) || !std::isfinite(x0)) {
    throw StructuralError("UniformGrid: dx must be positive and finite");
  }
}

UniformGrid UniformGrid::symmetric(std::size_t n, double half_width) {
  if (!(half_width > 0.0)) throw StructuralError("UniformGrid: half width must be positive");
  return UniformGrid(n, 2.0 * half_width / static_cast<double>(n), -half_width);
}

void require_same_grid(const UniformGrid& a, const UniformGrid& b, const char* what) {
  if (!(a == b)) throw StructuralError(std::string(what) + ": grid mismatch");
}

// ---------------------------------------------------------------------------

WaveFunction::WaveFunction(UniformGrid grid, cvec values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw StructuralError("WaveFunction: value count does not match grid size");
  }
  require_finite(values_, "WaveFunction");
}

WaveFunction WaveFunction::zeros(const UniformGrid& grid) {
  return WaveFunction(grid, cvec(grid.size()));
}

WaveFunction WaveFunction::sample(const UniformGrid& grid, const std::function<cplx(double)>& fn) {
  cvec v(grid.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = fn(grid.x(j));
  return WaveFunction(grid, std::move(v));
}

WaveFunction WaveFunction::scaled(cplx c) const {
  cvec v(values_);
  for (auto& z : v) z *= c;
  return WaveFunction(grid_, std::move(v));
}

WaveFunction WaveFunction::plus(const WaveFunction& other, cplx c) const {
  require_same_grid(grid_, other.grid_, "WaveFunction::plus");
  cvec v(values_);
  for (std::size_t j = 0; j < v.size(); ++j) v[j] += c * other.values_[j];
  return WaveFunction(grid_, std::move(v));
}

Spectrum::Spectrum(UniformGrid grid, cvec values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw StructuralError("Spectrum: value count does not match grid size");
  }
  require_finite(values_, "Spectrum");
}

Spectrum Spectrum::sample(const UniformGrid& grid, const std::function<cplx(double)>& fn) {
  cvec v(grid.size());
  for (std::size_t c = 0; c < v.size(); ++c) v[c] = fn(grid.xi(c));
  return Spectrum(grid, std::move(v));
}

Spectrum Spectrum::scaled(cplx c) const {
  cvec v(values_);
  for (auto& z : v) z *= c;
  return Spectrum(grid_, std::move(v));
}

Spectrum Spectrum::plus(const Spectrum& other, cplx c) const {
  require_same_grid(grid_, other.grid_, "Spectrum::plus");
  cvec v(values_);
  for (std::size_t j = 0; j < v.size(); ++j) v[j] += c * other.values_[j];
  return Spectrum(grid_, std::move(v));
}

Spectrum Spectrum::multiplied(const std::function<cplx(double)>& m) const {
  cvec v(values_);
  for (std::size_t c = 0; c < v.size(); ++c) v[c] *= m(grid_.xi(c));
  return Spectrum(grid_, std::move(v));
}

// ---------------------------------------------------------------------------

Spectrum forward_transform(const WaveFunction& f) {
  const auto& grid = f.grid();
  const std::size_t n = grid.size();
  cvec work(f.values().begin(), f.values().end());
  detail::dft(work, -1);
  // DFT index m holds frequency k = m (m < n/2) or m - n; centered slot c = k + n/2.
  cvec out(n);
  for (std::size_t m = 0; m < n; ++m) {
    const std::size_t c = (m + n / 2) % n;
    const double xi = grid.xi(c);
    out[c] = grid.dx() * std::polar(1.0, -grid.x0() * xi) * work[m];
  }
  return Spectrum(grid, std::move(out));
}

WaveFunction inverse_transform(const Spectrum& g) {
  const auto& grid = g.grid();
  const std::size_t n = grid.size();
  cvec work(n);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t m = (c + n / 2) % n;
    work[m] = std::polar(1.0, grid.x0() * grid.xi(c)) * g[c];
  }
  detail::dft(work, +1);
  const double scale = 1.0 / grid.length();  // dxi / 2pi
  for (auto& z : work) z *= scale;
  return WaveFunction(grid, std::move(work));
}

cplx transform_at(const WaveFunction& f, double xi) {
  const auto& grid = f.grid();
  // e^{-i x_j xi} advanced by a fixed rotation, reseeded to bound drift.
  const cplx step = std::polar(1.0, -grid.dx() * xi);
  cplx acc = 0.0;
  cplx phase;
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (j % 64 == 0) {
      phase = std::polar(1.0, -grid.x(j) * xi);
    } else {
      phase *= step;
    }
    acc += phase * f[j];
  }
  return grid.dx() * acc;
}

cvec interpolate_trigonometric(const WaveFunction& f, std::span<const double> points) {
  const Spectrum g = forward_transform(f);
  const auto& grid = f.grid();
  const std::size_t n = grid.size();
  cvec out(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    const double x = points[p];
    const cplx step = std::polar(1.0, x * grid.dxi());
    cplx acc = 0.0;
    cplx phase;
    for (std::size_t c = 0; c < n; ++c) {
      if (c % 64 == 0) {
        phase = std::polar(1.0, x * grid.xi(c));
      } else {
        phase *= step;
      }
      acc += phase * g[c];
    }
    out[p] = acc / grid.length();
  }
  return out;
}

namespace {

double lp_sum(std::span<const cplx> v, double p, double weight) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("lp_norm: p must lie in [1, inf)");
  double acc = 0.0;
  if (p == 2.0) {
    for (const auto& z : v) acc += std::norm(z);
    return std::sqrt(acc * weight);
  }
  for (const auto& z : v) acc += std::pow(std::abs(z), p);
  return std::pow(acc * weight, 1.0 / p);
}

}  // namespace

double lp_norm(const WaveFunction& f, double p) { return lp_sum(f.values(), p, f.grid().dx()); }
double lp_norm(const Spectrum& g, double p) { return lp_sum(g.values(), p, g.dxi()); }
double l2_norm(const WaveFunction& f) { return lp_norm(f, 2.0); }
double l2_norm(const Spectrum& g) { return lp_norm(g, 2.0); }

cplx inner_product(const WaveFunction& f, const WaveFunction& g) {
  require_same_grid(f.grid(), g.grid(), "inner_product");
  cplx acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) acc += std::conj(f[j]) * g[j];
  return acc * f.grid().dx();
}

cplx inner_product(const Spectrum& f, const Spectrum& g) {
  require_same_grid(f.grid(), g.grid(), "inner_product");
  cplx acc = 0.0;
  for (std::size_t c = 0; c < f.size(); ++c) acc += std::conj(f[c]) * g[c];
  return acc * f.dxi();
}

double spectral_tail_fraction(const Spectrum& g, double cutoff) {
  double total = 0.0;
  double tail = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    const double m = std::norm(g[c]);
    total += m;
    if (std::abs(g.xi(c)) > cutoff) tail += m;
  }
  return total > 0.0 ? tail / total : 0.0;
}

std::string band_limit_warning(const WaveFunction& f, double spread, double tolerance) {
  const double cutoff = f.grid().xi_max() / spread;
  const double frac = std::sqrt(spectral_tail_fraction(forward_transform(f), cutoff));
  if (frac <= tolerance) return {};
  std::ostringstream os;
  os << "aliasing: relative spectral tail " << frac << " beyond |xi| = " << cutoff
     << " exceeds " << tolerance;
  return os.str();
}

}  // namespace strichartz
