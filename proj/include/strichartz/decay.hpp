#pragma once

// Fourier-tail decay of extremizers: the band split |xi| < s <= |xi| <= s^2 < |xi|,
// the weighted tail H(eps) = ||e^{F} f^ 1_{|xi| >= s^2}||_2 with F = F_{s^-4, eps},
// the smallness factors of the bootstrap, the polynomial
// G(x) = (omega/2) x - C (x^2 + x^3 + x^4 + x^5), a Gaussian-rate fit of |f^|,
// and evaluation of f off the real axis through the inversion integral.
//
// Frequency-side L^2 norms integrate d xi with no 2 pi; x-side norms are the
// usual ones, so ||f^||_2 = sqrt(2 pi) ||f||_2.

#include <string>
#include <vector>

#include "strichartz/lattice.hpp"
#include "strichartz/multilinear.hpp"

namespace strichartz {

struct BandDecomposition {
  double s = 0.0;
  Spectrum ll;   // |xi| < s
  Spectrum sim;  // s <= |xi| <= s^2
  Spectrum gt;   // |xi| > s^2
};

/// Exact grid cutoffs; ll + sim + gt reproduces f^ sample for sample.
BandDecomposition band_decompose(const WaveFunction& f, double s);

/// Exact-indicator integrals of |m(xi) f^(xi)|^2 over a |xi|-range, from the
/// spectrally refined f^ and Gauss-Legendre panels, so the cut at a
/// non-grid frequency costs no accuracy.
class BandIntegrator {
 public:
  explicit BandIntegrator(const WaveFunction& f);
  /// int_{lo <= |xi| <= hi} |e^{F(xi)} f^(xi)|^2 dxi  (hi clipped to the sampled band)
  double weighted_mass(double lo, double hi, const WeightParams& w = {}) const;
  const SpectralSampler& sampler() const { return sampler_; }
  double top() const { return top_; }

 private:
  SpectralSampler sampler_;
  double top_;
};

/// H(eps) for mu = s^{-4}.
double tail_norm_H(const WaveFunction& f, double s, double eps);

struct MuFit {
  double mu_hat = 0.0;
  /// RMS misfit of -log|f^| against mu_hat xi^2 + c on the window
  double residual = 0.0;
  /// mu_hat / 2 when residual <= 1e-2, else 0
  double certified_mu = 0.0;
  double xi_inner = 0.0;
  double xi_outer = 0.0;
  std::size_t samples = 0;
};

struct MuWindow {
  /// Window starts where |f^| first drops below upper * max ...
  double upper = 1e-3;
  /// ... and ends where it drops below lower * max.
  double lower = 1e-13;
};

MuFit mu_slope_fit(const WaveFunction& f, const MuWindow& window = {});

struct Smallness {
  double s = 0.0;
  double mu = 0.0;
  /// ||f_sim||_2 in x for the unit-normalized f
  double f_sim_norm = 0.0;
  double o1 = 0.0;
  double o2 = 0.0;
};

/// o1 = e^{2 mu s^4} (s^{-1/6} e^{mu s^2 - mu s^4} + ||f_sim||_2) at mu = s^{-4};
/// o2 carries e^{4 mu s^4} in place of e^{2 mu s^4}.
Smallness bootstrap_smallness(const WaveFunction& f, double s);

struct GScan {
  double omega = 0.0;
  double C = 0.0;
  double M = 0.0;
  double x_max = 0.0;
  double x0 = 0.0;
  double x1 = 0.0;
  bool concave = false;
};

double g_polynomial(double x, double omega, double C);
GScan g_polynomial_scan(double omega, double C);

struct ProbeOptions {
  MuWindow window{};
  /// Radius of the Cauchy-Riemann stencil.
  double stencil = 1e-2;
};

struct ProbeResult {
  std::vector<cplx> z;
  std::vector<cplx> values;
  /// |d f / d zbar| / (|d f / dz| + |f| / h) per point
  std::vector<double> cr_residual;
  double max_cr_residual = 0.0;
  double certified_mu = 0.0;
  double xi_window = 0.0;
};

/// f(z) = (1/2pi) int_{|xi| <= xi_w} e^{i z xi} f^(xi) dxi on the grid, xi_w the
/// outer end of the mu fit window. Requires |Im z| <= certified_mu * xi_w.
ProbeResult analytic_extension_probe(const WaveFunction& f, const std::vector<cplx>& z,
                                     const ProbeOptions& options = {});

struct BootstrapCheck {
  double s = 0.0;
  WeightParams weight{};
  double omega = 0.0;
  /// ||e^F f^_>||_2^2 (frequency side)
  double tail_mass = 0.0;
  /// omega ||e^F f^_>||^2 / (2 pi)
  double lhs = 0.0;
  /// Q(g, f, ..., f) with g^ = e^{2F} f^_>, on the constraint set
  cplx q_value;
  /// M_F(h_>, h, ..., h) = A + B
  double total = 0.0;
  double A = 0.0;
  double A1 = 0.0;
  double A2 = 0.0;
  double B = 0.0;
  bool identity_holds = false;
  bool inequality_holds = false;
};

/// Computable instance of the bootstrap step for an extremizer f at one s:
/// the Euler-Lagrange identity with g^ = e^{2F} f^_>, and |Q| <= M_F = A1 + A2 + B.
BootstrapCheck bootstrap_check(const WaveFunction& f, double s, double eps, double omega,
                               const QuadratureOptions& options = {}, double tolerance = 1e-2);

}  // namespace strichartz
