#pragma once

// The sextic form
//
//   Q(f1..f6) = int_{R^6} conj(f1^ f2^ f3^)(xi1,xi2,xi3) f4^ f5^ f6^(xi4,xi5,xi6)
//               delta(a(xi)) delta(b(xi)) dxi,
//   a = xi1+xi2+xi3-xi4-xi5-xi6,  b = xi1^2+xi2^2+xi3^2-xi4^2-xi5^2-xi6^2,
//
// evaluated two ways: in space-time, where Q = kappa * int int
// conj(u1 u2 u3) u4 u5 u6 dx dt with kappa = (2 pi)^4, and directly on the
// constraint set. For fixed (xi1, xi2, xi3) with sum P and square sum E the
// second triple ranges over the circle {sum = P, square sum = E}; in
// cylindrical coordinates about (1,1,1) the two deltas integrate to
//
//   int d^3xi' delta(P - P') delta(E - E') F = 1/(2 sqrt 3) int_0^{2pi} F(circle(beta)) dbeta,
//
// which has no singularity at the degenerate roots.

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "strichartz/lattice.hpp"
#include "strichartz/propagator.hpp"

namespace strichartz {

/// (2 pi)^4: the space-time normalization of Q under the transform convention.
inline constexpr double kKappa = kTwoPi * kTwoPi * kTwoPi * kTwoPi;

struct WeightParams {
  double mu = 0.0;
  double eps = 0.0;

  WeightParams() = default;
  WeightParams(double mu_, double eps_);
};

/// F_{mu,eps}(xi) = mu xi^2 / (1 + eps xi^2).
double weight(double xi, const WeightParams& w);

using Eta = std::array<double, 6>;

double constraint_a(const Eta& eta);
double constraint_b(const Eta& eta);

using WaveSextuple = std::array<std::reference_wrapper<const WaveFunction>, 6>;

struct QValue {
  cplx value;
  /// Outer and inner sample count (quadrature) or time-slice count (space-time).
  std::size_t points = 0;
  /// Difference to a coarser evaluation, when requested.
  double tolerance = 0.0;
  double kappa = kKappa;
  std::vector<std::string> warnings;
};

QValue q_spacetime(const WaveSextuple& f, const PropagatorConfig& config = {});

/// Off-grid evaluation of a sampled spectrum.
///
/// smooth: the spectrum is refined by zero-padding in space (exact
/// band-limited values on a grid `refine` times finer), then interpolated by a
/// local Lagrange polynomial of degree `order`.
/// piecewise: Lagrange interpolation directly on the grid, with stencils kept
/// inside contiguous runs of nonzero samples; zero outside those runs. Suits
/// spectra with hard cutoffs.
class SpectralSampler {
 public:
  enum class Mode { smooth, piecewise };

  SpectralSampler(const Spectrum& g, Mode mode, int refine = 4, int order = 6);
  static SpectralSampler smooth(const WaveFunction& f, int refine = 4, int order = 6);

  cplx operator()(double xi) const;

  /// Contiguous runs [lo, hi] where |g| > threshold * max|g|.
  std::vector<std::pair<double, double>> support(double threshold) const;
  int order() const { return order_; }

 private:
  Mode mode_;
  int order_;
  double xi0_ = 0.0;
  double h_ = 0.0;
  cvec samples_;
  /// run id per sample (piecewise), -1 where zero
  std::vector<int> run_;
  std::vector<std::pair<std::size_t, std::size_t>> runs_;
  std::vector<double> bary_;
};

/// One factor of a constraint-set integral: a function of one frequency and
/// the panels (disjoint intervals) outside which it vanishes. Outer quadrature
/// places Gauss-Legendre nodes panel by panel, so discontinuities should sit
/// at panel ends.
struct SpectralFactor {
  std::function<cplx(double)> eval;
  std::vector<std::pair<double, double>> panels;
};

enum class InnerRoute { circle, root_pair };

struct QuadratureOptions {
  /// Gauss-Legendre nodes per outer dimension (split across panels).
  std::size_t outer_nodes = 48;
  /// Angular samples per unit arc length of the constraint circle.
  double angle_density = 2.0;
  std::size_t min_angles = 32;
  std::size_t max_angles = 4096;
  InnerRoute route = InnerRoute::circle;
  /// Support threshold for automatically detected panels.
  double support_threshold = 1e-10;
  /// Re-evaluate at 5/6 of the outer and angular resolution and report the
  /// difference (a pessimistic error estimate).
  bool estimate_error = false;
  /// When positive, raise outer_nodes by 4/3 (up to max_outer_nodes) until
  /// the 5/6-resolution difference is at most rel_tol * |value|.
  double rel_tol = 0.0;
  std::size_t max_outer_nodes = 160;
};

/// int prod_k phi_k(eta_k) delta(a) delta(b) d eta.
QValue constraint_integral(const std::array<SpectralFactor, 6>& factors,
                           const QuadratureOptions& options = {});

QValue q_quadrature(const WaveSextuple& f, const QuadratureOptions& options = {});

/// Weighted absolute form M_F(h1..h6) with weight e^{F(eta1) - sum_{k>=2} F(eta_k)}.
double m_weighted(const std::array<SpectralFactor, 6>& h, const WeightParams& w,
                  const QuadratureOptions& options = {});
double m_weighted(const std::array<Spectrum, 6>& h, const WeightParams& w,
                  const QuadratureOptions& options = {});

/// Factor built from a sampled spectrum, masked to its detected support
/// (samples above threshold * max).
SpectralFactor spectral_factor(const Spectrum& g, double threshold = 1e-10);

/// The two orderings of (xi5, xi6) with xi5 + xi6 = S and xi5^2 + xi6^2 = T, and
/// the density 1/(2|xi5 - xi6|) each carries. Empty when 2T - S^2 < 0.
struct RootPair {
  bool real = false;
  double first = 0.0;
  double second = 0.0;
  double density = 0.0;
};

RootPair root_pair(double sum, double square_sum);

/// Point (xi1..xi6) on the constraint set: first triple given, second triple
/// on its circle at angle beta.
Eta constraint_point(double xi1, double xi2, double xi3, double beta);

/// Uniform samples (xi1, xi2, xi3, beta) from [-box, box]^3 x [0, 2pi).
std::vector<Eta> sample_constraint_points(std::size_t count, std::uint64_t seed, double box);

}  // namespace strichartz
