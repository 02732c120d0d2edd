#pragma once

// Frequency-separated bilinear estimate
//
//   || e^{it Delta} h1 * e^{it Delta} h2 ||_{L^3_{t,x}} <= C N^{-1/6} ||h1||_2 ||h2||_2
//
// for h1^ supported in |xi| <= s and h2^ in |xi| >= N s, and the
// Hausdorff-Young mechanism behind it: in gamma = xi + eta, tau = xi^2 + eta^2
// the product is a 2D Fourier integral of G = h1^(xi) h2^(eta) / (2|xi - eta|),
// so that, with our transform convention and the Riesz-Thorin constant,
//
//   ||u1 u2||_3 <= (2 pi)^{-4/3} ||G||_{L^{3/2}(d gamma d tau)}
//   ||G||_{3/2}^{3/2} = int int |h1^ h2^|^{3/2} (2|xi - eta|)^{-1/2} dxi deta.

#include <cstdint>
#include <string>
#include <vector>

#include "strichartz/lattice.hpp"
#include "strichartz/propagator.hpp"

namespace strichartz {

enum class BandKind { low, high, annulus };

/// low: |xi| <= s.  high: N s <= |xi| <= 2 N s.  annulus: lo <= |xi| <= hi.
struct BandSpec {
  BandKind kind = BandKind::low;
  double s = 1.0;
  double N = 2.0;
  double lo = 0.0;
  double hi = 0.0;

  static BandSpec low(double s);
  static BandSpec high(double s, double N);
  static BandSpec annulus(double lo, double hi);

  double inner() const;
  double outer() const;
  bool contains(double xi) const;
};

enum class BandProfile { flat, random, gaussian_bump };

std::string to_string(BandProfile p);
BandProfile parse_band_profile(const std::string& name);

/// Unit-L^2 function whose spectrum is supported exactly in the band (hard
/// cutoff on the frequency grid). Throws DomainError when the band reaches
/// past the Nyquist frequency or holds no grid frequency.
WaveFunction make_band_limited(const UniformGrid& grid, const BandSpec& band, BandProfile profile,
                               std::uint64_t seed = 0);

/// ||u1 u2||_{L^3_{t,x}} with u_i = e^{it Delta} h_i.
double bilinear_l3(const WaveFunction& h1, const WaveFunction& h2,
                   const PropagatorConfig& config = {});

/// Compactified time rule with scale time_scale / 4 (the default rule has
/// time_scale 1). Separated bands interact over times ~ 1 / (N s^2).
PropagatorConfig bilinear_config(double time_scale, std::size_t nodes = 513);

struct HausdorffYoung {
  /// ||G||_{L^{3/2}}
  double density_norm = 0.0;
  /// (2 pi)^{-4/3} ||G||_{3/2}, an upper bound for bilinear_l3
  double bound = 0.0;
};

/// Throws DomainError when the frequency supports of h1 and h2 share a point.
HausdorffYoung hausdorff_young_density(const WaveFunction& h1, const WaveFunction& h2);

struct SweepRow {
  double N = 0.0;
  double value = 0.0;
  /// NaN for control rows (N <= 1), where supports touch.
  double bound = 0.0;
  std::size_t grid_n = 0;
  bool in_fit = true;
};

struct SweepOptions {
  /// Spatial half width of every sweep grid.
  double half_width = 100.0;
  /// Nyquist frequency as a multiple of the top band frequency.
  double nyquist_factor = 4.0;
  std::size_t time_nodes = 257;
  /// Time-rule scale in units of 1 / (N s^2).
  double time_scale = 1.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  /// Least-squares slope and intercept of log(value) against log(N), rows with N > 1.
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<std::string> warnings;
};

/// Low band |xi| <= s against the high band N s <= |xi| <= 2 N s for each N.
/// `width` scales both band widths: |xi| <= width s and N s <= |xi| <= (1 + width) N s.
SweepResult separation_sweep(double s, const std::vector<double>& Ns, BandProfile profile,
                             std::uint64_t seed, const SweepOptions& options = {},
                             double width = 1.0);

}  // namespace strichartz
