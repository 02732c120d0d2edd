#pragma once

// Free Schroedinger flow  u(t) = e^{it Delta} f,  u^(xi, t) = e^{i t xi^2} f^(xi),
// and space-time Lebesgue norms over R_t x R_x.
//
// A fixed periodic grid only represents u(., t) while the solution stays inside
// the domain. Beyond a switch time every node is represented in the far-field
// frame, which is exact on R:
//
//   u(x, t) = e^{-i x^2 / 4t} A_t g^_t(-x / 2t),
//   g_t(y)  = e^{-i y^2 / 4t} f(y),      A_t = (-4 pi i t)^{-1/2}.
//
// In that frame a slice stores the envelope A_t g^_t on the frequency grid, and
// the sample at xi sits at x = -2 t xi with measure 2|t| dxi. The chirp factor is
// unimodular and common to every field evaluated at the same t, so it cancels
// in |u| and in every gauge-invariant product.

#include <string>
#include <vector>

#include "strichartz/lattice.hpp"

namespace strichartz {

enum class TimeScheme { compactified, truncated, explicit_nodes };

std::string to_string(TimeScheme scheme);

/// Nodes and positive weights for integrals over t.
class TimeQuadrature {
 public:
  /// Gauss-Legendre in theta on (-pi/2, pi/2) with t = scale * tan(theta);
  /// the Jacobian scale * sec^2(theta) is folded into the weights.
  static TimeQuadrature compactified(std::size_t count, double scale = 0.25);
  /// Gauss-Legendre on [-t_max, t_max].
  static TimeQuadrature truncated(std::size_t count, double t_max);
  /// Explicit nodes/weights (single-slice reductions, tests).
  static TimeQuadrature explicit_nodes(std::vector<double> nodes, std::vector<double> weights);
  /// Default used by strichartz_ratio: 257 compactified nodes, scale 1/4.
  static TimeQuadrature standard() { return compactified(257, 0.25); }

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return nodes_.size(); }
  TimeScheme scheme() const { return scheme_; }
  /// Scale for compactified, t_max for truncated, 0 otherwise.
  double parameter() const { return parameter_; }

 private:
  TimeQuadrature(std::vector<double> nodes, std::vector<double> weights, TimeScheme scheme,
                 double parameter);

  std::vector<double> nodes_;
  std::vector<double> weights_;
  TimeScheme scheme_;
  double parameter_;
};

/// Gauss-Legendre nodes and weights on [-1, 1], ascending.
void gauss_legendre(std::size_t count, std::vector<double>& nodes, std::vector<double>& weights);

struct PropagatorConfig {
  TimeQuadrature times = TimeQuadrature::standard();
  /// |t| above which slices use the far-field frame. A negative value selects
  /// the grid default L / (2 xi_max), where the chirp at the domain edge sits
  /// at half the Nyquist frequency.
  double far_field_time = -1.0;

  double switch_time(const UniformGrid& grid) const;
};

enum class SliceFrame { near, far };

/// One time slice of u. Near: values are u(x_j, t) on the grid. Far: values
/// are the envelope at xi_j, located at x = -2 t xi_j (see header comment).
struct FieldSlice {
  double t = 0.0;
  SliceFrame frame = SliceFrame::near;
  cvec values;
  /// Quadrature measure of one sample: dx (near) or 2|t| dxi (far).
  double measure = 0.0;

  double position(const UniformGrid& grid, std::size_t j) const;
  /// u(x_j, t) including the far-field chirp.
  cplx field_value(const UniformGrid& grid, std::size_t j) const;
};

class SpaceTimeField {
 public:
  SpaceTimeField(UniformGrid grid, TimeQuadrature times, std::vector<FieldSlice> slices);

  const UniformGrid& grid() const { return grid_; }
  const TimeQuadrature& times() const { return times_; }
  const std::vector<FieldSlice>& slices() const { return slices_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

 private:
  UniformGrid grid_;
  TimeQuadrature times_;
  std::vector<FieldSlice> slices_;
  std::vector<std::string> warnings_;
};

/// Spectral flow on the grid: inverse_transform(e^{i t xi^2} f^).
WaveFunction evolve(const WaveFunction& f, double t);

/// u(., t) in the frame appropriate for |t| relative to switch_time.
FieldSlice make_slice(const WaveFunction& f, double t, double switch_time);
FieldSlice near_slice(const WaveFunction& f, double t);
FieldSlice far_slice(const WaveFunction& f, double t);

/// e^{-it Delta} w for a field w given on a slice. Near values are w(x_j);
/// far values are e^{i x^2/4t} w(x) at x = -2 t xi_j, so that |u|^4 u is
/// represented by |e|^4 e of the envelope e.
WaveFunction back_propagate(const UniformGrid& grid, const FieldSlice& nonlinearity);

SpaceTimeField evolve_range(const WaveFunction& f, const PropagatorConfig& config = {});

/// (sum_k w_k int |u(x, t_k)|^p dx)^{1/p}.
double spacetime_lp(const SpaceTimeField& u, double p);

/// ||e^{it Delta} f||_{L^6_{t,x}} / ||f||_2.
double strichartz_ratio(const WaveFunction& f, const PropagatorConfig& config = {});

struct StrichartzReport {
  double ratio = 0.0;
  double spacetime_l6 = 0.0;
  double l2 = 0.0;
  /// |ratio(nodes) - ratio(nodes/2 + 1)|: quadrature error estimate.
  double quadrature_error = 0.0;
  std::size_t time_nodes = 0;
  double switch_time = 0.0;
  std::vector<std::string> warnings;
};

StrichartzReport strichartz_report(const WaveFunction& f, const PropagatorConfig& config = {});

/// f^vee(x) = (1/2pi) int e^{i x xi} f(xi) dxi, sampled on f's own grid.
WaveFunction fourier_dual(const WaveFunction& f);

struct FourierSymmetry {
  double ratio_f = 0.0;
  double ratio_dual = 0.0;
  /// ||e^{it Delta} f||_6 / ||e^{it Delta} f^vee||_6.
  double constant = 0.0;
};

FourierSymmetry fourier_symmetry_check(const WaveFunction& f, const PropagatorConfig& config = {});

}  // namespace strichartz
