#pragma once

// The multiplicative functional equation f(x)f(y)f(z) = f(a)f(b)f(c) on the
// set {x+y+z = a+b+c, x^2+y^2+z^2 = a^2+b^2+c^2}, its golden-ratio power-sum
// argument, and the log-quadratic fit that certifies Gaussian profiles.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "strichartz/lattice.hpp"

namespace strichartz {

struct ConstraintSextuple {
  std::array<double, 3> left{};
  std::array<double, 3> right{};

  double sum_defect() const;
  double square_defect() const;
};

/// The right triple sits on the circle {sum = s, square sum = q} of the left
/// one: m + r (cos theta u1 + sin theta u2), m = (s/3)(1,1,1), r = sqrt(q - s^2/3).
ConstraintSextuple constraint_circle(double x, double y, double z, double theta);

using PointFunction = std::function<cplx(double)>;

/// |f(x)f(y)f(z) - f(a)f(b)f(c)| / (|f(x)f(y)f(z)| + |f(a)f(b)f(c)| + 1e-300).
double product_residual(const PointFunction& f, const ConstraintSextuple& cs);

/// Off-grid evaluation of a WaveFunction by a local barycentric polynomial
/// through `order + 1` neighbouring samples; zero outside the grid.
class LocalInterpolant {
 public:
  explicit LocalInterpolant(const WaveFunction& f, int order = 6);
  cplx operator()(double x) const;
  int order() const { return order_; }

 private:
  UniformGrid grid_;
  cvec values_;
  int order_;
  std::vector<double> weights_;
};

struct PowerSumRow {
  int k = 0;
  /// phi^k + psi^k (Lucas number), decimal
  std::string lucas;
  /// p_k = 2 + (-1)^k - L_k, decimal
  std::string p;
  bool nonzero = false;
  /// -p_k >= (3/2)^k - 3 (k even) or (3/2)^k - 2 (k odd), and the right side > 0
  bool bound_holds = false;
};

struct PowerSumTable {
  std::vector<PowerSumRow> rows;
  bool all_nonzero = false;
  bool all_bounds = false;
};

/// Exact integer evaluation for k = 3..kmax.
PowerSumTable golden_power_sums(int kmax);

struct QuadraticFit {
  cplx A;
  cplx B;
  cplx C;
  /// RMS of |log f - (A x^2 + B x + C)| over the window
  double residual = 0.0;
  /// Fraction of grid samples inside the fit window
  double support_mass = 0.0;
  std::size_t window_size = 0;
  /// Adjacent-sample phase jump above pi/2 somewhere in the window
  bool phase_flagged = false;
  std::vector<std::string> warnings;

  bool certified() const { return residual <= 1e-3 && A.real() < 0.0 && !phase_flagged; }
};

/// Least-squares fit of a complex quadratic to log f on the connected window
/// around argmax |f| where |f| >= floor_ratio * max |f|. The phase is
/// unwrapped outward from the maximum.
QuadraticFit quadratic_log_fit(const WaveFunction& f, double floor_ratio = 1e-4);

struct ResidualStatistic {
  double sup = 0.0;
  double rms = 0.0;
  std::size_t samples = 0;
};

/// product_residual over (x, y, z, theta) uniform in [-box, box]^3 x [0, 2 pi).
ResidualStatistic residual_statistic(const PointFunction& f, std::size_t n_samples,
                                     std::uint64_t seed, double box);

}  // namespace strichartz
