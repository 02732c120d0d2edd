#pragma once

// Euler-Lagrange map for the sextic form: Lambda f is the Riesz representative
// of g -> Q(g, f, f, f, f, f), i.e.
//
//   Lambda f = kappa * int e^{-it Delta} (|u|^4 u)(t) dt,   u = e^{it Delta} f,
//
// discretized with the same time quadrature and slice frames as the forward
// flow, so <g, Lambda f> = Q(g, f, ..., f) holds to rounding on the grid.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "strichartz/lattice.hpp"
#include "strichartz/propagator.hpp"

namespace strichartz {

struct EulerLagrangeStep {
  WaveFunction lambda;
  /// Q(f, ..., f) / ||f||_2^2
  double omega = 0.0;
  /// ||e^{it Delta} f||_6 / ||f||_2
  double ratio = 0.0;
  std::vector<std::string> warnings;
};

/// Lambda f together with omega and the Strichartz ratio, in one pass over the slices.
EulerLagrangeStep euler_lagrange_step(const WaveFunction& f, const PropagatorConfig& config = {});

WaveFunction lambda_apply(const WaveFunction& f, const PropagatorConfig& config = {});
double omega_of(const WaveFunction& f, const PropagatorConfig& config = {});

struct GaugeOptions {
  /// Evolve to the time where the spatial variance is minimal.
  bool fix_time = true;
  /// Target for int x^2 |f|^2 of the unit-norm output (the e^{-x^2} value).
  double second_moment = 0.25;
};

/// Quotient by the symmetries of the Strichartz ratio: time translation,
/// modulation, translation, parabolic dilation, phase. Output has unit norm.
WaveFunction gauge_fix(const WaveFunction& f, const GaugeOptions& options = {});

struct IterationState {
  WaveFunction f;
  double omega_estimate = 0.0;
  double ratio = 0.0;
  std::size_t step_index = 0;
  /// ||f_k - f_{k-1}||_2 between gauge-fixed iterates; NaN at step 0.
  double delta = 0.0;
};

struct PicardOptions {
  double tol = 1e-8;
  std::size_t max_steps = 200;
  PropagatorConfig config{};
  GaugeOptions gauge{};
};

struct PicardResult {
  std::vector<IterationState> trajectory;
  bool converged = false;
  /// Steps k at which ratio_k < ratio_{k-1} (beyond rounding).
  std::vector<std::size_t> ratio_decreases;
  std::vector<std::string> warnings;

  const IterationState& final_state() const { return trajectory.back(); }
  std::string status() const { return converged ? "converged" : "unconverged"; }
};

PicardResult picard_iterate(const WaveFunction& f0, const PicardOptions& options = {});

}  // namespace strichartz
