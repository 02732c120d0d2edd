#include "strichartz/extremizer.hpp"

#include <cmath>
#include <limits>

#include "strichartz/multilinear.hpp"

namespace strichartz {

EulerLagrangeStep euler_lagrange_step(const WaveFunction& f, const PropagatorConfig& config) {
  const double l2 = l2_norm(f);
  if (!(l2 > 0.0)) throw DomainError("euler_lagrange_step: zero input");
  const auto& grid = f.grid();
  const double ts = config.switch_time(grid);
  const auto& nodes = config.times.nodes();
  const auto& weights = config.times.weights();

  cvec acc(grid.size());
  double sixth = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    FieldSlice s = make_slice(f, nodes[k], ts);
    double slice_sixth = 0.0;
    for (auto& z : s.values) {
      const double m2 = std::norm(z);
      slice_sixth += m2 * m2 * m2;
      z *= m2 * m2;
    }
    sixth += weights[k] * s.measure * slice_sixth;
    const WaveFunction back = back_propagate(grid, s);
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += weights[k] * back[j];
  }
  for (auto& z : acc) z *= kKappa;

  EulerLagrangeStep out{WaveFunction(grid, std::move(acc)), kKappa * sixth / (l2 * l2),
                        std::pow(sixth, 1.0 / 6.0) / l2, {}};
  if (auto w = band_limit_warning(f, 6.0); !w.empty()) out.warnings.push_back(w);
  return out;
}

WaveFunction lambda_apply(const WaveFunction& f, const PropagatorConfig& config) {
  return euler_lagrange_step(f, config).lambda;
}

double omega_of(const WaveFunction& f, const PropagatorConfig& config) {
  const double l2 = l2_norm(f);
  if (!(l2 > 0.0)) throw DomainError("omega_of: zero input");
  const double n6 = spacetime_lp(evolve_range(f, config), 6.0);
  return kKappa * std::pow(n6, 6.0) / (l2 * l2);
}

// ---------------------------------------------------------------------------

namespace {

struct Moments {
  double mass = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

Moments moments(const WaveFunction& f) {
  const auto& g = f.grid();
  Moments m;
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double w = std::norm(f[j]);
    const double x = g.x(j);
    m.mass += w;
    m1 += w * x;
    m2 += w * x * x;
  }
  m.mean = m1 / m.mass;
  m.variance = m2 / m.mass - m.mean * m.mean;
  m.mass *= g.dx();
  return m;
}

WaveFunction normalized(const WaveFunction& f) {
  const double n = l2_norm(f);
  if (!(n > 0.0)) throw DomainError("gauge_fix: zero input");
  return f.scaled(1.0 / n);
}

}  // namespace

WaveFunction gauge_fix(const WaveFunction& f_in, const GaugeOptions& options) {
  WaveFunction f = normalized(f_in);
  const auto& grid = f.grid();

  if (options.fix_time) {
    // The variance about the centre of mass is quadratic in t along the flow.
    const double h = 0.05;
    const double v0 = moments(f).variance;
    const double vp = moments(evolve(f, h)).variance;
    const double vm = moments(evolve(f, -h)).variance;
    const double d1 = (vp - vm) / (2.0 * h);
    const double d2 = (vp + vm - 2.0 * v0) / (h * h);
    if (d2 > 0.0) {
      const double t_star = -d1 / d2;
      if (std::abs(t_star) > 1e-14) f = evolve(f, t_star);
    }
  }

  {
    const Spectrum g = forward_transform(f);
    double mass = 0.0;
    double first = 0.0;
    for (std::size_t c = 0; c < g.size(); ++c) {
      mass += std::norm(g[c]);
      first += std::norm(g[c]) * g.xi(c);
    }
    const double xi_bar = first / mass;
    cvec v(g.size());
    const WaveFunction back = inverse_transform(g);
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::polar(1.0, -xi_bar * grid.x(j)) * back[j];
    f = WaveFunction(grid, std::move(v));
  }

  {
    const double x_bar = moments(f).mean;
    f = inverse_transform(forward_transform(f).multiplied(
        [x_bar](double xi) { return std::polar(1.0, xi * x_bar); }));
  }

  {
    // f -> lambda^{1/2} f(lambda x) divides the second moment by lambda^2.
    const Moments m = moments(f);
    const double second = m.variance + m.mean * m.mean;
    const double lambda = std::sqrt(second / options.second_moment);
    if (std::abs(lambda - 1.0) > 1e-14) {
      std::vector<double> pts(grid.size());
      for (std::size_t j = 0; j < pts.size(); ++j) pts[j] = lambda * grid.x(j);
      cvec v = interpolate_trigonometric(f, pts);
      for (auto& z : v) z *= std::sqrt(lambda);
      f = WaveFunction(grid, std::move(v));
    }
  }

  {
    cplx anchor = transform_at(f, 0.0);
    double peak = 0.0;
    std::size_t arg = 0;
    for (std::size_t j = 0; j < f.size(); ++j) {
      if (std::abs(f[j]) > peak) {
        peak = std::abs(f[j]);
        arg = j;
      }
    }
    // f^(0) can vanish (odd profiles); fall back to the largest sample.
    if (std::abs(anchor) <= 1e-8 * peak * grid.length()) anchor = f[arg];
    f = f.scaled(std::polar(1.0, -std::arg(anchor)));
  }

  return normalized(f);
}

// ---------------------------------------------------------------------------

PicardResult picard_iterate(const WaveFunction& f0, const PicardOptions& options) {
  if (!(options.tol > 0.0)) throw DomainError("picard_iterate: tol must be positive");
  if (!(l2_norm(f0) > 0.0)) throw DomainError("picard_iterate: zero input");

  PicardResult out;
  WaveFunction f = gauge_fix(f0, options.gauge);
  double delta = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> last_warnings;
  for (std::size_t k = 0;; ++k) {
    EulerLagrangeStep step = euler_lagrange_step(f, options.config);
    if (!step.warnings.empty() && out.warnings.empty()) {
      out.warnings.push_back("step " + std::to_string(k) + ": " + step.warnings.front());
    }
    last_warnings = step.warnings;
    // decreases at the level of rounding are not reported
    if (k > 0 && step.ratio < out.trajectory.back().ratio * (1.0 - 1e-13)) {
      out.ratio_decreases.push_back(k);
    }
    out.trajectory.push_back(IterationState{f, step.omega, step.ratio, k, delta});
    if (k > 0 && delta <= options.tol) {
      out.converged = true;
      break;
    }
    if (k == options.max_steps) break;
    WaveFunction next = gauge_fix(step.lambda, options.gauge);
    delta = l2_norm(next.plus(f, -1.0));
    f = std::move(next);
  }
  if (out.trajectory.size() > 1) {
    for (auto& w : last_warnings) out.warnings.push_back("final iterate: " + w);
  }
  return out;
}

}  // namespace strichartz
