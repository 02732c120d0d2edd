#include "strichartz/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace strichartz {

std::string to_string(TimeScheme scheme) {
  switch (scheme) {
    case TimeScheme::compactified: return "compactified";
    case TimeScheme::truncated: return "truncated";
    case TimeScheme::explicit_nodes: return "explicit";
  }
  return "unknown";
}

void gauss_legendre(std::size_t count, std::vector<double>& nodes, std::vector<double>& weights) {
  if (count == 0) throw DomainError("gauss_legendre: need at least one node");
  nodes.assign(count, 0.0);
  weights.assign(count, 0.0);
  const auto n = static_cast<double>(count);
  // P_n(x) and P_n'(x) by the three-term recurrence.
  auto legendre = [count, n](double x) {
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= count; ++k) {
      const auto kk = static_cast<double>(k);
      const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
  };
  for (std::size_t i = 0; i < (count + 1) / 2; ++i) {
    double x = std::cos(kPi * (static_cast<double>(i) + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(x);
      const double step = p / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[count - 1 - i] = x;
    weights[i] = w;
    weights[count - 1 - i] = w;
  }
  if (count % 2 == 1) nodes[count / 2] = 0.0;
}

TimeQuadrature::TimeQuadrature(std::vector<double> nodes, std::vector<double> weights,
                               TimeScheme scheme, double parameter)
    : nodes_(std::move(nodes)), weights_(std::move(weights)), scheme_(scheme),
      parameter_(parameter) {
  if (nodes_.empty() || nodes_.size() != weights_.size()) {
    throw StructuralError("TimeQuadrature: nodes and weights must be non-empty and match");
  }
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    if (!std::isfinite(nodes_[k]) || !(weights_[k] > 0.0) || !std::isfinite(weights_[k])) {
      throw StructuralError("TimeQuadrature: weights must be positive and finite");
    }
    if (k > 0 && !(nodes_[k] > nodes_[k - 1])) {
      throw StructuralError("TimeQuadrature: nodes must be strictly increasing");
    }
  }
}

TimeQuadrature TimeQuadrature::compactified(std::size_t count, double scale) {
  if (!(scale > 0.0)) throw DomainError("TimeQuadrature: scale must be positive");
  std::vector<double> x;
  std::vector<double> w;
  gauss_legendre(count, x, w);
  std::vector<double> nodes(count);
  std::vector<double> weights(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double theta = 0.5 * kPi * x[k];
    const double c = std::cos(theta);
    nodes[k] = scale * std::tan(theta);
    weights[k] = 0.5 * kPi * w[k] * scale / (c * c);
  }
  return TimeQuadrature(std::move(nodes), std::move(weights), TimeScheme::compactified, scale);
}

TimeQuadrature TimeQuadrature::truncated(std::size_t count, double t_max) {
  if (!(t_max > 0.0)) throw DomainError("TimeQuadrature: t_max must be positive");
  std::vector<double> x;
  std::vector<double> w;
  gauss_legendre(count, x, w);
  for (std::size_t k = 0; k < count; ++k) {
    x[k] *= t_max;
    w[k] *= t_max;
  }
  return TimeQuadrature(std::move(x), std::move(w), TimeScheme::truncated, t_max);
}

TimeQuadrature TimeQuadrature::explicit_nodes(std::vector<double> nodes,
                                              std::vector<double> weights) {
  return TimeQuadrature(std::move(nodes), std::move(weights), TimeScheme::explicit_nodes, 0.0);
}

double PropagatorConfig::switch_time(const UniformGrid& grid) const {
  if (far_field_time >= 0.0) return far_field_time;
  return grid.length() / (2.0 * grid.xi_max());
}

// ---------------------------------------------------------------------------

namespace {

// A_t = (-4 pi i t)^{-1/2}, principal branch.
cplx far_amplitude(double t) {
  const double sign = t > 0.0 ? 1.0 : -1.0;
  return std::polar(1.0 / std::sqrt(4.0 * kPi * std::abs(t)), sign * kPi / 4.0);
}

}  // namespace

double FieldSlice::position(const UniformGrid& grid, std::size_t j) const {
  return frame == SliceFrame::near ? grid.x(j) : -2.0 * t * grid.xi(j);
}

cplx FieldSlice::field_value(const UniformGrid& grid, std::size_t j) const {
  if (frame == SliceFrame::near) return values[j];
  const double xi = grid.xi(j);
  return std::polar(1.0, -t * xi * xi) * values[j];
}

SpaceTimeField::SpaceTimeField(UniformGrid grid, TimeQuadrature times,
                               std::vector<FieldSlice> slices)
    : grid_(grid), times_(std::move(times)), slices_(std::move(slices)) {
  if (slices_.size() != times_.size()) {
    throw StructuralError("SpaceTimeField: slice count does not match time quadrature");
  }
  for (const auto& s : slices_) {
    if (s.values.size() != grid_.size()) {
      throw StructuralError("SpaceTimeField: slice length does not match grid");
    }
  }
}

WaveFunction evolve(const WaveFunction& f, double t) {
  if (t == 0.0) return f;
  return inverse_transform(forward_transform(f).multiplied(
      [t](double xi) { return std::polar(1.0, t * xi * xi); }));
}

FieldSlice near_slice(const WaveFunction& f, double t) {
  WaveFunction u = evolve(f, t);
  return FieldSlice{t, SliceFrame::near, cvec(u.values().begin(), u.values().end()),
                    f.grid().dx()};
}

FieldSlice far_slice(const WaveFunction& f, double t) {
  if (t == 0.0) throw DomainError("far_slice: t must be nonzero");
  const auto& grid = f.grid();
  cvec g(f.values().begin(), f.values().end());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double y = grid.x(j);
    g[j] *= std::polar(1.0, -y * y / (4.0 * t));
  }
  Spectrum gh = forward_transform(WaveFunction(grid, std::move(g)));
  const cplx amp = far_amplitude(t);
  cvec env(gh.values().begin(), gh.values().end());
  for (auto& z : env) z *= amp;
  return FieldSlice{t, SliceFrame::far, std::move(env), 2.0 * std::abs(t) * grid.dxi()};
}

FieldSlice make_slice(const WaveFunction& f, double t, double switch_time) {
  return std::abs(t) <= switch_time ? near_slice(f, t) : far_slice(f, t);
}

WaveFunction back_propagate(const UniformGrid& grid, const FieldSlice& w) {
  if (w.frame == SliceFrame::near) {
    return evolve(WaveFunction(grid, w.values), -w.t);
  }
  // e^{-it Delta} w (y) = conj(A_t) e^{i y^2/4t} 2|t| 2pi F^{-1}[W](y)
  WaveFunction inv = inverse_transform(Spectrum(grid, w.values));
  const cplx pre = std::conj(far_amplitude(w.t)) * (2.0 * std::abs(w.t) * kTwoPi);
  cvec out(inv.values().begin(), inv.values().end());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double y = grid.x(j);
    out[j] *= pre * std::polar(1.0, y * y / (4.0 * w.t));
  }
  return WaveFunction(grid, std::move(out));
}

SpaceTimeField evolve_range(const WaveFunction& f, const PropagatorConfig& config) {
  const double ts = config.switch_time(f.grid());
  std::vector<FieldSlice> slices;
  slices.reserve(config.times.size());
  for (double t : config.times.nodes()) slices.push_back(make_slice(f, t, ts));
  SpaceTimeField field(f.grid(), config.times, std::move(slices));
  if (auto w = band_limit_warning(f, 2.0); !w.empty()) field.add_warning(w);
  return field;
}

double spacetime_lp(const SpaceTimeField& u, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("spacetime_lp: p must lie in [1, inf)");
  double total = 0.0;
  const auto& weights = u.times().weights();
  for (std::size_t k = 0; k < u.slices().size(); ++k) {
    const auto& s = u.slices()[k];
    double acc = 0.0;
    for (const auto& z : s.values) acc += std::pow(std::abs(z), p);
    total += weights[k] * s.measure * acc;
  }
  return std::pow(total, 1.0 / p);
}

double strichartz_ratio(const WaveFunction& f, const PropagatorConfig& config) {
  const double l2 = l2_norm(f);
  if (!(l2 > 0.0)) throw DomainError("strichartz_ratio: zero input");
  return spacetime_lp(evolve_range(f, config), 6.0) / l2;
}

StrichartzReport strichartz_report(const WaveFunction& f, const PropagatorConfig& config) {
  StrichartzReport r;
  r.l2 = l2_norm(f);
  if (!(r.l2 > 0.0)) throw DomainError("strichartz_report: zero input");
  SpaceTimeField u = evolve_range(f, config);
  r.spacetime_l6 = spacetime_lp(u, 6.0);
  r.ratio = r.spacetime_l6 / r.l2;
  r.time_nodes = config.times.size();
  r.switch_time = config.switch_time(f.grid());
  r.warnings = u.warnings();
  if (config.times.scheme() == TimeScheme::compactified && config.times.size() >= 5) {
    PropagatorConfig coarse = config;
    coarse.times = TimeQuadrature::compactified(config.times.size() / 2 + 1,
                                                config.times.parameter());
    r.quadrature_error = std::abs(strichartz_ratio(f, coarse) - r.ratio);
  }
  return r;
}

WaveFunction fourier_dual(const WaveFunction& f) {
  // f^vee(x) = (1/2pi) f^(-x)
  const auto& grid = f.grid();
  cvec out(grid.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = transform_at(f, -grid.x(j)) / kTwoPi;
  return WaveFunction(grid, std::move(out));
}

FourierSymmetry fourier_symmetry_check(const WaveFunction& f, const PropagatorConfig& config) {
  if (!(l2_norm(f) > 0.0)) throw DomainError("fourier_symmetry_check: zero input");
  const WaveFunction dual = fourier_dual(f);
  const double nf = spacetime_lp(evolve_range(f, config), 6.0);
  const double nd = spacetime_lp(evolve_range(dual, config), 6.0);
  FourierSymmetry out;
  out.ratio_f = nf / l2_norm(f);
  out.ratio_dual = nd / l2_norm(dual);
  out.constant = nf / nd;
  return out;
}

}  // namespace strichartz
