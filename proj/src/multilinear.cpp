#include "strichartz/multilinear.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace strichartz {

WeightParams::WeightParams(double mu_, double eps_) : mu(mu_), eps(eps_) {
  if (!(mu >= 0.0) || !(eps >= 0.0) || !std::isfinite(mu) || !std::isfinite(eps)) {
    throw DomainError("WeightParams: mu and eps must be finite and nonnegative");
  }
}

double weight(double xi, const WeightParams& w) {
  const double x2 = xi * xi;
  if (w.eps > 0.0 && std::isinf(x2)) return w.mu / w.eps;
  return w.mu * x2 / (1.0 + w.eps * x2);
}

double constraint_a(const Eta& e) { return e[0] + e[1] + e[2] - e[3] - e[4] - e[5]; }

double constraint_b(const Eta& e) {
  return e[0] * e[0] + e[1] * e[1] + e[2] * e[2] - e[3] * e[3] - e[4] * e[4] - e[5] * e[5];
}

namespace {

// Neumaier summation for long outer sums.
struct Accumulator {
  cplx sum{};
  cplx comp{};
  void add(cplx v) {
    auto one = [](double& s, double& c, double x) {
      const double t = s + x;
      if (std::abs(s) >= std::abs(x)) {
        c += (s - t) + x;
      } else {
        c += (x - t) + s;
      }
      s = t;
    };
    double sr = sum.real(), si = sum.imag(), cr = comp.real(), ci = comp.imag();
    one(sr, cr, v.real());
    one(si, ci, v.imag());
    sum = {sr, si};
    comp = {cr, ci};
  }
  cplx value() const { return sum + comp; }
};

// Indices of the distinct objects among six references (by address).
template <class T>
std::array<std::size_t, 6> distinct_slots(const std::array<std::reference_wrapper<const T>, 6>& f) {
  std::array<std::size_t, 6> slot{};
  for (std::size_t k = 0; k < 6; ++k) {
    slot[k] = k;
    for (std::size_t j = 0; j < k; ++j) {
      if (&f[j].get() == &f[k].get()) {
        slot[k] = slot[j];
        break;
      }
    }
  }
  return slot;
}

}  // namespace

QValue q_spacetime(const WaveSextuple& f, const PropagatorConfig& config) {
  const auto& grid = f[0].get().grid();
  for (std::size_t k = 1; k < 6; ++k) require_same_grid(grid, f[k].get().grid(), "q_spacetime");
  const auto slot = distinct_slots(f);
  const double ts = config.switch_time(grid);

  QValue out;
  for (std::size_t k = 0; k < 6; ++k) {
    if (slot[k] != k) continue;
    if (auto w = band_limit_warning(f[k].get(), 6.0); !w.empty()) {
      out.warnings.push_back("slot " + std::to_string(k + 1) + ": " + w);
    }
  }

  const auto& nodes = config.times.nodes();
  const auto& weights = config.times.weights();
  Accumulator total;
  std::array<FieldSlice, 6> s;
  for (std::size_t q = 0; q < nodes.size(); ++q) {
    for (std::size_t k = 0; k < 6; ++k) {
      if (slot[k] == k) s[k] = make_slice(f[k].get(), nodes[q], ts);
    }
    const auto& v1 = s[slot[0]].values;
    const auto& v2 = s[slot[1]].values;
    const auto& v3 = s[slot[2]].values;
    const auto& v4 = s[slot[3]].values;
    const auto& v5 = s[slot[4]].values;
    const auto& v6 = s[slot[5]].values;
    cplx acc = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      acc += std::conj(v1[j] * v2[j] * v3[j]) * (v4[j] * v5[j] * v6[j]);
    }
    total.add(weights[q] * s[slot[0]].measure * acc);
  }
  out.value = kKappa * total.value();
  out.points = nodes.size();
  return out;
}

// ---------------------------------------------------------------------------

SpectralSampler::SpectralSampler(const Spectrum& g, Mode mode, int refine, int order)
    : mode_(mode), order_(order) {
  if (order < 1 || order > 12) throw DomainError("SpectralSampler: order must lie in [1, 12]");
  if (mode == Mode::smooth) {
    if (refine < 1 || (refine & (refine - 1)) != 0) {
      throw DomainError("SpectralSampler: refine must be a power of two");
    }
    const auto& grid = g.grid();
    const std::size_t n = grid.size();
    const std::size_t big = n * static_cast<std::size_t>(refine);
    // Zero-pad in space around the original samples; positions are unchanged.
    const UniformGrid padded(big, grid.dx(),
                             grid.x0() - static_cast<double>((big - n) / 2) * grid.dx());
    const WaveFunction f = inverse_transform(g);
    cvec v(big);
    std::copy(f.values().begin(), f.values().end(), v.begin() + static_cast<long>((big - n) / 2));
    const Spectrum fine = forward_transform(WaveFunction(padded, std::move(v)));
    samples_.assign(fine.values().begin(), fine.values().end());
    xi0_ = fine.xi(0);
    h_ = fine.dxi();
    run_.assign(samples_.size(), 0);
    runs_.push_back({0, samples_.size() - 1});
  } else {
    samples_.assign(g.values().begin(), g.values().end());
    xi0_ = g.xi(0);
    h_ = g.dxi();
    run_.assign(samples_.size(), -1);
    for (std::size_t c = 0; c < samples_.size(); ++c) {
      if (samples_[c] == cplx{}) continue;
      if (c == 0 || run_[c - 1] < 0) runs_.push_back({c, c});
      runs_.back().second = c;
      run_[c] = static_cast<int>(runs_.size() - 1);
    }
  }
}

SpectralSampler SpectralSampler::smooth(const WaveFunction& f, int refine, int order) {
  return SpectralSampler(forward_transform(f), Mode::smooth, refine, order);
}

cplx SpectralSampler::operator()(double xi) const {
  const double u = (xi - xi0_) / h_;
  if (!(u >= 0.0) || u > static_cast<double>(samples_.size() - 1)) return 0.0;
  auto near = static_cast<std::size_t>(std::lround(u));
  int r = run_[near];
  if (r < 0) {
    // between a run end and a zero sample: outside the support
    return 0.0;
  }
  const auto [lo, hi] = runs_[static_cast<std::size_t>(r)];
  if (u < static_cast<double>(lo) || u > static_cast<double>(hi)) return 0.0;
  const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(order_) + 1, hi - lo + 1);
  long start = static_cast<long>(near) - static_cast<long>(m / 2);
  start = std::clamp(start, static_cast<long>(lo), static_cast<long>(hi) - static_cast<long>(m) + 1);

  // Barycentric form on equispaced nodes: w_i = (-1)^i binom(m-1, i).
  cplx num = 0.0;
  double den = 0.0;
  double binom = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double d = u - static_cast<double>(start + static_cast<long>(i));
    if (d == 0.0) return samples_[static_cast<std::size_t>(start) + i];
    const double w = ((i % 2 == 0) ? binom : -binom) / d;
    num += w * samples_[static_cast<std::size_t>(start) + i];
    den += w;
    binom = binom * static_cast<double>(m - 1 - i) / static_cast<double>(i + 1);
  }
  return num / den;
}

std::vector<std::pair<double, double>> SpectralSampler::support(double threshold) const {
  std::vector<std::pair<double, double>> out;
  double peak = 0.0;
  for (const auto& z : samples_) peak = std::max(peak, std::abs(z));
  if (peak == 0.0) return out;
  if (mode_ == Mode::piecewise) {
    // trim each run to its samples above the threshold, keeping a sample of margin
    // when the run continues past it
    for (auto [lo, hi] : runs_) {
      std::size_t a = lo;
      std::size_t b = hi;
      while (a <= b && std::abs(samples_[a]) <= threshold * peak) ++a;
      if (a > b) continue;
      while (std::abs(samples_[b]) <= threshold * peak) --b;
      a = a > lo ? a - 1 : a;
      b = b < hi ? b + 1 : b;
      out.push_back({xi0_ + static_cast<double>(a) * h_, xi0_ + static_cast<double>(b) * h_});
    }
    return out;
  }
  std::size_t first = samples_.size();
  std::size_t last = 0;
  for (std::size_t c = 0; c < samples_.size(); ++c) {
    if (std::abs(samples_[c]) > threshold * peak) {
      first = std::min(first, c);
      last = c;
    }
  }
  // One hull, widened by a sample on each side.
  first = first > 0 ? first - 1 : 0;
  last = std::min(last + 1, samples_.size() - 1);
  out.push_back({xi0_ + static_cast<double>(first) * h_, xi0_ + static_cast<double>(last) * h_});
  return out;
}

SpectralFactor spectral_factor(const Spectrum& g, double threshold) {
  auto sampler = std::make_shared<SpectralSampler>(g, SpectralSampler::Mode::piecewise);
  return SpectralFactor{[sampler](double xi) { return (*sampler)(xi); }, sampler->support(threshold)};
}

// ---------------------------------------------------------------------------

RootPair root_pair(double sum, double square_sum) {
  const double disc = 2.0 * square_sum - sum * sum;
  RootPair r;
  if (!(disc > 0.0)) return r;
  const double root = std::sqrt(disc);
  r.real = true;
  r.first = 0.5 * (sum + root);
  r.second = 0.5 * (sum - root);
  r.density = 1.0 / (2.0 * root);  // 1 / (2 |xi5 - xi6|)
  return r;
}

namespace {

const double kU1[3] = {1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0};
const double kU2[3] = {1.0 / std::sqrt(6.0), 1.0 / std::sqrt(6.0), -2.0 / std::sqrt(6.0)};

struct OuterNodes {
  std::vector<double> xi;
  std::vector<double> w;
};

OuterNodes outer_nodes(const std::vector<std::pair<double, double>>& panels, std::size_t count) {
  OuterNodes out;
  double total = 0.0;
  for (const auto& [a, b] : panels) total += std::max(0.0, b - a);
  if (!(total > 0.0)) return out;
  std::map<std::size_t, std::pair<std::vector<double>, std::vector<double>>> rules;
  for (const auto& [a, b] : panels) {
    if (!(b > a)) continue;
    const auto m = std::max<std::size_t>(
        4, static_cast<std::size_t>(std::lround(static_cast<double>(count) * (b - a) / total)));
    auto& rule = rules[m];
    if (rule.first.empty()) gauss_legendre(m, rule.first, rule.second);
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    for (std::size_t i = 0; i < m; ++i) {
      out.xi.push_back(c + h * rule.first[i]);
      out.w.push_back(h * rule.second[i]);
    }
  }
  return out;
}

cplx evaluate(const std::array<SpectralFactor, 6>& factors, const QuadratureOptions& opt,
              std::size_t& points) {
  std::array<OuterNodes, 3> nodes;
  std::array<std::vector<cplx>, 3> values;
  for (std::size_t d = 0; d < 3; ++d) {
    nodes[d] = outer_nodes(factors[d].panels, opt.outer_nodes);
    values[d].resize(nodes[d].xi.size());
    for (std::size_t i = 0; i < nodes[d].xi.size(); ++i) {
      values[d][i] = nodes[d].w[i] * factors[d].eval(nodes[d].xi[i]);
    }
  }
  for (std::size_t d = 3; d < 6; ++d) {
    if (factors[d].panels.empty()) return 0.0;
  }

  double peak = 0.0;
  for (const auto& a : values[0])
    for (const auto& b : values[1])
      for (const auto& c : values[2]) peak = std::max(peak, std::abs(a * b * c));
  if (peak == 0.0) return 0.0;
  const double floor = 1e-16 * peak;

  // Outside the hull of a factor's panels nothing contributes.
  auto inside = [&](std::size_t d, double x) {
    return x >= factors[d].panels.front().first && x <= factors[d].panels.back().second;
  };
  auto back = [&](double x4, double x5, double x6) -> cplx {
    if (!inside(3, x4) || !inside(4, x5) || !inside(5, x6)) return 0.0;
    return factors[3].eval(x4) * factors[4].eval(x5) * factors[5].eval(x6);
  };

  const double jac = 1.0 / (2.0 * std::sqrt(3.0));
  Accumulator total;
  for (std::size_t i = 0; i < values[0].size(); ++i) {
    for (std::size_t j = 0; j < values[1].size(); ++j) {
      for (std::size_t k = 0; k < values[2].size(); ++k) {
        const cplx front = values[0][i] * values[1][j] * values[2][k];
        if (std::abs(front) <= floor) continue;
        const double a = nodes[0].xi[i], b = nodes[1].xi[j], c = nodes[2].xi[k];
        const double P = a + b + c;
        const double E = a * a + b * b + c * c;
        const double rho = std::sqrt(std::max(0.0, E - P * P / 3.0));
        const auto count = std::clamp<std::size_t>(
            static_cast<std::size_t>(std::ceil(opt.angle_density * kTwoPi * rho)), opt.min_angles,
            opt.max_angles);
        cplx inner = 0.0;
        if (opt.route == InnerRoute::circle) {
          const double m = P / 3.0;
          const double step = kTwoPi / static_cast<double>(count);
          for (std::size_t q = 0; q < count; ++q) {
            const double beta = step * static_cast<double>(q);
            const double cb = rho * std::cos(beta);
            const double sb = rho * std::sin(beta);
            inner += back(m + cb * kU1[0] + sb * kU2[0], m + cb * kU1[1] + sb * kU2[1],
                          m + cb * kU1[2] + sb * kU2[2]);
          }
          inner *= step * jac;
          points += count;
        } else {
          // xi4 = P/3 + h sin(phi) sweeps the interval where 2T - S^2 >= 0. There
          // 2T - S^2 = 3 h^2 cos^2(phi), so |xi5 - xi6| = sqrt(3) h cos(phi) and the
          // root density 1/(2|xi5 - xi6|) times dxi4 = h cos(phi) dphi is
          // dphi / (2 sqrt 3), also in the degenerate limit h -> 0.
          const std::size_t half = std::max<std::size_t>(count / 2, 2);
          const double c4 = P / 3.0;
          const double h4 = std::sqrt(2.0 / 3.0) * rho;
          const double step = kPi / static_cast<double>(half);
          for (std::size_t q = 0; q < half; ++q) {
            const double phi = -0.5 * kPi + step * (static_cast<double>(q) + 0.5);
            const double x4 = c4 + h4 * std::sin(phi);
            const double S = P - x4;
            const double gap = std::sqrt(3.0) * h4 * std::cos(phi);
            const double x5 = 0.5 * (S + gap);
            const double x6 = 0.5 * (S - gap);
            inner += back(x4, x5, x6) + back(x4, x6, x5);
          }
          inner *= step * jac;
          points += half;
        }
        total.add(front * inner);
      }
    }
  }
  return total.value();
}

}  // namespace

QValue constraint_integral(const std::array<SpectralFactor, 6>& factors,
                           const QuadratureOptions& options) {
  if (options.outer_nodes < 4) throw DomainError("constraint_integral: outer_nodes < 4");
  if (!(options.angle_density > 0.0) || options.min_angles < 4 ||
      options.max_angles < options.min_angles) {
    throw DomainError("constraint_integral: invalid angular resolution");
  }
  for (auto& f : factors) {
    for (std::size_t p = 1; p < f.panels.size(); ++p) {
      if (f.panels[p].first < f.panels[p - 1].second) {
        throw StructuralError("constraint_integral: panels must be sorted and disjoint");
      }
    }
  }
  QValue out;
  out.kappa = 1.0;
  QuadratureOptions opts = options;
  for (;;) {
    out.value = evaluate(factors, opts, out.points);
    if (!opts.estimate_error && !(opts.rel_tol > 0.0)) break;
    QuadratureOptions coarse = opts;
    coarse.outer_nodes = std::max<std::size_t>(4, opts.outer_nodes * 5 / 6);
    coarse.angle_density = opts.angle_density * 5.0 / 6.0;
    coarse.min_angles = std::max<std::size_t>(4, opts.min_angles * 5 / 6);
    std::size_t dummy = 0;
    out.tolerance = std::abs(evaluate(factors, coarse, dummy) - out.value);
    if (!(opts.rel_tol > 0.0) || out.tolerance <= opts.rel_tol * std::abs(out.value)) break;
    if (opts.outer_nodes >= opts.max_outer_nodes) {
      out.warnings.push_back("quadrature: relative tolerance not reached at " +
                             std::to_string(opts.outer_nodes) + " outer nodes");
      break;
    }
    opts.outer_nodes = std::min(opts.max_outer_nodes, opts.outer_nodes * 4 / 3);
  }
  return out;
}

QValue q_quadrature(const WaveSextuple& f, const QuadratureOptions& options) {
  const auto& grid = f[0].get().grid();
  for (std::size_t k = 1; k < 6; ++k) require_same_grid(grid, f[k].get().grid(), "q_quadrature");
  const auto slot = distinct_slots(f);
  std::array<std::shared_ptr<SpectralSampler>, 6> samplers;
  for (std::size_t k = 0; k < 6; ++k) {
    samplers[k] = slot[k] == k ? std::make_shared<SpectralSampler>(
                                     SpectralSampler::smooth(f[k].get()))
                               : samplers[slot[k]];
  }
  std::array<SpectralFactor, 6> factors;
  for (std::size_t k = 0; k < 6; ++k) {
    auto s = samplers[k];
    factors[k].panels = s->support(options.support_threshold);
    if (k < 3) {
      factors[k].eval = [s](double xi) { return std::conj((*s)(xi)); };
    } else {
      factors[k].eval = [s](double xi) { return (*s)(xi); };
    }
  }
  QValue out = constraint_integral(factors, options);
  out.kappa = kKappa;
  return out;
}

double m_weighted(const std::array<SpectralFactor, 6>& h, const WeightParams& w,
                  const QuadratureOptions& options) {
  std::array<SpectralFactor, 6> g;
  for (std::size_t k = 0; k < 6; ++k) {
    const double sign = k == 0 ? 1.0 : -1.0;
    auto eval = h[k].eval;
    g[k].panels = h[k].panels;
    g[k].eval = [eval, sign, w](double xi) -> cplx {
      return std::abs(eval(xi)) * std::exp(sign * weight(xi, w));
    };
  }
  return constraint_integral(g, options).value.real();
}

double m_weighted(const std::array<Spectrum, 6>& h, const WeightParams& w,
                  const QuadratureOptions& options) {
  for (std::size_t k = 1; k < 6; ++k) require_same_grid(h[0].grid(), h[k].grid(), "m_weighted");
  std::array<SpectralFactor, 6> f;
  for (std::size_t k = 0; k < 6; ++k) f[k] = spectral_factor(h[k], options.support_threshold);
  return m_weighted(f, w, options);
}

// ---------------------------------------------------------------------------

Eta constraint_point(double xi1, double xi2, double xi3, double beta) {
  const double P = xi1 + xi2 + xi3;
  const double E = xi1 * xi1 + xi2 * xi2 + xi3 * xi3;
  const double rho = std::sqrt(std::max(0.0, E - P * P / 3.0));
  const double m = P / 3.0;
  const double cb = rho * std::cos(beta);
  const double sb = rho * std::sin(beta);
  return {xi1, xi2, xi3, m + cb * kU1[0] + sb * kU2[0], m + cb * kU1[1] + sb * kU2[1],
          m + cb * kU1[2] + sb * kU2[2]};
}

std::vector<Eta> sample_constraint_points(std::size_t count, std::uint64_t seed, double box) {
  if (!(box > 0.0)) throw DomainError("sample_constraint_points: box must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> x(-box, box);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::vector<Eta> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double a = x(rng), b = x(rng), c = x(rng);
    out.push_back(constraint_point(a, b, c, angle(rng)));
  }
  return out;
}

}  // namespace strichartz
