#include "strichartz/decay.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace strichartz {
namespace {

void require_band(const UniformGrid& grid, double s, const char* what) {
  if (!(s > 1.0)) throw DomainError(std::string(what) + ": s must exceed 1");
  if (!(s * s < grid.xi_max())) {
    throw DomainError(std::string(what) + ": s^2 must lie below the Nyquist frequency");
  }
}

// Where the refined spectrum still rises above rounding.
constexpr double kSpectralFloor = 1e-14;

}  // namespace

BandDecomposition band_decompose(const WaveFunction& f, double s) {
  require_band(f.grid(), s, "band_decompose");
  const Spectrum g = forward_transform(f);
  const double s2 = s * s;
  cvec ll(g.size());
  cvec sim(g.size());
  cvec gt(g.size());
  for (std::size_t c = 0; c < g.size(); ++c) {
    const double a = std::abs(g.xi(c));
    if (a < s) {
      ll[c] = g[c];
    } else if (a <= s2) {
      sim[c] = g[c];
    } else {
      gt[c] = g[c];
    }
  }
  return BandDecomposition{s, Spectrum(g.grid(), std::move(ll)), Spectrum(g.grid(), std::move(sim)),
                           Spectrum(g.grid(), std::move(gt))};
}

// ---------------------------------------------------------------------------

BandIntegrator::BandIntegrator(const WaveFunction& f)
    : sampler_(SpectralSampler::smooth(f)), top_(0.0) {
  for (const auto& [a, b] : sampler_.support(kSpectralFloor)) {
    top_ = std::max({top_, std::abs(a), std::abs(b)});
  }
}

double BandIntegrator::weighted_mass(double lo, double hi, const WeightParams& w) const {
  hi = std::min(hi, top_);
  if (!(hi > lo)) return 0.0;
  static const auto rule = [] {
    std::pair<std::vector<double>, std::vector<double>> r;
    gauss_legendre(24, r.first, r.second);
    return r;
  }();
  const auto panels = static_cast<std::size_t>(std::ceil(hi - lo));
  const double width = (hi - lo) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double a = lo + width * static_cast<double>(p);
    for (std::size_t i = 0; i < rule.first.size(); ++i) {
      const double xi = a + 0.5 * width * (rule.first[i] + 1.0);
      const double e = std::exp(2.0 * weight(xi, w));
      total += 0.5 * width * rule.second[i] *
               e * (std::norm(sampler_(xi)) + std::norm(sampler_(-xi)));
    }
  }
  return total;
}

double tail_norm_H(const WaveFunction& f, double s, double eps) {
  require_band(f.grid(), s, "tail_norm_H");
  if (!(eps >= 0.0)) throw DomainError("tail_norm_H: eps must be nonnegative");
  const WeightParams w(std::pow(s, -4.0), eps);
  return std::sqrt(BandIntegrator(f).weighted_mass(s * s, f.grid().xi_max(), w));
}

// ---------------------------------------------------------------------------

MuFit mu_slope_fit(const WaveFunction& f, const MuWindow& window) {
  if (!(window.lower > 0.0 && window.lower < window.upper && window.upper < 1.0)) {
    throw DomainError("mu_slope_fit: need 0 < lower < upper < 1");
  }
  const Spectrum g = forward_transform(f);
  double peak = 0.0;
  for (const auto& z : g.values()) peak = std::max(peak, std::abs(z));
  if (!(peak > 0.0)) throw DomainError("mu_slope_fit: zero input");

  MuFit fit;
  fit.xi_inner = g.grid().xi_max();
  fit.xi_outer = g.grid().xi_max();
  std::vector<double> xs;
  std::vector<double> ys;
  const std::size_t centre = g.size() / 2;  // xi = 0
  for (int dir : {+1, -1}) {
    bool inside = false;
    double outer = 0.0;
    for (long c = static_cast<long>(centre);
         c >= 0 && c < static_cast<long>(g.size()); c += dir) {
      const auto idx = static_cast<std::size_t>(c);
      const double m = std::abs(g[idx]);
      if (!inside) {
        if (m <= window.upper * peak) {
          inside = true;
          fit.xi_inner = std::min(fit.xi_inner, std::abs(g.xi(idx)));
        } else {
          continue;
        }
      }
      if (m < window.lower * peak) break;
      if (m == 0.0) throw DomainError("mu_slope_fit: zero of f^ inside the window");
      const cplx prev = g[static_cast<std::size_t>(c - dir)];
      if (std::abs(std::arg(g[idx] / prev)) > 0.5 * kPi) {
        throw DomainError("mu_slope_fit: sign change of f^ inside the window");
      }
      const double xi = g.xi(idx);
      xs.push_back(xi * xi);
      ys.push_back(-std::log(m));
      outer = std::abs(xi);
    }
    fit.xi_outer = std::min(fit.xi_outer, outer);
  }
  if (xs.size() < 4) throw DomainError("mu_slope_fit: window holds too few samples");

  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  fit.mu_hat = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double c0 = (sy - fit.mu_hat * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.mu_hat * xs[i] + c0);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  fit.samples = xs.size();
  fit.certified_mu = (fit.residual <= 1e-2 && fit.mu_hat > 0.0) ? 0.5 * fit.mu_hat : 0.0;
  return fit;
}

// ---------------------------------------------------------------------------

Smallness bootstrap_smallness(const WaveFunction& f, double s) {
  require_band(f.grid(), s, "bootstrap_smallness");
  const double l2 = l2_norm(f);
  if (!(l2 > 0.0)) throw DomainError("bootstrap_smallness: zero input");
  Smallness out;
  out.s = s;
  out.mu = std::pow(s, -4.0);
  const double mass = BandIntegrator(f.scaled(1.0 / l2)).weighted_mass(s, s * s);
  out.f_sim_norm = std::sqrt(mass / kTwoPi);
  const double s4 = s * s * s * s;
  const double base =
      std::pow(s, -1.0 / 6.0) * std::exp(out.mu * s * s - out.mu * s4) + out.f_sim_norm;
  out.o1 = std::exp(2.0 * out.mu * s4) * base;
  out.o2 = std::exp(4.0 * out.mu * s4) * base;
  return out;
}

// ---------------------------------------------------------------------------

double g_polynomial(double x, double omega, double C) {
  return 0.5 * omega * x - C * x * x * (1.0 + x * (1.0 + x * (1.0 + x)));
}

GScan g_polynomial_scan(double omega, double C) {
  if (!(omega > 0.0) || !(C > 0.0)) throw DomainError("g_polynomial_scan: omega, C must be positive");
  auto G = [&](double x) { return g_polynomial(x, omega, C); };
  GScan out;
  out.omega = omega;
  out.C = C;
  // G(0) = 0 and G' (0) > 0; find X with G(X) < 0.
  double X = 1.0;
  while (G(X) >= 0.0) X *= 2.0;

  // Golden-section search for the maximum on (0, X); G is concave there.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0;
  double b = X;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double gc = G(c);
  double gd = G(d);
  while (b - a > 1e-14 * X) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - invphi * (b - a);
      gc = G(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + invphi * (b - a);
      gd = G(d);
    }
  }
  out.x_max = 0.5 * (a + b);
  out.M = G(out.x_max);

  const double half = 0.5 * out.M;
  auto bisect = [&](double lo, double hi, bool rising) {
    // rising: G(lo) < half < G(hi)
    for (int it = 0; it < 200 && hi - lo > 1e-13 * X; ++it) {
      const double mid = 0.5 * (lo + hi);
      if ((G(mid) < half) == rising) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };
  out.x0 = bisect(0.0, out.x_max, true);
  out.x1 = bisect(out.x_max, X, false);

  out.concave = out.x0 > 0.0;
  for (int i = 1; i <= 1000; ++i) {
    const double x = out.x1 * i / 1000.0;
    const double g2 = -C * (2.0 + 6.0 * x + 12.0 * x * x + 20.0 * x * x * x);
    if (!(g2 < 0.0)) out.concave = false;
  }
  return out;
}

// ---------------------------------------------------------------------------

ProbeResult analytic_extension_probe(const WaveFunction& f, const std::vector<cplx>& z,
                                     const ProbeOptions& options) {
  const MuFit fit = mu_slope_fit(f, options.window);
  if (!(fit.certified_mu > 0.0)) {
    throw DomainError("analytic_extension_probe: no certified decay rate");
  }
  ProbeResult out;
  out.certified_mu = fit.certified_mu;
  out.xi_window = fit.xi_outer;
  const double h = options.stencil;
  for (const auto& p : z) {
    if (std::abs(p.imag()) + h > out.certified_mu * out.xi_window) {
      throw DomainError("analytic_extension_probe: |Im z| exceeds certified_mu * xi_window");
    }
  }

  const Spectrum g = forward_transform(f);
  std::vector<std::size_t> idx;
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (std::abs(g.xi(c)) <= out.xi_window) idx.push_back(c);
  }
  const double scale = g.dxi() / kTwoPi;
  auto eval = [&](cplx w) {
    cplx acc = 0.0;
    for (auto c : idx) acc += std::exp(cplx{0.0, 1.0} * w * g.xi(c)) * g[c];
    return scale * acc;
  };

  constexpr int m = 8;
  for (const auto& p : z) {
    const cplx v = eval(p);
    cplx dzbar = 0.0;
    cplx dz = 0.0;
    for (int k = 0; k < m; ++k) {
      const cplx root = std::polar(1.0, kTwoPi * k / m);
      const cplx fk = eval(p + h * root);
      dzbar += fk * root;
      dz += fk * std::conj(root);
    }
    dzbar /= (m * h);
    dz /= (m * h);
    const double r = std::abs(dzbar) / (std::abs(dz) + std::abs(v) / h);
    out.z.push_back(p);
    out.values.push_back(v);
    out.cr_residual.push_back(r);
    out.max_cr_residual = std::max(out.max_cr_residual, r);
  }
  return out;
}

// ---------------------------------------------------------------------------

BootstrapCheck bootstrap_check(const WaveFunction& f, double s, double eps, double omega,
                               const QuadratureOptions& options, double tolerance) {
  require_band(f.grid(), s, "bootstrap_check");
  if (!(omega > 0.0)) throw DomainError("bootstrap_check: omega must be positive");
  BootstrapCheck out;
  out.s = s;
  out.weight = WeightParams(std::pow(s, -4.0), eps);
  out.omega = omega;
  const WeightParams w = out.weight;

  const auto integ = std::make_shared<BandIntegrator>(f);
  const double top = integ->top();
  const double s2 = s * s;
  if (!(top > s2)) throw DomainError("bootstrap_check: f^ has no mass beyond s^2");

  using Panels = std::vector<std::pair<double, double>>;
  const Panels full{{-top, top}};
  const Panels gt{{-top, -s2}, {s2, top}};
  const Panels lt{{-s2, s2}};
  const Panels ll{{-s, s}};
  const Panels sim{{-s2, -s}, {s, s2}};

  auto in = [](const Panels& p, double xi) {
    for (const auto& [a, b] : p) {
      if (xi >= a && xi <= b) return true;
    }
    return false;
  };
  // factor = transform(f^(xi)) on the panels, zero elsewhere
  auto factor = [&](const Panels& p, auto transform) {
    return SpectralFactor{[integ, p, in, transform](double xi) -> cplx {
                            if (!in(p, xi)) return 0.0;
                            return transform(xi, integ->sampler()(xi));
                          },
                          p};
  };
  auto plain = [](double, cplx v) { return v; };
  auto conjugate = [](double, cplx v) { return std::conj(v); };
  auto g_conj = [w](double xi, cplx v) { return std::exp(2.0 * weight(xi, w)) * std::conj(v); };
  auto h = [w](double xi, cplx v) { return std::exp(weight(xi, w)) * v; };

  out.tail_mass = integ->weighted_mass(s2, top, w);
  out.lhs = omega * out.tail_mass / kTwoPi;
  out.q_value = constraint_integral({factor(gt, g_conj), factor(full, conjugate),
                                     factor(full, conjugate), factor(full, plain),
                                     factor(full, plain), factor(full, plain)},
                                    options)
                    .value;

  const SpectralFactor h_gt = factor(gt, h);
  const SpectralFactor h_all = factor(full, h);
  const SpectralFactor h_lt = factor(lt, h);
  out.total = m_weighted({h_gt, h_all, h_all, h_all, h_all, h_all}, w, options);
  out.A = m_weighted({h_gt, h_lt, h_lt, h_lt, h_lt, h_lt}, w, options);
  out.A1 = m_weighted({h_gt, factor(ll, h), h_lt, h_lt, h_lt, h_lt}, w, options);
  out.A2 = m_weighted({h_gt, factor(sim, h), h_lt, h_lt, h_lt, h_lt}, w, options);
  out.B = out.total - out.A;

  out.identity_holds = std::abs(out.q_value - out.lhs) <= tolerance * out.lhs;
  out.inequality_holds = std::abs(out.q_value) <= out.total * (1.0 + tolerance) &&
                         out.B >= -tolerance * out.total &&
                         std::abs(out.A1 + out.A2 - out.A) <= tolerance * out.A;
  return out;
}

}  // namespace strichartz
