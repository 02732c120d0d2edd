#include "strichartz/bilinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace strichartz {

BandSpec BandSpec::low(double s) {
  if (!(s > 0.0)) throw DomainError("BandSpec: s must be positive");
  BandSpec b;
  b.kind = BandKind::low;
  b.s = s;
  return b;
}

BandSpec BandSpec::high(double s, double N) {
  if (!(s > 0.0)) throw DomainError("BandSpec: s must be positive");
  if (!(N > 1.0)) throw DomainError("BandSpec: separation N must exceed 1");
  BandSpec b;
  b.kind = BandKind::high;
  b.s = s;
  b.N = N;
  return b;
}

BandSpec BandSpec::annulus(double lo, double hi) {
  if (!(lo >= 0.0) || !(hi > lo)) throw DomainError("BandSpec: need 0 <= lo < hi");
  BandSpec b;
  b.kind = BandKind::annulus;
  b.lo = lo;
  b.hi = hi;
  return b;
}

double BandSpec::inner() const {
  switch (kind) {
    case BandKind::low: return 0.0;
    case BandKind::high: return N * s;
    case BandKind::annulus: return lo;
  }
  return 0.0;
}

double BandSpec::outer() const {
  switch (kind) {
    case BandKind::low: return s;
    case BandKind::high: return 2.0 * N * s;
    case BandKind::annulus: return hi;
  }
  return 0.0;
}

bool BandSpec::contains(double xi) const {
  const double a = std::abs(xi);
  return a >= inner() && a <= outer();
}

std::string to_string(BandProfile p) {
  switch (p) {
    case BandProfile::flat: return "flat";
    case BandProfile::random: return "random";
    case BandProfile::gaussian_bump: return "gaussian-bump";
  }
  return "unknown";
}

BandProfile parse_band_profile(const std::string& name) {
  if (name == "flat") return BandProfile::flat;
  if (name == "random") return BandProfile::random;
  if (name == "gaussian-bump") return BandProfile::gaussian_bump;
  throw DomainError("unknown band profile '" + name + "'");
}

WaveFunction make_band_limited(const UniformGrid& grid, const BandSpec& band, BandProfile profile,
                               std::uint64_t seed) {
  if (band.outer() > grid.xi_max()) {
    std::ostringstream os;
    os << "make_band_limited: band edge " << band.outer() << " exceeds Nyquist " << grid.xi_max();
    throw DomainError(os.str());
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  // Bump centre and width per connected piece of the band.
  const double half = 0.5 * (band.outer() - band.inner());
  const double mid = 0.5 * (band.outer() + band.inner());

  cvec v(grid.size());
  std::size_t count = 0;
  for (std::size_t c = 0; c < v.size(); ++c) {
    const double xi = grid.xi(c);
    if (!band.contains(xi)) continue;
    ++count;
    switch (profile) {
      case BandProfile::flat: v[c] = 1.0; break;
      case BandProfile::random: {
        const double re = normal(rng);
        const double im = normal(rng);
        v[c] = {re, im};
        break;
      }
      case BandProfile::gaussian_bump: {
        const double centre = band.kind == BandKind::low ? 0.0 : (xi < 0.0 ? -mid : mid);
        const double width = band.kind == BandKind::low ? 0.5 * band.outer() : 0.5 * half;
        const double u = (xi - centre) / width;
        v[c] = std::exp(-u * u);
        break;
      }
    }
  }
  if (count == 0) throw DomainError("make_band_limited: band holds no grid frequency");
  WaveFunction f = inverse_transform(Spectrum(grid, std::move(v)));
  return f.scaled(1.0 / l2_norm(f));
}

double bilinear_l3(const WaveFunction& h1, const WaveFunction& h2, const PropagatorConfig& config) {
  require_same_grid(h1.grid(), h2.grid(), "bilinear_l3");
  const auto& grid = h1.grid();
  const double ts = config.switch_time(grid);
  const auto& nodes = config.times.nodes();
  const auto& weights = config.times.weights();
  double total = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const FieldSlice a = make_slice(h1, nodes[k], ts);
    const FieldSlice b = make_slice(h2, nodes[k], ts);
    double acc = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double m = std::abs(a.values[j] * b.values[j]);
      acc += m * m * m;
    }
    total += weights[k] * a.measure * acc;
  }
  return std::cbrt(total);
}

PropagatorConfig bilinear_config(double time_scale, std::size_t nodes) {
  if (!(time_scale > 0.0)) throw DomainError("bilinear_config: time scale must be positive");
  PropagatorConfig c;
  c.times = TimeQuadrature::compactified(nodes, 0.25 * time_scale);
  return c;
}

HausdorffYoung hausdorff_young_density(const WaveFunction& h1, const WaveFunction& h2) {
  require_same_grid(h1.grid(), h2.grid(), "hausdorff_young_density");
  const Spectrum a = forward_transform(h1);
  const Spectrum b = forward_transform(h2);
  // Supports at a relative floor, so transform roundoff does not count as overlap.
  auto support = [](const Spectrum& g) {
    double peak = 0.0;
    for (const auto& z : g.values()) peak = std::max(peak, std::abs(z));
    std::vector<std::size_t> idx;
    for (std::size_t c = 0; c < g.size(); ++c) {
      if (std::abs(g[c]) > 1e-12 * peak) idx.push_back(c);
    }
    return idx;
  };
  const auto sa = support(a);
  const auto sb = support(b);
  if (sa.empty() || sb.empty()) return {};
  std::vector<char> in_a(a.size(), 0);
  for (auto c : sa) in_a[c] = 1;
  for (auto c : sb) {
    if (in_a[c]) throw DomainError("hausdorff_young_density: frequency supports overlap");
  }
  double sum = 0.0;
  for (auto c : sa) {
    const double pa = std::pow(std::abs(a[c]), 1.5);
    const double xa = a.xi(c);
    for (auto d : sb) {
      sum += pa * std::pow(std::abs(b[d]), 1.5) / std::sqrt(2.0 * std::abs(xa - b.xi(d)));
    }
  }
  const double dxi = a.dxi();
  HausdorffYoung out;
  out.density_norm = std::pow(sum * dxi * dxi, 2.0 / 3.0);
  out.bound = std::pow(kTwoPi, -4.0 / 3.0) * out.density_norm;
  return out;
}

namespace {

std::size_t next_pow2(double v) {
  std::size_t n = 8;
  while (static_cast<double>(n) < v) n *= 2;
  return n;
}

}  // namespace

SweepResult separation_sweep(double s, const std::vector<double>& Ns, BandProfile profile,
                             std::uint64_t seed, const SweepOptions& options, double width) {
  if (!(s > 0.0) || !(width > 0.0)) throw DomainError("separation_sweep: s and width must be positive");
  if (Ns.empty()) throw DomainError("separation_sweep: empty N list");
  SweepResult out;
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    const double N = Ns[i];
    if (!(N >= 1.0)) throw DomainError("separation_sweep: N must be >= 1");
    const BandSpec low = BandSpec::low(width * s);
    const BandSpec high = N > 1.0 ? BandSpec::annulus(N * s, (1.0 + width) * N * s)
                                  : BandSpec::annulus(width * s, (1.0 + width) * width * s);
    const double top = high.outer();
    const std::size_t n =
        next_pow2(options.nyquist_factor * top * 2.0 * options.half_width / kPi);
    const UniformGrid grid = UniformGrid::symmetric(n, options.half_width);
    // make_band_limited refuses bands past Nyquist, so nothing is clipped silently.
    const WaveFunction h1 = make_band_limited(grid, low, profile, seed + 2 * i);
    const WaveFunction h2 = make_band_limited(grid, high, profile, seed + 2 * i + 1);
    const PropagatorConfig config =
        bilinear_config(options.time_scale / (std::max(N, 1.0) * s * s), options.time_nodes);

    SweepRow row;
    row.N = N;
    row.grid_n = n;
    row.value = bilinear_l3(h1, h2, config);
    row.in_fit = N > 1.0;
    row.bound = row.in_fit ? hausdorff_young_density(h1, h2).bound
                           : std::numeric_limits<double>::quiet_NaN();
    if (row.in_fit) {
      lx.push_back(std::log(N));
      ly.push_back(std::log(row.value));
    } else {
      out.warnings.push_back("N = 1 control row excluded from the fit");
    }
    out.rows.push_back(row);
  }
  if (lx.size() >= 2) {
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.intercept = (sy - out.slope * sx) / n;
  } else {
    out.slope = std::numeric_limits<double>::quiet_NaN();
    out.intercept = std::numeric_limits<double>::quiet_NaN();
    out.warnings.push_back("fewer than two rows with N > 1: no slope");
  }
  return out;
}

}  // namespace strichartz
