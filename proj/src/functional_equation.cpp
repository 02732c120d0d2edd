#include "strichartz/functional_equation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <boost/multiprecision/cpp_int.hpp>

namespace strichartz {

double ConstraintSextuple::sum_defect() const {
  return std::abs(left[0] + left[1] + left[2] - right[0] - right[1] - right[2]);
}

double ConstraintSextuple::square_defect() const {
  double l = 0.0;
  double r = 0.0;
  for (int i = 0; i < 3; ++i) {
    l += left[i] * left[i];
    r += right[i] * right[i];
  }
  return std::abs(l - r);
}

ConstraintSextuple constraint_circle(double x, double y, double z, double theta) {
  const double s = x + y + z;
  const double q = x * x + y * y + z * z;
  double r2 = q - s * s / 3.0;
  if (!(r2 >= -1e-12 * std::max(1.0, q))) {
    throw StructuralError("constraint_circle: q - s^2/3 is negative beyond rounding");
  }
  r2 = std::max(r2, 0.0);
  const double r = std::sqrt(r2);
  const double m = s / 3.0;
  const double c = r * std::cos(theta) / std::sqrt(2.0);
  const double d = r * std::sin(theta) / std::sqrt(6.0);
  return ConstraintSextuple{{x, y, z}, {m + c + d, m - c + d, m - 2.0 * d}};
}

double product_residual(const PointFunction& f, const ConstraintSextuple& cs) {
  const cplx l = f(cs.left[0]) * f(cs.left[1]) * f(cs.left[2]);
  const cplx r = f(cs.right[0]) * f(cs.right[1]) * f(cs.right[2]);
  return std::abs(l - r) / (std::abs(l) + std::abs(r) + 1e-300);
}

// ---------------------------------------------------------------------------

LocalInterpolant::LocalInterpolant(const WaveFunction& f, int order)
    : grid_(f.grid()), values_(f.values().begin(), f.values().end()), order_(order) {
  if (order < 1 || static_cast<std::size_t>(order) >= values_.size()) {
    throw DomainError("LocalInterpolant: order out of range");
  }
  // Equispaced barycentric weights (-1)^i binom(order, i).
  double b = 1.0;
  for (int i = 0; i <= order; ++i) {
    weights_.push_back((i % 2 == 0) ? b : -b);
    b = b * (order - i) / (i + 1);
  }
}

cplx LocalInterpolant::operator()(double x) const {
  const double u = (x - grid_.x0()) / grid_.dx();
  const auto last = static_cast<double>(values_.size() - 1);
  if (!(u >= 0.0) || u > last) return 0.0;
  const long m = order_ + 1;
  long start = std::lround(u) - m / 2;
  start = std::clamp(start, 0L, static_cast<long>(values_.size()) - m);
  cplx num = 0.0;
  double den = 0.0;
  for (long i = 0; i < m; ++i) {
    const double d = u - static_cast<double>(start + i);
    if (d == 0.0) return values_[static_cast<std::size_t>(start + i)];
    const double w = weights_[static_cast<std::size_t>(i)] / d;
    num += w * values_[static_cast<std::size_t>(start + i)];
    den += w;
  }
  return num / den;
}

// ---------------------------------------------------------------------------

PowerSumTable golden_power_sums(int kmax) {
  using boost::multiprecision::cpp_int;
  if (kmax < 3) throw DomainError("golden_power_sums: kmax must be at least 3");
  PowerSumTable table;
  table.all_nonzero = true;
  table.all_bounds = true;
  cpp_int prev = 1;  // L_1
  cpp_int cur = 3;   // L_2
  cpp_int two_k = 4;
  cpp_int three_k = 9;
  for (int k = 3; k <= kmax; ++k) {
    const cpp_int next = cur + prev;
    prev = cur;
    cur = next;
    two_k *= 2;
    three_k *= 3;
    const int sign = (k % 2 == 0) ? 1 : -1;
    const cpp_int p = 2 + sign - cur;
    // -p >= (3/2)^k - c  <=>  -p 2^k >= 3^k - c 2^k, with c = 3 (even) or 2 (odd)
    const int c = (k % 2 == 0) ? 3 : 2;
    const cpp_int rhs = three_k - c * two_k;
    PowerSumRow row;
    row.k = k;
    row.lucas = cur.str();
    row.p = p.str();
    row.nonzero = p != 0;
    row.bound_holds = (-p) * two_k >= rhs && rhs > 0;
    table.all_nonzero = table.all_nonzero && row.nonzero;
    table.all_bounds = table.all_bounds && row.bound_holds;
    table.rows.push_back(std::move(row));
  }
  return table;
}

// ---------------------------------------------------------------------------

namespace {

// Solve the 3x3 system M a = r by Gaussian elimination with partial pivoting.
std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> M, std::array<double, 3> r) {
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int i = c + 1; i < 3; ++i) {
      if (std::abs(M[i][c]) > std::abs(M[piv][c])) piv = i;
    }
    std::swap(M[c], M[piv]);
    std::swap(r[c], r[piv]);
    for (int i = c + 1; i < 3; ++i) {
      const double f = M[i][c] / M[c][c];
      for (int j = c; j < 3; ++j) M[i][j] -= f * M[c][j];
      r[i] -= f * r[c];
    }
  }
  std::array<double, 3> a{};
  for (int c = 2; c >= 0; --c) {
    double v = r[c];
    for (int j = c + 1; j < 3; ++j) v -= M[c][j] * a[j];
    a[c] = v / M[c][c];
  }
  return a;
}

}  // namespace

QuadraticFit quadratic_log_fit(const WaveFunction& f, double floor_ratio) {
  if (!(floor_ratio > 0.0 && floor_ratio < 1.0)) {
    throw DomainError("quadratic_log_fit: floor_ratio must lie in (0, 1)");
  }
  const auto& grid = f.grid();
  const std::size_t n = f.size();
  std::size_t arg = 0;
  for (std::size_t j = 1; j < n; ++j) {
    if (std::abs(f[j]) > std::abs(f[arg])) arg = j;
  }
  const double peak = std::abs(f[arg]);
  if (!(peak > 0.0)) throw DomainError("quadratic_log_fit: zero input");
  const double floor = floor_ratio * peak;

  std::size_t lo = arg;
  std::size_t hi = arg;
  while (lo > 0 && std::abs(f[lo - 1]) >= floor) --lo;
  while (hi + 1 < n && std::abs(f[hi + 1]) >= floor) ++hi;
  const std::size_t count = hi - lo + 1;
  if (count < 32) throw DomainError("quadratic_log_fit: fit window holds fewer than 32 samples");

  QuadraticFit fit;
  fit.window_size = count;
  std::size_t above = 0;
  for (std::size_t j = 0; j < n; ++j) above += std::abs(f[j]) >= floor ? 1 : 0;
  fit.support_mass = static_cast<double>(count) / static_cast<double>(n);
  if (above != count) {
    fit.warnings.push_back("samples above the floor outside the connected window were ignored");
  }

  // log|f| and the phase, unwrapped outward from the maximum.
  std::vector<double> mag(count);
  std::vector<double> phase(count);
  const std::size_t centre = arg - lo;
  phase[centre] = std::arg(f[arg]);
  for (std::size_t i = 0; i < count; ++i) mag[i] = std::log(std::abs(f[lo + i]));
  auto step = [&](std::size_t from, std::size_t to) {
    const double d = std::arg(f[lo + to] / f[lo + from]);
    if (std::abs(d) > 0.5 * kPi) fit.phase_flagged = true;
    phase[to] = phase[from] + d;
  };
  for (std::size_t i = centre + 1; i < count; ++i) step(i - 1, i);
  for (std::size_t i = centre; i-- > 0;) step(i + 1, i);
  if (fit.phase_flagged) fit.warnings.push_back("phase jump above pi/2 between adjacent samples");

  // Fit in the scaled variable u = (x - xc) / h for conditioning.
  const double xc = grid.x(lo + centre);
  const double h = 0.5 * static_cast<double>(count) * grid.dx();
  std::array<std::array<double, 3>, 3> M{};
  std::array<double, 3> rr{};
  std::array<double, 3> ri{};
  for (std::size_t i = 0; i < count; ++i) {
    const double u = (grid.x(lo + i) - xc) / h;
    const double basis[3] = {u * u, u, 1.0};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) M[a][b] += basis[a] * basis[b];
      rr[a] += basis[a] * mag[i];
      ri[a] += basis[a] * phase[i];
    }
  }
  const auto cr = solve3(M, rr);
  const auto ci = solve3(M, ri);
  const cplx a2{cr[0], ci[0]};
  const cplx a1{cr[1], ci[1]};
  const cplx a0{cr[2], ci[2]};
  // a2 u^2 + a1 u + a0 with u = (x - xc)/h, expanded in x.
  fit.A = a2 / (h * h);
  fit.B = a1 / h - 2.0 * a2 * xc / (h * h);
  fit.C = a0 - a1 * xc / h + a2 * xc * xc / (h * h);

  double ss = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double u = (grid.x(lo + i) - xc) / h;
    const cplx model = a2 * u * u + a1 * u + a0;
    ss += std::norm(cplx{mag[i], phase[i]} - model);
  }
  fit.residual = std::sqrt(ss / static_cast<double>(count));
  // C carries the phase branch of the maximum; keep its imaginary part in (-pi, pi].
  fit.C = {fit.C.real(), std::remainder(fit.C.imag(), kTwoPi)};
  return fit;
}

ResidualStatistic residual_statistic(const PointFunction& f, std::size_t n_samples,
                                     std::uint64_t seed, double box) {
  if (!(box > 0.0)) throw DomainError("residual_statistic: box must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-box, box);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  ResidualStatistic out;
  double ss = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double x = coord(rng);
    const double y = coord(rng);
    const double z = coord(rng);
    const double r = product_residual(f, constraint_circle(x, y, z, angle(rng)));
    out.sup = std::max(out.sup, r);
    ss += r * r;
  }
  out.samples = n_samples;
  out.rms = n_samples > 0 ? std::sqrt(ss / static_cast<double>(n_samples)) : 0.0;
  return out;
}

}  // namespace strichartz
