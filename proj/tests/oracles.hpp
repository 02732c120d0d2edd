#pragma once

// Reference values computed independently of the library: closed forms,
// brute-force sums and a tiny decimal big integer.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "strichartz/lattice.hpp"

namespace oracle {

using cplx = std::complex<double>;
constexpr double pi = 3.14159265358979323846;

inline double gaussian_hat(double xi) { return std::sqrt(pi) * std::exp(-xi * xi / 4.0); }

// e^{it d_xx} e^{-x^2} with multiplier e^{it xi^2} on the transform side
inline cplx gaussian_flow(double x, double t) {
  const cplx d(1.0, -4.0 * t);
  return std::exp(-x * x / d) / std::sqrt(d);
}

// int int |u|^6 dx dt for u the flow of e^{-x^2}
inline double gaussian_l6_sixth() { return std::pow(pi, 1.5) / (4.0 * std::sqrt(6.0)); }

inline double sharp_ratio() { return std::pow(12.0, -1.0 / 12.0); }

inline double kappa() { return std::pow(2.0 * pi, 4); }

// brute-force sum_j e^{-i x_j xi} f_j dx in long double
inline cplx direct_transform(const strichartz::WaveFunction& f, double xi) {
  long double re = 0.0L;
  long double im = 0.0L;
  const auto& g = f.grid();
  for (std::size_t j = 0; j < f.size(); ++j) {
    const long double ph = -static_cast<long double>(g.x(j)) * xi;
    const long double c = std::cos(ph);
    const long double s = std::sin(ph);
    re += c * f[j].real() - s * f[j].imag();
    im += c * f[j].imag() + s * f[j].real();
  }
  return {static_cast<double>(re * g.dx()), static_cast<double>(im * g.dx())};
}

// composite Simpson on [a, b] with m (even) panels
inline double simpson(const std::function<double(double)>& f, double a, double b, int m) {
  const double h = (b - a) / m;
  double s = f(a) + f(b);
  for (int i = 1; i < m; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// smooth packet with seeded random width, centre, carrier and polynomial factor
inline strichartz::WaveFunction packet(const strichartz::UniformGrid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> N;
  const double w = 0.8 + 0.4 * std::abs(N(rng));
  const double x0 = 0.7 * N(rng);
  const double b = 0.8 * N(rng);
  const cplx a(0.5 * N(rng), 0.5 * N(rng));
  return strichartz::WaveFunction::sample(g, [=](double x) {
    return std::exp(-w * (x - x0) * (x - x0)) * std::polar(1.0, b * x) * (1.0 + a * x);
  });
}

inline double rel_l2(const strichartz::WaveFunction& a, const strichartz::WaveFunction& b) {
  return strichartz::l2_norm(a.plus(b, -1.0)) / strichartz::l2_norm(b);
}

// Nonnegative decimal integer, little-endian base 1e9.
struct Big {
  std::vector<unsigned long long> d{0};

  static Big of(unsigned long long v) {
    Big b;
    b.d.clear();
    do {
      b.d.push_back(v % 1000000000ULL);
      v /= 1000000000ULL;
    } while (v);
    return b;
  }
  Big operator+(const Big& o) const {
    Big r;
    r.d.assign(std::max(d.size(), o.d.size()) + 1, 0);
    unsigned long long carry = 0;
    for (std::size_t i = 0; i < r.d.size(); ++i) {
      unsigned long long s = carry;
      if (i < d.size()) s += d[i];
      if (i < o.d.size()) s += o.d[i];
      r.d[i] = s % 1000000000ULL;
      carry = s / 1000000000ULL;
    }
    r.trim();
    return r;
  }
  Big times(unsigned long long m) const {
    Big r;
    r.d.assign(d.size() + 2, 0);
    unsigned long long carry = 0;
    for (std::size_t i = 0; i < r.d.size(); ++i) {
      unsigned long long s = carry + (i < d.size() ? d[i] * m : 0);
      r.d[i] = s % 1000000000ULL;
      carry = s / 1000000000ULL;
    }
    r.trim();
    return r;
  }
  void trim() {
    while (d.size() > 1 && d.back() == 0) d.pop_back();
  }
  bool operator<(const Big& o) const {
    if (d.size() != o.d.size()) return d.size() < o.d.size();
    for (std::size_t i = d.size(); i-- > 0;) {
      if (d[i] != o.d[i]) return d[i] < o.d[i];
    }
    return false;
  }
  std::string str() const {
    std::string s = std::to_string(d.back());
    for (std::size_t i = d.size() - 1; i-- > 0;) {
      std::string part = std::to_string(d[i]);
      s += std::string(9 - part.size(), '0') + part;
    }
    return s;
  }
};

}  // namespace oracle
