#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "strichartz/multilinear.hpp"

using namespace strichartz;
using oracle::cplx;

namespace {

const UniformGrid& grid() {
  static const auto g = UniformGrid::standard();
  return g;
}

WaveFunction gauss() {
  return WaveFunction::sample(grid(), [](double x) { return cplx(std::exp(-x * x)); });
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

QuadratureOptions refined() {
  QuadratureOptions o;
  o.rel_tol = 1e-3;
  return o;
}

}  // namespace

TEST_CASE("weight function") {
  CHECK(weight(3.0, WeightParams(0.2, 0.0)) == doctest::Approx(1.8));
  CHECK(weight(1e8, WeightParams(1.0, 1.0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(weight(2.0, WeightParams(0.5, 0.25)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(WeightParams(-1.0, 0.0), DomainError);
  CHECK_THROWS_AS(WeightParams(1.0, -0.5), DomainError);
  for (double xi : {0.5, 2.0, 7.0}) {
    CHECK(weight(xi, WeightParams(0.3, 0.1)) >= weight(xi, WeightParams(0.3, 0.2)));
  }
}

TEST_CASE("space-time Q on gaussians and trivial inputs") {
  const auto f = gauss();
  const auto q = q_spacetime({f, f, f, f, f, f});
  CHECK(q.kappa == doctest::Approx(oracle::kappa()));
  CHECK(rel(q.value, oracle::kappa() * oracle::gaussian_l6_sixth()) <= 1e-6);
  CHECK(std::abs(q.value.imag()) <= 1e-12 * q.value.real());
  CHECK(q.value.real() > 0.0);

  const auto z = WaveFunction::zeros(grid());
  CHECK(std::abs(q_spacetime({f, f, z, f, f, f}).value) == 0.0);
  CHECK(std::abs(q_spacetime({f, f, f, f, f, z}).value) == 0.0);
}

TEST_CASE("Q is real and nonnegative on the diagonal") {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 3; ++k) {
    const auto f = oracle::packet(grid(), rng);
    const auto q = q_spacetime({f, f, f, f, f, f}).value;
    CHECK(q.real() > 0.0);
    CHECK(std::abs(q.imag()) <= 1e-12 * q.real());
  }
}

TEST_CASE("multilinearity and permutation symmetry") {
  std::mt19937_64 rng(8);
  std::vector<WaveFunction> f;
  for (int k = 0; k < 7; ++k) f.push_back(oracle::packet(grid(), rng));
  const cplx a(0.7, -1.1);
  const cplx b(-0.4, 0.9);

  const auto Q = [](const WaveFunction& f1, const WaveFunction& f2, const WaveFunction& f3,
                    const WaveFunction& f4, const WaveFunction& f5, const WaveFunction& f6) {
    return q_spacetime({f1, f2, f3, f4, f5, f6}).value;
  };
  const auto mix = f[0].scaled(a).plus(f[6], b);

  // conjugate-linear in slot 1
  const cplx l1 = Q(mix, f[1], f[2], f[3], f[4], f[5]);
  const cplx r1 = std::conj(a) * Q(f[0], f[1], f[2], f[3], f[4], f[5]) +
                  std::conj(b) * Q(f[6], f[1], f[2], f[3], f[4], f[5]);
  CHECK(rel(l1, r1) <= 1e-10);

  // linear in slot 5
  const cplx l5 = Q(f[1], f[2], f[3], f[4], mix, f[5]);
  const cplx r5 = a * Q(f[1], f[2], f[3], f[4], f[0], f[5]) + b * Q(f[1], f[2], f[3], f[4], f[6], f[5]);
  CHECK(rel(l5, r5) <= 1e-10);

  const cplx base = Q(f[0], f[1], f[2], f[3], f[4], f[5]);
  CHECK(rel(Q(f[2], f[0], f[1], f[3], f[4], f[5]), base) <= 1e-10);
  CHECK(rel(Q(f[1], f[0], f[2], f[3], f[4], f[5]), base) <= 1e-10);
  CHECK(rel(Q(f[0], f[1], f[2], f[5], f[3], f[4]), base) <= 1e-10);
  CHECK(rel(Q(f[0], f[1], f[2], f[4], f[3], f[5]), base) <= 1e-10);
}

TEST_CASE("constraint-set quadrature on gaussians") {
  const auto f = gauss();
  const WaveSextuple s{f, f, f, f, f, f};
  const cplx exact = oracle::kappa() * oracle::gaussian_l6_sixth();
  const auto circle = q_quadrature(s);
  CHECK(rel(circle.value, exact) <= 1e-6);
  CHECK(rel(circle.value, q_spacetime(s).value) <= 1e-2);

  QuadratureOptions rp;
  rp.route = InnerRoute::root_pair;
  CHECK(rel(q_quadrature(s, rp).value, exact) <= 1e-6);

  const auto z = WaveFunction::zeros(grid());
  CHECK(std::abs(q_quadrature({f, f, f, z, f, f}).value) == 0.0);
}

TEST_CASE("quadrature agrees with space-time on random band-limited sextuples") {
  int cases = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::mt19937_64 rng(seed * 1000 + 7);
    std::vector<WaveFunction> f;
    for (int k = 0; k < 6; ++k) f.push_back(oracle::packet(grid(), rng));
    const WaveSextuple s{f[0], f[1], f[2], f[3], f[4], f[5]};
    for (const auto& w : f) REQUIRE(band_limit_warning(w, 6.0).empty());
    const auto st = q_spacetime(s);
    const auto qq = q_quadrature(s, refined());
    CAPTURE(seed);
    CHECK(rel(qq.value, st.value) <= 2e-2);
    ++cases;
  }
  CHECK(cases >= 10);
}

TEST_CASE("kappa is the same for three unrelated inputs") {
  std::vector<std::vector<WaveFunction>> inputs;
  const auto g = gauss();
  inputs.push_back({g, g, g, g, g, g});
  const auto m = WaveFunction::sample(grid(), [](double x) {
    return std::polar(1.0, 0.8 * x) * std::exp(-(x + 0.5) * (x + 0.5) / 1.5);
  });
  inputs.push_back({m, g, m, g, g, m});
  std::mt19937_64 rng(31);
  std::vector<WaveFunction> r;
  for (int k = 0; k < 6; ++k) r.push_back(oracle::packet(grid(), rng));
  inputs.push_back(r);

  std::vector<double> kap;
  for (const auto& in : inputs) {
    const WaveSextuple s{in[0], in[1], in[2], in[3], in[4], in[5]};
    const cplx raw = q_spacetime(s).value / oracle::kappa();
    kap.push_back(std::abs(q_quadrature(s, refined()).value / raw));
  }
  for (double k : kap) {
    CHECK(std::abs(k / kap[0] - 1.0) <= 1e-3);
    CHECK(std::abs(k / oracle::kappa() - 1.0) <= 1e-3);
  }
}

TEST_CASE("constraint points and the support inequality") {
  const auto pts = sample_constraint_points(2000, 42, 5.0);
  REQUIRE(pts.size() == 2000);
  const WeightParams w(0.2, 0.05);
  for (const auto& e : pts) {
    double scale = 0.0;
    for (double v : e) scale = std::max(scale, v * v);
    CHECK(std::abs(constraint_a(e)) <= 1e-12 * std::max(1.0, std::sqrt(scale)));
    CHECK(std::abs(constraint_b(e)) <= 1e-12 * std::max(1.0, scale));
    double rest = 0.0;
    double frest = 0.0;
    for (int k = 1; k < 6; ++k) {
      rest += e[k] * e[k];
      frest += weight(e[k], w);
    }
    CHECK(e[0] * e[0] <= rest + 1e-12 * scale);
    CHECK(weight(e[0], w) - frest <= 1e-12);
  }
  const auto again = sample_constraint_points(2000, 42, 5.0);
  CHECK(again == pts);
}

TEST_CASE("root pairs") {
  const auto r = root_pair(1.0, 2.5);
  REQUIRE(r.real);
  CHECK(r.first + r.second == doctest::Approx(1.0));
  CHECK(r.first * r.first + r.second * r.second == doctest::Approx(2.5));
  CHECK(r.density == doctest::Approx(1.0 / (2.0 * std::abs(r.first - r.second))));
  CHECK_FALSE(root_pair(4.0, 1.0).real);
  const auto p = constraint_point(0.3, -1.2, 2.0, 1.1);
  CHECK(std::abs(constraint_a(p)) <= 1e-14);
  CHECK(std::abs(constraint_b(p)) <= 1e-13);
}

TEST_CASE("weighted absolute form") {
  const auto G = forward_transform(gauss());
  const std::array<Spectrum, 6> h{G, G, G, G, G, G};
  // f^ >= 0, so M_0 is Q itself
  const double m0 = m_weighted(h, WeightParams{});
  CHECK(m0 == doctest::Approx(oracle::kappa() * oracle::gaussian_l6_sixth()).epsilon(1e-4));
  CHECK(m_weighted(h, WeightParams(0.0, 2.0)) == doctest::Approx(m0).epsilon(1e-14));

  // the weight exponent is <= 0 on the support, and F -> 0 as eps grows
  for (double eps : {0.0, 0.1, 1.0, 10.0}) {
    const double v = m_weighted(h, WeightParams(0.01, eps));
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
    CHECK(v <= m0 * (1.0 + 1e-12));
  }
  CHECK(m_weighted(h, WeightParams(0.01, 1e8)) == doctest::Approx(m0).epsilon(1e-6));

  std::mt19937_64 rng(77);
  std::array<Spectrum, 6> rs{G, G, G, G, G, G};
  for (auto& s : rs) s = forward_transform(oracle::packet(grid(), rng));
  const double r0 = m_weighted(rs, WeightParams{});
  CHECK(m_weighted(rs, WeightParams(0.05, 0.0)) <= r0 * (1.0 + 1e-12));
}
