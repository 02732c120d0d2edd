#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "strichartz/bilinear.hpp"

using namespace strichartz;
using oracle::cplx;

namespace {

// support of f^ above rounding, as the list of frequencies
std::vector<double> support(const WaveFunction& f) {
  const auto F = forward_transform(f);
  double top = 0.0;
  for (std::size_t c = 0; c < F.size(); ++c) top = std::max(top, std::abs(F[c]));
  std::vector<double> out;
  for (std::size_t c = 0; c < F.size(); ++c) {
    if (std::abs(F[c]) > 1e-12 * top) out.push_back(F.xi(c));
  }
  return out;
}

WaveFunction modulate(const WaveFunction& f, double b) {
  cvec v(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) v[j] = std::polar(1.0, b * f.grid().x(j)) * f[j];
  return WaveFunction(f.grid(), v);
}

}  // namespace

TEST_CASE("band specs") {
  CHECK_THROWS_AS(BandSpec::high(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(BandSpec::low(0.0), DomainError);
  CHECK_THROWS_AS(BandSpec::annulus(3.0, 2.0), DomainError);
  const auto h = BandSpec::high(1.0, 16.0);
  CHECK(h.inner() == 16.0);
  CHECK(h.outer() == 32.0);
  CHECK(h.contains(-20.0));
  CHECK_FALSE(h.contains(10.0));
  CHECK(parse_band_profile("gaussian-bump") == BandProfile::gaussian_bump);
  CHECK(to_string(BandProfile::random) == "random");
  CHECK_THROWS_AS(parse_band_profile("square"), DomainError);
}

TEST_CASE("band-limited construction") {
  const auto g = UniformGrid::symmetric(1024, 50.0);
  const auto low = make_band_limited(g, BandSpec::low(1.0), BandProfile::flat);
  CHECK(l2_norm(low) == doctest::Approx(1.0).epsilon(1e-12));
  const auto F = forward_transform(low);
  std::vector<cplx> inside;
  for (std::size_t c = 0; c < F.size(); ++c) {
    if (std::abs(F.xi(c)) <= 1.0) inside.push_back(F[c]);
    else CHECK(std::abs(F[c]) <= 1e-12 * std::abs(F[g.size() / 2]));
  }
  for (const auto& v : inside) CHECK(std::abs(v - inside[0]) <= 1e-12 * std::abs(inside[0]));

  const auto high = make_band_limited(g, BandSpec::high(1.0, 16.0), BandProfile::flat);
  CHECK(l2_norm(high) == doctest::Approx(1.0).epsilon(1e-12));
  for (double xi : support(high)) CHECK((std::abs(xi) >= 16.0 && std::abs(xi) <= 32.0));

  const auto r1 = make_band_limited(g, BandSpec::high(1.0, 4.0), BandProfile::random, 99);
  const auto r2 = make_band_limited(g, BandSpec::high(1.0, 4.0), BandProfile::random, 99);
  const auto r3 = make_band_limited(g, BandSpec::high(1.0, 4.0), BandProfile::random, 100);
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(r1[j] == r2[j]);
  CHECK(oracle::rel_l2(r1, r3) > 1e-3);

  const auto bump = make_band_limited(g, BandSpec::annulus(2.0, 5.0), BandProfile::gaussian_bump);
  for (double xi : support(bump)) CHECK((std::abs(xi) >= 2.0 && std::abs(xi) <= 5.0));

  CHECK_THROWS_AS(make_band_limited(g, BandSpec::high(1.0, 64.0), BandProfile::flat), DomainError);
}

TEST_CASE("bilinear norm without separation") {
  const auto g = UniformGrid::standard();
  const auto f = WaveFunction::sample(g, [](double x) { return cplx(std::exp(-x * x)); });
  const double expect = std::pow(oracle::gaussian_l6_sixth(), 1.0 / 3.0);
  CHECK(bilinear_l3(f, f) == doctest::Approx(expect).epsilon(1e-4));
  CHECK(bilinear_l3(f, f) == doctest::Approx(0.8281).epsilon(1e-3));
  CHECK(bilinear_l3(f, WaveFunction::zeros(g)) == 0.0);
}

TEST_CASE("Hausdorff-Young density for flat bands against the closed form") {
  // dxi = 1/32 so that the band edges 1, 4, 8 are grid frequencies
  const auto g = UniformGrid::symmetric(4096, 32.0 * oracle::pi);
  const auto h1 = make_band_limited(g, BandSpec::low(1.0), BandProfile::flat);
  const auto h2 = make_band_limited(g, BandSpec::high(1.0, 4.0), BandProfile::flat);
  const auto hy = hausdorff_young_density(h1, h2);

  // continuum: |h^|^2 = 2 pi / |band| on each band, unit x-norm
  const double c1 = std::sqrt(2.0 * oracle::pi / 2.0);
  const double c2 = std::sqrt(2.0 * oracle::pi / 8.0);
  auto I = [](double a, double b) {
    // int_{-1}^{1} int_a^b (eta - xi)^{-1/2} deta dxi
    auto p = [](double v) { return std::pow(v, 1.5); };
    return (4.0 / 3.0) * (p(b + 1) - p(b - 1) - p(a + 1) + p(a - 1));
  };
  const double g32 = std::pow(c1 * c2, 1.5) * std::pow(2.0, -0.5) * 2.0 * I(4.0, 8.0);
  const double norm = std::pow(g32, 2.0 / 3.0);
  CHECK(hy.density_norm == doctest::Approx(norm).epsilon(2e-2));
  CHECK(hy.bound == doctest::Approx(std::pow(2.0 * oracle::pi, -4.0 / 3.0) * hy.density_norm).epsilon(1e-14));

  const auto swapped = hausdorff_young_density(h2, h1);
  CHECK(swapped.density_norm == doctest::Approx(hy.density_norm).epsilon(1e-12));
  CHECK_THROWS_AS(hausdorff_young_density(h1, h1), DomainError);
}

TEST_CASE("bilinear norm stays below the Hausdorff-Young bound") {
  const auto g = UniformGrid::symmetric(4096, 100.0);
  for (double N : {4.0, 8.0, 16.0}) {
    for (auto profile : {BandProfile::flat, BandProfile::random, BandProfile::gaussian_bump}) {
      const auto h1 = make_band_limited(g, BandSpec::low(1.0), profile, 5);
      const auto h2 = make_band_limited(g, BandSpec::high(1.0, N), profile, 6);
      const double v = bilinear_l3(h1, h2, bilinear_config(1.0 / N, 257));
      const double b = hausdorff_young_density(h1, h2).bound;
      CAPTURE(N);
      CHECK(v <= b + 1e-8);
      CHECK(bilinear_l3(h2, h1, bilinear_config(1.0 / N, 257)) == doctest::Approx(v).epsilon(1e-12));
    }
  }
}

TEST_CASE("Galilean invariance") {
  // dxi = 1/8: a modulation by e^{ix} shifts the spectrum by eight samples
  const auto g = UniformGrid::symmetric(1024, 8.0 * oracle::pi);
  const auto h1 = make_band_limited(g, BandSpec::low(1.0), BandProfile::random, 1);
  const auto h2 = make_band_limited(g, BandSpec::high(1.0, 4.0), BandProfile::random, 2);
  const auto cfg = bilinear_config(0.25, 257);
  const double v = bilinear_l3(h1, h2, cfg);
  const double w = bilinear_l3(modulate(h1, 1.0), modulate(h2, 1.0), cfg);
  CHECK(std::abs(w - v) <= 1e-6 * v);
}

TEST_CASE("separation sweep") {
  const auto r = separation_sweep(1.0, {1.0, 4.0, 8.0, 16.0, 32.0, 64.0}, BandProfile::flat, 1);
  REQUIRE(r.rows.size() == 6);
  CHECK_FALSE(r.rows[0].in_fit);
  CHECK(std::isnan(r.rows[0].bound));
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    CHECK(r.rows[i].in_fit);
    CHECK(r.rows[i].value <= r.rows[i].bound + 1e-8);
    CHECK(r.rows[i].grid_n >= 16);
  }
  CHECK(r.slope >= -0.30);
  CHECK(r.slope <= -1.0 / 6.0 + 0.05);

  // the control row does not move the fit
  const auto nc = separation_sweep(1.0, {4.0, 8.0, 16.0, 32.0, 64.0}, BandProfile::flat, 1);
  CHECK(nc.slope == doctest::Approx(r.slope).epsilon(1e-12));

  const auto wide = separation_sweep(1.0, {4.0, 8.0, 16.0, 32.0, 64.0}, BandProfile::flat, 1, {}, 2.0);
  CHECK(std::abs(wide.slope - nc.slope) <= 0.03);
}
