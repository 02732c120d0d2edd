#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "strichartz/extremizer.hpp"
#include "strichartz/functional_equation.hpp"
#include "strichartz/multilinear.hpp"

using namespace strichartz;
using oracle::cplx;

namespace {

const UniformGrid& grid() {
  static const auto g = UniformGrid::standard();
  return g;
}

WaveFunction unit_gauss() {
  const auto f = WaveFunction::sample(grid(), [](double x) { return cplx(std::exp(-x * x)); });
  return f.scaled(1.0 / l2_norm(f));
}

const double omega_gauss = oracle::kappa() / (2.0 * std::sqrt(3.0));

const PicardResult& perturbed_run() {
  static const PicardResult r = picard_iterate(
      WaveFunction::sample(grid(), [](double x) { return cplx(std::exp(-x * x) * (1.0 + 0.1 * x)); }));
  return r;
}

void check_trajectory(const PicardResult& r) {
  REQUIRE_FALSE(r.trajectory.empty());
  CHECK(std::isnan(r.trajectory.front().delta));
  for (const auto& s : r.trajectory) {
    CHECK(std::abs(l2_norm(s.f) - 1.0) <= 1e-10);
    CHECK(s.ratio <= 0.8130 + 2e-3);
  }
  if (r.converged) {
    const auto& fin = r.final_state();
    CHECK(std::abs(fin.omega_estimate / (oracle::kappa() * std::pow(fin.ratio, 6)) - 1.0) <= 1e-2);
  }
}

}  // namespace

TEST_CASE("adjoint identity against the space-time form") {
  std::mt19937_64 rng(12);
  const auto f = oracle::packet(grid(), rng);
  const auto L = lambda_apply(f);
  for (int k = 0; k < 5; ++k) {
    const auto g = oracle::packet(grid(), rng);
    const cplx lhs = inner_product(g, L);
    const cplx rhs = q_spacetime({g, f, f, f, f, f}).value;
    CHECK(std::abs(lhs - rhs) <= 1e-3 * std::abs(rhs));
  }
}

TEST_CASE("gaussian is an eigenfunction") {
  const auto g0 = unit_gauss();
  const auto st = euler_lagrange_step(g0);
  CHECK(std::abs(st.omega - omega_gauss) <= 0.5);
  CHECK(st.omega == doctest::Approx(449.9).epsilon(1e-3));
  CHECK(std::abs(omega_of(g0) - omega_gauss) <= 0.5);
  CHECK(l2_norm(st.lambda.scaled(1.0 / l2_norm(st.lambda)).plus(g0, -1.0)) <= 1e-3);
  const auto gf = gauge_fix(g0);
  const auto sf = euler_lagrange_step(gf);
  CHECK(l2_norm(sf.lambda.plus(gf, -sf.omega)) / sf.omega <= 1e-3);
  CHECK(std::abs(st.ratio - oracle::sharp_ratio()) <= 1e-3);
}

TEST_CASE("homogeneity and modulation invariance") {
  std::mt19937_64 rng(13);
  const auto f = oracle::packet(grid(), rng);
  const cplx c(1.3, -0.6);
  const double ac = std::abs(c);
  const auto L = lambda_apply(f);
  const auto Lc = lambda_apply(f.scaled(c));
  CHECK(oracle::rel_l2(Lc, L.scaled(std::pow(ac, 4) * c)) <= 1e-12);
  CHECK(omega_of(f.scaled(c)) == doctest::Approx(std::pow(ac, 4) * omega_of(f)).epsilon(1e-12));

  const auto m = WaveFunction::sample(grid(), [&](double x) { return std::polar(1.0, 0.9 * x); });
  cvec v(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) v[j] = m[j] * f[j];
  CHECK(std::abs(omega_of(WaveFunction(grid(), v)) / omega_of(f) - 1.0) <= 1e-6);
}

TEST_CASE("gauge fixing") {
  const auto g0 = unit_gauss();
  CHECK(l2_norm(gauge_fix(g0).plus(g0, -1.0)) <= 1e-8);

  const auto moved = WaveFunction::sample(grid(), [](double x) {
    return std::polar(1.0, 3.0 * x) * std::exp(-(x - 2.0) * (x - 2.0));
  });
  CHECK(l2_norm(gauge_fix(moved).plus(g0, -1.0)) <= 1e-8);

  std::mt19937_64 rng(14);
  for (int k = 0; k < 3; ++k) {
    const auto f = oracle::packet(grid(), rng);
    const auto once = gauge_fix(f);
    CHECK(std::abs(l2_norm(once) - 1.0) <= 1e-12);
    CHECK(l2_norm(gauge_fix(once).plus(once, -1.0)) <= 1e-10);
    CHECK(std::abs(strichartz_ratio(once) - strichartz_ratio(f)) <= 1e-6);
  }
}

TEST_CASE("Picard from the gaussian stops at once") {
  const auto r = picard_iterate(unit_gauss());
  CHECK(r.converged);
  CHECK(r.trajectory.size() <= 3);  // initial state plus at most two steps
  CHECK(std::abs(r.final_state().ratio - oracle::sharp_ratio()) <= 1e-4);
  check_trajectory(r);
}

TEST_CASE("Picard from a perturbed gaussian reaches a certified gaussian") {
  const auto& r = perturbed_run();
  CHECK(r.converged);
  CHECK(r.final_state().delta <= 1e-8);
  CHECK(r.trajectory.size() <= 201);
  CHECK(std::abs(r.final_state().ratio - oracle::sharp_ratio()) <= 1e-3);
  const auto fit = quadratic_log_fit(r.final_state().f);
  CHECK(fit.residual <= 1e-3);
  CHECK(fit.A.real() < 0.0);
  CHECK(fit.certified());
  check_trajectory(r);
}

TEST_CASE("Picard from the indicator is recorded either way") {
  PicardOptions o;
  o.max_steps = 60;
  const auto box = WaveFunction::sample(grid(), [](double x) { return cplx(std::abs(x) <= 1.0 ? 1.0 : 0.0); });
  const auto r = picard_iterate(box, o);
  CHECK((r.status() == "converged" || r.status() == "unconverged"));
  CHECK(r.converged == (r.final_state().delta <= o.tol));
  CHECK(r.trajectory.size() <= o.max_steps + 1);
  check_trajectory(r);
  if (r.converged) CHECK(quadratic_log_fit(r.final_state().f).certified());
}

TEST_CASE("Picard rejects bad options") {
  PicardOptions o;
  o.tol = 0.0;
  CHECK_THROWS_AS(picard_iterate(unit_gauss(), o), DomainError);
  CHECK_THROWS_AS(picard_iterate(WaveFunction::zeros(grid())), DomainError);
}
