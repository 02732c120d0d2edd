#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "strichartz/functional_equation.hpp"

using namespace strichartz;
using oracle::cplx;
using oracle::Big;

namespace {

Big parse(const std::string& s) {
  Big b;
  for (char ch : s) b = b.times(10) + Big::of(static_cast<unsigned long long>(ch - '0'));
  return b;
}

bool same(const Big& a, const Big& b) { return a.str() == b.str(); }

double sech(double x) { return 1.0 / std::cosh(x); }

}  // namespace

TEST_CASE("constraint circle") {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const double psi = (1.0 - std::sqrt(5.0)) / 2.0;
  // (phi, psi, 0) and (1, -1, 1) share sum 1 and square sum 3
  const ConstraintSextuple golden{{phi, psi, 0.0}, {1.0, -1.0, 1.0}};
  CHECK(std::abs(golden.sum_defect()) <= 1e-15);
  CHECK(std::abs(golden.square_defect()) <= 1e-14);

  // every point of the circle of the golden triple has the same invariants
  bool hit = false;
  for (int k = 0; k < 3600; ++k) {
    const auto cs = constraint_circle(phi, psi, 0.0, 2.0 * oracle::pi * k / 3600.0);
    CHECK(std::abs(cs.sum_defect()) <= 1e-12);
    CHECK(std::abs(cs.square_defect()) <= 1e-12);
    auto r = cs.right;
    std::sort(r.begin(), r.end());
    if (std::abs(r[0] + 1.0) < 2e-3 && std::abs(r[1] - 1.0) < 2e-3 && std::abs(r[2] - 1.0) < 2e-3) hit = true;
  }
  CHECK(hit);

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> box(-3.0, 3.0);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * oracle::pi);
  double worst = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const auto cs = constraint_circle(box(rng), box(rng), box(rng), ang(rng));
    worst = std::max({worst, std::abs(cs.sum_defect()), std::abs(cs.square_defect())});
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("product residuals") {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const double psi = (1.0 - std::sqrt(5.0)) / 2.0;
  const ConstraintSextuple golden{{phi, psi, 0.0}, {1.0, -1.0, 1.0}};
  const PointFunction g = [](double x) { return cplx(std::exp(-x * x + 2.0 * x + 1.0)); };
  const PointFunction s = [](double x) { return cplx(sech(x)); };
  const PointFunction one = [](double) { return cplx(1.0); };
  CHECK(product_residual(g, golden) <= 1e-12);
  CHECK(product_residual(one, golden) == 0.0);
  // direct evaluation of the sech products
  const double lhs = sech(phi) * sech(psi) * sech(0.0);
  const double rhs = sech(1.0) * sech(-1.0) * sech(1.0);
  CHECK(product_residual(s, golden) == doctest::Approx(std::abs(lhs - rhs) / (lhs + rhs)).epsilon(1e-12));
  CHECK(product_residual(s, golden) >= 0.05);

  const PointFunction cg = [](double x) {
    return std::exp(cplx(-0.6, 0.4) * x * x + cplx(0.3, -1.0) * x + cplx(0.2, 0.5));
  };
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> box(-2.0, 2.0);
  for (int k = 0; k < 1000; ++k) {
    const auto cs = constraint_circle(box(rng), box(rng), box(rng), 4.0 * box(rng));
    CHECK(product_residual(cg, cs) <= 1e-12);
  }
}

TEST_CASE("golden power sums against an independent Lucas recurrence") {
  const auto t = golden_power_sums(200);
  REQUIRE(t.rows.size() == 198);
  CHECK(t.rows[0].k == 3);
  CHECK(t.rows[0].p == "-3");
  CHECK(t.rows[1].p == "-4");
  CHECK(t.rows[2].p == "-10");
  CHECK(t.all_nonzero);
  CHECK(t.all_bounds);

  Big prev = Big::of(2);  // L_0
  Big cur = Big::of(1);   // L_1
  Big three_k = Big::of(3);
  for (int k = 2; k <= 200; ++k) {
    const Big next = prev + cur;
    prev = cur;
    cur = next;
    three_k = three_k.times(3);
    if (k < 3) continue;
    const auto& row = t.rows[k - 3];
    CAPTURE(k);
    CHECK(row.k == k);
    CHECK(row.lucas == cur.str());
    // -p_k = L_k - 3 (k even), L_k - 1 (k odd)
    REQUIRE(row.p.size() > 1);
    CHECK(row.p[0] == '-');
    const Big minus_p = parse(row.p.substr(1));
    CHECK(same(minus_p + Big::of(k % 2 == 0 ? 3 : 1), cur));
    CHECK(row.nonzero);
    // bound in integers: 2^k L_k >= 3^k (even), 2^k (L_k + 1) >= 3^k (odd)
    Big acc = k % 2 == 0 ? cur : cur + Big::of(1);
    for (int i = 0; i < k; ++i) acc = acc.times(2);
    CHECK_FALSE(acc < three_k);
    CHECK(row.bound_holds);
  }
}

TEST_CASE("quadratic log fit") {
  const auto g = UniformGrid::standard();
  const auto ga = WaveFunction::sample(g, [](double x) { return cplx(std::exp(-x * x)); });
  const auto fa = quadratic_log_fit(ga);
  CHECK(fa.residual <= 1e-10);
  CHECK(std::abs(fa.A - cplx(-1.0)) <= 1e-10);
  CHECK(std::abs(fa.B) <= 1e-10);
  CHECK(std::abs(fa.C) <= 1e-10);
  CHECK(fa.certified());
  CHECK_FALSE(fa.phase_flagged);

  const cplx A(-0.7, 0.3), B(0.2, 0.5), C(0.1, 0.2);
  const auto cm = WaveFunction::sample(g, [&](double x) { return std::exp(A * x * x + B * x + C); });
  const auto fc = quadratic_log_fit(cm);
  CHECK(std::abs(fc.A - A) <= 1e-8);
  CHECK(std::abs(fc.B - B) <= 1e-8);
  CHECK(std::abs(fc.C - C) <= 1e-8);
  CHECK(fc.certified());

  // translation: log f(x - a) has B' = B - 2 A a
  const double a = 1.5;
  const auto sh = WaveFunction::sample(g, [&](double x) { return std::exp(A * (x - a) * (x - a) + B * (x - a) + C); });
  const auto fs = quadratic_log_fit(sh);
  CHECK(std::abs(fs.A - A) <= 1e-8);
  CHECK(std::abs(fs.B - (B - 2.0 * A * a)) <= 1e-8);

  const auto se = WaveFunction::sample(g, [](double x) { return cplx(sech(x)); });
  const auto fsech = quadratic_log_fit(se);
  CHECK(fsech.residual > 1e-3);
  CHECK_FALSE(fsech.certified());

  CHECK_THROWS_AS(quadratic_log_fit(WaveFunction::zeros(g)), DomainError);
  CHECK_THROWS_AS(quadratic_log_fit(ga, 0.0), DomainError);
}

TEST_CASE("local interpolant") {
  const auto g = UniformGrid::standard();
  const auto ga = WaveFunction::sample(g, [](double x) { return cplx(std::exp(-x * x)); });
  const LocalInterpolant li(ga);
  CHECK(li.order() == 6);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> box(-5.0, 5.0);
  double err = 0.0;
  for (int k = 0; k < 500; ++k) {
    const double x = box(rng);
    err = std::max(err, std::abs(li(x) - std::exp(-x * x)));
  }
  CHECK(err <= 1e-7);
  for (std::size_t j = 100; j < 110; ++j) CHECK(std::abs(li(g.x(j)) - ga[j]) <= 1e-15);
  CHECK(li(50.0) == cplx{});
}

TEST_CASE("residual statistic") {
  const PointFunction gg = [](double x) { return cplx(std::exp(-x * x)); };
  const PointFunction s = [](double x) { return cplx(sech(x)); };
  const auto a = residual_statistic(gg, 2000, 7, 3.0);
  const auto b = residual_statistic(gg, 2000, 7, 3.0);
  CHECK(a.sup == b.sup);
  CHECK(a.rms == b.rms);
  CHECK(a.samples == 2000);
  CHECK(a.sup <= 1e-10);
  const auto r = residual_statistic(s, 2000, 7, 3.0);
  CHECK(r.sup >= 0.05);
  CHECK(r.rms <= r.sup);
  CHECK(residual_statistic(s, 2000, 8, 3.0).sup != r.sup);
}
