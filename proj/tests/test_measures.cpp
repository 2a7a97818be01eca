#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "weyl/measures.hpp"
#include "weyl/numeric.hpp"

using namespace weyl;

namespace {

// independent oracle: adaptive Simpson on [a,b], complex integrand
cplx simpson(const std::function<cplx(double)>& f, double a, double b, cplx fa, cplx fm,
             cplx fb, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  cplx flm = f(lm), frm = f(rm);
  cplx whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  cplx left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  cplx right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, m, fa, flm, fm, tol / 2, depth - 1) +
         simpson(f, m, b, fm, frm, fb, tol / 2, depth - 1);
}

cplx integrate(const std::function<cplx(double)>& f, double a, double b, double tol) {
  return simpson(f, a, b, f(a), f(0.5 * (a + b)), f(b), tol, 40);
}

FourierCoefficient coeff(const GraphSurface& s, std::vector<i64> xi) {
  i64 m = 0;
  for (i64 v : xi) m = std::max(m, std::abs(v));
  return surface_fourier_coefficient(s, xi, 2 * (1 + m));
}

}  // namespace

TEST_CASE("total masses") {
  // square graph: integral of sqrt(1+4x^2) = sqrt(5)/2 + asinh(2)/4
  double mass = std::sqrt(5.0) / 2 + std::log(2 + std::sqrt(5.0)) / 4;
  auto sq = coeff(GraphSurface::square(), {0, 0});
  CHECK(sq.value.real() == doctest::Approx(mass).epsilon(1e-12));
  CHECK(std::abs(sq.value.imag()) < 1e-15);
  CHECK(sq.error < 1e-8);

  auto circ = coeff(GraphSurface::circle(1.5), {0, 0});
  CHECK(circ.value.real() == doctest::Approx(3 * M_PI).epsilon(1e-12));

  // bilinear graph mass vs a dense midpoint rule
  auto bi = GraphSurface::bilinear_d3();
  i64 M = 1500;
  Kahan mid;
  for (i64 i = 0; i < M; ++i)
    for (i64 j = 0; j < M; ++j) {
      double x = (i + 0.5) / static_cast<double>(M);
      double y = (j + 0.5) / static_cast<double>(M);
      mid.add(std::sqrt(1 + x * x + y * y));
    }
  double oracle = mid.value() / static_cast<double>(M * M);
  auto got = coeff(bi, {0, 0, 0});
  CHECK(got.value.real() == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("circle coefficients match the Bessel form") {
  auto c1 = GraphSurface::circle(1.0);
  for (i64 k : {1, 5, 12, 25, 36, 50}) {
    auto got = coeff(c1, {k, 0});
    cplx ref = bessel_oracle(1.0, std::vector<i64>{k, 0});
    CHECK(std::abs(got.value - ref) < 1e-6);
    CHECK(std::abs(got.value.imag()) < 1e-9);
  }
  // off-axis frequency, |xi| = 5
  auto got = coeff(c1, {3, 4});
  CHECK(std::abs(got.value - bessel_oracle(1.0, std::vector<i64>{3, 4})) < 1e-6);
  // radius 2
  auto got2 = coeff(GraphSurface::circle(2.0), {7, 0});
  CHECK(std::abs(got2.value - bessel_oracle(2.0, std::vector<i64>{7, 0})) < 1e-6);
}

TEST_CASE("square family against an independent 1-d integrator") {
  auto sq = GraphSurface::square();
  auto got = coeff(sq, {0, 7});
  cplx ref = integrate(
      [](double x) {
        return eiphase(-7 * x * x) * std::sqrt(1 + 4 * x * x);
      },
      0.0, 1.0, 1e-12);
  CHECK(std::abs(got.value - ref) < 1e-8);
  CHECK(got.error < 1e-6);

  // mixed frequency too
  auto got2 = coeff(sq, {3, 7});
  cplx ref2 = integrate(
      [](double x) {
        return eiphase(-3 * x - 7 * x * x) * std::sqrt(1 + 4 * x * x);
      },
      0.0, 1.0, 1e-12);
  CHECK(std::abs(got2.value - ref2) < 1e-8);
}

TEST_CASE("Hermitian symmetry and mass domination") {
  struct Case {
    GraphSurface s;
    std::vector<i64> xi;
  };
  std::vector<Case> cases;
  cases.push_back({GraphSurface::square(), {3, 5}});
  cases.push_back({GraphSurface::bilinear_d3(), {2, -3, 4}});
  cases.push_back({GraphSurface::quad_d4(), {1, 2, -2, 3}});
  cases.push_back({GraphSurface::quad_d5(), {1, 0, -1, 1, 1}});
  cases.push_back({GraphSurface::circle(1.0), {3, -4}});
  for (auto& c : cases) {
    auto plus = coeff(c.s, c.xi);
    std::vector<i64> neg;
    for (i64 v : c.xi) neg.push_back(-v);
    auto minus = coeff(c.s, neg);
    CHECK(std::abs(minus.value - std::conj(plus.value)) < 1e-12);
    std::vector<i64> zero(c.xi.size(), 0);
    auto mass = coeff(c.s, zero);
    CHECK(std::abs(plus.value) <= mass.value.real() + 1e-12);
  }
}

TEST_CASE("shrinking box containment") {
  std::vector<GraphSurface> fams;
  fams.push_back(GraphSurface::square());
  fams.push_back(GraphSurface::bilinear_d3());
  fams.push_back(GraphSurface::quad_d4());
  fams.push_back(GraphSurface::quad_d5());
  for (int d = 2; d <= 8; ++d) fams.push_back(GraphSurface::general(d));
  for (auto& s : fams)
    for (i64 N : {2, 4, 8, 16}) {
      double sup = s.containment_sup(N);
      CHECK(sup > 0);
      CHECK(sup <= std::pow(static_cast<double>(N), -s.d) * (1 + 1e-12));
    }
  // equality for the even-d families
  CHECK(GraphSurface::square().containment_sup(4) == doctest::Approx(std::pow(4.0, -2)));
  CHECK(GraphSurface::general(6).containment_sup(2) == doctest::Approx(std::pow(2.0, -6)));
  CHECK_THROWS_AS(GraphSurface::circle(1.0).containment_sup(4), std::domain_error);

  // general(4) and the d4 family are the same polynomial
  auto a = coeff(GraphSurface::general(4), {1, 2, -2, 3});
  auto b = coeff(GraphSurface::quad_d4(), {1, 2, -2, 3});
  CHECK(std::abs(a.value - b.value) < 1e-15);
}

TEST_CASE("bessel oracle") {
  CHECK(bessel_oracle(1.0, std::vector<i64>{0, 0}).real() == doctest::Approx(two_pi));
  CHECK(bessel_oracle(2.5, std::vector<i64>{0, 0}).real() == doctest::Approx(5 * M_PI));
  CHECK_THROWS_AS(bessel_circle_magnitude(0.0, 3.0), std::domain_error);
  // asymptotic envelope: |sigma_hat| <= 3 |xi|^{-1/2} on [10, 200]
  for (double t = 10.0; t <= 200.0; t += 0.1)
    CHECK(std::abs(bessel_circle_magnitude(1.0, t)) <= 3.0 / std::sqrt(t));
}

TEST_CASE("herz residuals stay bounded") {
  CHECK(herz_residual(1.0, std::vector<i64>{50, 0}) <= 10.0);
  std::vector<double> rs;
  for (i64 t : {20, 40, 80, 160}) rs.push_back(herz_residual(1.0, std::vector<i64>{t, 0}));
  double lo = *std::min_element(rs.begin(), rs.end());
  double hi = *std::max_element(rs.begin(), rs.end());
  CHECK(lo > 0);
  CHECK(hi / lo <= 10.0);
  CHECK(herz_residual(2.0, std::vector<i64>{50, 0}) <= 10.0);
  CHECK_THROWS_AS(herz_residual(1.0, std::vector<i64>{3, 0}), std::domain_error);
  CHECK_NOTHROW(herz_residual(1.0, std::vector<i64>{3, 4}));
}

TEST_CASE("decay fits") {
  std::vector<std::vector<i64>> dirs{{1, 0}, {0, 1}, {1, 1}};
  auto fit = decay_fit(GraphSurface::circle(1.0), dirs, {8, 16, 32, 64});
  CHECK(fit.slope == doctest::Approx(-0.5).epsilon(0.2));
  CHECK(fit.sample_points.size() == 4);

  // bilinear d=3 with directions whose stationary point is interior
  std::vector<std::vector<i64>> d3{{-1, -1, 2}, {-1, -2, 3}, {-2, -1, 3}, {-1, -1, 3}};
  auto fit3 = decay_fit(GraphSurface::bilinear_d3(), d3, {8, 16, 32});
  CHECK(fit3.slope <= -0.9);

  // flat graph: no decay along the surface normal
  auto flat = GraphSurface::custom(
      2, [](std::span<const double>) { return 0.0; },
      [](std::span<const double>, std::span<double> g) { g[0] = 0.0; });
  auto fit0 = decay_fit(flat, {{0, 1}}, {8, 16, 32, 64});
  CHECK(std::abs(fit0.slope) < 1e-6);

  // tangential frequencies on the flat graph all integrate to zero
  CHECK_THROWS_AS(decay_fit(flat, {{1, 0}}, {8, 16, 32, 64}), std::domain_error);

  CHECK_THROWS_AS(decay_fit(GraphSurface::circle(1.0), dirs, {8, 16}), std::domain_error);
  CHECK_THROWS_AS(decay_fit(GraphSurface::circle(1.0), {}, {8, 16, 32}), std::domain_error);
  CHECK_THROWS_AS(decay_fit(GraphSurface::circle(1.0), {{0, 0}}, {8, 16, 32}), std::domain_error);
}

TEST_CASE("resolution rule refusals") {
  auto sq = GraphSurface::square();
  std::vector<i64> xi{0, 50};
  CHECK_THROWS_WITH_AS(surface_fourier_coefficient(sq, xi, 5),
                       "surface_fourier_coefficient: need at least 102 panels per axis, got 5",
                       std::domain_error);
  CHECK_NOTHROW(surface_fourier_coefficient(sq, xi, 102));
  std::vector<i64> bad{1, 2, 3};
  CHECK_THROWS_AS(surface_fourier_coefficient(sq, bad, 100), std::domain_error);
  // absurd resolution on a 4-parameter surface trips the work guard
  std::vector<i64> big{40, 40, 40, 40, 40};
  CHECK_THROWS_AS(surface_fourier_coefficient(GraphSurface::quad_d5(), big, 2000), ResourceLimit);
}
