#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "natline/quadrature.hpp"

using namespace natline;

TEST_CASE("single panel is exact for low-degree polynomials") {
  auto poly = [](double x) { return 3 * std::pow(x, 10) - x * x + 1.0; };
  auto r = quad::gauss_kronrod15(poly, -1.0, 2.0);
  const double exact = 3.0 / 11 * (std::pow(2.0, 11) + 1) - (8.0 + 1) / 3 + 3.0;
  CHECK(r.value == doctest::Approx(exact).epsilon(1e-14));
  CHECK(r.evaluations == 15);
}

TEST_CASE("adaptive integration of oscillatory and peaked integrands") {
  auto osc = [](double x) { return std::polar(1.0, -40.0 * x); };
  const auto r = quad::integrate(osc, 0.0, 3.0);
  const std::complex<double> exact = (std::polar(1.0, -120.0) - 1.0) / std::complex<double>(0, -40);
  CHECK(std::abs(r.value - exact) < 1e-12);

  auto peak = [](double x) { return 1e-3 / (x * x + 1e-6); };
  const auto p = quad::integrate(peak, -1.0, 1.0, {1e-14, 1e-12, 100000});
  CHECK(p.value == doctest::Approx(2.0 * std::atan(1e3)).epsilon(1e-11));
}

TEST_CASE("results do not depend on call history") {
  auto f = [](double x) { return std::exp(-x) * std::sin(25 * x); };
  std::vector<double> edges{0.0, 0.5, 1.0, 4.0};
  const auto a = quad::integrate(f, std::span<const double>(edges));
  const auto b = quad::integrate(f, std::span<const double>(edges));
  CHECK(a.value == b.value);
  CHECK(a.error == b.error);
}

TEST_CASE("non-convergence reports the achieved error") {
  auto nasty = [](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3)); };
  quad::Options opt;
  opt.rel_tol = 1e-15;
  opt.abs_tol = 0.0;
  opt.max_panels = 20;
  try {
    (void)quad::integrate(nasty, 0.0, 1.0, opt);
    FAIL("expected QuadratureFailure");
  } catch (const QuadratureFailure& e) {
    CHECK(e.achieved_error() > 0.0);
  }
}

TEST_CASE("uniform panel helper") {
  std::vector<double> edges{0.0};
  quad::append_uniform(edges, 0.0, 1.0, 0.3);
  CHECK(edges.size() == 5);
  CHECK(edges.back() == 1.0);
  CHECK(edges[1] == doctest::Approx(0.25));
}
