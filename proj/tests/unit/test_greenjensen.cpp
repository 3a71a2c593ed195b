#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "vdlab/error.hpp"
#include "vdlab/greenjensen.hpp"

using namespace vdlab;

namespace {

constexpr double kPi = std::numbers::pi;

// Nested form int_0^r dt/t int_{|z|<t} u dA with independent midpoint and Simpson rules.
double nested_nabla(const RealFunction& u, double r) {
  auto disc_mass = [&](double t) {
    const int nr = 300, nt = 300;
    double acc = 0.0;
    for (int i = 0; i < nr; ++i) {
      const double rho = t * (i + 0.5) / nr;
      for (int j = 0; j < nt; ++j) acc += u(std::polar(rho, 2.0 * kPi * (j + 0.5) / nt)) * rho;
    }
    return acc * (t / nr) * (2.0 * kPi / nt);
  };
  const int n = 200;
  const double h = r / n;
  double acc = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double t = k * h;
    const double w = (k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    acc += w * disc_mass(t) / t;
  }
  return acc * h / 3.0;  // the t = 0 endpoint contributes 0
}

BivariatePoly random_poly(std::mt19937& rng, int degree) {
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  std::map<std::pair<int, int>, double> terms;
  for (int i = 0; i <= degree; ++i) {
    for (int j = 0; i + j <= degree; ++j) terms[{i, j}] = c(rng);
  }
  return BivariatePoly(std::move(terms));
}

}  // namespace

TEST_CASE("constant density has the closed-form nabla integral") {
  RadialDensity one{[](cplx) { return 1.0; }, {}};
  for (double r : {0.2, 0.5, 0.9}) {
    CHECK(nabla_integral(one, r) == doctest::Approx(kPi * r * r / 2.0).epsilon(1e-13));
    CHECK(area_integral(one, r) == doctest::Approx(kPi * r * r).epsilon(1e-13));
  }
}

TEST_CASE("nabla integral matches the nested Fubini form") {
  const RealFunction u = [](cplx z) { return std::exp(z.real()) * (2.0 + std::cos(3.0 * z.imag())); };
  for (double r : {0.4, 0.8}) {
    CHECK(nabla_integral({u, {}}, r) == doctest::Approx(nested_nabla(u, r)).epsilon(1e-5));
  }
  const RealFunction x2 = [](cplx z) { return 1.0 + z.real() * z.real(); };
  CHECK(nabla_integral({x2, {}}, 0.7) == doctest::Approx(kPi * 0.49 / 2.0 + kPi * std::pow(0.7, 4) / 16.0).epsilon(1e-12));
}

TEST_CASE("Jensen residual vanishes for random polynomials") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const BivariatePoly p = random_poly(rng, 1 + trial % 6);
    for (double r : {0.3, 0.9}) {
      const double mean = boundary_mean([&](cplx z) { return p(z); }, r);
      const double res = jensen_residual([&](cplx z) { return p(z); }, p.ddc(), r);
      CHECK(std::abs(res) <= 1e-8 * (1.0 + std::abs(mean)));
    }
  }
}

TEST_CASE("Laplacian by finite differences") {
  std::mt19937 rng(5);
  const BivariatePoly p = random_poly(rng, 5);
  const BivariatePoly lap = p.laplacian();
  const double h = 1e-3;
  for (cplx z : {cplx(0.1, 0.2), cplx(-0.5, 0.3), cplx(0.7, -0.6)}) {
    const double fd = (p(z + h) + p(z - h) + p(z + cplx(0, h)) + p(z - cplx(0, h)) - 4.0 * p(z)) / (h * h);
    CHECK(lap(z) == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("atoms contribute log(r/|a|)") {
  RadialDensity d{{}, {{cplx(0.3, 0.1), 2.0}, {cplx(0.0, 0.95), 1.0}}};
  CHECK(nabla_integral(d, 0.9) == doctest::Approx(2.0 * std::log(0.9 / std::abs(cplx(0.3, 0.1)))));
  CHECK(area_integral(d, 0.9) == doctest::Approx(2.0));
  try {
    nabla_integral(RadialDensity{{}, {{cplx(0.5, 0.0), 1.0}}}, 0.5);
    FAIL("expected AtomOnBoundary");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::AtomOnBoundary);
  }
}

TEST_CASE("log|z - a| reproduces its atom") {
  const cplx a(0.2, -0.35);
  const RealFunction phi = [a](cplx z) { return std::log(std::abs(z - a)); };
  const double r = 0.6;
  CHECK(boundary_mean(phi, r) - phi(0.0) == doctest::Approx(std::log(r / std::abs(a))).epsilon(1e-10));
  CHECK(std::abs(jensen_residual(phi, {{}, {{a, 1.0}}}, r)) < 1e-10);
}

TEST_CASE("fixed-resolution error shrinks under doubling") {
  const RealFunction u = [](cplx z) { return 1.0 / (1.2 - z.real()); };
  const double exact = nabla_integral({u, {}}, 0.9);
  const QuadratureSpec coarse = QuadratureSpec::fixed(16, 16);
  const double e1 = std::abs(nabla_integral({u, {}}, 0.9, coarse) - exact);
  const double e2 = std::abs(nabla_integral({u, {}}, 0.9, coarse.doubled()) - exact);
  CHECK(e1 > 0.0);
  CHECK(e2 <= e1 / 4.0);
}

TEST_CASE("quadrature spec validation") {
  QuadratureSpec q;
  CHECK_NOTHROW(q.validate());
  q.n_theta = 100;
  CHECK_THROWS_AS(q.validate(), Error);
  q = QuadratureSpec{};
  q.tol = 1e-13;
  CHECK_THROWS_AS(q.validate(), Error);
  CHECK_THROWS_AS(boundary_mean([](cplx) { return 0.0; }, -1.0), Error);
}
