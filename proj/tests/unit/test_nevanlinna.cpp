#include <doctest.h>

#include <cmath>

#include "vdlab/error.hpp"
#include "vdlab/nevanlinna.hpp"

using namespace vdlab;

TEST_CASE("closed-form characteristic of [1 : z^d]") {
  const auto h = MetricizedDivisor::coordinate_hyperplane(1, 0);
  for (int d = 1; d <= 4; ++d) {
    std::vector<cplx> c(static_cast<std::size_t>(d) + 1);
    c.back() = 1.0;
    const RationalMap f({Poly::constant(1.0), Poly(c)});
    for (double r : {0.3, 0.7, 0.95}) {
      const double closed = 0.5 * std::log1p(std::pow(r, 2 * d));
      const CharacteristicRow row = fmt_check(f, h, r);
      CHECK(row.T_geom == doctest::Approx(closed).epsilon(1e-9));
      CHECK(row.m == doctest::Approx(closed).epsilon(1e-12));
      CHECK(row.N == 0.0);
      CHECK(row.const_term == doctest::Approx(0.0));
      CHECK(std::abs(row.residual) < 1e-9);
    }
  }
}

TEST_CASE("First Main Theorem with zeros inside the disc") {
  const RationalMap f = parse_map("1,1/3 | -1/4,0,1 | 0,1/2,0,1");
  const auto d = parse_divisor("2; (1,1,0)=1, (0,2,0)=-2, (2,0,0)=1/5, (0,0,2)=1");
  for (double r : {0.35, 0.6, 0.9}) {
    const CharacteristicRow row = fmt_check(f, d, r);
    CHECK(std::abs(row.residual) <= 1e-6 * (1.0 + std::abs(row.T_geom)));
  }
}

TEST_CASE("counting functions, full and truncated") {
  const RationalMap f = parse_map("1 | 9/100,-3/5,1");  // (z - 0.3)^2
  const auto x1 = MetricizedDivisor::coordinate_hyperplane(1, 1);
  const double r = 0.8;
  CHECK(counting(f, x1, r, false) == doctest::Approx(2.0 * std::log(r / 0.3)));
  CHECK(counting(f, x1, r, true) == doctest::Approx(std::log(r / 0.3)));
  CHECK(counting(f, x1, 0.2, false) == 0.0);
}

TEST_CASE("guards") {
  const auto x1 = MetricizedDivisor::coordinate_hyperplane(1, 1);
  try {
    origin_constant(parse_map("1 | 0,1"), x1);
    FAIL("expected OriginOnDivisor");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::OriginOnDivisor);
  }
  try {
    proximity(parse_map("1 | -1/2,1"), x1, 0.5);
    FAIL("expected BoundaryHitsDivisor");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::BoundaryHitsDivisor);
  }
}

TEST_CASE("positivity margin is nonnegative") {
  const RationalMap f = parse_map("1,2 | 1/3,0,1,1");
  const auto d = parse_divisor("1; (1,0)=1, (0,1)=-1");
  for (double r : {0.2, 0.5, 0.9}) CHECK(positivity_margin(f, d, r) >= -1e-9);
}

TEST_CASE("report serialization") {
  const auto h = MetricizedDivisor::coordinate_hyperplane(1, 0);
  const CharacteristicReport rep = fmt_report(parse_map("1 | 0,1"), h, {0.5, 0.9});
  const std::string csv = rep.to_csv();
  CHECK(csv.rfind("r,T_geom,T_arith,m,N,const,residual\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(rep.to_json()["convention"] == kDdcConvention);
  CHECK(default_radius_grid().size() == 16);
  const auto area = area_comparison(parse_map("1 | 0,1"), h, {0.5});
  CHECK(area.front().area == doctest::Approx(0.25 / 1.25).epsilon(1e-10));
}
