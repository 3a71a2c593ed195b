#include <doctest.h>

#include <cmath>

#include "vdlab/currents.hpp"
#include "vdlab/error.hpp"

using namespace vdlab;

namespace {

RationalMap power_map(int n, double shift) {
  std::vector<cplx> c(static_cast<std::size_t>(n) + 1);
  c[0] = shift;
  c.back() = std::pow(2.0, n);
  return RationalMap({Poly::constant(1.0), Poly(std::move(c))});
}

TestFormBasis basis() {
  TestFormBasis b;
  b.curvature_forms = {MetricizedDivisor::coordinate_hyperplane(1, 0), MetricizedDivisor::coordinate_hyperplane(1, 1),
                       parse_divisor("2; (2,0)=1, (0,2)=1")};
  b.exact_forms = {chordal_square_form({1.0, 0.0}, "chordal^2 to [1:0]")};
  return b;
}

}  // namespace

TEST_CASE("normalizer of [1 : (2z)^n] has a closed form") {
  for (int n : {1, 5, 20}) {
    const CurrentSample s = normalized_pairings(power_map(n, 0.0), n, 0.75, basis());
    CHECK(s.normalizer == doctest::Approx(0.5 * std::log1p(std::pow(1.5, 2 * n))).epsilon(1e-9));
    CHECK(s.pairings[0] == 1.0);
    CHECK(s.pairings[1] == 1.0);
    CHECK(s.pairings[2] == 2.0);
    CHECK(std::abs(s.pairings[3]) <= 2.0 / s.normalizer + 1e-12);
  }
}

TEST_CASE("exact-form pairing equals its Jensen evaluation") {
  // chordal^2 to [1:0] at [1:w] is |w|^2/(1+|w|^2); for [1:(2z)^n] it is constant on circles.
  const int n = 4;
  const double r = 0.6;
  const CurrentSample s = normalized_pairings(power_map(n, 0.0), n, r, basis());
  const double rho = std::pow(2.0 * r, 2 * n);
  CHECK(s.pairings[3] * s.normalizer == doctest::Approx(rho / (1.0 + rho)).epsilon(1e-10));
}

TEST_CASE("degenerate normalizer") {
  try {
    normalized_pairings(parse_map("1 | 0,1"), 1, 1e-5, basis());
    FAIL("expected DegenerateNormalizer");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DegenerateNormalizer);
  }
  TestFormBasis empty;
  CHECK_THROWS_AS(normalized_pairings(parse_map("1 | 0,1"), 1, 0.5, empty), Error);
}

TEST_CASE("limit points of a constant tail") {
  std::vector<CurrentSample> samples;
  for (int n = 1; n <= 10; ++n) samples.push_back({n, 0.5, 3.0, {1.0, 0.25}});
  const auto rep = limit_points(samples);
  REQUIRE(rep.size() == 1);
  CHECK(rep[0].per_element[0].size() == 1);
  CHECK(rep[0].per_element[0][0].diameter == 0.0);
  CHECK(rep[0].per_element[1][0].center == 0.25);
  CHECK(rep[0].certified[1]);
  samples.resize(7);
  try {
    limit_points(samples);
    FAIL("expected InsufficientSamples");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InsufficientSamples);
  }
}

TEST_CASE("limit points split a two-valued tail") {
  std::vector<CurrentSample> samples;
  for (int n = 1; n <= 12; ++n) samples.push_back({n, 0.5, 1.0, {n % 2 ? 0.0 : 1.0}});
  const auto rep = limit_points(samples);
  CHECK(rep[0].per_element[0].size() == 2);
  CHECK_FALSE(rep[0].certified[0]);
}

TEST_CASE("positivity against effective divisors") {
  const auto h = MetricizedDivisor::coordinate_hyperplane(1, 0);
  const auto x1 = MetricizedDivisor::coordinate_hyperplane(1, 1);
  std::vector<RationalMap> seq;
  std::vector<int> idx;
  for (int n : {2, 6, 10}) {
    seq.push_back(power_map(n, 0.0));
    idx.push_back(n);
  }
  try {
    positivity_check(seq, idx, {0.6}, h, {x1});
    FAIL("expected BasePointOnDivisor");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::BasePointOnDivisor);
  }
  seq.clear();
  for (int n : idx) seq.push_back(power_map(n, 1.0));
  const auto rows = positivity_check(seq, idx, {0.6, 0.75}, h, {x1, h});
  CHECK(rows.size() == 12);
  for (const auto& row : rows) {
    CHECK(row.margin >= -1e-9);
    // FMT: the arithmetic pairing with a hyperplane equals the normalized characteristic.
    CHECK(row.pairing == doctest::Approx(1.0).epsilon(1e-6));
  }
  CHECK(margins_to_csv(rows).rfind("n,r,divisor,pairing,bound,margin\n", 0) == 0);
}

TEST_CASE("exactness decay") {
  const auto h = MetricizedDivisor::coordinate_hyperplane(1, 0);
  const ExactForm phi = chordal_square_form({1.0, 0.0}, "phi");
  std::vector<RationalMap> seq;
  std::vector<int> idx;
  for (int n = 1; n <= 20; n += 3) {
    seq.push_back(power_map(n, 1.0));
    idx.push_back(n);
  }
  const auto rows = exactness_decay(seq, idx, phi, h, {0.6, 0.75});
  for (const auto& row : rows) CHECK(row.margin >= -1e-9);
  CHECK(decay_to_csv(rows).rfind("n,r,pairing,bound,margin\n", 0) == 0);

  const std::vector<RationalMap> flat(5, power_map(3, 1.0));
  try {
    exactness_decay(flat, {1, 2, 3, 4, 5}, phi, h, {0.75});
    FAIL("expected NormalizerNotDiverging");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NormalizerNotDiverging);
  }
}
