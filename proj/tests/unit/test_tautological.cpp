#include <doctest.h>

#include <cmath>
#include <random>

#include "vdlab/error.hpp"
#include "vdlab/tautological.hpp"

using namespace vdlab;

namespace {

LogMetric d01inf() { return LogMetric(parse_boundary("0,1,inf")); }

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::InvalidArgument;
}

// Distinct roots by counting squarefree factors' degrees.
int distinct_roots(const ExactPoly& p) {
  int n = 0;
  for (const auto& f : squarefree_decomposition(p)) n += std::max(f.degree(), 0);
  return n;
}

}  // namespace

TEST_CASE("Riemann-Hurwitz on the worked maps") {
  auto z2 = rh_check(parse_map("1 | 0,0,1"));
  CHECK(z2.holds);
  CHECK(z2.details["ram"] == 2);
  auto cubic = rh_check(parse_map("1 | 0,-3,0,1"));
  CHECK(cubic.holds);
  CHECK(cubic.details["ram"] == 4);
  auto joukowski = rh_check(parse_map("0,2 | 1,0,1"));
  CHECK(joukowski.holds);
  CHECK(joukowski.details["ram"] == 2);
  // Ramification at +-1 only.
  for (const auto& a : joukowski.atoms) CHECK(std::abs(std::abs(a["z"][0].get<double>()) - 1.0) < 1e-12);
  CHECK(code_of([] { rh_check(parse_map("1 | 1")); }) == Errc::ConstantMap);
}

TEST_CASE("Riemann-Hurwitz on random exact maps") {
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> c(-5, 5);
  int done = 0;
  while (done < 10) {
    const int d = 2 + done % 4;
    std::string a, b;
    for (int k = 0; k <= d; ++k) {
      a += (k ? "," : "") + std::to_string(c(rng));
      b += (k ? "," : "") + std::to_string(k == d ? 1 + std::abs(c(rng)) : c(rng));
    }
    try {
      const RationalMap f = parse_map(a + " | " + b);
      const auto v = rh_check(f);
      CHECK(v.holds);
      CHECK(v.details["ram"] == 2 * f.degree() - 2);
      ++done;
    } catch (const Error& e) {
      REQUIRE(e.code() == Errc::NotCoprime);
    }
  }
}

TEST_CASE("log Riemann-Hurwitz worked examples") {
  const LogMetric d0inf(parse_boundary("0,inf"));
  CHECK(log_rh_check(parse_map("1 | 0,0,0,0,1"), d0inf).holds);
  auto z2 = log_rh_check(parse_map("1 | 0,0,1"), d01inf());
  CHECK(z2.holds);
  CHECK(z2.details["n_red"] == 4);
  CHECK(z2.details["ram_away"] == 0);
  auto shifted = log_rh_check(parse_map("1 | 0,-2,1"), d0inf);
  CHECK(shifted.holds);
  CHECK(shifted.details["n_red"] == 3);
  CHECK(shifted.details["ram_away"] == 1);
}

TEST_CASE("floating log Riemann-Hurwitz matches the exact path") {
  const LogMetric d = d01inf();
  const auto exact = log_rh_check(parse_map("1,0,1 | 0,-2,1"), d);
  const auto floating = log_rh_check(parse_map("1.0,0,1 | 0,-2.0,1"), d);
  CHECK(exact.holds);
  CHECK(floating.holds);
  CHECK(exact.details["n_red"] == floating.details["n_red"]);
}

TEST_CASE("Mason's theorem") {
  auto v = mason_check(parse_poly("0,0,1"), parse_poly("1,-2"));
  CHECK(v.residual == 0.0);
  CHECK(mason_check(parse_poly("0,1"), parse_poly("1")).residual == 0.0);
  // rad(z^6 (z^6 + 1)) = z (z^6 + 1) has degree 7.
  auto six = mason_check(parse_poly("0,0,0,0,0,0,1"), parse_poly("1"));
  CHECK(six.details["radical_degree"] == 7);
  CHECK(six.residual == 0.0);
  CHECK(code_of([] { mason_check(parse_poly("0,1"), parse_poly("0,0,1")); }) == Errc::NotCoprime);
  CHECK(code_of([] { mason_check(parse_poly("0,0.5"), parse_poly("1")); }) == Errc::ExactModeRequired);
}

TEST_CASE("Mason slack on generated coprime triples") {
  std::mt19937 rng(29);
  std::uniform_int_distribution<int> c(-3, 3);
  auto random_poly = [&](int deg) {
    std::string s;
    for (int k = 0; k <= deg; ++k) s += (k ? "," : "") + std::to_string(k == deg ? 1 : c(rng));
    return parse_poly(s);
  };
  int done = 0;
  while (done < 25) {
    const Poly p = random_poly(1 + done % 3);
    const Poly s = random_poly(1 + done % 2);
    const Poly a = p * s * s;
    const Poly b = random_poly(1 + done % 4);
    const Poly sum = a + b;
    if (sum.is_zero() || gcd(a.exact(), b.exact()).degree() > 0) continue;
    const auto v = mason_check(a, b);
    CHECK(v.holds);
    const int rad = distinct_roots((a * b * sum).exact());
    CHECK(v.details["radical_degree"] == rad);
    ++done;
  }
}

TEST_CASE("log metric") {
  const LogMetric d = d01inf();
  CHECK(std::isinf(d.log_weight({1.0, 1.0})));
  CHECK(std::isinf(d.log_weight({1.0, 0.0})));
  CHECK(std::isinf(d.log_weight({0.0, 1.0})));
  // Affine formula at x = 2 + i.
  const cplx x(2.0, 1.0);
  const double chord = std::abs(x - 1.0) / std::sqrt((1 + std::norm(x)) * 2.0);
  const double expected = -std::log1p(std::norm(x)) - std::log(std::abs(x) / std::sqrt(1 + std::norm(x))) -
                          std::log(chord) - std::log(1.0 / std::sqrt(1 + std::norm(x)));
  CHECK(d.log_weight({1.0, x}) == doctest::Approx(expected));
  CHECK_THROWS_AS(LogMetric(parse_boundary("0,1,0")), Error);
  CHECK_THROWS_AS(LogMetric({}), Error);
}

TEST_CASE("tautological identity on the worked configurations") {
  const LogMetric d = d01inf();
  auto simple = taut_identity_check(parse_map("1 | 2,1"), d, 0.5);
  CHECK(std::abs(simple.residual) <= 1e-5);
  CHECK(simple.atoms.empty());
  auto ram = taut_identity_check(parse_map("1 | 9/4,-1,1"), d, 0.8);
  CHECK(std::abs(ram.residual) <= 1e-5);
  REQUIRE(ram.atoms.size() == 1);
  CHECK(ram.atoms[0]["kind"] == "ramification");
  CHECK(ram.atoms[0]["z"][0].get<double>() == doctest::Approx(0.5));
  auto truncated = taut_identity_check(parse_map("1 | 1/4,-1,1"), d, 0.8);
  CHECK(std::abs(truncated.residual) <= 1e-5);
  // Double zero at 0.5 counts once; f = 1 at -0.5 and 1.5.
  CHECK(truncated.details["n_trunc"].get<double>() == doctest::Approx(2.0 * std::log(0.8 / 0.5)).epsilon(1e-12));
  CHECK(truncated.details["ram_sum"].get<double>() == 0.0);
  // Shared path with the truncated counting function.
  CHECK(truncated.details["n_trunc"].get<double>() == counting(parse_map("1 | 1/4,-1,1"), d.as_divisor(), 0.8, true));
}

TEST_CASE("tautological identity guards") {
  const LogMetric d = d01inf();
  CHECK(code_of([&] { taut_identity_check(parse_map("1 | 3,0,1"), d, 0.8); }) == Errc::RamifiedAtOrigin);
  CHECK(code_of([&] { taut_identity_check(parse_map("1 | 0,1"), d, 0.8); }) == Errc::OriginOnBoundaryDivisor);
  CHECK(code_of([&] { taut_identity_check(parse_map("1 | 3/2,1"), d, 0.5); }) == Errc::RootOnBoundary);
}

TEST_CASE("tautological residual shrinks under doubling") {
  const LogMetric d = d01inf();
  const RationalMap f = parse_map("1 | 2,1");
  const QuadratureSpec q = QuadratureSpec::fixed(16, 16);
  const double r1 = std::abs(taut_identity_check(f, d, 0.9, q).residual);
  const double r2 = std::abs(taut_identity_check(f, d, 0.9, q.doubled()).residual);
  CHECK(r2 <= r1 / 4.0);
}

TEST_CASE("log-metric characteristic is (|D| - 2) T_FS") {
  const RationalMap f = parse_map("1,1 | -1/3,0,1");
  const auto h = MetricizedDivisor::coordinate_hyperplane(1, 0);
  CHECK(taut_lhs(f, LogMetric(parse_boundary("0,inf")), 0.7) == 0.0);
  CHECK(taut_lhs(f, d01inf(), 0.7) == doctest::Approx(characteristic_geometric(f, h, 0.7)));
  CHECK(taut_lhs(f, LogMetric(parse_boundary("0,1,-1,inf")), 0.7) ==
        doctest::Approx(2.0 * characteristic_geometric(f, h, 0.7)));
}

TEST_CASE("tautological inequality experiment guards") {
  const LogMetric d(parse_boundary("0,inf"));
  const std::vector<RationalMap> flat(4, parse_map("1 | 1,2"));
  CHECK(code_of([&] { taut_inequality_experiment(flat, {1, 2, 3, 4}, d, {0.6}, 3); }) == Errc::NormalizerNotDiverging);
  std::vector<RationalMap> linear;
  for (int n : {1, 10, 100, 1000}) linear.push_back(parse_map("1 | 1," + std::to_string(n)));
  CHECK(code_of([&] { taut_inequality_experiment(linear, {1, 10, 100, 1000}, d, {0.6}, 3); }) == Errc::DegenerateInput);
}
