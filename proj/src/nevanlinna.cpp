#include "vdlab/nevanlinna.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "vdlab/error.hpp"

namespace vdlab {

namespace {

Poly divisor_pullback(const RationalMap& f, const MetricizedDivisor& d) {
  Poly qf = pullback_polynomial(d, f);
  if (qf.is_zero()) throw Error(Errc::DegenerateInput, "the image of f lies inside D");
  return qf;
}

void require_origin_off_divisor(const RationalMap& f, const MetricizedDivisor& d, const Poly& qf) {
  // Exact pullbacks decide membership exactly; floating ones use |Q| < 1e-12 on the unit sphere.
  const bool on = qf.has_exact() ? qf.exact().valuation() > 0
                                 : weil(d, f.eval(0.0)) > -std::log(1e-12);
  if (on) throw Error(Errc::OriginOnDivisor, "f(0) lies on D");
}

RootMultiset divisor_zeros(const Poly& qf, double r, Errc boundary_code) {
  try {
    return roots_in_disc(qf, r);
  } catch (const Error& e) {
    if (e.code() == Errc::RootOnBoundary) throw Error(boundary_code, "f(|z| = r) meets D");
    throw;
  }
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double proximity(const RationalMap& f, const MetricizedDivisor& d, double r, const QuadratureSpec& q) {
  const Poly qf = divisor_pullback(f, d);
  divisor_zeros(qf, r, Errc::BoundaryHitsDivisor);
  return boundary_mean([&](cplx z) { return weil(d, f.eval(z)); }, r, q);
}

double counting_from_roots(const RootMultiset& zeros, double r, bool truncated) {
  double n = 0.0;
  for (const auto& e : zeros.entries) {
    const double m = std::abs(e.location);
    if (m == 0.0 || m >= r) continue;
    n += (truncated ? 1 : e.multiplicity) * std::log(r / m);
  }
  return n;
}

double counting(const RationalMap& f, const MetricizedDivisor& d, double r, bool truncated) {
  const Poly qf = divisor_pullback(f, d);
  require_origin_off_divisor(f, d, qf);
  return counting_from_roots(divisor_zeros(qf, r, Errc::RootOnBoundary), r, truncated);
}

double characteristic_geometric(const RationalMap& f, const MetricizedDivisor& d, double r,
                                const QuadratureSpec& q) {
  return nabla_integral(fs_density(f, d.degree()), r, q);
}

double origin_constant(const RationalMap& f, const MetricizedDivisor& d) {
  const Poly qf = divisor_pullback(f, d);
  require_origin_off_divisor(f, d, qf);
  return -weil(d, f.eval(0.0));
}

CharacteristicRow fmt_check(const RationalMap& f, const MetricizedDivisor& d, double r,
                            const QuadratureSpec& q) {
  const Poly qf = divisor_pullback(f, d);
  require_origin_off_divisor(f, d, qf);
  const RootMultiset zeros = divisor_zeros(qf, r, Errc::BoundaryHitsDivisor);

  CharacteristicRow row;
  row.r = r;
  row.m = boundary_mean([&](cplx z) { return weil(d, f.eval(z)); }, r, q);
  row.N = counting_from_roots(zeros, r, false);
  row.const_term = -weil(d, f.eval(0.0));
  row.T_arith = row.m + row.N + row.const_term;
  row.T_geom = characteristic_geometric(f, d, r, q);
  row.residual = row.T_geom - row.T_arith;
  return row;
}

CharacteristicReport fmt_report(const RationalMap& f, const MetricizedDivisor& d,
                                const std::vector<double>& radii, const QuadratureSpec& q) {
  CharacteristicReport report;
  report.f_label = f.to_string();
  report.D_label = d.name;
  for (double r : radii) report.rows.push_back(fmt_check(f, d, r, q));
  return report;
}

double positivity_margin(const RationalMap& f, const MetricizedDivisor& d, double r,
                         double weil_floor, const QuadratureSpec& q) {
  return characteristic_geometric(f, d, r, q) - origin_constant(f, d) - weil_floor;
}

double positivity_margin(const RationalMap& f, const MetricizedDivisor& d, double r,
                         const QuadratureSpec& q) {
  return positivity_margin(f, d, r, weil_lower_bound(d), q);
}

std::vector<AreaComparisonRow> area_comparison(const RationalMap& f, const MetricizedDivisor& d,
                                               const std::vector<double>& radii,
                                               const QuadratureSpec& q) {
  std::vector<AreaComparisonRow> rows;
  const double c = origin_constant(f, d);
  const RadialDensity u = fs_density(f, d.degree());
  for (double r : radii) {
    AreaComparisonRow row;
    row.r = r;
    row.area = area_integral(u, r, q);
    row.T_geom = nabla_integral(u, r, q);
    row.const_term = c;
    row.area_minus_const = row.area - c;
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> default_radius_grid() {
  std::vector<double> radii(16);
  const double ratio = std::pow(0.95 / 0.1, 1.0 / 15.0);
  for (std::size_t k = 0; k < radii.size(); ++k) radii[k] = 0.1 * std::pow(ratio, static_cast<double>(k));
  radii.back() = 0.95;
  return radii;
}

std::string CharacteristicReport::to_csv() const {
  std::ostringstream os;
  os << "r,T_geom,T_arith,m,N,const,residual\n";
  for (const auto& row : rows) {
    os << fmt17(row.r) << ',' << fmt17(row.T_geom) << ',' << fmt17(row.T_arith) << ','
       << fmt17(row.m) << ',' << fmt17(row.N) << ',' << fmt17(row.const_term) << ','
       << fmt17(row.residual) << '\n';
  }
  return os.str();
}

nlohmann::json CharacteristicReport::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& row : rows) {
    rows_json.push_back({{"r", row.r},
                         {"T_geom", row.T_geom},
                         {"T_arith", row.T_arith},
                         {"m", row.m},
                         {"N", row.N},
                         {"const", row.const_term},
                         {"residual", row.residual}});
  }
  return {{"f", f_label}, {"D", D_label}, {"convention", kDdcConvention}, {"rows", rows_json}};
}

}  // namespace vdlab
