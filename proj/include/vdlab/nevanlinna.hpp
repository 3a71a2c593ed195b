#pragma once

// Characteristic, proximity and counting functions, and the First Main Theorem residual
//
//   T_geom(r) = int_{|z|<r} log(r/|z|) f^* c_1(D)
//   T_arith(r) = m(r) + N(r) + log||f^* 1_D||(0)

#include <string>
#include <vector>

#include <json.hpp>

#include "vdlab/greenjensen.hpp"
#include "vdlab/projective.hpp"

namespace vdlab {

/// Boundary mean of weil(D, f) on |z| = r. Throws BoundaryHitsDivisor.
double proximity(const RationalMap& f, const MetricizedDivisor& d, double r,
                 const QuadratureSpec& q = {});

/// sum over zeros z0 of Q(f) with 0 < |z0| < r of ord (or min(1, ord)) * log(r/|z0|).
double counting(const RationalMap& f, const MetricizedDivisor& d, double r, bool truncated);

/// Same sum from a precomputed zero set.
double counting_from_roots(const RootMultiset& zeros, double r, bool truncated);

/// nabla integral of the pullback curvature q * f^* omega_FS.
double characteristic_geometric(const RationalMap& f, const MetricizedDivisor& d, double r,
                                const QuadratureSpec& q = {});

/// log||f^* 1_D||(0) = -weil(D, f(0)). Throws OriginOnDivisor.
double origin_constant(const RationalMap& f, const MetricizedDivisor& d);

struct CharacteristicRow {
  double r = 0.0;
  double T_geom = 0.0;
  double T_arith = 0.0;
  double m = 0.0;
  double N = 0.0;
  double const_term = 0.0;
  double residual = 0.0;
};

struct CharacteristicReport {
  std::vector<CharacteristicRow> rows;
  std::string f_label;
  std::string D_label;

  /// Columns r,T_geom,T_arith,m,N,const,residual.
  std::string to_csv() const;
  nlohmann::json to_json() const;
};

/// Both sides of the First Main Theorem at one radius.
CharacteristicRow fmt_check(const RationalMap& f, const MetricizedDivisor& d, double r,
                            const QuadratureSpec& q = {});

CharacteristicReport fmt_report(const RationalMap& f, const MetricizedDivisor& d,
                                const std::vector<double>& radii, const QuadratureSpec& q = {});

/// T_geom(r) - log||f^* 1_D||(0) - c_D with c_D = weil_lower_bound(D); nonnegative up to
/// quadrature error.
double positivity_margin(const RationalMap& f, const MetricizedDivisor& d, double r,
                         const QuadratureSpec& q = {});

/// Same, with a precomputed c_D.
double positivity_margin(const RationalMap& f, const MetricizedDivisor& d, double r,
                         double weil_floor, const QuadratureSpec& q = {});

/// Area-function comparison row: plain area of f^* c_1(D) in |z| < r next to T and the
/// origin constant. Informational; carries no sign guarantee.
struct AreaComparisonRow {
  double r = 0.0;
  double area = 0.0;
  double T_geom = 0.0;
  double const_term = 0.0;
  double area_minus_const = 0.0;
};

std::vector<AreaComparisonRow> area_comparison(const RationalMap& f, const MetricizedDivisor& d,
                                               const std::vector<double>& radii,
                                               const QuadratureSpec& q = {});

/// 16 geometrically spaced radii in [0.1, 0.95].
std::vector<double> default_radius_grid();

}  // namespace vdlab
