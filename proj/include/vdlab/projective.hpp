#pragma once

// Projective-space geometry: homogeneous forms, metricized divisors, Weil functions, chordal
// distance and Fubini-Study pullback densities.

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vdlab/funcspace.hpp"
#include "vdlab/greenjensen.hpp"

namespace vdlab {

/// A point of P^n by homogeneous coordinates; not all zero.
class ProjPoint {
 public:
  ProjPoint() = default;
  explicit ProjPoint(std::vector<cplx> coords);

  const std::vector<cplx>& coords() const { return coords_; }
  std::size_t dim() const { return coords_.size() - 1; }
  double norm() const;
  /// Representative of Euclidean norm 1.
  ProjPoint normalized() const;

 private:
  std::vector<cplx> coords_;
};

struct Monomial {
  std::vector<int> exponents;
  cplx coeff;
  std::optional<GaussRational> exact;
};

/// Homogeneous polynomial Q in n+1 variables.
class HomogeneousForm {
 public:
  HomogeneousForm() = default;
  HomogeneousForm(std::size_t nvars, std::vector<Monomial> terms);

  std::size_t nvars() const { return nvars_; }
  int degree() const { return degree_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  bool has_exact() const;

  cplx operator()(const std::vector<cplx>& x) const;
  /// Partial derivatives dQ/dx_i.
  std::vector<cplx> gradient(const std::vector<cplx>& x) const;

 private:
  std::size_t nvars_ = 0;
  int degree_ = 0;
  std::vector<Monomial> terms_;
};

/// Effective divisor {Q = 0} with the metric ||1_D||(x) = |Q(x)| / ||x||^q.
struct MetricizedDivisor {
  HomogeneousForm form;
  std::string name;

  MetricizedDivisor() = default;
  MetricizedDivisor(HomogeneousForm q, std::string label);

  int degree() const { return form.degree(); }
  /// Hyperplane {x_i = 0} in P^n.
  static MetricizedDivisor coordinate_hyperplane(std::size_t n, std::size_t i);
};

/// -log ||1_D||(x) = -log|Q(x)| + q log||x||; +infinity on D.
double weil(const MetricizedDivisor& d, const ProjPoint& x);
double weil(const MetricizedDivisor& d, const std::vector<cplx>& x);

/// Density of f^* omega_FS w.r.t. Lebesgue area: ||F ^ F'||^2 / (pi ||F||^4).
double fs_pullback_density(const RationalMap& f, cplx z);

/// q * fs_pullback_density: curvature of the metric |Q| / ||x||^q.
double divisor_curvature_density(const MetricizedDivisor& d, const RationalMap& f, cplx z);

/// The pullback curvature density as a RadialDensity, scaled by `weight`.
RadialDensity fs_density(const RationalMap& f, double weight = 1.0);

/// ||x ^ y|| / (||x|| ||y||), in [0, 1].
double chordal_distance(const ProjPoint& x, const ProjPoint& y);

/// Fubini-Study mass of f^* omega_FS over the disc |z - center| < radius, by the Green identity
/// mass = (1/2pi) * contour integral of the normal derivative of log||F||.
double fs_mass_in_disc(const RationalMap& f, cplx center, double radius,
                       const QuadratureSpec& q = {});

/// Sup of |Q| over the unit sphere: quasi-random sampling plus projected-gradient polish.
double sphere_sup(const MetricizedDivisor& d);

/// Lower bound c_D = -log sup|Q| for weil(D, .) on all of P^n.
double weil_lower_bound(const MetricizedDivisor& d);

/// Q composed with the coordinates of f, a polynomial in z (exact when both inputs are).
Poly pullback_polynomial(const MetricizedDivisor& d, const RationalMap& f);

/// Divisor grammar: `q; (e0,e1,...)=coeff, ...`, e.g. `1; (0,1)=1` for x1 on P^1.
MetricizedDivisor parse_divisor(std::string_view text, std::string name = {});

}  // namespace vdlab
