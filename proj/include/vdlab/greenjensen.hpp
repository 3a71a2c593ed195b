#pragma once

// Disc integrals: boundary means, the log-weighted ("nabla") integral, and the Jensen residual.
//
// Convention: dd^c phi is the measure with density Laplacian(phi) / (2 pi) with respect to
// Lebesgue area, plus point masses. Under it dd^c log|z - a| is the unit mass at a, and
//
//   int_{|z|<r} log(r/|z|) dd^c phi = mean_{|z|=r} phi - phi(0)
//
// holds exactly.

#include <complex>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "vdlab/funcspace.hpp"

namespace vdlab {

inline constexpr const char* kDdcConvention = "ddc=laplacian/2pi";

struct QuadratureSpec {
  int n_theta = 256;   // initial angular samples, power of two, >= 16
  int n_radial = 64;   // initial radial Gauss nodes
  double tol = 1e-9;   // target relative tolerance
  int max_refine = 6;  // angular doublings allowed; 0 means a single fixed-resolution pass

  void validate() const;
  /// Same tolerance with n_theta and n_radial doubled.
  QuadratureSpec doubled() const;
  /// Fixed-resolution spec (no refinement) at the given sizes.
  static QuadratureSpec fixed(int n_theta, int n_radial);
};

struct Atom {
  cplx location;
  double mass = 1.0;
};

/// Area density plus point masses on the unit disc.
struct RadialDensity {
  std::function<double(cplx)> eval;  // empty means no smooth part
  std::vector<Atom> atoms;
};

using RealFunction = std::function<double(cplx)>;

/// (1/2pi) * integral over theta of phi(r e^{i theta}), periodic trapezoid with doubling.
double boundary_mean(const RealFunction& phi, double r, const QuadratureSpec& q = {});

/// integral_{|z|<r} log(r/|z|) u dA plus sum of mass * log(r/|a|) over atoms with |a| < r.
double nabla_integral(const RadialDensity& u, double r, const QuadratureSpec& q = {});

/// Plain area integral of the smooth part plus the atom masses inside |z| < r.
double area_integral(const RadialDensity& u, double r, const QuadratureSpec& q = {});

/// nabla_integral(ddc_phi, r) - boundary_mean(phi, r) + phi(0).
double jensen_residual(const RealFunction& phi, const RadialDensity& ddc_phi, double r,
                       const QuadratureSpec& q = {});

/// Real polynomial in (x, y) = (Re z, Im z); used by the calibration suite.
class BivariatePoly {
 public:
  BivariatePoly() = default;
  /// Coefficient of x^i y^j keyed by (i, j).
  explicit BivariatePoly(std::map<std::pair<int, int>, double> terms);

  double operator()(cplx z) const;
  BivariatePoly laplacian() const;
  int degree() const;
  const std::map<std::pair<int, int>, double>& terms() const { return terms_; }

  /// dd^c of this polynomial: Laplacian / (2 pi), no atoms.
  RadialDensity ddc() const;

 private:
  std::map<std::pair<int, int>, double> terms_;
};

}  // namespace vdlab
