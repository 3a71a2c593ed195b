#pragma once

// Complex and exact polynomial arithmetic, rational maps to P^n, and root localization.

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vdlab/exact.hpp"

namespace vdlab {

using cplx = std::complex<double>;

/// Polynomial in z with double-precision coefficients and an optional exact view over Q(i).
/// The exact view, when present, is authoritative and the floating view is derived from it.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<cplx> coeffs);
  explicit Poly(ExactPoly exact);

  static Poly constant(cplx c) { return Poly(std::vector<cplx>{c}); }

  const std::vector<cplx>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool has_exact() const { return exact_.has_value(); }
  /// Throws ExactModeRequired when only floating coefficients are present.
  const ExactPoly& exact() const;

  cplx operator()(cplx z) const;
  /// Value and first derivative by a single Horner pass.
  std::pair<cplx, cplx> eval_with_derivative(cplx z) const;
  Poly derivative() const;
  /// Sum of |c_k| r^k: an upper bound for |p| on the circle |z| = r.
  double modulus_bound(double r) const;

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);

  std::string to_string() const;

 private:
  std::vector<cplx> coeffs_;
  std::optional<ExactPoly> exact_;
};

struct Root {
  cplx location;
  int multiplicity = 1;
};

struct RootMultiset {
  std::vector<Root> entries;
  double radius = 0.0;

  int total() const;
};

/// Every root of p in C. Exact coefficients give exact multiplicities through a squarefree
/// decomposition; floating coefficients are clustered at 1e-7 * (1 + |root|).
RootMultiset find_roots(const Poly& p);

/// Roots with |z| < r, cross-checked against the argument-principle count on |z| = r.
RootMultiset roots_in_disc(const Poly& p, double r);

/// Winding number of p around 0 along |z| = r.
int argument_principle_count(const Poly& p, double r);

/// deg p / gcd(p, p'), in exact arithmetic.
int radical_degree(const Poly& p);

/// A map from the disc to P^n given by n+1 coprime polynomial coordinates.
class RationalMap {
 public:
  RationalMap() = default;
  explicit RationalMap(std::vector<Poly> components);

  const std::vector<Poly>& components() const { return components_; }
  std::size_t target_dim() const { return components_.size() - 1; }
  int degree() const { return degree_; }
  bool is_constant() const { return degree_ == 0; }
  bool has_exact() const;

  std::vector<cplx> eval(cplx z) const;
  /// Component values and derivatives at z.
  void eval_with_derivative(cplx z, std::vector<cplx>& value, std::vector<cplx>& deriv) const;

  std::string to_string() const;

 private:
  std::vector<Poly> components_;
  int degree_ = 0;
};

/// Polynomial coefficient grammar: comma-separated ascending coefficients, each `a`, `a+bi`,
/// or `p/q+r/s*i`. Integers and fractions are exact; decimals are floating.
Poly parse_poly(std::string_view text);

/// Map grammar: components separated by `|`, each a polynomial coefficient list.
RationalMap parse_map(std::string_view text);

/// One coefficient in the grammar above. Returns the floating value and, when the token is
/// exact, its Gaussian-rational value.
std::pair<cplx, std::optional<GaussRational>> parse_coefficient(std::string_view text);

}  // namespace vdlab
