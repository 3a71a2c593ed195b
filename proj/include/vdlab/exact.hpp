#pragma once

// Exact arithmetic over the Gaussian rationals Q(i), backed by GMP.

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace vdlab {

struct GaussRational {
  mpq_class re{0};
  mpq_class im{0};

  GaussRational() = default;
  GaussRational(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {
    re.canonicalize();
    im.canonicalize();
  }
  GaussRational(long r) : re(r), im(0) {}  // NOLINT: implicit integer lift is intended

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  GaussRational conj() const { return {re, -im}; }
  mpq_class norm() const { return re * re + im * im; }
  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }
  std::string to_string() const;

  friend GaussRational operator+(const GaussRational& a, const GaussRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussRational operator-(const GaussRational& a, const GaussRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussRational operator-(const GaussRational& a) { return {-a.re, -a.im}; }
  friend GaussRational operator*(const GaussRational& a, const GaussRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  // Caller guarantees b != 0.
  friend GaussRational operator/(const GaussRational& a, const GaussRational& b) {
    const mpq_class n = b.norm();
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussRational& a, const GaussRational& b) { return !(a == b); }
};

/// Univariate polynomial over Q(i); ascending coefficients, trailing zeros trimmed.
/// The empty coefficient list is the zero polynomial (degree -1).
class ExactPoly {
 public:
  ExactPoly() = default;
  explicit ExactPoly(std::vector<GaussRational> coeffs);

  static ExactPoly monomial(int degree, GaussRational coeff = GaussRational(1));

  const std::vector<GaussRational>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const GaussRational& leading() const { return coeffs_.back(); }

  ExactPoly derivative() const;
  ExactPoly monic() const;
  /// Lowest power of z with a nonzero coefficient (order of vanishing at 0).
  int valuation() const;
  std::vector<std::complex<double>> to_complex() const;

  friend ExactPoly operator+(const ExactPoly& a, const ExactPoly& b);
  friend ExactPoly operator-(const ExactPoly& a, const ExactPoly& b);
  friend ExactPoly operator*(const ExactPoly& a, const ExactPoly& b);
  friend ExactPoly operator*(const GaussRational& s, const ExactPoly& p);
  friend bool operator==(const ExactPoly& a, const ExactPoly& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void trim();
  std::vector<GaussRational> coeffs_;
};

/// Euclidean division a = q*b + r with deg r < deg b. Throws DegenerateInput if b == 0.
std::pair<ExactPoly, ExactPoly> divmod(const ExactPoly& a, const ExactPoly& b);

/// Monic greatest common divisor; gcd(0, 0) == 0.
ExactPoly gcd(const ExactPoly& a, const ExactPoly& b);

/// Yun's squarefree decomposition: p = c * prod_k factors[k-1]^k, each factor monic and
/// squarefree, pairwise coprime. Entry k-1 may be the constant 1.
std::vector<ExactPoly> squarefree_decomposition(const ExactPoly& p);

/// Remove from p every irreducible factor it shares with q.
ExactPoly strip_common_factors(ExactPoly p, const ExactPoly& q);

}  // namespace vdlab
