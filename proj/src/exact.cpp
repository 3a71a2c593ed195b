#include "vdlab/exact.hpp"

#include <algorithm>

#include "vdlab/error.hpp"

namespace vdlab {

std::string GaussRational::to_string() const {
  if (sgn(im) == 0) return re.get_str();
  if (sgn(re) == 0) return im.get_str() + "*i";
  return re.get_str() + (sgn(im) > 0 ? "+" : "") + im.get_str() + "*i";
}

ExactPoly::ExactPoly(std::vector<GaussRational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

ExactPoly ExactPoly::monomial(int degree, GaussRational coeff) {
  std::vector<GaussRational> c(static_cast<std::size_t>(degree) + 1);
  c.back() = std::move(coeff);
  return ExactPoly(std::move(c));
}

void ExactPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

ExactPoly ExactPoly::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<GaussRational> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) {
    d[k - 1] = GaussRational(static_cast<long>(k)) * coeffs_[k];
  }
  return ExactPoly(std::move(d));
}

ExactPoly ExactPoly::monic() const {
  if (is_zero()) return {};
  const GaussRational lead = leading();
  std::vector<GaussRational> c(coeffs_.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = coeffs_[k] / lead;
  return ExactPoly(std::move(c));
}

int ExactPoly::valuation() const {
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (!coeffs_[k].is_zero()) return static_cast<int>(k);
  }
  return -1;
}

std::vector<std::complex<double>> ExactPoly::to_complex() const {
  std::vector<std::complex<double>> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) out.push_back(c.to_complex());
  return out;
}

ExactPoly operator+(const ExactPoly& a, const ExactPoly& b) {
  std::vector<GaussRational> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t k = 0; k < a.coeffs_.size(); ++k) c[k] = a.coeffs_[k];
  for (std::size_t k = 0; k < b.coeffs_.size(); ++k) c[k] = c[k] + b.coeffs_[k];
  return ExactPoly(std::move(c));
}

ExactPoly operator-(const ExactPoly& a, const ExactPoly& b) {
  std::vector<GaussRational> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t k = 0; k < a.coeffs_.size(); ++k) c[k] = a.coeffs_[k];
  for (std::size_t k = 0; k < b.coeffs_.size(); ++k) c[k] = c[k] - b.coeffs_[k];
  return ExactPoly(std::move(c));
}

ExactPoly operator*(const ExactPoly& a, const ExactPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<GaussRational> c(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      c[i + j] = c[i + j] + a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return ExactPoly(std::move(c));
}

ExactPoly operator*(const GaussRational& s, const ExactPoly& p) {
  std::vector<GaussRational> c(p.coeffs_.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = s * p.coeffs_[k];
  return ExactPoly(std::move(c));
}

std::pair<ExactPoly, ExactPoly> divmod(const ExactPoly& a, const ExactPoly& b) {
  if (b.is_zero()) throw Error(Errc::DegenerateInput, "polynomial division by zero");
  if (a.degree() < b.degree()) return {ExactPoly{}, a};
  std::vector<GaussRational> rem = a.coeffs();
  std::vector<GaussRational> quo(static_cast<std::size_t>(a.degree() - b.degree()) + 1);
  const GaussRational lead = b.leading();
  const int db = b.degree();
  for (int k = a.degree(); k >= db; --k) {
    const GaussRational t = rem[static_cast<std::size_t>(k)] / lead;
    if (t.is_zero()) continue;
    quo[static_cast<std::size_t>(k - db)] = t;
    for (int j = 0; j <= db; ++j) {
      auto& slot = rem[static_cast<std::size_t>(k - db + j)];
      slot = slot - t * b.coeffs()[static_cast<std::size_t>(j)];
    }
  }
  return {ExactPoly(std::move(quo)), ExactPoly(std::move(rem))};
}

ExactPoly gcd(const ExactPoly& a, const ExactPoly& b) {
  ExactPoly x = a;
  ExactPoly y = b;
  while (!y.is_zero()) {
    ExactPoly r = divmod(x, y).second;
    x = std::move(y);
    y = r.monic();
  }
  return x.monic();
}

std::vector<ExactPoly> squarefree_decomposition(const ExactPoly& p) {
  if (p.is_zero()) throw Error(Errc::DegenerateInput, "squarefree decomposition of zero");
  std::vector<ExactPoly> factors;
  const ExactPoly f = p.monic();
  if (f.degree() == 0) return factors;
  const ExactPoly df = f.derivative();
  ExactPoly a = gcd(f, df);
  ExactPoly b = divmod(f, a).first;
  ExactPoly c = divmod(df, a).first;
  ExactPoly d = c - b.derivative();
  while (b.degree() > 0) {
    ExactPoly g = gcd(b, d);
    factors.push_back(g);
    b = divmod(b, g).first;
    c = divmod(d, g).first;
    d = c - b.derivative();
  }
  return factors;
}

ExactPoly strip_common_factors(ExactPoly p, const ExactPoly& q) {
  if (p.is_zero() || q.is_zero()) return p;
  for (;;) {
    ExactPoly g = gcd(p, q);
    if (g.degree() <= 0) return p;
    p = divmod(p, g).first;
  }
}

}  // namespace vdlab
