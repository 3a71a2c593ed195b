#include "vdlab/funcspace.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "vdlab/error.hpp"

namespace vdlab {

namespace {

constexpr double kClusterTol = 1e-7;
constexpr double kBoundaryBand = 1e-9;

void trim_zeros(std::vector<cplx>& c) {
  while (!c.empty() && c.back() == cplx(0.0, 0.0)) c.pop_back();
}

cplx horner(const std::vector<cplx>& c, cplx z) {
  cplx acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::vector<cplx> derivative_coeffs(const std::vector<cplx>& c, int order) {
  std::vector<cplx> d = c;
  for (int o = 0; o < order && !d.empty(); ++o) {
    std::vector<cplx> next(d.size() > 1 ? d.size() - 1 : 0);
    for (std::size_t k = 1; k < d.size(); ++k) next[k - 1] = static_cast<double>(k) * d[k];
    d = std::move(next);
  }
  return d;
}

// Newton steps on p, accepted only while |p| decreases.
cplx newton_polish(const std::vector<cplx>& p, const std::vector<cplx>& dp, cplx z) {
  double val = std::abs(horner(p, z));
  for (int it = 0; it < 20 && val > 0.0; ++it) {
    const cplx d = horner(dp, z);
    if (std::abs(d) == 0.0) break;
    const cplx candidate = z - horner(p, z) / d;
    const double cval = std::abs(horner(p, candidate));
    if (!(cval < val)) break;
    z = candidate;
    val = cval;
  }
  return z;
}

// Eigenvalues of the companion matrix of a polynomial with nonzero constant term.
std::vector<cplx> companion_roots(const std::vector<cplx>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  if (n <= 0) return {};
  if (n == 1) return {-c[0] / c[1]};
  // Rescale z = s w so that the constant and leading coefficients have equal modulus.
  const double s = std::pow(std::abs(c.front()) / std::abs(c.back()), 1.0 / n);
  std::vector<cplx> scaled(c.size());
  double power = 1.0;
  for (std::size_t k = 0; k < c.size(); ++k, power *= s) scaled[k] = c[k] * power;
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -scaled[static_cast<std::size_t>(i)] / scaled.back();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::NoConvergence, "companion eigenvalue solver failed");
  }
  std::vector<cplx> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  for (auto& z : roots) z *= s;
  const auto dc = derivative_coeffs(c, 1);
  for (auto& z : roots) z = newton_polish(c, dc, z);
  return roots;
}

// Single-linkage clustering; each cluster center refined as a simple root of p^(m-1).
std::vector<Root> cluster_roots(const std::vector<cplx>& roots, const std::vector<cplx>& p) {
  const std::size_t n = roots.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double scale = 1.0 + std::max(std::abs(roots[i]), std::abs(roots[j]));
      if (std::abs(roots[i] - roots[j]) < kClusterTol * scale) parent[find(i)] = find(j);
    }
  }
  std::vector<Root> out;
  std::vector<std::size_t> slot(n, n);
  std::vector<cplx> sums;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (slot[r] == n) {
      slot[r] = out.size();
      out.push_back({0.0, 0});
      sums.push_back(0.0);
    }
    sums[slot[r]] += roots[i];
    out[slot[r]].multiplicity += 1;
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    const int m = out[k].multiplicity;
    cplx center = sums[k] / static_cast<double>(m);
    if (m > 1) {
      const auto dm = derivative_coeffs(p, m - 1);
      center = newton_polish(dm, derivative_coeffs(dm, 1), center);
    }
    out[k].location = center;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------- Poly

Poly::Poly(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) { trim_zeros(coeffs_); }

Poly::Poly(ExactPoly exact) : coeffs_(exact.to_complex()), exact_(std::move(exact)) {}

const ExactPoly& Poly::exact() const {
  if (!exact_) throw Error(Errc::ExactModeRequired, "polynomial has floating coefficients only");
  return *exact_;
}

cplx Poly::operator()(cplx z) const { return horner(coeffs_, z); }

std::pair<cplx, cplx> Poly::eval_with_derivative(cplx z) const {
  cplx p = 0.0;
  cplx dp = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    dp = dp * z + p;
    p = p * z + *it;
  }
  return {p, dp};
}

Poly Poly::derivative() const {
  if (exact_) return Poly(exact_->derivative());
  return Poly(derivative_coeffs(coeffs_, 1));
}

double Poly::modulus_bound(double r) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * r + std::abs(*it);
  return acc;
}

Poly operator+(const Poly& a, const Poly& b) {
  if (a.exact_ && b.exact_) return Poly(*a.exact_ + *b.exact_);
  std::vector<cplx> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t k = 0; k < a.coeffs_.size(); ++k) c[k] += a.coeffs_[k];
  for (std::size_t k = 0; k < b.coeffs_.size(); ++k) c[k] += b.coeffs_[k];
  return Poly(std::move(c));
}

Poly operator-(const Poly& a, const Poly& b) {
  if (a.exact_ && b.exact_) return Poly(*a.exact_ - *b.exact_);
  std::vector<cplx> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t k = 0; k < a.coeffs_.size(); ++k) c[k] += a.coeffs_[k];
  for (std::size_t k = 0; k < b.coeffs_.size(); ++k) c[k] -= b.coeffs_[k];
  return Poly(std::move(c));
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.exact_ && b.exact_) return Poly(*a.exact_ * *b.exact_);
  if (a.is_zero() || b.is_zero()) return Poly{};
  std::vector<cplx> c(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return Poly(std::move(c));
}

std::string Poly::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (k) os << ",";
    if (exact_) {
      os << (k < exact_->coeffs().size() ? exact_->coeffs()[k].to_string() : "0");
      continue;
    }
    const cplx c = coeffs_[k];
    os << c.real();
    if (c.imag() != 0.0) os << (c.imag() > 0 ? "+" : "") << c.imag() << "i";
  }
  return os.str();
}

// ---------------------------------------------------------------------------- roots

int RootMultiset::total() const {
  int t = 0;
  for (const auto& e : entries) t += e.multiplicity;
  return t;
}

RootMultiset find_roots(const Poly& p) {
  if (p.is_zero()) throw Error(Errc::DegenerateInput, "roots of the zero polynomial");
  RootMultiset out;
  out.radius = std::numeric_limits<double>::infinity();
  if (p.degree() == 0) return out;

  if (p.has_exact()) {
    const ExactPoly& e = p.exact();
    const int v = e.valuation();
    if (v > 0) out.entries.push_back({0.0, v});
    std::vector<GaussRational> shifted(e.coeffs().begin() + v, e.coeffs().end());
    const auto factors = squarefree_decomposition(ExactPoly(std::move(shifted)));
    for (std::size_t k = 0; k < factors.size(); ++k) {
      if (factors[k].degree() <= 0) continue;
      for (const cplx z : companion_roots(factors[k].to_complex())) {
        out.entries.push_back({z, static_cast<int>(k) + 1});
      }
    }
    return out;
  }

  const auto& c = p.coeffs();
  std::size_t v = 0;
  while (c[v] == cplx(0.0, 0.0)) ++v;
  if (v > 0) out.entries.push_back({0.0, static_cast<int>(v)});
  const std::vector<cplx> rest(c.begin() + static_cast<std::ptrdiff_t>(v), c.end());
  for (const auto& r : cluster_roots(companion_roots(rest), rest)) out.entries.push_back(r);
  return out;
}

int argument_principle_count(const Poly& p, double r) {
  if (p.is_zero()) throw Error(Errc::DegenerateInput, "winding number of the zero polynomial");
  std::size_t n = std::max<std::size_t>(256, 16 * static_cast<std::size_t>(std::max(p.degree(), 1)));
  constexpr std::size_t kMaxSamples = std::size_t{1} << 22;
  for (; n <= kMaxSamples; n *= 2) {
    double total = 0.0;
    bool resolved = true;
    cplx prev = p(r);
    for (std::size_t k = 1; k <= n; ++k) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      const cplx cur = p(std::polar(r, theta));
      const double step = std::arg(cur / prev);
      if (std::abs(step) > std::numbers::pi / 3.0) {
        resolved = false;
        break;
      }
      total += step;
      prev = cur;
    }
    if (resolved) return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
  }
  throw Error(Errc::NoConvergence, "argument principle sampling did not resolve the winding");
}

RootMultiset roots_in_disc(const Poly& p, double r) {
  if (p.is_zero()) throw Error(Errc::DegenerateInput, "roots of the zero polynomial");
  if (!(r > 0.0)) throw Error(Errc::InvalidArgument, "disc radius must be positive");
  const RootMultiset all = find_roots(p);
  RootMultiset out;
  out.radius = r;
  for (const auto& e : all.entries) {
    const double m = std::abs(e.location);
    if (std::abs(m - r) < kBoundaryBand) {
      throw Error(Errc::RootOnBoundary, "root within 1e-9 of |z| = r");
    }
    if (m < r) out.entries.push_back(e);
  }
  if (p.degree() > 0) {
    const double scale = p.modulus_bound(r);
    const std::size_t n = std::max<std::size_t>(512, 8 * static_cast<std::size_t>(p.degree()));
    for (std::size_t k = 0; k < n; ++k) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      if (std::abs(p(std::polar(r, theta))) < kBoundaryBand * scale) {
        throw Error(Errc::RootOnBoundary, "polynomial nearly vanishes on |z| = r");
      }
    }
  }
  const int winding = argument_principle_count(p, r);
  if (winding != out.total()) {
    throw Error(Errc::NoConvergence, "root multiplicities disagree with the argument principle");
  }
  return out;
}

int radical_degree(const Poly& p) {
  if (p.is_zero()) throw Error(Errc::DegenerateInput, "radical of the zero polynomial");
  const ExactPoly& e = p.exact();
  return e.degree() - gcd(e, e.derivative()).degree();
}

// ---------------------------------------------------------------------------- RationalMap

RationalMap::RationalMap(std::vector<Poly> components) : components_(std::move(components)) {
  if (components_.size() < 2) {
    throw Error(Errc::InvalidArgument, "a map to P^n needs at least two components");
  }
  const bool all_zero = std::all_of(components_.begin(), components_.end(),
                                    [](const Poly& p) { return p.is_zero(); });
  if (all_zero) throw Error(Errc::DegenerateInput, "all map components vanish identically");
  degree_ = 0;
  for (const auto& c : components_) degree_ = std::max(degree_, c.degree());

  if (has_exact()) {
    ExactPoly g;
    for (const auto& c : components_) g = gcd(g, c.exact());
    if (g.degree() > 0) throw Error(Errc::NotCoprime, "map components share a polynomial factor");
    return;
  }
  // Floating mode: a common root within 1e-9 counts as a shared factor.
  const Poly* pivot = nullptr;
  for (const auto& c : components_) {
    if (c.is_zero()) continue;
    if (!pivot || c.degree() < pivot->degree()) pivot = &c;
  }
  if (pivot->degree() == 0) return;
  std::vector<RootMultiset> roots;
  for (const auto& c : components_) {
    if (&c != pivot && !c.is_zero()) roots.push_back(find_roots(c));
  }
  for (const auto& z : find_roots(*pivot).entries) {
    bool shared = true;
    for (const auto& rs : roots) {
      const bool hit = std::any_of(rs.entries.begin(), rs.entries.end(), [&](const Root& w) {
        return std::abs(w.location - z.location) < 1e-9;
      });
      if (!hit) {
        shared = false;
        break;
      }
    }
    if (shared) throw Error(Errc::NotCoprime, "map components share a common root");
  }
}

bool RationalMap::has_exact() const {
  return std::all_of(components_.begin(), components_.end(),
                     [](const Poly& p) { return p.has_exact() || p.is_zero(); });
}

std::vector<cplx> RationalMap::eval(cplx z) const {
  std::vector<cplx> v(components_.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = components_[k](z);
  return v;
}

void RationalMap::eval_with_derivative(cplx z, std::vector<cplx>& value,
                                       std::vector<cplx>& deriv) const {
  value.resize(components_.size());
  deriv.resize(components_.size());
  for (std::size_t k = 0; k < components_.size(); ++k) {
    std::tie(value[k], deriv[k]) = components_[k].eval_with_derivative(z);
  }
}

std::string RationalMap::to_string() const {
  std::string s;
  for (std::size_t k = 0; k < components_.size(); ++k) {
    if (k) s += " | ";
    s += components_[k].to_string();
  }
  return s;
}

// ---------------------------------------------------------------------------- parsing

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_token(std::string_view text, const char* why) {
  throw Error(Errc::InvalidArgument, std::string("cannot parse coefficient '") +
                                         std::string(text) + "': " + why);
}

}  // namespace

std::pair<cplx, std::optional<GaussRational>> parse_coefficient(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) bad_token(text, "empty");
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  };
  auto digits = [&] {
    const std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    return std::string(s.substr(start, pos - start));
  };

  cplx value = 0.0;
  GaussRational exact_value;
  bool exact = true;
  bool first = true;
  while (true) {
    skip_ws();
    if (pos >= s.size()) break;
    double sign = 1.0;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1.0 : 1.0;
      ++pos;
      skip_ws();
    } else if (!first) {
      bad_token(text, "expected '+' or '-' between terms");
    }
    first = false;

    double magnitude = 1.0;
    mpq_class q(1);
    bool term_exact = true;
    bool has_number = false;
    if (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.')) {
      has_number = true;
      const std::size_t start = pos;
      const std::string whole = digits();
      bool decimal = false;
      if (pos < s.size() && s[pos] == '.') {
        decimal = true;
        ++pos;
        digits();
      }
      if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
        decimal = true;
        ++pos;
        if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
        if (digits().empty()) bad_token(text, "malformed exponent");
      }
      const std::string literal(s.substr(start, pos - start));
      if (decimal) {
        term_exact = false;
        magnitude = std::stod(literal);
      } else if (pos < s.size() && s[pos] == '/') {
        ++pos;
        const std::string den = digits();
        if (den.empty()) bad_token(text, "missing denominator");
        if (mpz_class(den) == 0) bad_token(text, "zero denominator");
        q = mpq_class(mpz_class(whole), mpz_class(den));
        q.canonicalize();
        magnitude = q.get_d();
      } else {
        if (whole.empty()) bad_token(text, "missing digits");
        q = mpq_class(mpz_class(whole));
        magnitude = q.get_d();
      }
      skip_ws();
    }
    bool imaginary = false;
    if (pos < s.size() && s[pos] == '*') {
      ++pos;
      skip_ws();
      if (pos >= s.size() || s[pos] != 'i') bad_token(text, "'*' must be followed by 'i'");
    }
    if (pos < s.size() && s[pos] == 'i') {
      imaginary = true;
      ++pos;
    } else if (!has_number) {
      bad_token(text, "expected a number");
    }
    const double v = sign * magnitude;
    value += imaginary ? cplx(0.0, v) : cplx(v, 0.0);
    if (term_exact) {
      const mpq_class sq = sign < 0 ? mpq_class(-q) : q;
      exact_value = exact_value + (imaginary ? GaussRational(0, sq) : GaussRational(sq, 0));
    } else {
      exact = false;
    }
    skip_ws();
  }
  if (first) bad_token(text, "empty");
  if (!exact) return {value, std::nullopt};
  return {value, exact_value};
}

Poly parse_poly(std::string_view text) {
  std::vector<cplx> floating;
  std::vector<GaussRational> exact;
  bool all_exact = true;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    auto [value, ex] = parse_coefficient(text.substr(start, end - start));
    floating.push_back(value);
    if (ex) {
      exact.push_back(*ex);
    } else {
      all_exact = false;
    }
    start = end + 1;
  }
  if (all_exact) return Poly(ExactPoly(std::move(exact)));
  return Poly(std::move(floating));
}

RationalMap parse_map(std::string_view text) {
  std::vector<Poly> comps;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('|', start);
    if (end == std::string_view::npos) end = text.size();
    comps.push_back(parse_poly(text.substr(start, end - start)));
    start = end + 1;
  }
  return RationalMap(std::move(comps));
}

}  // namespace vdlab
