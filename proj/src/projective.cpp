#include "vdlab/projective.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

#include "vdlab/error.hpp"

namespace vdlab {

namespace {

double squared_norm(const std::vector<cplx>& v) {
  double acc = 0.0;
  for (const auto& c : v) acc += std::norm(c);
  return acc;
}

// sum_{i<j} |a_i b_j - a_j b_i|^2, free of the cancellation in |a|^2|b|^2 - |<a,b>|^2.
double wedge_squared(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) acc += std::norm(a[i] * b[j] - a[j] * b[i]);
  }
  return acc;
}

double radical_inverse(unsigned index, unsigned base) {
  double inv = 1.0 / base;
  double f = inv;
  double out = 0.0;
  while (index > 0) {
    out += f * (index % base);
    index /= base;
    f *= inv;
  }
  return out;
}

constexpr unsigned kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                                41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};

std::vector<cplx> normalize(std::vector<cplx> v) {
  const double n = std::sqrt(squared_norm(v));
  for (auto& c : v) c /= n;
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------- ProjPoint

ProjPoint::ProjPoint(std::vector<cplx> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw Error(Errc::InvalidArgument, "projective point needs >= 2 coordinates");
  if (squared_norm(coords_) == 0.0) throw Error(Errc::DegenerateInput, "all coordinates vanish");
}

double ProjPoint::norm() const { return std::sqrt(squared_norm(coords_)); }

ProjPoint ProjPoint::normalized() const { return ProjPoint(normalize(coords_)); }

// ---------------------------------------------------------------------------- forms

HomogeneousForm::HomogeneousForm(std::size_t nvars, std::vector<Monomial> terms)
    : nvars_(nvars), terms_(std::move(terms)) {
  if (nvars_ < 2) throw Error(Errc::InvalidArgument, "form needs at least two variables");
  std::erase_if(terms_, [](const Monomial& m) { return m.coeff == cplx(0.0, 0.0); });
  if (terms_.empty()) throw Error(Errc::DegenerateInput, "form is identically zero");
  degree_ = -1;
  for (const auto& m : terms_) {
    if (m.exponents.size() != nvars_) {
      throw Error(Errc::InvalidArgument, "monomial exponent count does not match the variables");
    }
    int d = 0;
    for (int e : m.exponents) {
      if (e < 0) throw Error(Errc::InvalidArgument, "negative exponent");
      d += e;
    }
    if (degree_ >= 0 && d != degree_) throw Error(Errc::InvalidArgument, "form is not homogeneous");
    degree_ = d;
  }
  if (degree_ < 1) throw Error(Errc::InvalidArgument, "divisor degree must be positive");
}

bool HomogeneousForm::has_exact() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Monomial& m) { return m.exact.has_value(); });
}

cplx HomogeneousForm::operator()(const std::vector<cplx>& x) const {
  cplx acc = 0.0;
  for (const auto& m : terms_) {
    cplx t = m.coeff;
    for (std::size_t i = 0; i < nvars_; ++i) {
      for (int e = 0; e < m.exponents[i]; ++e) t *= x[i];
    }
    acc += t;
  }
  return acc;
}

std::vector<cplx> HomogeneousForm::gradient(const std::vector<cplx>& x) const {
  std::vector<cplx> g(nvars_, 0.0);
  for (const auto& m : terms_) {
    for (std::size_t k = 0; k < nvars_; ++k) {
      if (m.exponents[k] == 0) continue;
      cplx t = m.coeff * static_cast<double>(m.exponents[k]);
      for (std::size_t i = 0; i < nvars_; ++i) {
        const int e = m.exponents[i] - (i == k ? 1 : 0);
        for (int p = 0; p < e; ++p) t *= x[i];
      }
      g[k] += t;
    }
  }
  return g;
}

MetricizedDivisor::MetricizedDivisor(HomogeneousForm q, std::string label)
    : form(std::move(q)), name(std::move(label)) {}

MetricizedDivisor MetricizedDivisor::coordinate_hyperplane(std::size_t n, std::size_t i) {
  std::vector<int> e(n + 1, 0);
  e[i] = 1;
  return MetricizedDivisor(HomogeneousForm(n + 1, {Monomial{e, 1.0, GaussRational(1)}}),
                           "x" + std::to_string(i));
}

// ---------------------------------------------------------------------------- metrics

double weil(const MetricizedDivisor& d, const std::vector<cplx>& x) {
  const double n2 = squared_norm(x);
  if (n2 == 0.0) throw Error(Errc::IndeterminatePoint, "all coordinates vanish");
  const double scale = 1.0 / std::sqrt(n2);
  std::vector<cplx> unit(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) unit[k] = x[k] * scale;
  const double q = std::abs(d.form(unit));
  if (q == 0.0) return std::numeric_limits<double>::infinity();
  return -std::log(q);
}

double weil(const MetricizedDivisor& d, const ProjPoint& x) { return weil(d, x.coords()); }

double fs_pullback_density(const RationalMap& f, cplx z) {
  thread_local std::vector<cplx> v;
  thread_local std::vector<cplx> dv;
  f.eval_with_derivative(z, v, dv);
  const double n2 = squared_norm(v);
  if (std::sqrt(n2) < 1e-12) throw Error(Errc::IndeterminatePoint, "all components vanish");
  return wedge_squared(v, dv) / (std::numbers::pi * n2 * n2);
}

double divisor_curvature_density(const MetricizedDivisor& d, const RationalMap& f, cplx z) {
  return d.degree() * fs_pullback_density(f, z);
}

RadialDensity fs_density(const RationalMap& f, double weight) {
  RadialDensity u;
  if (f.is_constant() || weight == 0.0) return u;
  u.eval = [f, weight](cplx z) { return weight * fs_pullback_density(f, z); };
  return u;
}

double chordal_distance(const ProjPoint& x, const ProjPoint& y) {
  if (x.coords().size() != y.coords().size()) {
    throw Error(Errc::InvalidArgument, "points live in different projective spaces");
  }
  const auto a = normalize(x.coords());
  const auto b = normalize(y.coords());
  return std::clamp(std::sqrt(wedge_squared(a, b)), 0.0, 1.0);
}

double fs_mass_in_disc(const RationalMap& f, cplx center, double radius, const QuadratureSpec& q) {
  if (f.is_constant()) return 0.0;
  auto flux = [&f, center](cplx w) {
    std::vector<cplx> v;
    std::vector<cplx> dv;
    f.eval_with_derivative(center + w, v, dv);
    cplx pairing = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) pairing += dv[k] * std::conj(v[k]);
    return (w * pairing).real() / squared_norm(v);
  };
  return boundary_mean(flux, radius, q);
}

double sphere_sup(const MetricizedDivisor& d) {
  const std::size_t m = d.form.nvars();
  if (2 * m > std::size(kPrimes)) throw Error(Errc::InvalidArgument, "dimension too large");
  constexpr unsigned kSamples = 10000;
  constexpr std::size_t kPolished = 8;

  std::vector<std::pair<double, std::vector<cplx>>> best;
  for (unsigned s = 1; s <= kSamples; ++s) {
    std::vector<cplx> x(m);
    for (std::size_t i = 0; i < m; ++i) {
      // Box-Muller on a Halton pair gives a complex Gaussian; normalized it is uniform on S.
      const double u1 = std::max(radical_inverse(s, kPrimes[2 * i]), 1e-300);
      const double u2 = radical_inverse(s, kPrimes[2 * i + 1]);
      x[i] = std::polar(std::sqrt(-2.0 * std::log(u1)), 2.0 * std::numbers::pi * u2);
    }
    x = normalize(std::move(x));
    const double v = std::abs(d.form(x));
    if (best.size() < kPolished || v > best.back().first) {
      best.emplace_back(v, std::move(x));
      std::sort(best.begin(), best.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
      if (best.size() > kPolished) best.pop_back();
    }
  }

  double sup = 0.0;
  for (auto& [value, x] : best) {
    double step = 0.5;
    for (int it = 0; it < 200 && step > 1e-14; ++it) {
      const cplx qv = d.form(x);
      const auto g = d.form.gradient(x);
      std::vector<cplx> cand(m);
      for (std::size_t i = 0; i < m; ++i) cand[i] = x[i] + step * qv * std::conj(g[i]);
      cand = normalize(std::move(cand));
      const double cv = std::abs(d.form(cand));
      if (cv > value) {
        value = cv;
        x = std::move(cand);
        step *= 1.5;
      } else {
        step *= 0.5;
      }
    }
    sup = std::max(sup, value);
  }
  return sup;
}

double weil_lower_bound(const MetricizedDivisor& d) { return -std::log(sphere_sup(d)); }

Poly pullback_polynomial(const MetricizedDivisor& d, const RationalMap& f) {
  if (d.form.nvars() != f.components().size()) {
    throw Error(Errc::InvalidArgument, "divisor and map live in different projective spaces");
  }
  const bool exact = d.form.has_exact() && f.has_exact();
  const auto& comps = f.components();
  auto lift = [exact](const Poly& p) {
    if (exact && p.is_zero()) return Poly(ExactPoly{});
    return p;
  };
  Poly total = exact ? Poly(ExactPoly{}) : Poly{};
  for (const auto& m : d.form.terms()) {
    Poly term = exact ? Poly(ExactPoly({*m.exact})) : Poly::constant(m.coeff);
    for (std::size_t i = 0; i < comps.size(); ++i) {
      for (int e = 0; e < m.exponents[i]; ++e) term = term * lift(comps[i]);
    }
    total = total + term;
  }
  return total;
}

MetricizedDivisor parse_divisor(std::string_view text, std::string name) {
  const auto semi = text.find(';');
  if (semi == std::string_view::npos) throw Error(Errc::InvalidArgument, "divisor spec needs 'q;'");
  int q = 0;
  try {
    q = std::stoi(std::string(text.substr(0, semi)));
  } catch (const std::exception&) {
    throw Error(Errc::InvalidArgument, "divisor degree is not an integer");
  }
  std::vector<Monomial> terms;
  std::size_t nvars = 0;
  std::string_view rest = text.substr(semi + 1);
  std::size_t pos = 0;
  while (pos < rest.size()) {
    while (pos < rest.size() && (std::isspace(static_cast<unsigned char>(rest[pos])) || rest[pos] == ',')) ++pos;
    if (pos >= rest.size()) break;
    if (rest[pos] != '(') throw Error(Errc::InvalidArgument, "expected '(' in divisor monomial");
    const auto close = rest.find(')', pos);
    if (close == std::string_view::npos) throw Error(Errc::InvalidArgument, "unclosed '('");
    std::vector<int> exps;
    std::string_view inside = rest.substr(pos + 1, close - pos - 1);
    std::size_t s = 0;
    while (s <= inside.size()) {
      auto e = inside.find(',', s);
      if (e == std::string_view::npos) e = inside.size();
      try {
        exps.push_back(std::stoi(std::string(inside.substr(s, e - s))));
      } catch (const std::exception&) {
        throw Error(Errc::InvalidArgument, "bad exponent in divisor monomial");
      }
      s = e + 1;
    }
    pos = close + 1;
    while (pos < rest.size() && std::isspace(static_cast<unsigned char>(rest[pos]))) ++pos;
    if (pos >= rest.size() || rest[pos] != '=') throw Error(Errc::InvalidArgument, "expected '='");
    ++pos;
    auto next = rest.find('(', pos);
    std::string_view coeff_text = rest.substr(pos, next == std::string_view::npos ? rest.size() - pos : next - pos);
    while (!coeff_text.empty() && (coeff_text.back() == ',' || std::isspace(static_cast<unsigned char>(coeff_text.back())))) {
      coeff_text.remove_suffix(1);
    }
    auto [value, exact] = parse_coefficient(coeff_text);
    if (nvars == 0) nvars = exps.size();
    terms.push_back(Monomial{std::move(exps), value, exact});
    pos = next == std::string_view::npos ? rest.size() : next;
  }
  HomogeneousForm form(nvars, std::move(terms));
  if (form.degree() != q) throw Error(Errc::InvalidArgument, "declared degree does not match the form");
  return MetricizedDivisor(std::move(form), name.empty() ? std::string(text) : std::move(name));
}

}  // namespace vdlab
