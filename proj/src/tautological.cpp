#include "vdlab/tautological.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "vdlab/error.hpp"

namespace vdlab {

namespace {

constexpr double kRelTol = 1e-12;
constexpr double kRootMatch = 1e-6;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double max_abs(const std::vector<cplx>& c) {
  double m = 0.0;
  for (const auto& v : c) m = std::max(m, std::abs(v));
  return m;
}

/// Floating polynomials lose their leading cancellation only up to rounding; trim it.
Poly trimmed(const Poly& p) {
  if (p.has_exact() || p.is_zero()) return p;
  std::vector<cplx> c = p.coeffs();
  const double scale = max_abs(c);
  while (!c.empty() && std::abs(c.back()) <= kRelTol * scale) c.pop_back();
  return Poly(std::move(c));
}

int floating_valuation(const std::vector<cplx>& c) {
  const double scale = max_abs(c);
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (std::abs(c[k]) > kRelTol * scale) return static_cast<int>(k);
  }
  return -1;
}

Poly scaled(const GaussRational& s, const Poly& p) {
  if (p.has_exact()) return Poly(s * p.exact());
  std::vector<cplx> c = p.coeffs();
  for (auto& v : c) v *= s.to_complex();
  return Poly(std::move(c));
}

void require_p1_map(const RationalMap& f) {
  if (f.target_dim() != 1) throw Error(Errc::InvalidArgument, "map must take values in P^1");
  if (f.is_constant()) throw Error(Errc::ConstantMap, "map is constant");
}

/// z^d F(1/z) padded to d+1 coefficients.
Poly reversed(const Poly& p, int d) {
  if (p.has_exact()) {
    std::vector<GaussRational> c(static_cast<std::size_t>(d) + 1);
    const auto& e = p.exact().coeffs();
    for (std::size_t k = 0; k < e.size(); ++k) c[d - k] = e[k];
    return Poly(ExactPoly(std::move(c)));
  }
  std::vector<cplx> c(static_cast<std::size_t>(d) + 1);
  for (std::size_t k = 0; k < p.coeffs().size(); ++k) c[d - k] = p.coeffs()[k];
  return Poly(std::move(c));
}

Poly wronskian_of(const Poly& f0, const Poly& f1) { return f0 * f1.derivative() - f1 * f0.derivative(); }

bool is_zero_at_origin(const Poly& p, double scale) {
  if (p.has_exact()) return p.exact().valuation() > 0 || p.is_zero();
  return p.is_zero() || std::abs(p(0.0)) <= kRelTol * std::max(scale, 1.0);
}

struct InfinityData {
  int ord = 0;
  bool image_on_boundary = false;
  int boundary_index = -1;
};

InfinityData at_infinity(const RationalMap& f, const std::vector<Poly>& preimage) {
  const int d = f.degree();
  const Poly g0 = reversed(f.components()[0], d);
  const Poly g1 = reversed(f.components()[1], d);
  const Poly w = wronskian_of(g0, g1);
  InfinityData out;
  if (w.has_exact()) {
    out.ord = w.exact().valuation();
  } else {
    out.ord = std::max(floating_valuation(w.coeffs()), 0);
  }
  for (std::size_t i = 0; i < preimage.size(); ++i) {
    const Poly p = trimmed(preimage[i]);
    if (p.degree() < d) {
      out.image_on_boundary = true;
      out.boundary_index = static_cast<int>(i);
    }
  }
  return out;
}

Poly product(const std::vector<Poly>& ps) {
  Poly acc = ps.front();
  for (std::size_t i = 1; i < ps.size(); ++i) acc = acc * ps[i];
  return acc;
}

bool near_any(cplx z, const RootMultiset& roots) {
  for (const auto& e : roots.entries) {
    if (std::abs(z - e.location) <= kRootMatch * (1.0 + std::abs(z))) return true;
  }
  return false;
}

/// Roots of the Wronskian that also solve some preimage polynomial.
RootMultiset boundary_ramification_roots(const Poly& w, const Poly& qd) {
  if (w.has_exact() && qd.has_exact()) {
    const ExactPoly g = gcd(w.exact(), qd.exact());
    if (g.degree() < 1) return {};
    return find_roots(Poly(g));
  }
  return find_roots(trimmed(qd));
}

nlohmann::json cplx_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

}  // namespace

std::string BoundaryPoint::to_string() const {
  if (x0.is_zero()) return "inf";
  return (x1 / x0).to_string();
}

BoundaryPoint parse_boundary_point(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text == "inf" || text == "infinity") return BoundaryPoint::infinity();
  auto [value, exact] = parse_coefficient(text);
  if (!exact) throw Error(Errc::ExactModeRequired, "boundary point '" + std::string(text) + "' is not exact");
  return BoundaryPoint::finite(*exact);
}

std::vector<BoundaryPoint> parse_boundary(std::string_view text) {
  std::vector<BoundaryPoint> out;
  std::size_t s = 0;
  while (s <= text.size()) {
    auto e = text.find(',', s);
    if (e == std::string_view::npos) e = text.size();
    out.push_back(parse_boundary_point(text.substr(s, e - s)));
    s = e + 1;
  }
  return out;
}

LogMetric::LogMetric(std::vector<BoundaryPoint> boundary) : boundary_(std::move(boundary)) {
  if (boundary_.empty()) throw Error(Errc::InvalidArgument, "log metric needs at least one boundary point");
  for (const auto& a : boundary_) {
    if (a.x0.is_zero() && a.x1.is_zero()) throw Error(Errc::InvalidArgument, "boundary point [0:0]");
  }
  for (std::size_t i = 0; i < boundary_.size(); ++i) {
    for (std::size_t j = i + 1; j < boundary_.size(); ++j) {
      const auto& a = boundary_[i];
      const auto& b = boundary_[j];
      if ((a.x0 * b.x1 - a.x1 * b.x0).is_zero())
        throw Error(Errc::InvalidArgument, "repeated boundary point " + a.to_string());
    }
  }
}

double LogMetric::log_weight(const std::vector<cplx>& x) const {
  const double n2 = std::norm(x[0]) + std::norm(x[1]);
  const double k = static_cast<double>(boundary_.size());
  for (const auto& a : boundary_) {
    const auto c = a.coords();
    if (c[0] * x[1] - c[1] * x[0] == 0.0) return std::numeric_limits<double>::infinity();
  }
  double s = (k - 2.0) * 0.5 * std::log(n2) + 2.0 * std::log(std::abs(x[0]));
  for (const auto& a : boundary_) {
    const auto c = a.coords();
    s += 0.5 * std::log(std::norm(c[0]) + std::norm(c[1])) - std::log(std::abs(c[0] * x[1] - c[1] * x[0]));
  }
  return s;
}

double LogMetric::log_norm_derivative(const RationalMap& f, cplx z) const {
  std::vector<cplx> v, dv;
  f.eval_with_derivative(z, v, dv);
  const double n2 = std::norm(v[0]) + std::norm(v[1]);
  const double k = static_cast<double>(boundary_.size());
  double s = std::log(std::abs(v[0] * dv[1] - v[1] * dv[0])) + (k - 2.0) * 0.5 * std::log(n2);
  for (const auto& a : boundary_) {
    const auto c = a.coords();
    s += 0.5 * std::log(std::norm(c[0]) + std::norm(c[1])) - std::log(std::abs(c[0] * v[1] - c[1] * v[0]));
  }
  return s;
}

std::vector<Poly> LogMetric::preimage_polys(const RationalMap& f) const {
  std::vector<Poly> out;
  for (const auto& a : boundary_) out.push_back(scaled(a.x0, f.components()[1]) - scaled(a.x1, f.components()[0]));
  return out;
}

MetricizedDivisor LogMetric::as_divisor() const {
  ExactPoly acc({GaussRational(1)});
  for (const auto& a : boundary_) acc = acc * ExactPoly({-a.x1, a.x0});
  const int k = static_cast<int>(boundary_.size());
  std::vector<Monomial> terms;
  for (int j = 0; j <= acc.degree(); ++j) {
    const GaussRational& c = acc.coeffs()[j];
    if (c.is_zero()) continue;
    terms.push_back(Monomial{{k - j, j}, c.to_complex(), c});
  }
  std::string label = "D={";
  for (std::size_t i = 0; i < boundary_.size(); ++i) label += (i ? "," : "") + boundary_[i].to_string();
  return MetricizedDivisor(HomogeneousForm(2, std::move(terms)), label + "}");
}

Poly wronskian(const RationalMap& f) {
  if (f.target_dim() != 1) throw Error(Errc::InvalidArgument, "map must take values in P^1");
  return trimmed(wronskian_of(f.components()[0], f.components()[1]));
}

int RamificationRecord::total() const {
  int t = 0;
  for (const auto& p : points) t += p.ord;
  return t;
}

RamificationRecord ramification(const RationalMap& f, const LogMetric* d) {
  require_p1_map(f);
  const Poly w = wronskian(f);
  if (w.is_zero()) throw Error(Errc::ConstantMap, "Wronskian vanishes identically");
  const std::vector<Poly> pre = d ? d->preimage_polys(f) : std::vector<Poly>{};
  RamificationRecord rec;
  if (w.degree() > 0) {
    RootMultiset shared;
    if (d) shared = boundary_ramification_roots(w, product(pre));
    for (const auto& e : find_roots(w).entries) {
      rec.points.push_back({e.location, false, e.multiplicity, !(d && near_any(e.location, shared))});
    }
  }
  const InfinityData inf = at_infinity(f, pre);
  if (inf.ord > 0) rec.points.push_back({0.0, true, inf.ord, !inf.image_on_boundary});
  return rec;
}

nlohmann::json IdentityVerdict::to_json() const {
  return {{"identity", identity}, {"lhs", lhs},         {"rhs", rhs},    {"residual", residual},
          {"holds", holds},       {"exact", exact},     {"atoms", atoms}, {"details", details}};
}

IdentityVerdict rh_check(const RationalMap& f) {
  require_p1_map(f);
  const RamificationRecord rec = ramification(f);
  const int d = f.degree();
  IdentityVerdict v;
  v.identity = "riemann-hurwitz";
  v.exact = f.has_exact();
  v.lhs = -2.0 * d;
  v.rhs = -2.0 - rec.total();
  v.residual = v.lhs - v.rhs;
  v.holds = v.residual == 0.0;
  v.details = {{"degree", d}, {"ram", rec.total()}, {"expected_ram", 2 * d - 2}};
  for (const auto& p : rec.points) {
    v.atoms.push_back({{"z", p.at_infinity ? nlohmann::json("inf") : cplx_json(p.z)}, {"ord", p.ord}});
  }
  return v;
}

IdentityVerdict log_rh_check(const RationalMap& f, const LogMetric& d) {
  require_p1_map(f);
  const int deg = f.degree();
  const std::vector<Poly> pre = d.preimage_polys(f);
  const InfinityData inf = at_infinity(f, pre);

  int n_red = 0;
  nlohmann::json per_point = nlohmann::json::array();
  for (std::size_t i = 0; i < pre.size(); ++i) {
    const Poly p = trimmed(pre[i]);
    const int finite = p.degree() < 1 ? 0 : (p.has_exact() ? radical_degree(p) : static_cast<int>(find_roots(p).entries.size()));
    const int at_inf = inf.boundary_index == static_cast<int>(i) ? 1 : 0;
    n_red += finite + at_inf;
    per_point.push_back({{"a", d.boundary()[i].to_string()}, {"finite", finite}, {"infinity", at_inf}});
  }

  const Poly w = wronskian(f);
  int ram_away = 0;
  if (w.has_exact() && pre.front().has_exact()) {
    ram_away = strip_common_factors(w.exact(), product(pre).exact()).degree();
    if (!inf.image_on_boundary) ram_away += inf.ord;
  } else {
    for (const auto& p : ramification(f, &d).points) {
      if (p.off_boundary) ram_away += p.ord;
    }
  }

  IdentityVerdict v;
  v.identity = "log-riemann-hurwitz";
  v.exact = f.has_exact();
  v.lhs = static_cast<double>(deg) * (static_cast<double>(d.size()) - 2.0);
  v.rhs = -2.0 + n_red - ram_away;
  v.residual = v.lhs - v.rhs;
  v.holds = v.residual == 0.0;
  v.details = {{"degree", deg}, {"boundary_size", d.size()}, {"n_red", n_red}, {"ram_away", ram_away},
               {"preimages", per_point}};
  return v;
}

IdentityVerdict mason_check(const Poly& a, const Poly& b) {
  if (!a.has_exact() || !b.has_exact()) throw Error(Errc::ExactModeRequired, "Mason check needs exact coefficients");
  const Poly c = a + b;
  if (a.is_zero() || b.is_zero() || c.is_zero()) throw Error(Errc::DegenerateInput, "a, b and a + b must be nonzero");
  if (a.degree() < 1 && b.degree() < 1) throw Error(Errc::DegenerateInput, "a and b are both constant");
  if (gcd(a.exact(), b.exact()).degree() > 0) throw Error(Errc::NotCoprime, "a and b share a root");
  const int max_deg = std::max({a.degree(), b.degree(), c.degree()});
  const int rad = radical_degree(a * b * c);
  IdentityVerdict v;
  v.identity = "mason";
  v.exact = true;
  v.lhs = max_deg;
  v.rhs = rad - 1;
  v.residual = v.rhs - v.lhs;
  v.holds = v.residual >= 0.0;
  v.details = {{"a", a.to_string()}, {"b", b.to_string()}, {"c", c.to_string()},
               {"max_degree", max_deg}, {"radical_degree", rad}, {"slack", rad - 1 - max_deg}};
  return v;
}

double taut_lhs(const RationalMap& f, const LogMetric& d, double r, const QuadratureSpec& q) {
  require_p1_map(f);
  const double weight = static_cast<double>(d.size()) - 2.0;
  if (weight == 0.0) return 0.0;
  return nabla_integral(fs_density(f, weight), r, q);
}

IdentityVerdict taut_identity_check(const RationalMap& f, const LogMetric& d, double r, const QuadratureSpec& q,
                                    double tol) {
  require_p1_map(f);
  const std::vector<Poly> pre = d.preimage_polys(f);
  const double scale0 = max_abs(f.eval(0.0));
  for (std::size_t i = 0; i < pre.size(); ++i) {
    if (is_zero_at_origin(pre[i], scale0))
      throw Error(Errc::OriginOnBoundaryDivisor, "f(0) = " + d.boundary()[i].to_string());
  }
  const Poly w = wronskian(f);
  if (is_zero_at_origin(w, 1.0)) throw Error(Errc::RamifiedAtOrigin, "f'(0) = 0");

  const MetricizedDivisor dd = d.as_divisor();
  double n_trunc = 0.0;
  try {
    n_trunc = counting(f, dd, r, true);
  } catch (const Error& e) {
    if (e.code() == Errc::OriginOnDivisor) throw Error(Errc::OriginOnBoundaryDivisor, e.what());
    throw;
  }

  const Poly qd = product(pre);
  RootMultiset ram;
  if (w.has_exact() && qd.has_exact()) {
    const ExactPoly away = strip_common_factors(w.exact(), qd.exact());
    if (away.degree() > 0) ram = roots_in_disc(Poly(away), r);
  } else if (w.degree() > 0) {
    const RootMultiset shared = find_roots(trimmed(qd));
    for (const auto& e : roots_in_disc(w, r).entries) {
      if (!near_any(e.location, shared)) ram.entries.push_back(e);
    }
  }

  IdentityVerdict v;
  v.identity = "tautological";
  v.exact = false;
  double ram_sum = 0.0;
  for (const auto& e : ram.entries) {
    const double weight = std::log(r / std::abs(e.location));
    ram_sum += e.multiplicity * weight;
    v.atoms.push_back({{"kind", "ramification"}, {"z", cplx_json(e.location)}, {"ord", e.multiplicity},
                       {"weight", weight}});
  }
  for (std::size_t i = 0; i < pre.size(); ++i) {
    const Poly p = trimmed(pre[i]);
    if (p.degree() < 1) continue;
    for (const auto& e : roots_in_disc(p, r).entries) {
      v.atoms.push_back({{"kind", "boundary_preimage"}, {"a", d.boundary()[i].to_string()},
                         {"z", cplx_json(e.location)}, {"ord", e.multiplicity},
                         {"weight", std::log(r / std::abs(e.location))}});
    }
  }

  const double phi0 = d.log_norm_derivative(f, 0.0);
  const double mean = boundary_mean([&](cplx z) { return d.log_norm_derivative(f, z); }, r, q);
  v.lhs = taut_lhs(f, d, r, q);
  v.rhs = -phi0 + mean + n_trunc - ram_sum;
  v.residual = v.lhs - v.rhs;
  v.holds = std::abs(v.residual) <= tol;
  v.details = {{"r", r},           {"phi0", phi0},   {"boundary_mean", mean}, {"n_trunc", n_trunc},
               {"ram_sum", ram_sum}, {"tolerance", tol}, {"divisor", dd.name}};
  return v;
}

bool TautTrendReport::pass() const {
  return std::none_of(flagged.begin(), flagged.end(), [](bool b) { return b; });
}

std::string TautTrendReport::to_csv() const {
  std::ostringstream os;
  os << "n,r,lhs,normalizer,ell\n";
  for (const auto& row : rows) {
    os << row.n << ',' << fmt17(row.r) << ',' << fmt17(row.lhs) << ',' << fmt17(row.normalizer) << ','
       << fmt17(row.ell) << '\n';
  }
  return os.str();
}

nlohmann::json TautTrendReport::to_json() const {
  nlohmann::json per_r = nlohmann::json::array();
  for (std::size_t i = 0; i < radii.size(); ++i) {
    per_r.push_back({{"r", radii[i]}, {"tail_max", tail_max[i]}, {"flagged", static_cast<bool>(flagged[i])}});
  }
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& row : rows) {
    rows_json.push_back({{"n", row.n}, {"r", row.r}, {"lhs", row.lhs}, {"normalizer", row.normalizer}, {"ell", row.ell}});
  }
  return {{"tail_start", tail_start}, {"tol", tol}, {"per_r", per_r}, {"rows", rows_json}, {"pass", pass()}};
}

TautTrendReport taut_inequality_experiment(const std::vector<RationalMap>& seq, const std::vector<int>& indices,
                                           const LogMetric& d, const std::vector<double>& radii, int tail_start,
                                           double tol, double base_bound, const QuadratureSpec& q) {
  if (seq.size() != indices.size()) throw Error(Errc::InvalidArgument, "indices do not match the sequence");
  if (seq.size() < 2) throw Error(Errc::InsufficientSamples, "need at least two maps");
  const MetricizedDivisor dd = d.as_divisor();
  for (std::size_t i = 0; i < seq.size(); ++i) {
    require_p1_map(seq[i]);
    if (!(weil(dd, seq[i].eval(0.0)) <= base_bound))
      throw Error(Errc::BasePointOnDivisor, "f_" + std::to_string(indices[i]) + "(0) is too close to D");
  }
  const MetricizedDivisor h = MetricizedDivisor::coordinate_hyperplane(1, 0);

  TautTrendReport rep;
  rep.radii = radii;
  rep.tail_start = tail_start;
  rep.tol = tol;
  for (double r : radii) {
    std::vector<TautTrendRow> at_r;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      TautTrendRow row;
      row.n = indices[i];
      row.r = r;
      row.normalizer = characteristic_geometric(seq[i], h, r, q);
      at_r.push_back(row);
    }
    const double first = at_r.front().normalizer;
    const double last = at_r.back().normalizer;
    if (!(last >= 2.0 * first && last > 1.0))
      throw Error(Errc::NormalizerNotDiverging,
                  "normalizer " + fmt17(first) + " -> " + fmt17(last) + " at r = " + fmt17(r));
    if (seq.back().degree() <= seq.front().degree())
      throw Error(Errc::DegenerateInput, "degrees stay bounded along the sequence");
    double tail = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      auto& row = at_r[i];
      row.lhs = taut_lhs(seq[i], d, r, q);
      row.ell = row.lhs / row.normalizer;
      if (row.n >= tail_start) {
        tail = std::max(tail, row.ell);
        any = true;
      }
    }
    if (!any) throw Error(Errc::InsufficientSamples, "no samples with n >= " + std::to_string(tail_start));
    rep.tail_max.push_back(tail);
    rep.flagged.push_back(tail > tol);
    rep.rows.insert(rep.rows.end(), at_r.begin(), at_r.end());
  }
  return rep;
}

}  // namespace vdlab
