#include "vdlab/currents.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "vdlab/error.hpp"

namespace vdlab {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

double normalizer_of(const RationalMap& f, const MetricizedDivisor& ample, double r, const QuadratureSpec& q,
                     double tol) {
  const double t = characteristic_geometric(f, ample, r, q);
  if (!(t > tol)) throw Error(Errc::DegenerateNormalizer, "T^H(r) = " + fmt17(t) + " at r = " + fmt17(r));
  return t;
}

double exact_pairing(const RationalMap& f, const ExactForm& phi, double r, const QuadratureSpec& q) {
  const double mean = boundary_mean([&](cplx z) { return phi.phi(f.eval(z)); }, r, q);
  return mean - phi.phi(f.eval(0.0));
}

std::vector<Cluster> cluster_values(std::vector<double> v, double tol) {
  std::sort(v.begin(), v.end());
  std::vector<Cluster> out;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= v.size(); ++i) {
    if (i < v.size() && v[i] - v[i - 1] <= tol) continue;
    Cluster c;
    c.size = static_cast<int>(i - start);
    c.diameter = v[i - 1] - v[start];
    double s = 0.0;
    for (std::size_t k = start; k < i; ++k) s += v[k];
    c.center = s / c.size;
    out.push_back(c);
    start = i;
  }
  return out;
}

}  // namespace

void TestFormBasis::validate() const {
  if (curvature_forms.empty() || normalizer_index >= curvature_forms.size())
    throw Error(Errc::InvalidArgument, "basis needs the ample class among its curvature forms");
  for (const auto& e : exact_forms) {
    if (!e.phi || !std::isfinite(e.sup_abs) || e.sup_abs < 0.0)
      throw Error(Errc::InvalidArgument, "exact form '" + e.label + "' needs a finite sup norm");
  }
}

CurrentSample normalized_pairings(const RationalMap& f, int n, double r, const TestFormBasis& basis,
                                  const QuadratureSpec& q) {
  basis.validate();
  const MetricizedDivisor& h = basis.curvature_forms[basis.normalizer_index];
  CurrentSample s;
  s.n = n;
  s.r = r;
  s.normalizer = normalizer_of(f, h, r, q, q.tol);
  // Every curvature form here is a multiple of the Fubini-Study form.
  for (std::size_t j = 0; j < basis.curvature_forms.size(); ++j) {
    s.pairings.push_back(j == basis.normalizer_index
                             ? 1.0
                             : static_cast<double>(basis.curvature_forms[j].degree()) / h.degree());
  }
  for (const auto& e : basis.exact_forms) s.pairings.push_back(exact_pairing(f, e, r, q) / s.normalizer);
  return s;
}

std::vector<LimitPointReport> limit_points(const std::vector<CurrentSample>& samples, double tol) {
  std::map<double, std::vector<const CurrentSample*>> by_r;
  for (const auto& s : samples) by_r[s.r].push_back(&s);
  std::vector<LimitPointReport> out;
  for (const auto& [r, group] : by_r) {
    if (group.size() < 8)
      throw Error(Errc::InsufficientSamples, "need 8 samples at r = " + fmt17(r));
    const std::size_t width = group.front()->pairings.size();
    for (const auto* s : group) {
      if (s->pairings.size() != width) throw Error(Errc::InvalidArgument, "ragged pairing vectors");
    }
    LimitPointReport rep;
    rep.r = r;
    const std::size_t tail = group.size() / 2;
    for (std::size_t j = 0; j < width; ++j) {
      std::vector<double> v;
      for (std::size_t k = group.size() - tail; k < group.size(); ++k) v.push_back(group[k]->pairings[j]);
      auto clusters = cluster_values(std::move(v), tol);
      rep.certified.push_back(clusters.size() == 1 && clusters.front().diameter < tol);
      rep.per_element.push_back(std::move(clusters));
    }
    out.push_back(std::move(rep));
  }
  return out;
}

std::vector<MarginRow> positivity_check(const std::vector<RationalMap>& seq, const std::vector<int>& indices,
                                        const std::vector<double>& radii, const MetricizedDivisor& ample,
                                        const std::vector<MetricizedDivisor>& effective, double base_bound,
                                        const QuadratureSpec& q) {
  if (seq.size() != indices.size()) throw Error(Errc::InvalidArgument, "indices do not match the sequence");
  std::vector<double> floors;
  for (const auto& d : effective) floors.push_back(weil_lower_bound(d));
  for (std::size_t i = 0; i < seq.size(); ++i) {
    for (const auto& d : effective) {
      if (!(weil(d, seq[i].eval(0.0)) <= base_bound))
        throw Error(Errc::BasePointOnDivisor,
                    "f_" + std::to_string(indices[i]) + "(0) is within the base bound of " + d.name);
    }
  }
  std::vector<MarginRow> rows;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    for (double r : radii) {
      const double t = normalizer_of(seq[i], ample, r, q, q.tol);
      for (std::size_t k = 0; k < effective.size(); ++k) {
        // Pairing with F through its proximity and counting functions.
        const double arith = proximity(seq[i], effective[k], r, q) + counting(seq[i], effective[k], r, false) -
                             weil(effective[k], seq[i].eval(0.0));
        MarginRow row;
        row.n = indices[i];
        row.r = r;
        row.divisor = effective[k].name;
        row.pairing = arith / t;
        row.bound = (floors[k] - base_bound) / t;
        row.margin = row.pairing - row.bound;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::vector<DecayRow> exactness_decay(const std::vector<RationalMap>& seq, const std::vector<int>& indices,
                                      const ExactForm& phi, const MetricizedDivisor& ample,
                                      const std::vector<double>& radii, const QuadratureSpec& q) {
  if (seq.size() != indices.size()) throw Error(Errc::InvalidArgument, "indices do not match the sequence");
  if (seq.size() < 2) throw Error(Errc::InsufficientSamples, "need at least two maps");
  std::vector<DecayRow> rows;
  for (double r : radii) {
    std::vector<DecayRow> at_r;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      DecayRow row;
      row.n = indices[i];
      row.r = r;
      row.normalizer = normalizer_of(seq[i], ample, r, q, q.tol);
      row.pairing = exact_pairing(seq[i], phi, r, q) / row.normalizer;
      row.bound = 2.0 * phi.sup_abs / row.normalizer;
      row.margin = row.bound - std::abs(row.pairing);
      at_r.push_back(row);
    }
    const double first = at_r.front().normalizer;
    const double last = at_r.back().normalizer;
    if (!(last >= 2.0 * first && last > 1.0))
      throw Error(Errc::NormalizerNotDiverging,
                  "normalizer " + fmt17(first) + " -> " + fmt17(last) + " at r = " + fmt17(r));
    rows.insert(rows.end(), at_r.begin(), at_r.end());
  }
  return rows;
}

std::string margins_to_csv(const std::vector<MarginRow>& rows) {
  std::ostringstream os;
  os << "n,r,divisor,pairing,bound,margin\n";
  for (const auto& row : rows) {
    os << row.n << ',' << fmt17(row.r) << ',' << csv_field(row.divisor) << ',' << fmt17(row.pairing) << ','
       << fmt17(row.bound) << ',' << fmt17(row.margin) << '\n';
  }
  return os.str();
}

std::string decay_to_csv(const std::vector<DecayRow>& rows) {
  std::ostringstream os;
  os << "n,r,pairing,bound,margin\n";
  for (const auto& row : rows) {
    os << row.n << ',' << fmt17(row.r) << ',' << fmt17(row.pairing) << ',' << fmt17(row.bound) << ','
       << fmt17(row.margin) << '\n';
  }
  return os.str();
}

ExactForm chordal_square_form(const std::vector<cplx>& point, std::string label) {
  const ProjPoint p(point);
  ExactForm e;
  e.label = std::move(label);
  e.phi = [p](const std::vector<cplx>& x) {
    const double c = chordal_distance(ProjPoint(x), p);
    return c * c;
  };
  e.sup_abs = 1.0;
  return e;
}

}  // namespace vdlab
