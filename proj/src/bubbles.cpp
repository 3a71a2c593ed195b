#include "vdlab/bubbles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

#include "vdlab/error.hpp"

namespace vdlab {

namespace {

constexpr double kAttachBand = 1e-9;

std::vector<cplx> unit(std::vector<cplx> v) {
  double n2 = 0.0;
  for (const auto& c : v) n2 += std::norm(c);
  const double s = 1.0 / std::sqrt(n2);
  for (auto& c : v) c *= s;
  return v;
}

double chordal_unit(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() == 2) return std::abs(a[0] * b[1] - a[1] * b[0]);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) acc += std::norm(a[i] * b[j] - a[j] * b[i]);
  }
  return std::sqrt(acc);
}

// Polar grid: the center plus `mesh` rings of `mesh` angles.
template <class Fn>
void for_each_grid_point(double radius, int mesh, Fn&& fn) {
  fn(cplx(0.0, 0.0));
  for (int k = 1; k <= mesh; ++k) {
    const double rho = radius * k / mesh;
    for (int j = 0; j < mesh; ++j) fn(std::polar(rho, 2.0 * std::numbers::pi * j / mesh));
  }
}

// u -> u^d g(1/u): the map in the chart at infinity of the source P^1.
RationalMap chart_at_infinity(const RationalMap& g) {
  const auto d = static_cast<std::size_t>(g.degree());
  std::vector<Poly> comps;
  for (const auto& p : g.components()) {
    std::vector<cplx> c(d + 1);
    for (std::size_t k = 0; k < p.coeffs().size(); ++k) c[d - k] = p.coeffs()[k];
    comps.emplace_back(std::move(c));
  }
  return RationalMap(std::move(comps));
}

bool tree_is_valid(const BubbleTree& t) {
  const std::size_t n = t.components.size();
  if (n == 0 || t.edges.size() != n - 1 || t.energies.size() != n) return false;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (const auto& [a, b] : t.edges) {
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= n || static_cast<std::size_t>(b) >= n) return false;
    const auto ra = find(static_cast<std::size_t>(a));
    const auto rb = find(static_cast<std::size_t>(b));
    if (ra == rb) return false;  // cycle
    parent[ra] = rb;
  }
  return std::all_of(t.energies.begin(), t.energies.end(), [](double e) { return e >= 0.0; });
}

}  // namespace

// ---------------------------------------------------------------------------- bubbles

double BubbleTree::total_energy() const { return std::accumulate(energies.begin(), energies.end(), 0.0); }

BubbleTree make_bubble(cplx attach, std::vector<RationalMap> components,
                       std::vector<std::pair<int, int>> edges, const MetricizedDivisor& d) {
  BubbleTree t{attach, std::move(components), std::move(edges), {}};
  for (const auto& c : t.components) t.energies.push_back(static_cast<double>(c.degree() * d.degree()));
  return t;
}

DiscWithBubbles::DiscWithBubbles(RationalMap base, std::vector<BubbleTree> bubbles)
    : base_(std::move(base)), bubbles_(std::move(bubbles)) {
  for (std::size_t i = 0; i < bubbles_.size(); ++i) {
    const double m = std::abs(bubbles_[i].attach);
    if (!(m > 0.0 && m < 1.0)) {
      throw Error(Errc::InvalidArgument, "attach points must satisfy 0 < |z| < 1");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (bubbles_[i].attach == bubbles_[j].attach) throw Error(Errc::InvalidArgument, "repeated attach point");
    }
    if (!tree_is_valid(bubbles_[i])) throw Error(Errc::InvalidArgument, "bubble is not a tree");
  }
}

double nabla_bubble(const DiscWithBubbles& b, const MetricizedDivisor& d, double r, const QuadratureSpec& q) {
  double extra = 0.0;
  for (const auto& t : b.bubbles()) {
    const double m = std::abs(t.attach);
    if (std::abs(m - r) < kAttachBand) throw Error(Errc::AttachOnBoundary, "attach point on |z| = r");
    if (m < r) extra += std::log(r / m) * t.total_energy();
  }
  return characteristic_geometric(b.base(), d, r, q) + extra;
}

// ---------------------------------------------------------------------------- graphs

GraphSample graph_sample(const RationalMap& f, double radius, int mesh) {
  if (mesh < 16) throw Error(Errc::InvalidArgument, "mesh must be >= 16");
  GraphSample s;
  s.mesh = mesh;
  s.radius = radius;
  s.points.reserve(static_cast<std::size_t>(mesh) * mesh + 1);
  for_each_grid_point(radius, mesh, [&](cplx z) { s.points.push_back({z, unit(f.eval(z))}); });
  return s;
}

std::vector<std::vector<cplx>> disc_image(const RationalMap& g, int mesh) {
  const double h = 2.0 / mesh;
  // Chordal speed of the image along a ring, maximized over a coarse set of angles.
  auto speed = [&](double rho) {
    double s = 0.0;
    for (int j = 0; j < mesh; ++j) {
      s = std::max(s, std::sqrt(std::numbers::pi * fs_pullback_density(g, std::polar(rho, 2.0 * std::numbers::pi * j / mesh))));
    }
    return s;
  };
  std::vector<std::vector<cplx>> out{unit(g.eval(0.0))};
  double rho = 0.0;
  while (rho < 1.0) {
    double step = std::min(1.0 / mesh, h / std::max(speed(rho), 1e-300));
    step = std::min(step, h / std::max(speed(std::min(rho + step, 1.0)), 1e-300));
    rho = std::min(rho + step, 1.0);
    const double s = std::max(speed(rho), 1.0);
    const int n_theta = std::max(mesh, static_cast<int>(std::ceil(2.0 * std::numbers::pi * rho * s / h)));
    for (int j = 0; j < n_theta; ++j) out.push_back(unit(g.eval(std::polar(rho, 2.0 * std::numbers::pi * j / n_theta))));
  }
  return out;
}

std::vector<std::vector<cplx>> sphere_image(const RationalMap& g, int mesh) {
  auto out = disc_image(g, mesh);
  const auto other = disc_image(chart_at_infinity(g), mesh);
  out.insert(out.end(), other.begin(), other.end());
  return out;
}

void augment(GraphSample& sample, cplx attach, const std::vector<std::vector<cplx>>& image) {
  for (const auto& x : image) sample.points.push_back({attach, x});
}

GraphSample graph_sample(const DiscWithBubbles& b, double radius, int mesh) {
  GraphSample s = graph_sample(b.base(), radius, mesh);
  for (const auto& t : b.bubbles()) {
    for (const auto& c : t.components) augment(s, t.attach, sphere_image(c, mesh));
  }
  return s;
}

double product_distance(const GraphPoint& a, const GraphPoint& b) {
  return std::max(std::abs(a.z - b.z), chordal_unit(a.x, b.x));
}

namespace {

// Graph points embedded in R^2 x R^m: the x-part is the projector x x^* in coordinates where
// the Euclidean distance equals the chordal distance ||x ^ x'||.
struct Embedded {
  std::size_t dim = 0;
  std::vector<double> data;

  const double* at(std::size_t i) const { return data.data() + i * dim; }
  std::size_t size() const { return dim ? data.size() / dim : 0; }
};

Embedded embed(const std::vector<GraphPoint>& pts) {
  Embedded e;
  const std::size_t n = pts.front().x.size();
  e.dim = 2 + n + n * (n - 1);
  e.data.reserve(pts.size() * e.dim);
  for (const auto& p : pts) {
    if (p.x.size() != n) throw Error(Errc::InvalidArgument, "graph points of mixed target dimension");
    e.data.push_back(p.z.real());
    e.data.push_back(p.z.imag());
    for (std::size_t i = 0; i < n; ++i) e.data.push_back(std::norm(p.x[i]) / std::numbers::sqrt2);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const cplx c = p.x[i] * std::conj(p.x[j]);
        e.data.push_back(c.real());
        e.data.push_back(c.imag());
      }
    }
  }
  return e;
}

double embedded_distance(const double* a, const double* b, std::size_t dim) {
  const double dz = std::hypot(a[0] - b[0], a[1] - b[1]);
  double dy = 0.0;
  for (std::size_t k = 2; k < dim; ++k) dy += (a[k] - b[k]) * (a[k] - b[k]);
  return std::max(dz, std::sqrt(dy));
}

// k-d tree under the metric max(|dz|, |dy|); boxes give the lower bound max of the two
// Euclidean gaps.
class KdTree {
 public:
  explicit KdTree(const Embedded& pts) : pts_(pts), order_(pts.size()) {
    std::iota(order_.begin(), order_.end(), 0);
    build(0, order_.size());
  }

  // Distance to the nearest point, or some distance below `good_enough` once one is found.
  double nearest(const double* q, double good_enough) const {
    double best = std::numeric_limits<double>::infinity();
    search(0, q, good_enough, best);
    return best;
  }

 private:
  struct Node {
    std::size_t begin, end;
    int left = -1, right = -1;
    std::vector<double> lo, hi;
  };

  static constexpr std::size_t kLeaf = 8;

  int build(std::size_t begin, std::size_t end) {
    const std::size_t dim = pts_.dim;
    Node node{begin, end, -1, -1, std::vector<double>(dim, std::numeric_limits<double>::infinity()),
              std::vector<double>(dim, -std::numeric_limits<double>::infinity())};
    for (std::size_t i = begin; i < end; ++i) {
      const double* p = pts_.at(order_[i]);
      for (std::size_t k = 0; k < dim; ++k) {
        node.lo[k] = std::min(node.lo[k], p[k]);
        node.hi[k] = std::max(node.hi[k], p[k]);
      }
    }
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    if (end - begin <= kLeaf) return id;
    std::size_t axis = 0;
    for (std::size_t k = 1; k < dim; ++k) {
      if (node.hi[k] - node.lo[k] > node.hi[axis] - node.lo[axis]) axis = k;
    }
    if (node.hi[axis] == node.lo[axis]) return id;
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin), order_.begin() + static_cast<std::ptrdiff_t>(mid),
                     order_.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t a, std::size_t b) {
                       return pts_.at(a)[axis] < pts_.at(b)[axis];
                     });
    const int l = build(begin, mid);
    const int r = build(mid, end);
    nodes_[static_cast<std::size_t>(id)].left = l;
    nodes_[static_cast<std::size_t>(id)].right = r;
    return id;
  }

  double lower_bound(const Node& n, const double* q) const {
    double gz = 0.0, gy = 0.0;
    for (std::size_t k = 0; k < pts_.dim; ++k) {
      const double g = q[k] < n.lo[k] ? n.lo[k] - q[k] : (q[k] > n.hi[k] ? q[k] - n.hi[k] : 0.0);
      (k < 2 ? gz : gy) += g * g;
    }
    return std::sqrt(std::max(gz, gy));
  }

  // Returns true once best < good_enough.
  bool search(int id, const double* q, double good_enough, double& best) const {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    if (lower_bound(n, q) >= best) return false;
    if (n.left < 0) {
      for (std::size_t i = n.begin; i < n.end; ++i) {
        best = std::min(best, embedded_distance(q, pts_.at(order_[i]), pts_.dim));
        if (best < good_enough) return true;
      }
      return false;
    }
    const Node& l = nodes_[static_cast<std::size_t>(n.left)];
    const Node& r = nodes_[static_cast<std::size_t>(n.right)];
    const bool left_first = lower_bound(l, q) <= lower_bound(r, q);
    const int first = left_first ? n.left : n.right;
    const int second = left_first ? n.right : n.left;
    return search(first, q, good_enough, best) || search(second, q, good_enough, best);
  }

  const Embedded& pts_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

// sup_a min_b; a query stops as soon as it finds a point closer than the running maximum.
double directed_hausdorff(const Embedded& a, const Embedded& b) {
  const KdTree tree(b);
  std::vector<std::size_t> order(a.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937 rng(1u);
  std::shuffle(order.begin(), order.end(), rng);
  double cmax = 0.0;
  for (const std::size_t i : order) {
    const double d = tree.nearest(a.at(i), cmax);
    if (d > cmax) cmax = d;
  }
  return cmax;
}

}  // namespace

double hausdorff_distance(const GraphSample& a, const GraphSample& b) {
  if (a.points.empty() || b.points.empty()) throw Error(Errc::EmptySample, "graph sample is empty");
  const Embedded ea = embed(a.points);
  const Embedded eb = embed(b.points);
  if (ea.dim != eb.dim) throw Error(Errc::InvalidArgument, "graph samples have different targets");
  return std::max(directed_hausdorff(ea, eb), directed_hausdorff(eb, ea));
}

// ---------------------------------------------------------------------------- concentration

namespace {

// Pattern search for a local maximum of the pullback density inside the ball B(start, radius).
cplx density_peak(const RationalMap& f, cplx start, double radius) {
  cplx best = start;
  double value = fs_pullback_density(f, best);
  double step = radius / 4.0;
  while (step > 1e-12) {
    bool moved = false;
    for (int k = 0; k < 8; ++k) {
      const cplx cand = best + std::polar(step, std::numbers::pi * k / 4.0);
      if (std::abs(cand - start) > radius) continue;
      const double v = fs_pullback_density(f, cand);
      if (v > value) {
        value = v;
        best = cand;
        moved = true;
      }
    }
    if (!moved) step *= 0.5;
  }
  return best;
}

}  // namespace

std::vector<Concentration> detect_concentration(const std::vector<RationalMap>& seq, double r,
                                                double eps, const QuadratureSpec& q) {
  if (seq.empty()) throw Error(Errc::InvalidArgument, "empty map sequence");
  if (!(eps > 0.0 && eps < r / 4.0)) throw Error(Errc::InvalidArgument, "eps must lie in (0, r/4)");
  const RationalMap& last = seq.back();
  const RationalMap& first = seq.front();

  std::vector<std::pair<double, cplx>> candidates;
  const double h = eps / 2.0;
  const int steps = static_cast<int>(std::ceil(r / h));
  for (int i = -steps; i <= steps; ++i) {
    for (int j = -steps; j <= steps; ++j) {
      const cplx c(i * h, j * h);
      if (std::abs(c) > r - eps) continue;
      const double m = fs_mass_in_disc(last, c, eps, q);
      if (m >= 0.5) candidates.emplace_back(m, c);
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  std::vector<Concentration> found;
  for (const auto& [mass, c] : candidates) {
    const cplx peak = density_peak(last, c, eps);
    const bool seen = std::any_of(found.begin(), found.end(),
                                  [&](const Concentration& k) { return std::abs(k.location - peak) < eps; });
    if (seen) continue;
    const double m_last = fs_mass_in_disc(last, peak, eps, q);
    const double m_first = fs_mass_in_disc(first, peak, eps, q);
    if (m_last >= 0.5 && m_last >= m_first - 1e-9) found.push_back({peak, m_last});
  }
  if (found.empty()) return found;

  auto elsewhere = [&](const RationalMap& f) {
    double m = fs_mass_in_disc(f, 0.0, r, q);
    for (const auto& k : found) m -= fs_mass_in_disc(f, k.location, eps, q);
    return std::max(m, 0.0);
  };
  const double out_last = elsewhere(last);
  const double out_first = elsewhere(first);
  if (!(out_last < 0.5 && out_last <= out_first + 1e-9)) return {};
  return found;
}

// ---------------------------------------------------------------------------- harness

RationalMap compose_automorphism(const RationalMap& f, cplx a, double angle) {
  if (!(std::abs(a) < 1.0)) throw Error(Errc::InvalidArgument, "automorphism center must lie in the disc");
  if (a == cplx(0.0) && angle == 0.0) return f;
  const int d = f.degree();
  const cplx rot = std::polar(1.0, angle);
  const Poly num(std::vector<cplx>{-rot * a, rot});
  const Poly den(std::vector<cplx>{1.0, -std::conj(a)});
  std::vector<Poly> num_pow{Poly::constant(1.0)};
  std::vector<Poly> den_pow{Poly::constant(1.0)};
  for (int k = 1; k <= d; ++k) {
    num_pow.push_back(num_pow.back() * num);
    den_pow.push_back(den_pow.back() * den);
  }
  std::vector<Poly> comps;
  for (const auto& p : f.components()) {
    Poly g;
    const auto& c = p.coeffs();
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (c[j] == cplx(0.0)) continue;
      g = g + Poly::constant(c[j]) * num_pow[j] * den_pow[static_cast<std::size_t>(d) - j];
    }
    comps.push_back(std::move(g));
  }
  return RationalMap(std::move(comps));
}

RationalMap affine_pullback(const RationalMap& f, cplx center, double scale) {
  const Poly shift(std::vector<cplx>{center, scale});
  std::vector<Poly> comps;
  for (const auto& p : f.components()) {
    Poly g;
    Poly power = Poly::constant(1.0);
    for (const cplx c : p.coeffs()) {
      g = g + Poly::constant(c) * power;
      power = power * shift;
    }
    comps.push_back(std::move(g));
  }
  return RationalMap(std::move(comps));
}

double fs_characteristic_boundary(const RationalMap& f, double r, const QuadratureSpec& q) {
  if (f.is_constant()) return 0.0;
  auto log_norm = [&f](cplx z) {
    double n2 = 0.0;
    for (const auto& c : f.eval(z)) n2 += std::norm(c);
    return 0.5 * std::log(n2);
  };
  return boundary_mean(log_norm, r, q) - log_norm(0.0);
}

GromovVerdict gromov_harness(const std::vector<RationalMap>& seq, const std::function<double(double)>& bound,
                             const std::vector<double>& r_grid, int mesh, const GromovOptions& options) {
  if (seq.size() < 8) throw Error(Errc::InsufficientSamples, "harness needs at least 8 maps");
  if (r_grid.empty()) throw Error(Errc::InvalidArgument, "empty radius grid");
  GromovVerdict v;
  v.cauchy_tolerance = 2.0 / mesh + 0.02;

  std::vector<cplx> centers{0.0};
  for (double rho : {0.25, 0.5, 0.75}) {
    if (rho > options.a_max + 1e-12) continue;
    for (int k = 0; k < 8; ++k) centers.push_back(std::polar(rho, std::numbers::pi * k / 4.0));
  }

  std::set<double> unbounded;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    std::size_t best_violations = std::numeric_limits<std::size_t>::max();
    std::vector<std::pair<double, double>> best_energy;
    cplx best_center = 0.0;
    for (const cplx a : centers) {
      const RationalMap g = compose_automorphism(seq[i], a);
      std::vector<std::pair<double, double>> energy;
      std::size_t violations = 0;
      for (double r : r_grid) {
        const double e = fs_characteristic_boundary(g, r, options.quadrature);
        energy.emplace_back(r, e);
        if (e > bound(r)) ++violations;
      }
      if (violations < best_violations) {
        best_violations = violations;
        best_energy = std::move(energy);
        best_center = a;
      }
      if (violations == 0) break;
    }
    for (const auto& [r, e] : best_energy) {
      if (e > bound(r)) {
        v.violations.emplace_back(static_cast<int>(i), r);
        unbounded.insert(r);
      }
    }
    v.energies.push_back(std::move(best_energy));
    v.automorphism_centers.push_back(best_center);
    if (best_violations == 0) v.candidate_indices.push_back(static_cast<int>(i));
  }
  v.unbounded_radii.assign(unbounded.begin(), unbounded.end());

  if (v.candidate_indices.size() < static_cast<std::size_t>(options.min_subsequence)) {
    v.pass = false;
    return v;
  }

  std::vector<RationalMap> candidates;
  for (int i : v.candidate_indices) candidates.push_back(seq[static_cast<std::size_t>(i)]);
  const double radius = *std::max_element(r_grid.begin(), r_grid.end());
  if (options.eps < radius / 4.0) {
    v.bubbles_detected = detect_concentration(candidates, radius, options.eps, options.quadrature);
  }

  std::vector<GraphSample> graphs;
  for (const auto& f : candidates) graphs.push_back(graph_sample(f, radius, mesh));
  for (const auto& k : v.bubbles_detected) {
    // Bubble image: the last map on the concentration ball, w -> f(z0 + eps w).
    const auto image = disc_image(affine_pullback(candidates.back(), k.location, options.eps), mesh);
    for (auto& s : graphs) augment(s, k.location, image);
  }

  const std::size_t n = graphs.size();
  v.pairwise_distances.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      v.pairwise_distances[i][j] = v.pairwise_distances[j][i] = hausdorff_distance(graphs[i], graphs[j]);
    }
  }

  // Greedy from the tail: keep a map if it is within tolerance of every map already kept.
  std::vector<std::size_t> kept{n - 1};
  for (std::size_t i = n - 1; i-- > 0;) {
    double worst = 0.0;
    std::size_t worst_j = kept.front();
    for (std::size_t j : kept) {
      if (v.pairwise_distances[i][j] > worst) {
        worst = v.pairwise_distances[i][j];
        worst_j = j;
      }
    }
    if (worst <= v.cauchy_tolerance) {
      kept.push_back(i);
    } else if (!v.witness) {
      v.witness = {{v.candidate_indices[i], v.candidate_indices[worst_j]}, worst};
    }
  }
  std::reverse(kept.begin(), kept.end());
  for (std::size_t k : kept) v.subsequence_indices.push_back(v.candidate_indices[k]);
  v.pass = kept.size() >= static_cast<std::size_t>(options.min_subsequence);
  if (v.pass) v.witness.reset();
  return v;
}

nlohmann::json GromovVerdict::to_json() const {
  nlohmann::json j;
  j["verdict"] = pass ? "PASS" : "FAIL";
  j["energies"] = nlohmann::json::array();
  for (const auto& per_map : energies) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [r, e] : per_map) rows.push_back({r, e});
    j["energies"].push_back(rows);
  }
  j["automorphism_centers"] = nlohmann::json::array();
  for (const auto& a : automorphism_centers) j["automorphism_centers"].push_back({a.real(), a.imag()});
  j["violations"] = nlohmann::json::array();
  for (const auto& [i, r] : violations) j["violations"].push_back({{"map", i}, {"r", r}});
  j["unbounded_radii"] = unbounded_radii;
  j["candidate_indices"] = candidate_indices;
  j["subsequence_indices"] = subsequence_indices;
  j["pairwise_distances"] = pairwise_distances;
  j["cauchy_tolerance"] = cauchy_tolerance;
  j["bubbles_detected"] = nlohmann::json::array();
  for (const auto& b : bubbles_detected) {
    j["bubbles_detected"].push_back({{"location", {b.location.real(), b.location.imag()}}, {"mass", b.mass}});
  }
  if (witness) {
    j["witness"] = {{"pair", {witness->first.first, witness->first.second}}, {"distance", witness->second}};
  }
  return j;
}

}  // namespace vdlab
