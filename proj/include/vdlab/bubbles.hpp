#pragma once

// Discs with bubbles: the extended nabla integral, graph samples in Δ x P^n, their Hausdorff
// distance, energy concentration, and a desk-scale compactness harness.

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vdlab/nevanlinna.hpp"
#include "vdlab/projective.hpp"

namespace vdlab {

/// A tree of rational curves P^1 -> P^n glued to the disc at `attach`.
struct BubbleTree {
  cplx attach;
  std::vector<RationalMap> components;
  std::vector<std::pair<int, int>> edges;
  std::vector<double> energies;  // per component: component degree * divisor degree

  double total_energy() const;
};

/// Tree whose energies are the degree pairings with D.
BubbleTree make_bubble(cplx attach, std::vector<RationalMap> components,
                       std::vector<std::pair<int, int>> edges, const MetricizedDivisor& d);

class DiscWithBubbles {
 public:
  /// Throws InvalidArgument unless attach points are distinct with 0 < |attach| < 1 and every
  /// tree is connected and acyclic.
  DiscWithBubbles(RationalMap base, std::vector<BubbleTree> bubbles);

  const RationalMap& base() const { return base_; }
  const std::vector<BubbleTree>& bubbles() const { return bubbles_; }

 private:
  RationalMap base_;
  std::vector<BubbleTree> bubbles_;
};

/// characteristic_geometric(base) + sum over |attach| < r of log(r/|attach|) * tree energy.
double nabla_bubble(const DiscWithBubbles& b, const MetricizedDivisor& d, double r,
                    const QuadratureSpec& q = {});

struct GraphPoint {
  cplx z;
  std::vector<cplx> x;  // unit-norm homogeneous coordinates
};

struct GraphSample {
  std::vector<GraphPoint> points;
  int mesh = 0;
  double radius = 0.0;
};

/// Points (z, f(z)) on a polar grid of |z| <= radius: the center plus `mesh` rings of `mesh`
/// angles each. Requires mesh >= 16.
GraphSample graph_sample(const RationalMap& f, double radius, int mesh);

/// Graph of the base map with every bubble's tree image appended at its attach point.
GraphSample graph_sample(const DiscWithBubbles& b, double radius, int mesh);

/// Image of a map P^1 -> P^n sampled on both affine charts of P^1, each as in disc_image.
std::vector<std::vector<cplx>> sphere_image(const RationalMap& g, int mesh);

/// Image of a map sampled on the closed unit disc, on polar rings refined until neighbouring
/// rings are within 1/mesh in the disc and neighbouring samples within 2/mesh chordally.
std::vector<std::vector<cplx>> disc_image(const RationalMap& g, int mesh);

/// Append {attach} x image to a sample.
void augment(GraphSample& sample, cplx attach, const std::vector<std::vector<cplx>>& image);

/// Distance max(|z - z'|, chordal(x, x')) on Δ x P^n.
double product_distance(const GraphPoint& a, const GraphPoint& b);

/// Symmetric Hausdorff distance under the product metric. Throws EmptySample.
double hausdorff_distance(const GraphSample& a, const GraphSample& b);

struct Concentration {
  cplx location;
  double mass = 0.0;
};

/// Points where the pullback Fubini-Study mass in an eps-ball stays >= 0.5 along the sequence
/// while the mass elsewhere in |z| < r decays. Masses are evaluated at the last map.
std::vector<Concentration> detect_concentration(const std::vector<RationalMap>& seq, double r,
                                                double eps, const QuadratureSpec& q = {});

/// f composed with the disc automorphism z -> e^{i angle}(z - a)/(1 - conj(a) z), homogenized.
RationalMap compose_automorphism(const RationalMap& f, cplx a, double angle = 0.0);

/// w -> f(center + scale * w).
RationalMap affine_pullback(const RationalMap& f, cplx center, double scale);

/// Fubini-Study characteristic through the Jensen boundary form mean log||F|| - log||F(0)||.
double fs_characteristic_boundary(const RationalMap& f, double r, const QuadratureSpec& q = {});

struct GromovOptions {
  double a_max = 0.5;      // largest |a| in the automorphism grid
  double eps = 0.05;       // concentration ball radius
  int min_subsequence = 3;
  QuadratureSpec quadrature{};
};

struct GromovVerdict {
  bool pass = false;
  std::vector<std::vector<std::pair<double, double>>> energies;  // per map: (r, energy)
  std::vector<cplx> automorphism_centers;                         // chosen a per map
  std::vector<std::pair<int, double>> violations;                 // (map index, r)
  std::vector<double> unbounded_radii;
  std::vector<int> candidate_indices;
  std::vector<std::vector<double>> pairwise_distances;  // over candidate_indices
  std::vector<int> subsequence_indices;
  std::vector<Concentration> bubbles_detected;
  double cauchy_tolerance = 0.0;
  std::optional<std::pair<std::pair<int, int>, double>> witness;  // failing pair and distance

  nlohmann::json to_json() const;
};

/// Bounded-energy families admit graph-Hausdorff Cauchy subsequences once graphs are augmented
/// with detected bubbles. Requires at least 8 maps.
GromovVerdict gromov_harness(const std::vector<RationalMap>& seq,
                             const std::function<double(double)>& bound,
                             const std::vector<double>& r_grid, int mesh,
                             const GromovOptions& options = {});

}  // namespace vdlab
