#pragma once

// Identities for maps P^1 -> P^1: Riemann-Hurwitz and its logarithmic form, Mason's abc
// theorem, the log-metric tautological identity, and the tautological inequality experiment.

#include <string>
#include <vector>

#include <json.hpp>

#include "vdlab/exact.hpp"
#include "vdlab/nevanlinna.hpp"

namespace vdlab {

/// A point [x0 : x1] of P^1 with Gaussian-rational coordinates; infinity is [0 : 1].
struct BoundaryPoint {
  GaussRational x0{1};
  GaussRational x1{0};

  static BoundaryPoint finite(GaussRational a) { return {GaussRational(1), std::move(a)}; }
  static BoundaryPoint infinity() { return {GaussRational(0), GaussRational(1)}; }
  std::vector<cplx> coords() const { return {x0.to_complex(), x1.to_complex()}; }
  std::string to_string() const;
};

/// `0`, `1`, `inf`, or any coefficient token of the polynomial grammar (must be exact).
BoundaryPoint parse_boundary_point(std::string_view text);

/// Comma-separated boundary points, e.g. `0,1,inf`.
std::vector<BoundaryPoint> parse_boundary(std::string_view text);

/// Log metric on (P^1, D): w(x) = (1 + |x|^2)^{-1} prod_i sigma(x, a_i)^{-1}, sigma chordal.
class LogMetric {
 public:
  /// Throws InvalidArgument unless the points are nonempty and pairwise distinct.
  explicit LogMetric(std::vector<BoundaryPoint> boundary);

  const std::vector<BoundaryPoint>& boundary() const { return boundary_; }
  std::size_t size() const { return boundary_.size(); }

  /// log w at a homogeneous point; +infinity on the boundary.
  double log_weight(const std::vector<cplx>& x) const;

  /// log ||f_* d/dz||_log at z, i.e. log(|f'(z)| w(f(z))) in homogeneous form.
  double log_norm_derivative(const RationalMap& f, cplx z) const;

  /// a0 F1 - a1 F0 for each boundary point a; zeros are the preimages of a.
  std::vector<Poly> preimage_polys(const RationalMap& f) const;

  /// The divisor {prod_a (a0 x1 - a1 x0) = 0}.
  MetricizedDivisor as_divisor() const;

 private:
  std::vector<BoundaryPoint> boundary_;
};

/// F0 F1' - F1 F0': its zeros in C are the finite ramification points with their orders.
Poly wronskian(const RationalMap& f);

struct RamificationPoint {
  cplx z;
  bool at_infinity = false;
  int ord = 1;
  bool off_boundary = true;
};

struct RamificationRecord {
  std::vector<RamificationPoint> points;
  int total() const;
};

/// Ramification over all of P^1, the point at infinity through the chart w = 1/z.
/// With a LogMetric, flags the points whose image is off the boundary.
RamificationRecord ramification(const RationalMap& f, const LogMetric* d = nullptr);

struct IdentityVerdict {
  std::string identity;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // lhs - rhs; a slack for inequalities
  bool holds = false;
  bool exact = false;
  nlohmann::json details = nlohmann::json::object();
  nlohmann::json atoms = nlohmann::json::array();

  nlohmann::json to_json() const;
};

/// -2d = -2 - Ram_f for a map P^1 -> P^1 of degree d. Throws ConstantMap.
IdentityVerdict rh_check(const RationalMap& f);

/// d (|D| - 2) = -2 + n_red - Ram_away. Throws ConstantMap.
IdentityVerdict log_rh_check(const RationalMap& f, const LogMetric& d);

/// max(deg a, deg b, deg c) <= deg rad(abc) - 1 with c = a + b; residual is the slack.
/// Throws NotCoprime or ExactModeRequired.
IdentityVerdict mason_check(const Poly& a, const Poly& b);

/// nabla integral of f^* c_1 of the log metric: (|D| - 2) times the Fubini-Study characteristic.
double taut_lhs(const RationalMap& f, const LogMetric& d, double r, const QuadratureSpec& q = {});

/// The tautological identity at radius r:
///   lhs = -phi(0) + mean_{|z|=r} phi + N_trunc(D, r) - sum_{ramified z, f(z) not in D} ord log(r/|z|)
/// with phi = log ||f_* d/dz||_log; holds when |lhs - rhs| <= tol.
/// Throws OriginOnBoundaryDivisor, RamifiedAtOrigin, RootOnBoundary.
IdentityVerdict taut_identity_check(const RationalMap& f, const LogMetric& d, double r,
                                    const QuadratureSpec& q = {}, double tol = 1e-5);

struct TautTrendRow {
  int n = 0;
  double r = 0.0;
  double lhs = 0.0;
  double normalizer = 0.0;
  double ell = 0.0;  // lhs / normalizer
};

struct TautTrendReport {
  std::vector<TautTrendRow> rows;
  std::vector<double> radii;
  std::vector<double> tail_max;  // per radius, max of ell over n >= tail_start
  std::vector<bool> flagged;     // tail_max > tol
  int tail_start = 0;
  double tol = 0.0;

  bool pass() const;
  std::string to_csv() const;
  nlohmann::json to_json() const;
};

/// Normalized pairings of the sequence with c_1 of the log metric, against the hyperplane class.
/// Throws NormalizerNotDiverging for non-diverging normalizers, DegenerateInput for bounded
/// degrees, BasePointOnDivisor when some f_n(0) is farther than base_bound in Weil distance.
TautTrendReport taut_inequality_experiment(const std::vector<RationalMap>& seq, const std::vector<int>& indices,
                                           const LogMetric& d, const std::vector<double>& radii,
                                           int tail_start, double tol = 1e-2, double base_bound = 10.0,
                                           const QuadratureSpec& q = {});

}  // namespace vdlab
