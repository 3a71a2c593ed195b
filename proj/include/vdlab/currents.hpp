#pragma once

// Normalized characteristic currents of degenerating sequences, probed on a finite basis of
// test forms.

#include <functional>
#include <string>
#include <vector>

#include "vdlab/nevanlinna.hpp"

namespace vdlab {

/// A smooth function phi on P^n; it enters pairings through dd^c phi.
struct ExactForm {
  std::string label;
  std::function<double(const std::vector<cplx>&)> phi;
  double sup_abs = 1.0;
};

struct TestFormBasis {
  std::vector<MetricizedDivisor> curvature_forms;  // entry `normalizer_index` is the ample class H
  std::size_t normalizer_index = 0;
  std::vector<ExactForm> exact_forms;

  void validate() const;
};

struct CurrentSample {
  int n = 0;
  double r = 0.0;
  double normalizer = 0.0;
  std::vector<double> pairings;  // curvature forms first, then exact forms
};

/// T_f(r)[omega_j] / T_f(r)[H] for each basis element. Exact forms pair through
/// mean_{|z|=r} phi(f) - phi(f(0)). Throws DegenerateNormalizer when T_f(r)[H] <= tol.
CurrentSample normalized_pairings(const RationalMap& f, int n, double r, const TestFormBasis& basis,
                                  const QuadratureSpec& q = {});

struct Cluster {
  double center = 0.0;
  double diameter = 0.0;
  int size = 0;
};

struct LimitPointReport {
  double r = 0.0;
  std::vector<std::vector<Cluster>> per_element;  // one clustering per basis element
  std::vector<bool> certified;                    // single cluster of diameter < tol
};

/// Clusters the last half of the samples at each radius, per basis element. Samples are
/// grouped by r; each group needs at least 8 entries.
std::vector<LimitPointReport> limit_points(const std::vector<CurrentSample>& samples, double tol = 1e-6);

struct MarginRow {
  int n = 0;
  double r = 0.0;
  std::string divisor;
  double pairing = 0.0;
  double bound = 0.0;   // (c_F - B) / normalizer
  double margin = 0.0;  // pairing - bound
};

/// For each effective divisor F: the normalized pairing against the lower bound implied by
/// T_F >= log||f^* 1_F||(0) + c_F with weil(F, f_n(0)) <= base_bound.
/// Throws BasePointOnDivisor when some f_n(0) is farther than base_bound in Weil distance.
std::vector<MarginRow> positivity_check(const std::vector<RationalMap>& seq, const std::vector<int>& indices,
                                        const std::vector<double>& radii, const MetricizedDivisor& ample,
                                        const std::vector<MetricizedDivisor>& effective,
                                        double base_bound = 10.0, const QuadratureSpec& q = {});

struct DecayRow {
  int n = 0;
  double r = 0.0;
  double pairing = 0.0;  // normalized
  double bound = 0.0;    // 2 sup|phi| / normalizer
  double margin = 0.0;   // bound - |pairing|
  double normalizer = 0.0;
};

/// Exact-form pairings against their O(1/normalizer) bound. Throws NormalizerNotDiverging if at
/// some radius the normalizers do not at least double from the first map to the last.
std::vector<DecayRow> exactness_decay(const std::vector<RationalMap>& seq, const std::vector<int>& indices,
                                      const ExactForm& phi, const MetricizedDivisor& ample,
                                      const std::vector<double>& radii, const QuadratureSpec& q = {});

std::string margins_to_csv(const std::vector<MarginRow>& rows);
std::string decay_to_csv(const std::vector<DecayRow>& rows);

/// Squared chordal distance to a fixed point, sup 1.
ExactForm chordal_square_form(const std::vector<cplx>& point, std::string label);

}  // namespace vdlab
