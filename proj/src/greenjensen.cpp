#include "vdlab/greenjensen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

#include "vdlab/error.hpp"

namespace vdlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kAtomBand = 1e-9;
constexpr int kPanelOrder = 16;
constexpr int kMaxPanelDepth = 40;

struct GaussRule {
  std::vector<double> nodes;    // on [0, 1]
  std::vector<double> weights;  // sum to 1
};

// Gauss-Legendre nodes by Newton iteration on P_n, mapped to [0, 1].
GaussRule make_gauss_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = 0.5 * (1.0 - x);
    rule.nodes[hi] = 0.5 * (1.0 + x);
    rule.weights[lo] = rule.weights[hi] = 0.5 * w;
  }
  return rule;
}

const GaussRule& gauss_rule(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_rule(n)).first;
  return it->second;
}

struct MeanResult {
  double value;
  bool converged;
};

// Angular mean of f on |z| = rho. Each level doubles the sample count; convergence compares
// the full trapezoid sum with its even-indexed half.
MeanResult angular_mean(const RealFunction& f, double rho, const QuadratureSpec& q) {
  const std::size_t n0 = static_cast<std::size_t>(q.n_theta);
  double sum = 0.0;
  double half_sum = 0.0;
  for (std::size_t k = 0; k < n0; ++k) {
    const double v = f(std::polar(rho, kTwoPi * static_cast<double>(k) / static_cast<double>(n0)));
    sum += v;
    if (k % 2 == 0) half_sum += v;
  }
  std::size_t n = n0;
  double mean = sum / static_cast<double>(n);
  if (q.max_refine == 0) return {mean, true};
  double prev = half_sum / static_cast<double>(n / 2);
  for (int level = 0;; ++level) {
    if (!std::isfinite(mean)) return {mean, false};
    if (std::abs(mean - prev) <= q.tol * std::max(1.0, std::abs(mean))) return {mean, true};
    if (level >= q.max_refine) return {mean, false};
    double extra = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double theta = kTwoPi * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
      extra += f(std::polar(rho, theta));
    }
    sum += extra;
    n *= 2;
    prev = mean;
    mean = sum / static_cast<double>(n);
  }
}

// integral_0^1 kernel(s) * angular_mean(u, r * s^3) ds by composite Gauss-Legendre panels with
// adaptive bisection. The cubic grading smooths the t*log(1/t) kernel at the origin.
double radial_integral(const RealFunction& u, double r, const QuadratureSpec& q,
                       double (*kernel)(double)) {
  const int order = std::min(kPanelOrder, q.n_radial);
  const int panels = std::max(1, q.n_radial / order);
  const GaussRule& rule = gauss_rule(order);

  auto panel = [&](double a, double b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double s = a + (b - a) * rule.nodes[i];
      const double rho = r * s * s * s;
      const MeanResult m = angular_mean(u, rho, q);
      if (!m.converged) {
        throw Error(Errc::NoConvergence, "angular mean did not reach the requested tolerance");
      }
      acc += rule.weights[i] * kernel(s) * m.value;
    }
    return acc * (b - a);
  };

  std::vector<double> coarse(static_cast<std::size_t>(panels));
  double estimate = 0.0;
  for (int p = 0; p < panels; ++p) {
    coarse[static_cast<std::size_t>(p)] =
        panel(static_cast<double>(p) / panels, static_cast<double>(p + 1) / panels);
    estimate += coarse[static_cast<std::size_t>(p)];
  }
  if (q.max_refine == 0) return estimate;

  const double eps = q.tol * std::max(1.0, std::abs(estimate));
  auto refine = [&](auto&& self, double a, double b, double whole, int depth) -> double {
    const double mid = 0.5 * (a + b);
    const double left = panel(a, mid);
    const double right = panel(mid, b);
    const double fine = left + right;
    const double err = std::abs(fine - whole);
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(fine);
    if (err <= std::max(eps * (b - a), floor)) return fine;
    if (depth >= kMaxPanelDepth) {
      throw Error(Errc::NoConvergence, "radial panel refinement exhausted");
    }
    return self(self, a, mid, left, depth + 1) + self(self, mid, b, right, depth + 1);
  };
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    total += refine(refine, static_cast<double>(p) / panels, static_cast<double>(p + 1) / panels,
                    coarse[static_cast<std::size_t>(p)], 0);
  }
  return total;
}

// t log(1/t) dt with t = s^3.
double nabla_kernel(double s) {
  if (s <= 0.0) return 0.0;
  const double s2 = s * s;
  return 9.0 * s2 * s2 * s * std::log(1.0 / s);
}

// t dt with t = s^3.
double area_kernel(double s) {
  const double s2 = s * s;
  return 3.0 * s2 * s2 * s;
}

void check_radius(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(Errc::InvalidArgument, "radius must be positive");
}

}  // namespace

void QuadratureSpec::validate() const {
  if (n_theta < 16 || (n_theta & (n_theta - 1)) != 0) {
    throw Error(Errc::InvalidArgument, "n_theta must be a power of two >= 16");
  }
  if (n_radial < 1) throw Error(Errc::InvalidArgument, "n_radial must be positive");
  if (!(tol >= 1e-12)) throw Error(Errc::InvalidArgument, "tol must be >= 1e-12");
  if (max_refine < 0) throw Error(Errc::InvalidArgument, "max_refine must be nonnegative");
}

QuadratureSpec QuadratureSpec::doubled() const {
  QuadratureSpec d = *this;
  d.n_theta *= 2;
  d.n_radial *= 2;
  return d;
}

QuadratureSpec QuadratureSpec::fixed(int n_theta, int n_radial) {
  QuadratureSpec q;
  q.n_theta = n_theta;
  q.n_radial = n_radial;
  q.max_refine = 0;
  return q;
}

double boundary_mean(const RealFunction& phi, double r, const QuadratureSpec& q) {
  q.validate();
  check_radius(r);
  const MeanResult m = angular_mean(phi, r, q);
  if (!m.converged) {
    throw Error(Errc::NoConvergence, "boundary mean did not reach the requested tolerance");
  }
  return m.value;
}

double nabla_integral(const RadialDensity& u, double r, const QuadratureSpec& q) {
  q.validate();
  check_radius(r);
  double atoms = 0.0;
  for (const auto& a : u.atoms) {
    const double m = std::abs(a.location);
    if (std::abs(m - r) < kAtomBand) throw Error(Errc::AtomOnBoundary, "atom on |z| = r");
    if (m < r) atoms += a.mass * std::log(r / m);
  }
  if (!u.eval) return atoms;
  return kTwoPi * r * r * radial_integral(u.eval, r, q, nabla_kernel) + atoms;
}

double area_integral(const RadialDensity& u, double r, const QuadratureSpec& q) {
  q.validate();
  check_radius(r);
  double atoms = 0.0;
  for (const auto& a : u.atoms) {
    const double m = std::abs(a.location);
    if (std::abs(m - r) < kAtomBand) throw Error(Errc::AtomOnBoundary, "atom on |z| = r");
    if (m < r) atoms += a.mass;
  }
  if (!u.eval) return atoms;
  return kTwoPi * r * r * radial_integral(u.eval, r, q, area_kernel) + atoms;
}

double jensen_residual(const RealFunction& phi, const RadialDensity& ddc_phi, double r,
                       const QuadratureSpec& q) {
  return nabla_integral(ddc_phi, r, q) - boundary_mean(phi, r, q) + phi(0.0);
}

// ---------------------------------------------------------------------------- BivariatePoly

BivariatePoly::BivariatePoly(std::map<std::pair<int, int>, double> terms) : terms_(std::move(terms)) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->first.first < 0 || it->first.second < 0) {
      throw Error(Errc::InvalidArgument, "negative exponent in bivariate polynomial");
    }
    it = it->second == 0.0 ? terms_.erase(it) : std::next(it);
  }
}

double BivariatePoly::operator()(cplx z) const {
  double acc = 0.0;
  for (const auto& [e, c] : terms_) {
    acc += c * std::pow(z.real(), e.first) * std::pow(z.imag(), e.second);
  }
  return acc;
}

BivariatePoly BivariatePoly::laplacian() const {
  std::map<std::pair<int, int>, double> out;
  for (const auto& [e, c] : terms_) {
    const auto [i, j] = e;
    if (i >= 2) out[{i - 2, j}] += c * i * (i - 1);
    if (j >= 2) out[{i, j - 2}] += c * j * (j - 1);
  }
  return BivariatePoly(std::move(out));
}

int BivariatePoly::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e.first + e.second);
  return d;
}

RadialDensity BivariatePoly::ddc() const {
  const BivariatePoly lap = laplacian();
  RadialDensity u;
  if (lap.terms().empty()) return u;
  u.eval = [lap](cplx z) { return lap(z) / kTwoPi; };
  return u;
}

}  // namespace vdlab
