#pragma once

// Pseudo-hyperbolic geometry of the disk, ball automorphisms, closed-form
// Kobayashi geodesics of the ball with their left inverses, the
// Caratheodory lower-bound search and the Royden-Wong boundary checks.

#include <optional>
#include <vector>

#include "holoext/core.hpp"
#include "holoext/domains.hpp"
#include "holoext/poly.hpp"
#include "holoext/search.hpp"

namespace holoext {

inline constexpr double kDistinctThreshold = 1e-12;

/// Involutive disk automorphism m_a(z) = (a - z) / (1 - conj(a) z).
inline Complex mobius_disk(Complex a, Complex z) {
  if (!(std::abs(a) < 1.0)) throw DomainError("mobius_disk: |a| must be < 1");
  if (std::abs(z) > 1.0 + 1e-12) throw DomainError("mobius_disk: |z| must be <= 1");
  return (a - z) / (1.0 - std::conj(a) * z);
}

/// The involutive automorphism of B_d exchanging a and 0:
///   phi_a(z) = (a - P_a z - s Q_a z) / (1 - <z, a>),  s = sqrt(1 - |a|^2),
/// with P_a the orthogonal projection onto span{a} and Q_a = I - P_a.
/// For a = 0 this is z -> -z.
inline Point ball_automorphism_to_origin(const Point& a, const Point& z) {
  if (a.size() != z.size()) throw InvalidInput("ball automorphism: dimension mismatch");
  require_point(a, a.size(), "automorphism center");
  require_point(z, a.size(), "automorphism argument");
  const double a2 = a.squaredNorm();
  if (!(a2 < 1.0)) throw DomainError("ball automorphism center must satisfy |a| < 1");
  if (a2 == 0.0) return -z;
  const Complex za = inner(z, a);
  const Point pz = (za / a2) * a;
  const Point qz = z - pz;
  const double s = std::sqrt(1.0 - a2);
  return (a - pz - s * qz) / (1.0 - za);
}

/// Ordered pair of distinct points.
class Datum {
 public:
  Datum(Point lambda, Point mu) : lambda_(std::move(lambda)), mu_(std::move(mu)) {
    if (lambda_.size() != mu_.size() || lambda_.size() == 0) throw InvalidInput("datum points must share a positive dimension");
    require_point(lambda_, lambda_.size(), "datum lambda");
    require_point(mu_, mu_.size(), "datum mu");
    if ((lambda_ - mu_).norm() <= kDistinctThreshold) throw InvalidInput("datum points are not distinct");
  }

  const Point& lambda() const { return lambda_; }
  const Point& mu() const { return mu_; }
  int dim() const { return static_cast<int>(lambda_.size()); }

  void require_in(const DomainSpec& domain) const {
    if (dim() != domain.dim()) throw InvalidInput("datum dimension does not match the domain");
    if (!membership(domain, lambda_) || !membership(domain, mu_)) throw DomainError("datum is not inside " + domain.name());
  }

 private:
  Point lambda_;
  Point mu_;
};

/// Polynomial map D -> C^d, zeta -> sum_k coefficients[k] zeta^k.
struct AnalyticDisc {
  std::vector<Point> coefficients;

  int degree() const { return static_cast<int>(coefficients.size()) - 1; }
  int dim() const { return coefficients.empty() ? 0 : static_cast<int>(coefficients.front().size()); }

  Point operator()(Complex zeta) const {
    if (coefficients.empty()) throw InvalidInput("empty analytic disc");
    Point acc = coefficients.back();
    for (int k = degree() - 1; k >= 0; --k) acc = (acc * zeta + coefficients[static_cast<std::size_t>(k)]).eval();
    return acc;
  }
};

/// Largest closure excess of the disc image over a `grid`-point circle.
inline double disc_boundary_excess(const DomainSpec& domain, const AnalyticDisc& disc, int grid = 512) {
  double worst = 0.0;
  for (int i = 0; i < grid; ++i) worst = std::max(worst, closure_excess(domain, disc(std::polar(1.0, 2.0 * kPi * i / grid))));
  return worst;
}

struct KobayashiResult {
  AnalyticDisc disc;
  Complex param_lambda;
  Complex param_mu;
  double distance = 0.0;
};

/// Kobayashi extremal of B_d through the datum: the complex line through
/// lambda and mu meets the ball in a disc of center c (the point of the line
/// nearest 0) and radius R = sqrt(1 - |c|^2), parametrized affinely by
/// zeta -> c + R zeta v. Through the origin this is the linear disc
/// zeta -> zeta mu / |mu|.
inline KobayashiResult kobayashi_ball(const Datum& datum) {
  const DomainSpec ball = DomainSpec::ball(datum.dim());
  datum.require_in(ball);
  const Point& lam = datum.lambda();
  const Point& mu = datum.mu();
  const Point dir = (mu - lam) / (mu - lam).norm();
  const Point center = lam - inner(lam, dir) * dir;
  const double radius = std::sqrt(std::max(0.0, 1.0 - center.squaredNorm()));
  KobayashiResult out;
  out.disc.coefficients = {center, radius * dir};
  out.param_lambda = inner(lam - center, dir) / radius;
  out.param_mu = inner(mu - center, dir) / radius;
  out.distance = rho(out.param_lambda, out.param_mu);
  return out;
}

/// Left inverse of a linear disc zeta -> zeta u through 0 with |u| = 1:
/// phi(z) = sum z_j conj(u_j), so phi(zeta u) = zeta and |phi| <= 1 on the ball.
inline Poly left_inverse_ball(const AnalyticDisc& disc) {
  if (disc.degree() != 1) throw UnsupportedDomain("left_inverse_ball needs a degree-1 disc");
  if (disc.coefficients[0].norm() > 1e-12) throw UnsupportedDomain("left_inverse_ball needs a disc through the origin");
  const Point& u = disc.coefficients[1];
  if (std::abs(u.norm() - 1.0) > 1e-10) throw UnsupportedDomain("left_inverse_ball needs a unit direction");
  return Poly::affine(0.0, u.conjugate());
}

/// A competitor map Omega -> D: a polynomial, optionally precomposed with the
/// ball automorphism exchanging `ball_center` and 0.
struct CaratheodoryMap {
  std::optional<Point> ball_center;
  Poly poly;

  Complex operator()(const Point& z) const {
    return ball_center ? poly(ball_automorphism_to_origin(*ball_center, z)) : poly(z);
  }
};

struct CaratheodoryResult {
  double value = 0.0;
  CaratheodoryMap map;
  int best_degree = 0;
  std::vector<StageOutcome> stages;
  long evaluations = 0;
};

/// Grid size of the sup constraint in the Caratheodory search (per boundary
/// component) and of the dense certification grid.
inline constexpr int kCaratheodorySearchGrid = 2048;
inline constexpr int kCaratheodoryCertifyGrid = 16384;

/// Certified lower bound for the Caratheodory distance of the datum: the best
/// rho(p(lambda), p(mu)) over searched polynomials p with sup |p| <= 1 on the
/// boundary. In the ball the datum is first moved to (0, phi_lambda(mu)) by
/// an automorphism, which preserves both the sphere and the distance.
inline CaratheodoryResult caratheodory_search(const DomainSpec& domain, const Datum& datum, int degree, long budget,
                                              std::uint64_t seed) {
  datum.require_in(domain);
  if (!domain.bounded()) throw UnsupportedDomain("Caratheodory search needs a bounded domain");
  PolySearchProblem problem;
  problem.dim = domain.dim();
  problem.atlas = boundary_atlas(domain, kCaratheodoryCertifyGrid);
  problem.search_grid = kCaratheodorySearchGrid;
  CaratheodoryMap map;
  if (domain.kind() == DomainKind::ball) {
    map.ball_center = datum.lambda();
    problem.lambda = Point::Zero(domain.dim());
    problem.mu = ball_automorphism_to_origin(datum.lambda(), datum.mu());
    problem.affine_sup = AffineSup::ball;
  } else {
    problem.lambda = datum.lambda();
    problem.mu = datum.mu();
    if (domain.kind() == DomainKind::bidisk) problem.affine_sup = AffineSup::bidisk;
  }
  const auto found = maximize_separation(problem, degree, budget, seed);
  map.poly = found.map;
  CaratheodoryResult out;
  out.map = map;
  out.value = rho(map(datum.lambda()), map(datum.mu()));
  out.best_degree = found.degree;
  out.stages = found.stages;
  out.evaluations = found.evaluations;
  return out;
}

/// h(z) = sum_k coefficients[k] z^k, a C^d-valued polynomial on the circle.
struct BoundaryFunctional {
  std::vector<Point> coefficients;

  Point operator()(Complex z) const {
    if (coefficients.empty()) throw InvalidInput("empty boundary functional");
    Point acc = coefficients.back();
    for (int k = static_cast<int>(coefficients.size()) - 2; k >= 0; --k) {
      acc = (acc * z + coefficients[static_cast<std::size_t>(k)]).eval();
    }
    return acc;
  }
};

struct RoydenWongReport {
  bool boundary_ae_pass = false;
  bool sign_pass = false;
  double worst_value = 0.0;
  double worst_boundary_residual = 0.0;
};

/// Checks the two boundary conditions satisfied by a Kobayashi extremal k of a
/// smooth convex domain: k(z) lies on the boundary for z on the circle, and
/// Re[(lambda - k(z)) . (conj(z) h(z))] < 0 for every sampled lambda.
inline RoydenWongReport royden_wong_check(const DomainSpec& domain, const AnalyticDisc& disc, const BoundaryFunctional& h,
                                          const std::vector<Point>& interior_samples, int boundary_grid) {
  if (!domain.smooth() || !domain.convex()) throw UnsupportedDomain("Royden-Wong check needs a smooth bounded convex domain");
  if (boundary_grid < 1) throw InvalidInput("boundary grid must be >= 1");
  if (disc.dim() != domain.dim()) throw InvalidInput("disc dimension does not match the domain");
  RoydenWongReport report;
  report.worst_value = -std::numeric_limits<double>::infinity();
  double h_max = 0.0;
  std::vector<std::pair<Point, Point>> boundary;  // (k(z), conj(z) h(z))
  boundary.reserve(static_cast<std::size_t>(boundary_grid));
  for (int i = 0; i < boundary_grid; ++i) {
    const Complex z = std::polar(1.0, 2.0 * kPi * i / boundary_grid);
    const Point kz = disc(z);
    const Point hz = h(z);
    if (hz.size() != domain.dim()) throw InvalidInput("boundary functional dimension does not match the domain");
    h_max = std::max(h_max, hz.norm());
    report.worst_boundary_residual = std::max(report.worst_boundary_residual, std::abs(quadratic_form(domain, kz) - 1.0));
    boundary.emplace_back(kz, std::conj(z) * hz);
  }
  if (h_max <= 1e-14) throw DegenerateNormal("boundary functional vanishes on the grid");
  report.boundary_ae_pass = report.worst_boundary_residual <= 1e-8;
  for (const auto& lambda : interior_samples) {
    require_point(lambda, domain.dim(), "interior sample");
    for (const auto& [kz, zh] : boundary) {
      report.worst_value = std::max(report.worst_value, bilinear(lambda - kz, zh).real());
    }
  }
  report.sign_pass = report.worst_value < 0.0;
  return report;
}

}  // namespace holoext
