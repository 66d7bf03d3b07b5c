#pragma once

// The domain zoo: bidisk, unit ball B_d, symmetrized bidisk G and the
// ellipsoid family r(z) = sum a_j |z_j|^2 + sum b_j Re(z_j^2) - 1, together
// with boundary parametrizations and the two convexity tests.

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "holoext/core.hpp"

namespace holoext {

enum class DomainKind { bidisk, ball, symmetrized_bidisk, ellipsoid };

inline std::string to_string(DomainKind k) {
  switch (k) {
    case DomainKind::bidisk: return "bidisk";
    case DomainKind::ball: return "ball";
    case DomainKind::symmetrized_bidisk: return "symmetrized_bidisk";
    case DomainKind::ellipsoid: return "ellipsoid";
  }
  return "unknown";
}

inline DomainKind parse_domain_kind(const std::string& s) {
  if (s == "bidisk") return DomainKind::bidisk;
  if (s == "ball") return DomainKind::ball;
  if (s == "symmetrized_bidisk" || s == "G") return DomainKind::symmetrized_bidisk;
  if (s == "ellipsoid") return DomainKind::ellipsoid;
  throw InvalidInput("unknown domain kind '" + s + "'");
}

class DomainSpec {
 public:
  static DomainSpec bidisk() { return DomainSpec(DomainKind::bidisk, 2); }
  static DomainSpec symmetrized_bidisk() { return DomainSpec(DomainKind::symmetrized_bidisk, 2); }

  static DomainSpec ball(int dim) {
    if (dim < 1) throw InvalidInput("ball dimension must be >= 1");
    return DomainSpec(DomainKind::ball, dim);
  }

  /// r(z) = sum alpha_j |z_j|^2 + sum beta_j Re(z_j^2) - 1 with alpha_j > 0.
  /// The level set is bounded iff alpha_j > |beta_j| for every j; unbounded
  /// members are admitted for the linear-convexity test only (see bounded()).
  static DomainSpec ellipsoid(std::vector<double> alpha, std::vector<double> beta) {
    if (alpha.empty()) throw InvalidInput("ellipsoid needs at least one coefficient");
    if (beta.empty()) beta.assign(alpha.size(), 0.0);
    if (alpha.size() != beta.size()) throw InvalidInput("ellipsoid alpha/beta length mismatch");
    for (std::size_t j = 0; j < alpha.size(); ++j) {
      if (!std::isfinite(alpha[j]) || !std::isfinite(beta[j])) throw InvalidInput("ellipsoid coefficient not finite");
      if (alpha[j] <= 0.0) throw InvalidInput("ellipsoid alpha coefficients must be positive");
    }
    DomainSpec d(DomainKind::ellipsoid, static_cast<int>(alpha.size()));
    d.alpha_ = std::move(alpha);
    d.beta_ = std::move(beta);
    return d;
  }

  DomainKind kind() const { return kind_; }
  int dim() const { return dim_; }
  const std::vector<double>& alpha() const { return alpha_; }
  const std::vector<double>& beta() const { return beta_; }

  bool smooth() const { return kind_ == DomainKind::ball || kind_ == DomainKind::ellipsoid; }

  bool bounded() const {
    if (kind_ != DomainKind::ellipsoid) return true;
    for (std::size_t j = 0; j < alpha_.size(); ++j) {
      if (alpha_[j] <= std::abs(beta_[j])) return false;
    }
    return true;
  }

  bool convex() const { return kind_ != DomainKind::symmetrized_bidisk && bounded(); }

  /// Ellipsoid coefficients; the ball is alpha = 1, beta = 0.
  double alpha_at(int j) const { return kind_ == DomainKind::ellipsoid ? alpha_[static_cast<std::size_t>(j)] : 1.0; }
  double beta_at(int j) const { return kind_ == DomainKind::ellipsoid ? beta_[static_cast<std::size_t>(j)] : 0.0; }

  std::string name() const {
    if (kind_ == DomainKind::ball) return "ball(" + std::to_string(dim_) + ")";
    return to_string(kind_);
  }

 private:
  DomainSpec(DomainKind k, int dim) : kind_(k), dim_(dim) {}

  DomainKind kind_;
  int dim_;
  std::vector<double> alpha_;
  std::vector<double> beta_;
};

// ---------------------------------------------------------------------------
// Membership.

/// Roots of x^2 - s x + p = 0, computed without cancellation: the larger root
/// comes from the formula, the other from the product p.
inline std::pair<Complex, Complex> symmetrized_roots(Complex s, Complex p) {
  const Complex sq = std::sqrt(s * s - 4.0 * p);
  const Complex q1 = 0.5 * (s + sq);
  const Complex q2 = 0.5 * (s - sq);
  const Complex big = std::abs(q1) >= std::abs(q2) ? q1 : q2;
  if (std::abs(big) == 0.0) return {Complex{}, Complex{}};
  return {big, p / big};
}

inline double quadratic_form(const DomainSpec& d, const Point& z) {
  double acc = 0.0;
  for (int j = 0; j < d.dim(); ++j) acc += d.alpha_at(j) * std::norm(z(j)) + d.beta_at(j) * (z(j) * z(j)).real();
  return acc;
}

inline bool membership(const DomainSpec& domain, const Point& p) {
  require_point(p, domain.dim(), "membership");
  switch (domain.kind()) {
    case DomainKind::bidisk: return std::abs(p(0)) < 1.0 && std::abs(p(1)) < 1.0;
    case DomainKind::ball: return p.squaredNorm() < 1.0;
    case DomainKind::symmetrized_bidisk: {
      const auto [a, b] = symmetrized_roots(p(0), p(1));
      return std::abs(a) < 1.0 && std::abs(b) < 1.0;
    }
    case DomainKind::ellipsoid: return quadratic_form(domain, p) - 1.0 < 0.0;
  }
  return false;
}

/// Distance-like excess outside the closed domain; 0 for points of the closure.
inline double closure_excess(const DomainSpec& domain, const Point& p) {
  require_point(p, domain.dim(), "closure test");
  switch (domain.kind()) {
    case DomainKind::bidisk: return std::max({0.0, std::abs(p(0)) - 1.0, std::abs(p(1)) - 1.0});
    case DomainKind::ball: return std::max(0.0, p.norm() - 1.0);
    case DomainKind::symmetrized_bidisk: {
      const auto [a, b] = symmetrized_roots(p(0), p(1));
      return std::max({0.0, std::abs(a) - 1.0, std::abs(b) - 1.0});
    }
    case DomainKind::ellipsoid: return std::max(0.0, quadratic_form(domain, p) - 1.0);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Defining function.

struct DefiningFunctionEval {
  double value = 0.0;
  CVector gradient;             ///< dr/dz_j
  CMatrix holomorphic_hessian;  ///< d2r/dz_j dz_k
  CMatrix mixed_hessian;        ///< d2r/dz_j dzbar_k
};

inline DefiningFunctionEval defining_function(const DomainSpec& domain, const Point& p) {
  if (!domain.smooth()) throw UnsupportedDomain("no smooth defining function for " + domain.name());
  require_point(p, domain.dim(), "defining_function");
  const int d = domain.dim();
  DefiningFunctionEval out;
  out.value = quadratic_form(domain, p) - 1.0;
  out.gradient.resize(d);
  out.holomorphic_hessian = CMatrix::Zero(d, d);
  out.mixed_hessian = CMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    const double a = domain.alpha_at(j);
    const double b = domain.beta_at(j);
    out.gradient(j) = a * std::conj(p(j)) + b * p(j);
    out.holomorphic_hessian(j, j) = b;
    out.mixed_hessian(j, j) = a;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Boundary parametrizations. A chart maps a real parameter vector onto one
// component of the (distinguished) boundary; the grid is its deterministic
// sampling. Sup estimates for polynomials are taken over these grids and then
// refined by local search in parameter space.

struct BoundaryChart {
  std::function<Point(const Eigen::VectorXd&)> to_point;
  std::vector<Eigen::VectorXd> params;
  double initial_step = 0.1;
};

using BoundaryAtlas = std::vector<BoundaryChart>;

inline std::vector<Point> atlas_points(const BoundaryAtlas& atlas) {
  std::vector<Point> out;
  for (const auto& chart : atlas) {
    for (const auto& t : chart.params) out.push_back(chart.to_point(t));
  }
  return out;
}

namespace detail {

inline std::vector<Eigen::VectorXd> circle_params(int n) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(Eigen::VectorXd::Constant(1, 2.0 * kPi * i / n));
  return out;
}

inline std::vector<Eigen::VectorXd> torus_params(int n) {
  const int m = std::max(4, static_cast<int>(std::lround(std::sqrt(static_cast<double>(n)))));
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(m * m));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      Eigen::VectorXd t(2);
      t << 2.0 * kPi * i / m, 2.0 * kPi * j / m;
      out.push_back(t);
    }
  }
  return out;
}

/// Unit sphere of C^d. d = 1 is the circle, d = 2 a Hopf-coordinate grid
/// (eta, theta1, theta2) with both poles included; higher d uses a
/// fixed-seed random cloud over unnormalized real coordinates.
inline BoundaryChart sphere_chart(int d, int n) {
  BoundaryChart chart;
  if (d == 1) {
    chart.to_point = [](const Eigen::VectorXd& t) { return make_point({std::polar(1.0, t(0))}); };
    chart.params = circle_params(n);
    chart.initial_step = 2.0 * kPi / n;
    return chart;
  }
  if (d == 2) {
    chart.to_point = [](const Eigen::VectorXd& t) {
      return make_point({std::polar(std::cos(t(0)), t(1)), std::polar(std::sin(t(0)), t(2))});
    };
    const int n_eta = std::max(2, static_cast<int>(std::lround(std::cbrt(n / 4.0))));
    const int n_theta = std::max(4, static_cast<int>(std::lround(std::sqrt(static_cast<double>(n) / n_eta))));
    for (int i = 0; i < n_eta; ++i) {
      const double eta = std::acos(std::sqrt(static_cast<double>(i) / (n_eta - 1)));
      for (int a = 0; a < n_theta; ++a) {
        for (int b = 0; b < n_theta; ++b) {
          Eigen::VectorXd t(3);
          t << eta, 2.0 * kPi * a / n_theta, 2.0 * kPi * b / n_theta;
          chart.params.push_back(t);
        }
      }
    }
    chart.initial_step = 2.0 * kPi / n_theta;
    return chart;
  }
  chart.to_point = [d](const Eigen::VectorXd& t) {
    Point z(d);
    for (int j = 0; j < d; ++j) z(j) = Complex(t(2 * j), t(2 * j + 1));
    const double nz = z.norm();
    return nz > 0.0 ? Point(z / nz) : Point(Point::Unit(d, 0));
  };
  Rng rng = make_rng(0x5eed, static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(n));
  for (int i = 0; i < n; ++i) {
    const Point z = unit_sphere_point(rng, d);
    Eigen::VectorXd t(2 * d);
    for (int j = 0; j < d; ++j) {
      t(2 * j) = z(j).real();
      t(2 * j + 1) = z(j).imag();
    }
    chart.params.push_back(t);
  }
  chart.initial_step = 0.2;
  return chart;
}

}  // namespace detail

/// Boundary atlas carrying the sup of every polynomial: the sphere for the
/// ball, the full boundary for ellipsoids, the torus for the bidisk and its
/// image under (z, w) -> (z + w, zw) for G.
inline BoundaryAtlas boundary_atlas(const DomainSpec& domain, int n) {
  if (n < 1) throw InvalidInput("boundary grid size must be >= 1");
  switch (domain.kind()) {
    case DomainKind::ball: return {detail::sphere_chart(domain.dim(), n)};
    case DomainKind::ellipsoid: {
      if (!domain.bounded()) throw UnsupportedDomain("unbounded ellipsoid has no compact boundary");
      BoundaryChart chart = detail::sphere_chart(domain.dim(), n);
      auto sphere = chart.to_point;
      chart.to_point = [sphere, domain](const Eigen::VectorXd& t) {
        const Point v = sphere(t);
        return Point(v / std::sqrt(quadratic_form(domain, v)));
      };
      return {chart};
    }
    case DomainKind::bidisk: {
      BoundaryChart chart;
      chart.to_point = [](const Eigen::VectorXd& t) { return make_point({std::polar(1.0, t(0)), std::polar(1.0, t(1))}); };
      chart.params = detail::torus_params(n);
      chart.initial_step = 2.0 * kPi / std::sqrt(static_cast<double>(chart.params.size()));
      return {chart};
    }
    case DomainKind::symmetrized_bidisk: {
      BoundaryChart chart;
      chart.to_point = [](const Eigen::VectorXd& t) {
        const Complex z = std::polar(1.0, t(0));
        const Complex w = std::polar(1.0, t(1));
        return make_point({z + w, z * w});
      };
      chart.params = detail::torus_params(n);
      chart.initial_step = 2.0 * kPi / std::sqrt(static_cast<double>(chart.params.size()));
      return {chart};
    }
  }
  return {};
}

inline std::vector<Point> boundary_grid(const DomainSpec& domain, int n) { return atlas_points(boundary_atlas(domain, n)); }

/// Seeded random boundary points. Smooth kinds land on r = 0; the bidisk and G
/// land on the distinguished boundary.
inline std::vector<Point> boundary_sample(const DomainSpec& domain, int count, std::uint64_t seed) {
  if (count < 1) throw InvalidInput("boundary_sample count must be >= 1");
  Rng rng = make_rng(seed, 0xb0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    switch (domain.kind()) {
      case DomainKind::ball: out.push_back(unit_sphere_point(rng, domain.dim())); break;
      case DomainKind::ellipsoid: {
        if (!domain.bounded()) throw UnsupportedDomain("unbounded ellipsoid has no compact boundary");
        const Point v = unit_sphere_point(rng, domain.dim());
        out.push_back(v / std::sqrt(quadratic_form(domain, v)));
        break;
      }
      case DomainKind::bidisk: {
        const double a = angle(rng);
        const double b = angle(rng);
        out.push_back(make_point({std::polar(1.0, a), std::polar(1.0, b)}));
        break;
      }
      case DomainKind::symmetrized_bidisk: {
        const Complex z = std::polar(1.0, angle(rng));
        const Complex w = std::polar(1.0, angle(rng));
        out.push_back(make_point({z + w, z * w}));
        break;
      }
    }
  }
  return out;
}

/// Seeded random interior points.
inline std::vector<Point> interior_sample(const DomainSpec& domain, int count, std::uint64_t seed) {
  if (count < 0) throw InvalidInput("interior_sample count must be >= 0");
  Rng rng = make_rng(seed, 0x1a);
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(out.size()) < count) {
    Point p;
    switch (domain.kind()) {
      case DomainKind::ball: p = uniform_ball(rng, domain.dim()); break;
      case DomainKind::ellipsoid: {
        if (!domain.bounded()) throw UnsupportedDomain("unbounded ellipsoid has no finite interior sample");
        const Point v = uniform_ball(rng, domain.dim());
        const double nv = v.norm();
        p = nv > 0.0 ? Point(v / std::sqrt(quadratic_form(domain, v / nv))) : v;
        break;
      }
      case DomainKind::bidisk: {
        const Complex a = uniform_disk(rng);
        const Complex b = uniform_disk(rng);
        p = make_point({a, b});
        break;
      }
      case DomainKind::symmetrized_bidisk: {
        const Complex z = uniform_disk(rng);
        const Complex w = uniform_disk(rng);
        p = make_point({z + w, z * w});
        break;
      }
    }
    if (membership(domain, p)) out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Convexity tests.

namespace detail {

inline void require_boundary_point(const DomainSpec& domain, const Point& xi) {
  require_point(xi, domain.dim(), "boundary point");
  if (domain.smooth()) {
    if (std::abs(quadratic_form(domain, xi) - 1.0) > 1e-8) throw DomainError("point is not on the boundary (|r| > 1e-8)");
    return;
  }
  if (domain.kind() == DomainKind::bidisk) {
    const double m = std::max(std::abs(xi(0)), std::abs(xi(1)));
    if (std::abs(m - 1.0) > 1e-10) throw DomainError("point is not on the bidisk boundary");
    return;
  }
  throw UnsupportedDomain("boundary test not available for " + domain.name());
}

/// Outward unit normal (as a complex vector n, so the supporting real
/// hyperplane is Re<z - xi, n> = 0).
inline Point outward_normal(const DomainSpec& domain, const Point& xi) {
  Point n(domain.dim());
  if (domain.smooth()) {
    n = defining_function(domain, xi).gradient.conjugate();
  } else {
    for (int j = 0; j < domain.dim(); ++j) n(j) = std::abs(std::abs(xi(j)) - 1.0) <= 1e-10 ? xi(j) : Complex{};
  }
  const double norm = n.norm();
  if (norm < 1e-14) throw DegenerateNormal("defining function gradient vanishes at the boundary point");
  return n / norm;
}

}  // namespace detail

/// Supporting-plane test for strict convexity at one boundary point: every
/// interior sample must sit strictly below the plane with quadratic
/// separation, Re<lambda - xi, n> < -tol * |lambda - xi|^2. A flat boundary
/// face fails as soon as a sample approaches it away from xi.
inline bool check_strict_convexity_at(const DomainSpec& domain, const Point& boundary_point,
                                      const std::vector<Point>& interior_samples, double tol) {
  if (!domain.convex()) throw UnsupportedDomain("strict convexity test needs a bounded convex domain, got " + domain.name());
  detail::require_boundary_point(domain, boundary_point);
  const Point n = detail::outward_normal(domain, boundary_point);
  for (const auto& lambda : interior_samples) {
    require_point(lambda, domain.dim(), "interior sample");
    const Point diff = lambda - boundary_point;
    if (!(inner(diff, n).real() < -tol * diff.squaredNorm())) return false;
  }
  return true;
}

struct SlcReport {
  bool pass = false;
  double worst_margin = 0.0;
  Point worst_vector;
};

/// sum_jk H_mixed X_j conj(X_k) - |sum_jk H_hol X_j X_k|.
inline double slc_margin(const DefiningFunctionEval& eval, const Point& x) {
  const Complex lhs = x.transpose() * eval.mixed_hessian * x.conjugate();
  const Complex rhs = x.transpose() * eval.holomorphic_hessian * x;
  return lhs.real() - std::abs(rhs);
}

/// Orthonormal basis (columns) of the complex tangent space sum g_j X_j = 0.
inline CMatrix complex_tangent_basis(const CVector& gradient) {
  const auto d = gradient.size();
  Eigen::HouseholderQR<CMatrix> qr(CMatrix(gradient.conjugate()));
  const CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  return q.rightCols(d - 1);
}

/// Strong linear convexity at one boundary point. Seeded unit tangent vectors
/// are drawn and projected; the exact minimum over the unit tangent sphere is
/// added from the eigen-decomposition of the realified quadratic form
/// X*AX - Re(X^T B X), whose minimum equals min(X*AX - |X^T B X|).
inline SlcReport check_strong_linear_convexity(const DomainSpec& domain, const Point& boundary_point, int tangent_samples,
                                               std::uint64_t seed, double tol) {
  if (!domain.smooth()) throw UnsupportedDomain("strong linear convexity needs a smooth domain, got " + domain.name());
  if (tangent_samples < 1) throw InvalidInput("tangent_samples must be >= 1");
  detail::require_boundary_point(domain, boundary_point);
  const auto eval = defining_function(domain, boundary_point);
  const CVector& g = eval.gradient;
  const double g2 = g.squaredNorm();
  if (g2 < 1e-28) throw DegenerateNormal("defining function gradient vanishes at the boundary point");
  const int d = domain.dim();

  SlcReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  if (d == 1) {
    // no nonzero complex tangent vectors; the condition is vacuous
    report.pass = true;
    report.worst_vector = Point::Zero(1);
    return report;
  }

  Rng rng = make_rng(seed, 0x51c);
  for (int s = 0; s < tangent_samples; ++s) {
    Point x = complex_gaussian(rng, d);
    x -= (g.transpose() * x)(0) / g2 * g.conjugate();
    const double nx = x.norm();
    if (nx < 1e-12) continue;
    x /= nx;
    const double m = slc_margin(eval, x);
    if (m < report.worst_margin) {
      report.worst_margin = m;
      report.worst_vector = x;
    }
  }

  const CMatrix u = complex_tangent_basis(g);
  const CMatrix a = u.adjoint() * eval.mixed_hessian.transpose() * u;
  const CMatrix b = u.transpose() * eval.holomorphic_hessian * u;
  const auto k = u.cols();
  Eigen::MatrixXd s(2 * k, 2 * k);
  s.topLeftCorner(k, k) = a.real() - b.real();
  s.topRightCorner(k, k) = -a.imag() + b.imag();
  s.bottomLeftCorner(k, k) = a.imag() + b.imag();
  s.bottomRightCorner(k, k) = a.real() + b.real();
  s = 0.5 * (s + s.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  const Eigen::VectorXd v = es.eigenvectors().col(0);
  CVector c(k);
  for (Eigen::Index i = 0; i < k; ++i) c(i) = Complex(v(i), v(k + i));
  Point x = u * c;
  x /= x.norm();
  const double m = slc_margin(eval, x);
  if (m < report.worst_margin) {
    report.worst_margin = m;
    report.worst_vector = x;
  }
  report.pass = report.worst_margin > tol;
  return report;
}

}  // namespace holoext
