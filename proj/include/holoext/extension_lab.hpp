#pragma once

// Desk-scale experiments on subsets V of a domain: sampled varieties with a
// closed-form membership residual, the totally-geodesic test in the ball, the
// extension-failure certificate search and retract verification.

#include <optional>
#include <string>
#include <vector>

#include "holoext/core.hpp"
#include "holoext/domains.hpp"
#include "holoext/hyperbolic.hpp"
#include "holoext/poly.hpp"
#include "holoext/search.hpp"

namespace holoext {

enum class VarietyKind { ball_slice, parabola_curve, sym_R, sym_D, sym_R_union_D, point_list };

inline std::string to_string(VarietyKind k) {
  switch (k) {
    case VarietyKind::ball_slice: return "ball_slice";
    case VarietyKind::parabola_curve: return "parabola_curve";
    case VarietyKind::sym_R: return "sym_R";
    case VarietyKind::sym_D: return "sym_D";
    case VarietyKind::sym_R_union_D: return "sym_R_union_D";
    case VarietyKind::point_list: return "point_list";
  }
  return "unknown";
}

inline VarietyKind parse_variety_kind(const std::string& s) {
  if (s == "ball_slice") return VarietyKind::ball_slice;
  if (s == "parabola_curve" || s == "parabola") return VarietyKind::parabola_curve;
  if (s == "sym_R") return VarietyKind::sym_R;
  if (s == "sym_D") return VarietyKind::sym_D;
  if (s == "sym_R_union_D") return VarietyKind::sym_R_union_D;
  if (s == "point_list") return VarietyKind::point_list;
  throw InvalidInput("unknown variety spec '" + s + "'");
}

/// The parabola curve is {s (t, t^2) : |t| < kParabolaRadius} with
/// s = kParabolaScale; its closure stays inside B_2.
inline constexpr double kParabolaScale = 0.9;
inline constexpr double kParabolaRadius = 0.84;

struct VarietySpec {
  VarietyKind kind = VarietyKind::ball_slice;
  int ambient_dim = 2;
  int slice_dim = 1;
  std::optional<CMatrix> frame;  ///< unitary; ball_slice is frame * (B_k x 0)
  Complex beta = 0.0;
  std::vector<Point> points;           ///< point_list only
  std::optional<DomainSpec> domain;    ///< point_list only

  static VarietySpec ball_slice(int k, int d, std::optional<CMatrix> frame = std::nullopt) {
    if (d < 1 || k < 1 || k > d) throw InvalidInput("ball_slice needs 1 <= k <= d");
    VarietySpec s;
    s.kind = VarietyKind::ball_slice;
    s.ambient_dim = d;
    s.slice_dim = k;
    if (frame) {
      if (frame->rows() != d || frame->cols() != d) throw InvalidInput("frame must be d x d");
      if ((frame->adjoint() * *frame - CMatrix::Identity(d, d)).norm() > 1e-10) throw InvalidInput("frame must be unitary");
    }
    s.frame = std::move(frame);
    return s;
  }
  static VarietySpec parabola_curve() {
    VarietySpec s;
    s.kind = VarietyKind::parabola_curve;
    return s;
  }
  static VarietySpec sym_R() {
    VarietySpec s;
    s.kind = VarietyKind::sym_R;
    return s;
  }
  static VarietySpec sym_D(Complex beta) {
    if (!(std::abs(beta) < 1.0)) throw InvalidInput("sym_D needs |beta| < 1");
    VarietySpec s;
    s.kind = VarietyKind::sym_D;
    s.beta = beta;
    return s;
  }
  static VarietySpec sym_R_union_D(Complex beta) {
    VarietySpec s = sym_D(beta);
    s.kind = VarietyKind::sym_R_union_D;
    return s;
  }
  static VarietySpec point_list(const DomainSpec& domain, std::vector<Point> pts) {
    if (pts.empty()) throw InvalidInput("point_list needs at least one point");
    for (const auto& p : pts) {
      if (!membership(domain, p)) throw DomainError("point_list point outside " + domain.name());
    }
    VarietySpec s;
    s.kind = VarietyKind::point_list;
    s.ambient_dim = domain.dim();
    s.points = std::move(pts);
    s.domain = domain;
    return s;
  }

  DomainSpec ambient_domain() const {
    switch (kind) {
      case VarietyKind::ball_slice: return DomainSpec::ball(ambient_dim);
      case VarietyKind::parabola_curve: return DomainSpec::ball(2);
      case VarietyKind::sym_R:
      case VarietyKind::sym_D:
      case VarietyKind::sym_R_union_D: return DomainSpec::symmetrized_bidisk();
      case VarietyKind::point_list: return *domain;
    }
    throw InvalidInput("bad variety kind");
  }

  Point embed_slice(const Point& y) const {
    Point z = Point::Zero(ambient_dim);
    z.head(slice_dim) = y;
    return frame ? Point(*frame * z) : z;
  }
};

struct VarietySample {
  VarietySpec spec;
  std::vector<Point> points;
  std::vector<Complex> parameters;  ///< curve parameter per point (empty for slices and lists)
};

// ---------------------------------------------------------------------------
// Closed-form residuals: zero exactly on the variety's closure.

inline double variety_residual(const VarietySpec& spec, const Point& z) {
  switch (spec.kind) {
    case VarietyKind::ball_slice: {
      require_point(z, spec.ambient_dim, "variety point");
      const Point y = spec.frame ? Point(spec.frame->adjoint() * z) : z;
      return y.tail(spec.ambient_dim - spec.slice_dim).norm() + std::max(0.0, z.norm() - 1.0);
    }
    case VarietyKind::parabola_curve: {
      require_point(z, 2, "variety point");
      return std::abs(z(1) - z(0) * z(0) / kParabolaScale) + std::max(0.0, std::abs(z(0)) / kParabolaScale - kParabolaRadius);
    }
    case VarietyKind::sym_R: {
      require_point(z, 2, "variety point");
      return std::abs(z(1) - 0.25 * z(0) * z(0)) + std::max(0.0, 0.5 * std::abs(z(0)) - 1.0);
    }
    case VarietyKind::sym_D: {
      require_point(z, 2, "variety point");
      return std::abs(z(0) - spec.beta - std::conj(spec.beta) * z(1)) + std::max(0.0, std::abs(z(1)) - 1.0);
    }
    case VarietyKind::sym_R_union_D: {
      VarietySpec r = VarietySpec::sym_R();
      VarietySpec d = VarietySpec::sym_D(spec.beta);
      return std::min(variety_residual(r, z), variety_residual(d, z));
    }
    case VarietyKind::point_list: {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& p : spec.points) best = std::min(best, (p - z).norm());
      return best;
    }
  }
  return 0.0;
}

/// Parametrized curve point for the one-parameter specs.
inline Point curve_point(const VarietySpec& spec, Complex t, bool second_branch = false) {
  switch (spec.kind) {
    case VarietyKind::parabola_curve: return make_point({kParabolaScale * t, kParabolaScale * t * t});
    case VarietyKind::sym_R: return make_point({2.0 * t, t * t});
    case VarietyKind::sym_D: return make_point({spec.beta + std::conj(spec.beta) * t, t});
    case VarietyKind::sym_R_union_D:
      return second_branch ? make_point({spec.beta + std::conj(spec.beta) * t, t}) : make_point({2.0 * t, t * t});
    default: throw InvalidInput("curve_point: spec is not a parametrized curve");
  }
}

/// Boundary of the closure of V, on which polynomials attain their sup over V.
inline BoundaryAtlas variety_closure_atlas(const VarietySpec& spec, int n) {
  auto circle_chart = [&](double radius, bool second) {
    BoundaryChart chart;
    chart.to_point = [spec, radius, second](const Eigen::VectorXd& t) { return curve_point(spec, std::polar(radius, t(0)), second); };
    chart.params = detail::circle_params(n);
    chart.initial_step = 2.0 * kPi / n;
    return chart;
  };
  switch (spec.kind) {
    case VarietyKind::ball_slice: {
      BoundaryChart chart = detail::sphere_chart(spec.slice_dim, n);
      auto sphere = chart.to_point;
      chart.to_point = [sphere, spec](const Eigen::VectorXd& t) { return spec.embed_slice(sphere(t)); };
      return {chart};
    }
    case VarietyKind::parabola_curve: return {circle_chart(kParabolaRadius, false)};
    case VarietyKind::sym_R:
    case VarietyKind::sym_D: return {circle_chart(1.0, false)};
    case VarietyKind::sym_R_union_D: return {circle_chart(1.0, false), circle_chart(1.0, true)};
    case VarietyKind::point_list: {
      BoundaryChart chart;
      const auto pts = spec.points;
      chart.to_point = [pts](const Eigen::VectorXd& t) { return pts.at(static_cast<std::size_t>(std::lround(t(0)))); };
      for (std::size_t i = 0; i < pts.size(); ++i) chart.params.push_back(Eigen::VectorXd::Constant(1, static_cast<double>(i)));
      chart.initial_step = 0.0;
      return {chart};
    }
  }
  return {};
}

/// Deterministic sample of V. Parametric specs always start with the anchor
/// parameters t = 0 and t = 1/2 (for the union: both branches at t = 0, then
/// both at t = 1/2); the rest is seeded and uniform in the parameter disc.
inline VarietySample sample_variety(const VarietySpec& spec, int count, std::uint64_t seed) {
  if (count < 2) throw InvalidInput("sample_variety count must be >= 2");
  VarietySample out;
  out.spec = spec;
  const DomainSpec domain = spec.ambient_domain();
  Rng rng = make_rng(seed, 0x7a, static_cast<std::uint64_t>(spec.kind));

  auto push = [&](const Point& p, std::optional<Complex> param) {
    if (!membership(domain, p)) return false;
    out.points.push_back(p);
    if (param) out.parameters.push_back(*param);
    return true;
  };

  switch (spec.kind) {
    case VarietyKind::ball_slice: {
      Point anchor = Point::Zero(spec.slice_dim);
      push(spec.embed_slice(anchor), std::nullopt);
      anchor(0) = 0.5;
      push(spec.embed_slice(anchor), std::nullopt);
      while (static_cast<int>(out.points.size()) < count) push(spec.embed_slice(uniform_ball(rng, spec.slice_dim)), std::nullopt);
      break;
    }
    case VarietyKind::parabola_curve:
    case VarietyKind::sym_R:
    case VarietyKind::sym_D: {
      const double radius = spec.kind == VarietyKind::parabola_curve ? kParabolaRadius : 1.0;
      push(curve_point(spec, 0.0), Complex(0.0));
      push(curve_point(spec, 0.5), Complex(0.5));
      while (static_cast<int>(out.points.size()) < count) {
        const Complex t = uniform_disk(rng, radius);
        push(curve_point(spec, t), t);
      }
      break;
    }
    case VarietyKind::sym_R_union_D: {
      for (double t0 : {0.0, 0.5}) {
        push(curve_point(spec, t0, false), Complex(t0));
        push(curve_point(spec, t0, true), Complex(t0));
      }
      bool second = false;
      while (static_cast<int>(out.points.size()) < count) {
        const Complex t = uniform_disk(rng);
        if (push(curve_point(spec, t, second), t)) second = !second;
      }
      break;
    }
    case VarietyKind::point_list: out.points = spec.points; break;
  }
  return out;
}

// ---------------------------------------------------------------------------

struct TotallyGeodesicReport {
  bool pass = true;
  std::optional<Datum> worst_pair;
  double worst_distance = 0.0;
  int pairs_tested = 0;
};

/// For seeded pairs of sample points, walks the ball geodesic through them on a
/// parameter grid and records the largest variety residual met.
inline TotallyGeodesicReport totally_geodesic_test(const DomainSpec& domain, const VarietySample& sample, int pair_count,
                                                   std::uint64_t seed, double tol) {
  if (domain.kind() != DomainKind::ball) throw UnsupportedDomain("totally geodesic test needs the ball (closed-form geodesics)");
  if (pair_count < 1) throw InvalidInput("pair_count must be >= 1");
  TotallyGeodesicReport report;
  const auto n = sample.points.size();
  if (n < 2) return report;
  Rng rng = make_rng(seed, 0x9e0);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (int k = 0; k < pair_count; ++k) {
    const std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    if (j == i) j = (i + 1) % n;
    if ((sample.points[i] - sample.points[j]).norm() <= kDistinctThreshold) continue;
    const Datum datum(sample.points[i], sample.points[j]);
    const auto geo = kobayashi_ball(datum);
    double worst = 0.0;
    for (int r = 0; r < 10; ++r) {
      for (int a = 0; a < 24; ++a) {
        const Complex zeta = std::polar((r + 0.5) / 10.0, 2.0 * kPi * a / 24.0);
        worst = std::max(worst, variety_residual(sample.spec, geo.disc(zeta)));
      }
    }
    ++report.pairs_tested;
    if (!report.worst_pair || worst > report.worst_distance) {
      report.worst_distance = worst;
      report.worst_pair = datum;
    }
  }
  report.pass = report.worst_distance <= tol;
  return report;
}

// ---------------------------------------------------------------------------

struct Certificate {
  Poly map;
  Point lambda;
  Point mu;
  double achieved = 0.0;
  double baseline = 0.0;
  double margin = 0.0;
  double sup_on_V = 0.0;
  std::string baseline_kind;  ///< "kobayashi_ball" (exact) or "caratheodory_search" (searched lower bound)
  std::vector<StageOutcome> stages;
  std::vector<double> baseline_stages;  ///< per-degree baseline when it came from a search
};

inline constexpr int kCertificateSearchGrid = 512;
inline constexpr int kCertificateCertifyGrid = 8192;

inline bool sample_contains(const VarietySample& sample, const Point& p) {
  for (const auto& q : sample.points) {
    if (q.size() == p.size() && (q - p).norm() <= 1e-12) return true;
  }
  return false;
}

/// Largest |p| over the dense closure grid and the sample points.
inline double sup_on_variety(const VarietySample& sample, const Poly& p) {
  double s = 0.0;
  for (const auto& z : atlas_points(variety_closure_atlas(sample.spec, kCertificateCertifyGrid))) s = std::max(s, std::abs(p(z)));
  for (const auto& z : sample.points) s = std::max(s, std::abs(p(z)));
  return s;
}

/// Searches a polynomial p with sup |p| <= 1 on V that separates the datum
/// more than any map Omega -> D can: margin = rho(p(lambda), p(mu)) - baseline.
/// A positive margin certifies that V lacks the extension property; a
/// nonpositive one is inconclusive.
inline Certificate certificate_search(const DomainSpec& domain, const VarietySample& sample, const Datum& datum, int degree,
                                      long budget, std::uint64_t seed) {
  const DomainSpec ambient = sample.spec.ambient_domain();
  if (ambient.kind() != domain.kind() || ambient.dim() != domain.dim()) throw InvalidInput("sample does not live in " + domain.name());
  datum.require_in(domain);
  if (!sample_contains(sample, datum.lambda()) || !sample_contains(sample, datum.mu())) {
    throw InvalidInput("datum points must belong to the sample");
  }
  Certificate cert;
  cert.lambda = datum.lambda();
  cert.mu = datum.mu();
  if (domain.kind() == DomainKind::ball) {
    cert.baseline = kobayashi_ball(datum).distance;
    cert.baseline_kind = "kobayashi_ball";
  } else {
    const auto cara = caratheodory_search(domain, datum, degree, budget, seed);
    cert.baseline = cara.value;
    cert.baseline_kind = "caratheodory_search";
    for (const auto& s : cara.stages) cert.baseline_stages.push_back(s.value);
  }

  PolySearchProblem problem;
  problem.dim = domain.dim();
  problem.lambda = datum.lambda();
  problem.mu = datum.mu();
  problem.atlas = variety_closure_atlas(sample.spec, kCertificateCertifyGrid);
  problem.search_grid = kCertificateSearchGrid;
  const auto found = maximize_separation(problem, degree, budget, seed);

  cert.map = found.map;
  cert.stages = found.stages;
  cert.sup_on_V = sup_on_variety(sample, cert.map);
  if (cert.sup_on_V > 1.0) {
    // the dense sample found a slightly larger value than the certified search sup
    cert.map = cert.map * Complex(1.0 / cert.sup_on_V);
    cert.sup_on_V = sup_on_variety(sample, cert.map);
  }
  cert.achieved = rho(cert.map(datum.lambda()), cert.map(datum.mu()));
  cert.margin = cert.achieved - cert.baseline;
  return cert;
}

// ---------------------------------------------------------------------------

struct RetractMap {
  PolyVector components;

  Point operator()(const Point& z) const { return evaluate(components, z); }
};

/// r = k o phi for a polynomial disc k and a polynomial phi : C^d -> C.
inline RetractMap compose(const AnalyticDisc& k, const Poly& phi) {
  RetractMap r;
  const int d = k.dim();
  for (int i = 0; i < d; ++i) {
    Poly comp(phi.dim());
    Poly power = Poly::constant(phi.dim(), 1.0);
    for (int m = 0; m <= k.degree(); ++m) {
      comp = comp + power * k.coefficients[static_cast<std::size_t>(m)](i);
      power = power * phi;
    }
    r.components.push_back(comp);
  }
  return r;
}

struct RetractReport {
  bool idempotent_pass = true;
  bool fixes_V_pass = true;
  bool range_in_V_pass = true;
  double worst_idempotence = 0.0;
  double worst_fixed_point = 0.0;
  double worst_range_residual = 0.0;
};

inline RetractReport retract_check(const RetractMap& r, const DomainSpec& domain, const VarietySample& sample, int probe_count,
                                   std::uint64_t seed, double tol) {
  if (static_cast<int>(r.components.size()) != domain.dim()) throw InvalidInput("retract must have one component per coordinate");
  for (const auto& c : r.components) {
    if (c.dim() != domain.dim()) throw InvalidInput("retract component dimension mismatch");
  }
  RetractReport rep;
  for (const auto& x : interior_sample(domain, probe_count, seed)) {
    const Point y = r(x);
    if (closure_excess(domain, y) > tol) throw RangeViolation("retract maps a probe outside the closed domain");
    rep.worst_idempotence = std::max(rep.worst_idempotence, (r(y) - y).norm());
    rep.worst_range_residual = std::max(rep.worst_range_residual, variety_residual(sample.spec, y));
  }
  for (const auto& v : sample.points) rep.worst_fixed_point = std::max(rep.worst_fixed_point, (r(v) - v).norm());
  rep.idempotent_pass = rep.worst_idempotence <= tol;
  rep.fixes_V_pass = rep.worst_fixed_point <= tol;
  rep.range_in_V_pass = rep.worst_range_residual <= tol;
  return rep;
}

// ---------------------------------------------------------------------------

struct SliceParts {
  Point scaled_b;
  Point remainder;
};

/// Splits c = (c_k / b_k) b + remainder, where b = (b_1, ..., b_k, 0, ..., 0)
/// with b_k != 0 and |c| < |b_k| / 2. The first part lies on the linear
/// geodesic through 0 and b; the remainder has k-th coordinate exactly 0.
inline SliceParts slice_decomposition(const Point& b, const Point& c) {
  require_point(b, b.size(), "slice point b");
  if (b.size() == 0) throw InvalidInput("slice point b is empty");
  if (!(b.squaredNorm() < 1.0)) throw DomainError("b must lie in the open ball");
  Eigen::Index k = -1;
  for (Eigen::Index j = b.size() - 1; j >= 0; --j) {
    if (b(j) != Complex{}) {
      k = j;
      break;
    }
  }
  if (k < 0) throw InvalidInput("b must have a nonzero coordinate");
  Point cc = Point::Zero(b.size());
  if (c.size() == k + 1) {
    require_point(c, k + 1, "slice point c");
    cc.head(k + 1) = c;
  } else {
    require_point(c, b.size(), "slice point c");
    if (c.tail(b.size() - k - 1).norm() != 0.0) throw InvalidInput("c must vanish beyond the last nonzero coordinate of b");
    cc = c;
  }
  if (!(cc.norm() < std::abs(b(k)) / 2.0)) throw InvalidInput("slice decomposition needs |c| < |b_k| / 2");
  const Complex ratio = cc(k) / b(k);
  SliceParts out;
  out.scaled_b = ratio * b;
  out.remainder = Point::Zero(b.size());
  for (Eigen::Index j = 0; j < k; ++j) out.remainder(j) = cc(j) - ratio * b(j);
  return out;
}

}  // namespace holoext
