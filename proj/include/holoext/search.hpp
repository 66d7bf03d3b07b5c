#pragma once

// Seeded multi-start search for a polynomial p maximizing rho(p(a), p(b))
// subject to sup |p| <= 1 on a boundary atlas. Candidates are made feasible
// by dividing by their sampled sup, so the inner problem is unconstrained.
//
// Determinism and monotonicity: the budget is consumed in blocks of
// kSearchBlock evaluations; every restart follows a trajectory that depends
// only on (seed, degree, restart index), and the best point is certified
// against a dense grid at every block boundary. The reported value is the best
// certified checkpoint, so it is nondecreasing in both budget and degree.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "holoext/core.hpp"
#include "holoext/domains.hpp"
#include "holoext/parallel.hpp"
#include "holoext/poly.hpp"

namespace holoext {

inline constexpr long kSearchBlock = 250;

/// Pseudo-hyperbolic distance on the disk, |a - b| / |1 - conj(a) b|.
inline double rho(Complex a, Complex b) {
  if (!(std::abs(a) < 1.0) || !(std::abs(b) < 1.0)) throw DomainError("rho: arguments must lie in the open unit disk");
  return std::abs(a - b) / std::abs(1.0 - std::conj(a) * b);
}

/// How the sup of a degree-1 polynomial over the constraint set can be
/// written in closed form.
enum class AffineSup { none, ball, bidisk };

struct PolySearchProblem {
  int dim = 1;
  Point lambda;
  Point mu;
  BoundaryAtlas atlas;  ///< dense constraint grid; the inner loop uses a ~search_grid subset
  int search_grid = 2048;
  AffineSup affine_sup = AffineSup::none;
};

struct StageOutcome {
  int degree = 0;
  double value = -std::numeric_limits<double>::infinity();
  int restart = -1;
  long evaluations = 0;
};

struct PolySearchResult {
  double value = -std::numeric_limits<double>::infinity();
  Poly map;
  double sup = 0.0;  ///< certified sup of the returned (already rescaled) map
  int degree = 0;
  std::vector<StageOutcome> stages;
  long evaluations = 0;
};

namespace detail {

/// Everything one degree stage needs, precomputed once.
struct StageContext {
  const PolySearchProblem* problem = nullptr;
  int degree = 1;
  std::vector<Multiindex> basis;
  CMatrix search_rows;
  std::vector<CMatrix> certify_rows;  // per chart
  Eigen::RowVectorXcd at_lambda;
  Eigen::RowVectorXcd at_mu;
  CVector start;  // restart 0 starting point
  std::vector<CVector> coordinate_maps;  // z -> z_j, certified by restart 0 before searching

  std::optional<double> affine_sup(const CVector& c) const {
    if (degree != 1 || problem->affine_sup == AffineSup::none) return std::nullopt;
    const double c0 = std::abs(c(0));
    const auto lin = c.tail(c.size() - 1);
    if (problem->affine_sup == AffineSup::ball) return c0 + lin.norm();
    return c0 + lin.cwiseAbs().sum();
  }

  double search_sup(const CVector& c) const {
    if (auto s = affine_sup(c)) return *s;
    return (search_rows * c).cwiseAbs().maxCoeff();
  }

  double value_at_sup(const CVector& c, double sup) const {
    if (!(sup > 1e-300)) return -std::numeric_limits<double>::infinity();
    const Complex a = (at_lambda * c)(0) / sup;
    const Complex b = (at_mu * c)(0) / sup;
    if (!(std::abs(a) < 1.0) || !(std::abs(b) < 1.0)) return -std::numeric_limits<double>::infinity();
    return rho(a, b);
  }

  double objective(const CVector& c) const { return value_at_sup(c, search_sup(c)); }

  /// Sup over the dense grid, refined by pattern search from the best grid
  /// points in each chart's parameter space. `where` receives the maximizer.
  double certified_sup(const CVector& c, Point* where = nullptr) const {
    if (auto s = affine_sup(c)) return *s;
    double best = (search_rows * c).cwiseAbs().maxCoeff();
    const auto& atlas = problem->atlas;
    for (std::size_t k = 0; k < atlas.size(); ++k) {
      const auto& chart = atlas[k];
      const Eigen::VectorXd mags = (certify_rows[k] * c).cwiseAbs();
      std::vector<Eigen::Index> order(static_cast<std::size_t>(mags.size()));
      for (Eigen::Index i = 0; i < mags.size(); ++i) order[static_cast<std::size_t>(i)] = i;
      const std::size_t top = std::min<std::size_t>(6, order.size());
      std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                        [&](Eigen::Index a, Eigen::Index b) { return mags(a) > mags(b); });
      const auto& dense = dense_params(k);
      for (std::size_t t = 0; t < top; ++t) {
        Eigen::VectorXd x = dense[static_cast<std::size_t>(order[t])];
        const double v = refine(chart, x, c);
        if (v > best) {
          best = v;
          if (where) *where = chart.to_point(x);
        }
      }
    }
    return best;
  }

  const std::vector<Eigen::VectorXd>& dense_params(std::size_t k) const { return dense_param_cache[k]; }

  double refine(const BoundaryChart& chart, Eigen::VectorXd& t, const CVector& c) const {
    auto f = [&](const Eigen::VectorXd& x) { return std::abs((evaluate_monomials(basis, chart.to_point(x)) * c)(0)); };
    double ft = f(t);
    double h = chart.initial_step;
    while (h > 1e-10) {
      bool improved = false;
      for (Eigen::Index i = 0; i < t.size(); ++i) {
        for (double sgn : {1.0, -1.0}) {
          Eigen::VectorXd u = t;
          u(i) += sgn * h;
          const double fu = f(u);
          if (fu > ft) {
            t = u;
            ft = fu;
            improved = true;
          }
        }
      }
      if (!improved) h *= 0.5;
    }
    return ft;
  }

  std::vector<std::vector<Eigen::VectorXd>> dense_param_cache;
};

inline StageContext make_stage(const PolySearchProblem& problem, int degree) {
  StageContext ctx;
  ctx.problem = &problem;
  ctx.degree = degree;
  ctx.basis = monomial_basis(problem.dim, degree);
  std::vector<Point> search_pts;
  for (std::size_t k = 0; k < problem.atlas.size(); ++k) {
    const auto& chart = problem.atlas[k];
    // Coarse subset for the inner loop: every stride-th parameter of the chart.
    const std::size_t stride = std::max<std::size_t>(1, chart.params.size() / static_cast<std::size_t>(problem.search_grid));
    for (std::size_t i = 0; i < chart.params.size(); i += stride) search_pts.push_back(chart.to_point(chart.params[i]));
    std::vector<Point> dense;
    dense.reserve(chart.params.size());
    for (const auto& t : chart.params) dense.push_back(chart.to_point(t));
    ctx.certify_rows.push_back(evaluate_monomials(ctx.basis, dense));
    ctx.dense_param_cache.push_back(chart.params);
  }
  ctx.search_rows = evaluate_monomials(ctx.basis, search_pts);
  ctx.at_lambda = evaluate_monomials(ctx.basis, problem.lambda);
  ctx.at_mu = evaluate_monomials(ctx.basis, problem.mu);

  // restart 0 starts from the difference functional z -> <z, mu - lambda>
  ctx.start = CVector::Zero(static_cast<Eigen::Index>(ctx.basis.size()));
  const Point diff = problem.mu - problem.lambda;
  for (std::size_t m = 0; m < ctx.basis.size(); ++m) {
    if (total_degree(ctx.basis[m]) != 1) continue;
    for (int j = 0; j < problem.dim; ++j) {
      if (ctx.basis[m][static_cast<std::size_t>(j)] == 1) {
        ctx.start(static_cast<Eigen::Index>(m)) = std::conj(diff(j));
        CVector e = CVector::Zero(ctx.start.size());
        e(static_cast<Eigen::Index>(m)) = 1.0;
        ctx.coordinate_maps.push_back(e);
      }
    }
  }
  return ctx;
}

struct RestartOutcome {
  double value = -std::numeric_limits<double>::infinity();
  CVector coefficients;
  long evaluations = 0;
};

inline RestartOutcome run_restart(const StageContext& ctx, int restart, long allowed, std::uint64_t seed) {
  const auto m = static_cast<Eigen::Index>(ctx.basis.size());
  Rng rng = make_rng(seed, static_cast<std::uint64_t>(ctx.degree), static_cast<std::uint64_t>(restart));
  CVector c = restart == 0 && ctx.start.norm() > 0.0 ? ctx.start : complex_gaussian(rng, m);
  if (c.norm() == 0.0) c(0) = 1.0;
  c /= c.norm();

  RestartOutcome out;
  // Exchange rows: maximizers found by certification join this restart's
  // constraint set, so the surrogate sup cannot keep missing the same peak.
  CMatrix extra(0, m);
  auto objective = [&](const CVector& x) {
    double sup = ctx.search_sup(x);
    if (extra.rows() > 0) sup = std::max(sup, (extra * x).cwiseAbs().maxCoeff());
    return ctx.value_at_sup(x, sup);
  };
  if (restart == 0) {
    for (const auto& e : ctx.coordinate_maps) {
      if (out.evaluations + 1 >= allowed) break;
      const double v = ctx.value_at_sup(e, ctx.certified_sup(e));
      ++out.evaluations;
      if (v > out.value) {
        out.value = v;
        out.coefficients = e;
      }
    }
  }
  double f = objective(c);
  ++out.evaluations;
  double sigma = 0.3;
  bool dirty = true;
  auto checkpoint = [&] {
    if (!dirty) return;
    dirty = false;
    Point where;
    const double sup = ctx.certified_sup(c, &where);
    const double v = ctx.value_at_sup(c, sup);
    if (v > out.value) {
      out.value = v;
      out.coefficients = c;
    }
    if (where.size() > 0 && v < f) {
      extra.conservativeResize(extra.rows() + 1, m);
      extra.row(extra.rows() - 1) = evaluate_monomials(ctx.basis, where);
      f = objective(c);
    }
  };
  const double step_norm = 1.0 / std::sqrt(static_cast<double>(m));
  while (out.evaluations < allowed) {
    CVector trial = c + (sigma * step_norm) * complex_gaussian(rng, m);
    const double tn = trial.norm();
    if (tn > 0.0) trial /= tn;
    const double ft = objective(trial);
    ++out.evaluations;
    if (ft > f) {
      c = trial;
      f = ft;
      dirty = true;
      sigma = std::min(1.0, sigma * std::exp(0.2));
    } else {
      sigma *= std::exp(-0.05);
    }
    if (out.evaluations % kSearchBlock == 0) checkpoint();
    if (sigma < 1e-10 && out.evaluations < allowed) {
      // stalled: certify where we are, then continue from a fresh start
      checkpoint();
      c = complex_gaussian(rng, m);
      c /= c.norm();
      f = objective(c);
      ++out.evaluations;
      sigma = 0.3;
      dirty = true;
    }
  }
  checkpoint();
  return out;
}

}  // namespace detail

/// Evaluations a single restart may use before the next one starts; depends
/// only on the number of coefficients, never on the budget.
inline long restart_allotment(std::size_t coefficient_count) {
  const long raw = static_cast<long>(400 * coefficient_count);
  const long clamped = std::clamp(raw, 2000L, 10000L);
  return (clamped + kSearchBlock - 1) / kSearchBlock * kSearchBlock;
}

/// Runs one stage per degree 1..degree with `budget` evaluations each.
inline PolySearchResult maximize_separation(const PolySearchProblem& problem, int degree, long budget, std::uint64_t seed) {
  if (degree < 1) throw InvalidInput("search degree must be >= 1");
  if (budget < 1) throw InvalidInput("search budget must be >= 1");
  if (problem.atlas.empty()) throw InvalidInput("search needs a nonempty constraint atlas");
  const long stage_budget = (budget + kSearchBlock - 1) / kSearchBlock * kSearchBlock;

  PolySearchResult result;
  CVector best_coeffs;
  std::vector<Multiindex> best_basis;
  for (int n = 1; n <= degree; ++n) {
    const auto ctx = detail::make_stage(problem, n);
    const long allot = restart_allotment(ctx.basis.size());
    const long restarts = (stage_budget + allot - 1) / allot;
    std::vector<detail::RestartOutcome> outcomes(static_cast<std::size_t>(restarts));
    parallel_for(outcomes.size(), [&](std::size_t r) {
      const long allowed = std::min(allot, stage_budget - static_cast<long>(r) * allot);
      outcomes[r] = detail::run_restart(ctx, static_cast<int>(r), allowed, seed);
    });
    StageOutcome stage;
    stage.degree = n;
    for (std::size_t r = 0; r < outcomes.size(); ++r) {
      stage.evaluations += outcomes[r].evaluations;
      if (outcomes[r].value > stage.value) {
        stage.value = outcomes[r].value;
        stage.restart = static_cast<int>(r);
      }
    }
    result.evaluations += stage.evaluations;
    result.stages.push_back(stage);
    if (stage.value > result.value) {
      result.value = stage.value;
      result.degree = n;
      best_coeffs = outcomes[static_cast<std::size_t>(stage.restart)].coefficients;
      best_basis = ctx.basis;
      result.sup = ctx.certified_sup(best_coeffs);
    }
  }
  if (!std::isfinite(result.value)) throw SearchFailure("search budget exhausted without a feasible map");
  result.map = Poly::from_basis(problem.dim, best_basis, best_coeffs / result.sup);
  result.sup = 1.0;
  return result;
}

}  // namespace holoext
