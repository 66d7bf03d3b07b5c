#pragma once

// Kernel Grams, Pick matrices and the minimal interpolation norm.
//
// Gram convention: G_ij = <k_j, k_i> = k_j(lambda_i), so for a vector
// v = sum a_j k_j we have <v, v> = a* G a.

#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "holoext/core.hpp"

namespace holoext {

enum class KernelId { szego_disk, szego_polydisk_product, cauchy_szego_ball };

inline std::string to_string(KernelId k) {
  switch (k) {
    case KernelId::szego_disk: return "szego_disk";
    case KernelId::szego_polydisk_product: return "szego_polydisk_product";
    case KernelId::cauchy_szego_ball: return "cauchy_szego_ball";
  }
  return "unknown";
}

inline KernelId parse_kernel_id(const std::string& s) {
  if (s == "szego_disk") return KernelId::szego_disk;
  if (s == "szego_polydisk_product") return KernelId::szego_polydisk_product;
  if (s == "cauchy_szego_ball") return KernelId::cauchy_szego_ball;
  throw InvalidInput("unknown kernel '" + s + "'");
}

/// Only the disk kernel gives the exact Nevanlinna-Pick answer; for the others
/// the computed minimal norm is a one-sided (lower) bound.
inline bool kernel_is_exact(KernelId k) { return k == KernelId::szego_disk; }

struct KernelGram {
  KernelId kernel_id = KernelId::szego_disk;
  std::vector<Point> nodes;
  CMatrix entries;

  Eigen::Index size() const { return entries.rows(); }
};

/// k_w(z) for the chosen kernel.
inline Complex kernel_value(KernelId id, const Point& z, const Point& w) {
  switch (id) {
    case KernelId::szego_disk: return 1.0 / (1.0 - z(0) * std::conj(w(0)));
    case KernelId::szego_polydisk_product: {
      Complex acc = 1.0;
      for (Eigen::Index r = 0; r < z.size(); ++r) acc /= (1.0 - z(r) * std::conj(w(r)));
      return acc;
    }
    case KernelId::cauchy_szego_ball:
      return std::pow(1.0 - inner(z, w), -static_cast<double>(z.size()));
  }
  return 0.0;
}

inline void validate_nodes(KernelId id, const std::vector<Point>& nodes) {
  if (nodes.empty()) throw InvalidInput("at least one node is required");
  const auto d = nodes.front().size();
  if (id == KernelId::szego_disk && d != 1) throw InvalidInput("szego_disk nodes must be scalars");
  for (const auto& p : nodes) {
    require_point(p, d, "node");
    bool inside = true;
    switch (id) {
      case KernelId::szego_disk:
      case KernelId::szego_polydisk_product:
        for (Eigen::Index r = 0; r < d; ++r) inside = inside && std::abs(p(r)) < 1.0;
        break;
      case KernelId::cauchy_szego_ball: inside = p.squaredNorm() < 1.0; break;
    }
    if (!inside) throw DomainError("node outside the reference domain of " + to_string(id));
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      if ((nodes[i] - nodes[j]).norm() <= 1e-12) throw InvalidInput("coincident nodes " + std::to_string(i) + " and " + std::to_string(j));
    }
  }
}

inline KernelGram gram(KernelId id, const std::vector<Point>& nodes) {
  validate_nodes(id, nodes);
  const auto n = static_cast<Eigen::Index>(nodes.size());
  KernelGram g;
  g.kernel_id = id;
  g.nodes = nodes;
  g.entries.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      g.entries(i, j) = kernel_value(id, nodes[static_cast<std::size_t>(i)], nodes[static_cast<std::size_t>(j)]);
    }
  }
  return g;
}

/// M_ij = (1 - w_i conj(w_j)) G_ij.
inline CMatrix pick_matrix(const KernelGram& g, const CVector& targets) {
  if (targets.size() != g.size()) throw InvalidInput("target count does not match node count");
  CMatrix m(g.size(), g.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    for (Eigen::Index j = 0; j < g.size(); ++j) m(i, j) = (1.0 - targets(i) * std::conj(targets(j))) * g.entries(i, j);
  }
  return m;
}

struct PickProblem {
  KernelGram gram;
  CVector targets;
};

inline CMatrix pick_matrix(const PickProblem& problem) { return pick_matrix(problem.gram, problem.targets); }

inline double hermitian_defect(const CMatrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

/// Ascending eigenvalues of a Hermitian matrix.
inline Eigen::VectorXd hermitian_eigenvalues(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// True iff the smallest eigenvalue is >= -tol * max(1, |M|).
inline bool is_psd(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) throw InvalidInput("is_psd: matrix is not square");
  if (m.size() == 0) return true;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (hermitian_defect(m) > 1e-10 * scale) throw InvalidInput("is_psd: matrix is not Hermitian");
  const auto ev = hermitian_eigenvalues(m);
  const double norm = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  return ev(0) >= -tol * std::max(1.0, norm);
}

struct MinimalNormResult {
  double t_star = 0.0;
  double bracket_low = 0.0;
  double bracket_high = 0.0;
  int iterations = 0;
  bool exact = true;                     ///< false for kernels giving only a lower bound
  std::vector<double> min_eigenvalues;  ///< smallest eigenvalue of L^{-1} M L^{-*} (G = L L^*) at each probe
  std::vector<double> probes;
};

inline constexpr int kBisectionMaxIterations = 200;

/// Relative eigenvalue tolerance used by the bisection's PSD probes. Kept at a
/// few hundred ulps so that t* is resolved to ~1e-12 on well-conditioned data.
inline constexpr double kBisectionPsdTolerance = 1e-13;

/// Least t > 0 with pick_matrix(targets / t) PSD, by bisection on
/// [max|w| * 1e-12, sum|w| * max G_ii] (widened if the upper end fails).
/// Probes test the congruent matrix L^{-1} M L^{-*}, which has the inertia of
/// M but eigenvalues in [.., 1]; the raw M loses digits when G is badly scaled.
inline MinimalNormResult minimal_sup_norm_report(KernelId id, const std::vector<Point>& nodes, const CVector& targets,
                                                 double tol) {
  if (!(tol > 0.0)) throw InvalidInput("minimal_sup_norm: tol must be positive");
  const KernelGram g = gram(id, nodes);
  if (targets.size() != g.size()) throw InvalidInput("target count does not match node count");
  for (Eigen::Index i = 0; i < targets.size(); ++i) {
    if (!std::isfinite(targets(i).real()) || !std::isfinite(targets(i).imag())) throw InvalidInput("non-finite target");
  }
  MinimalNormResult out;
  out.exact = kernel_is_exact(id);
  const double wmax = targets.cwiseAbs().maxCoeff();
  if (wmax == 0.0) return out;

  const Eigen::LLT<CMatrix> llt(g.entries);
  const bool normalize = llt.info() == Eigen::Success;
  auto probe = [&](double t) {
    CMatrix m = pick_matrix(g, targets / t);
    if (normalize) {
      const auto lower = llt.matrixL();
      m = lower.solve(lower.solve(m).adjoint().eval()).adjoint().eval();
      m = (0.5 * (m + m.adjoint())).eval();
    }
    const auto ev = hermitian_eigenvalues(m);
    out.probes.push_back(t);
    out.min_eigenvalues.push_back(ev(0));
    const double norm = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    return ev(0) >= -kBisectionPsdTolerance * std::max(1.0, norm);
  };

  double lo = wmax * 1e-12;
  double hi = targets.cwiseAbs().sum() * g.entries.diagonal().real().maxCoeff();
  hi = std::max(hi, wmax);
  while (!probe(hi)) {
    lo = hi;
    hi *= 2.0;
  }
  out.bracket_low = lo;
  out.bracket_high = hi;
  while (out.iterations < kBisectionMaxIterations && hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (probe(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
    ++out.iterations;
  }
  out.t_star = hi;
  return out;
}

inline double minimal_sup_norm(KernelId id, const std::vector<Point>& nodes, const CVector& targets, double tol) {
  return minimal_sup_norm_report(id, nodes, targets, tol).t_star;
}

}  // namespace holoext
