#pragma once

// The finite commuting model tuple on span{k_1, ..., k_N}: the adjoint of
// each coordinate operator is diagonal in the kernel basis,
//   T_r^* k_j = conj(lambda_j^r) k_j,
// so every polynomial p acts through its node values, p(T)^* k_j = conj(p(lambda_j)) k_j.
//
// Operators are stored by their matrix in the k-basis (A k_j = sum_i A_ij k_i);
// the inner product is <sum a_j k_j, sum b_i k_i> = b* G a.

#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "holoext/core.hpp"
#include "holoext/pick_kernels.hpp"
#include "holoext/poly.hpp"

namespace holoext {

inline constexpr double kMaxGramCondition = 1e12;

struct GramOperator {
  CMatrix matrix;
  KernelGram gram;
};

namespace detail {

inline Eigen::LLT<CMatrix> factor_gram(const CMatrix& g) {
  Eigen::LLT<CMatrix> llt(g);
  if (llt.info() != Eigen::Success) throw InvalidInput("Gram matrix is not positive definite");
  return llt;
}

}  // namespace detail

/// Condition number of a Hermitian positive definite Gram (inf if singular).
inline double gram_condition(const CMatrix& g) {
  const auto ev = hermitian_eigenvalues(g);
  if (ev(0) <= 0.0) return std::numeric_limits<double>::infinity();
  return ev(ev.size() - 1) / ev(0);
}

class ModelTuple {
 public:
  /// Builds the model on the nodes; rejects Grams that are not safely
  /// positive definite (smallest eigenvalue <= 1e-10 |G| or condition > 1e12).
  static ModelTuple build(KernelId id, const std::vector<Point>& nodes) {
    ModelTuple m;
    m.gram_ = holoext::gram(id, nodes);
    const auto ev = hermitian_eigenvalues(m.gram_.entries);
    const double top = ev(ev.size() - 1);
    m.condition_ = ev(0) > 0.0 ? top / ev(0) : std::numeric_limits<double>::infinity();
    if (!(ev(0) > 1e-10 * top) || m.condition_ > kMaxGramCondition) {
      throw IllConditioned("kernel functions at the nodes are numerically dependent", m.condition_);
    }
    m.llt_ = detail::factor_gram(m.gram_.entries);
    return m;
  }

  const KernelGram& gram() const { return gram_; }
  const std::vector<Point>& nodes() const { return gram_.nodes; }
  int dim() const { return static_cast<int>(gram_.nodes.front().size()); }
  Eigen::Index size() const { return gram_.size(); }
  double condition() const { return condition_; }

  /// The operator whose adjoint is diag(conj(values)) in the k-basis:
  /// matrix G^{-1} diag(values) G.
  GramOperator from_node_values(const CVector& values) const {
    if (values.size() != size()) throw InvalidInput("node value count does not match the model");
    GramOperator op;
    op.matrix = llt_.solve(values.asDiagonal() * gram_.entries);
    op.gram = gram_;
    return op;
  }

  /// T_r, 0-based coordinate index.
  GramOperator coordinate(int r) const {
    if (r < 0 || r >= dim()) throw InvalidInput("coordinate index out of range");
    CVector v(size());
    for (Eigen::Index j = 0; j < size(); ++j) v(j) = nodes()[static_cast<std::size_t>(j)](r);
    return from_node_values(v);
  }

  /// Matrix of the Gram adjoint A^# = G^{-1} A* G.
  CMatrix adjoint(const CMatrix& a) const { return llt_.solve(a.adjoint() * gram_.entries); }

  CVector values_of(const Poly& p) const {
    if (p.dim() != dim()) throw InvalidInput("polynomial dimension does not match the model");
    CVector w(size());
    for (Eigen::Index j = 0; j < size(); ++j) w(j) = p(nodes()[static_cast<std::size_t>(j)]);
    return w;
  }

 private:
  ModelTuple() = default;

  KernelGram gram_;
  Eigen::LLT<CMatrix> llt_;
  double condition_ = 1.0;
};

inline ModelTuple build_model(KernelId id, const std::vector<Point>& nodes) { return ModelTuple::build(id, nodes); }

/// psi^cup(z) = conj(psi(conj z)): conjugates every coefficient.
inline Poly psi_cup(const Poly& p) { return p.conjugate_coefficients(); }

inline GramOperator evaluate_poly(const ModelTuple& model, const Poly& p) { return model.from_node_values(model.values_of(p)); }

/// Operator norm in the Gram inner product: with G = L L*, the map x -> L* x
/// is an isometry onto C^N, so |A| = |L* A L^{-*}|_2.
inline double operator_norm(const GramOperator& op) {
  const CMatrix& g = op.gram.entries;
  if (op.matrix.rows() != g.rows() || op.matrix.cols() != g.cols()) throw InvalidInput("operator and Gram sizes differ");
  if (gram_condition(g) > kMaxGramCondition) throw InvalidInput("Gram matrix is singular or ill-conditioned");
  const auto llt = detail::factor_gram(g);
  const CMatrix lower = llt.matrixL();
  const CMatrix x = lower.adjoint() * op.matrix;
  // y = x L^{-*}  <=>  L y* = x*
  const CMatrix y = lower.triangularView<Eigen::Lower>().solve(x.adjoint()).adjoint();
  Eigen::JacobiSVD<CMatrix> svd(y);
  return svd.singularValues()(0);
}

struct DefectPaths {
  double via_operator = 0.0;     ///< <(I - f(T) f(T)^*) v, v>
  double via_pick_sum = 0.0;     ///< sum conj(a_i) a_j (1 - w_i conj(w_j)) G_ij
  double imaginary_residual = 0.0;
};

/// Both routes for node values w (the operator depends on p only through w).
inline DefectPaths defect_form_paths(const ModelTuple& model, const CVector& w, const CVector& a) {
  if (a.size() != model.size()) throw InvalidInput("coefficient vector length does not match the model");
  const GramOperator f = model.from_node_values(w);
  const CMatrix& g = model.gram().entries;
  const CVector u = a - f.matrix * (model.adjoint(f.matrix) * a);
  const Complex via_op = a.dot(g * u);
  const Complex via_sum = a.dot(pick_matrix(model.gram(), w) * a);
  DefectPaths out;
  out.via_operator = via_op.real();
  out.via_pick_sum = via_sum.real();
  out.imaginary_residual = std::max(std::abs(via_op.imag()), std::abs(via_sum.imag()));
  return out;
}

inline DefectPaths defect_form_paths(const ModelTuple& model, const Poly& p, const CVector& a) {
  return defect_form_paths(model, model.values_of(p), a);
}

/// Throws ConsistencyError unless the two routes agree to 1e-10 (relative to
/// the size of <v, v> when that exceeds 1).
inline void require_paths_agree(const DefectPaths& paths, double scale) {
  const double tol = 1e-10 * std::max(1.0, scale);
  if (std::abs(paths.via_operator - paths.via_pick_sum) > tol || paths.imaginary_residual > tol) {
    throw ConsistencyError("defect form routes disagree: operator " + std::to_string(paths.via_operator) + " vs Pick sum " +
                           std::to_string(paths.via_pick_sum));
  }
}

/// <(I - p(T) p(T)^*) v, v> for v = sum a_j k_j, cross-checked against the
/// closed Pick-matrix sum before returning the operator-route value.
inline double defect_form(const ModelTuple& model, const Poly& p, const CVector& a) {
  const DefectPaths paths = defect_form_paths(model, p, a);
  require_paths_agree(paths, a.dot(model.gram().entries * a).real());
  return paths.via_operator;
}

struct DefectWitness {
  double min_eigenvalue = 0.0;  ///< min of <(I - F F^*) v, v> / <v, v>
  CVector coefficients;         ///< the a with v = sum a_j k_j attaining it (<v, v> = 1)
};

/// Smallest generalized eigenpair of (Pick matrix, Gram).
inline DefectWitness defect_witness(const ModelTuple& model, const CVector& node_values) {
  const CMatrix m = pick_matrix(model.gram(), node_values);
  Eigen::GeneralizedSelfAdjointEigenSolver<CMatrix> es(m, model.gram().entries);
  DefectWitness out;
  out.min_eigenvalue = es.eigenvalues()(0);
  out.coefficients = es.eigenvectors().col(0);
  return out;
}

struct VonNeumannReport {
  double norm = 0.0;
  bool vn_V_pass = false;
  bool vn_Omega_pass = false;
};

inline VonNeumannReport von_neumann_check(const ModelTuple& model, const Poly& p, double sup_on_V, double sup_on_Omega) {
  if (!(sup_on_V >= 0.0) || !(sup_on_Omega >= 0.0)) throw InvalidInput("supremum values must be nonnegative");
  VonNeumannReport r;
  r.norm = operator_norm(evaluate_poly(model, p));
  r.vn_V_pass = r.norm <= sup_on_V + 1e-9;
  r.vn_Omega_pass = r.norm <= sup_on_Omega + 1e-9;
  return r;
}

/// If p vanishes at every node then p(T) must be the zero operator.
inline bool subordination_check(const ModelTuple& model, const Poly& p, const CVector& variety_values) {
  if (variety_values.size() != model.size()) throw InvalidInput("variety value count does not match the model");
  if (variety_values.size() > 0 && variety_values.cwiseAbs().maxCoeff() > 1e-12) return true;
  return operator_norm(evaluate_poly(model, p)) <= 1e-10;
}

}  // namespace holoext
