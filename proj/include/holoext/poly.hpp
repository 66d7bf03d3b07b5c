#pragma once

// Polynomials C^d -> C stored as a sparse multi-index table, plus the dense
// monomial bases the searches optimize over.

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

#include "holoext/core.hpp"

namespace holoext {

using Multiindex = std::vector<int>;

inline int total_degree(const Multiindex& alpha) {
  return std::accumulate(alpha.begin(), alpha.end(), 0);
}

/// All multi-indices in `dim` variables with total degree <= `degree`, ordered
/// by total degree and then lexicographically descending (x^2 before xy).
inline std::vector<Multiindex> monomial_basis(int dim, int degree) {
  std::vector<Multiindex> out;
  Multiindex cur(static_cast<std::size_t>(dim), 0);
  for (int deg = 0; deg <= degree; ++deg) {
    // enumerate compositions of deg into dim parts
    auto rec = [&](auto& self, int pos, int remaining) -> void {
      if (pos == dim - 1) {
        cur[static_cast<std::size_t>(pos)] = remaining;
        out.push_back(cur);
        return;
      }
      for (int k = remaining; k >= 0; --k) {
        cur[static_cast<std::size_t>(pos)] = k;
        self(self, pos + 1, remaining - k);
      }
    };
    rec(rec, 0, deg);
  }
  return out;
}

/// Row of monomial values [z^alpha] for alpha in `basis`.
inline Eigen::RowVectorXcd evaluate_monomials(const std::vector<Multiindex>& basis, const Point& z) {
  int max_deg = 0;
  for (const auto& a : basis) max_deg = std::max(max_deg, total_degree(a));
  const auto d = z.size();
  CMatrix powers(d, max_deg + 1);
  for (Eigen::Index j = 0; j < d; ++j) {
    powers(j, 0) = 1.0;
    for (int k = 1; k <= max_deg; ++k) powers(j, k) = powers(j, k - 1) * z(j);
  }
  Eigen::RowVectorXcd row(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t m = 0; m < basis.size(); ++m) {
    Complex v = 1.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      const int e = basis[m][static_cast<std::size_t>(j)];
      if (e != 0) v *= powers(j, e);
    }
    row(static_cast<Eigen::Index>(m)) = v;
  }
  return row;
}

inline CMatrix evaluate_monomials(const std::vector<Multiindex>& basis, const std::vector<Point>& pts) {
  CMatrix out(static_cast<Eigen::Index>(pts.size()), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = evaluate_monomials(basis, pts[i]);
  return out;
}

class Poly {
 public:
  Poly() = default;
  explicit Poly(int dim) : dim_(dim) {
    if (dim < 1) throw InvalidInput("polynomial dimension must be >= 1");
  }

  static Poly constant(int dim, Complex c) {
    Poly p(dim);
    p.set(Multiindex(static_cast<std::size_t>(dim), 0), c);
    return p;
  }

  /// The r-th coordinate function z -> z_r (0-based).
  static Poly coordinate(int dim, int r) {
    Poly p(dim);
    Multiindex a(static_cast<std::size_t>(dim), 0);
    a.at(static_cast<std::size_t>(r)) = 1;
    p.set(a, 1.0);
    return p;
  }

  /// z -> sum_j c_j z_j + c0
  static Poly affine(Complex c0, const CVector& linear) {
    const int dim = static_cast<int>(linear.size());
    Poly p = constant(dim, c0);
    for (int j = 0; j < dim; ++j) p = p + coordinate(dim, j) * linear(j);
    return p;
  }

  static Poly from_basis(int dim, const std::vector<Multiindex>& basis, const CVector& coeffs) {
    Poly p(dim);
    for (std::size_t m = 0; m < basis.size(); ++m) p.add(basis[m], coeffs(static_cast<Eigen::Index>(m)));
    return p;
  }

  int dim() const { return dim_; }

  int degree() const {
    int deg = 0;
    for (const auto& [a, c] : terms_) deg = std::max(deg, total_degree(a));
    return deg;
  }

  const std::map<Multiindex, Complex>& terms() const { return terms_; }

  Complex coefficient(const Multiindex& a) const {
    auto it = terms_.find(a);
    return it == terms_.end() ? Complex{} : it->second;
  }

  void set(const Multiindex& a, Complex c) {
    check_index(a);
    if (c == Complex{}) {
      terms_.erase(a);
    } else {
      terms_[a] = c;
    }
  }

  void add(const Multiindex& a, Complex c) { set(a, coefficient(a) + c); }

  Complex operator()(const Point& z) const {
    require_point(z, dim_, "polynomial argument");
    Complex acc = 0.0;
    for (const auto& [a, c] : terms_) {
      Complex m = c;
      for (int j = 0; j < dim_; ++j) {
        const int e = a[static_cast<std::size_t>(j)];
        if (e != 0) m *= std::pow(z(j), e);
      }
      acc += m;
    }
    return acc;
  }

  /// Coefficient-wise conjugate: z -> conj(p(conj z)). An involution fixing
  /// every real-coefficient polynomial.
  Poly conjugate_coefficients() const {
    Poly out(dim_);
    for (const auto& [a, c] : terms_) out.terms_[a] = std::conj(c);
    return out;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    same_dim(a, b);
    Poly out = a;
    for (const auto& [m, c] : b.terms_) out.add(m, c);
    return out;
  }

  friend Poly operator-(const Poly& a, const Poly& b) { return a + b * Complex(-1.0); }

  friend Poly operator*(const Poly& a, Complex s) {
    Poly out(a.dim_);
    for (const auto& [m, c] : a.terms_) out.set(m, c * s);
    return out;
  }
  friend Poly operator*(Complex s, const Poly& a) { return a * s; }

  friend Poly operator*(const Poly& a, const Poly& b) {
    same_dim(a, b);
    Poly out(a.dim_);
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        Multiindex m(ma.size());
        for (std::size_t j = 0; j < m.size(); ++j) m[j] = ma[j] + mb[j];
        out.add(m, ca * cb);
      }
    }
    return out;
  }

  Poly pow(int n) const {
    if (n < 0) throw InvalidInput("negative polynomial power");
    Poly out = constant(dim_, 1.0);
    for (int k = 0; k < n; ++k) out = out * *this;
    return out;
  }

 private:
  void check_index(const Multiindex& a) const {
    if (static_cast<int>(a.size()) != dim_) throw InvalidInput("multi-index length does not match polynomial dimension");
    for (int e : a) {
      if (e < 0) throw InvalidInput("negative exponent in multi-index");
    }
  }
  static void same_dim(const Poly& a, const Poly& b) {
    if (a.dim_ != b.dim_) throw InvalidInput("polynomial dimension mismatch");
  }

  int dim_ = 1;
  std::map<Multiindex, Complex> terms_;
};

/// A polynomial map C^d -> C^m, one Poly per output coordinate.
using PolyVector = std::vector<Poly>;

inline Point evaluate(const PolyVector& f, const Point& z) {
  Point out(static_cast<Eigen::Index>(f.size()));
  for (std::size_t i = 0; i < f.size(); ++i) out(static_cast<Eigen::Index>(i)) = f[i](z);
  return out;
}

}  // namespace holoext
