#include <gtest/gtest.h>

#include "holoext/pick_kernels.hpp"

using namespace holoext;

namespace {

std::vector<Point> scalar_nodes(std::initializer_list<Complex> zs) {
  std::vector<Point> out;
  for (Complex z : zs) out.push_back(make_point({z}));
  return out;
}

// Random separated nodes in the disk of radius 0.8.
std::vector<Point> random_disk_nodes(Rng& rng, int n) {
  std::vector<Point> out;
  while (static_cast<int>(out.size()) < n) {
    const Complex z = uniform_disk(rng, 0.8);
    bool ok = true;
    for (const auto& p : out) ok = ok && std::abs(p(0) - z) > 0.15;
    if (ok) out.push_back(make_point({z}));
  }
  return out;
}

}  // namespace

TEST(Gram, DiskEntriesFollowConvention) {
  const auto g = gram(KernelId::szego_disk, scalar_nodes({Complex(0.1, 0.2), Complex(-0.3, 0.4)}));
  const Complex l1(0.1, 0.2), l2(-0.3, 0.4);
  // G_ij = k_j(lambda_i) = 1 / (1 - lambda_i conj(lambda_j))
  EXPECT_NEAR(std::abs(g.entries(0, 1) - 1.0 / (1.0 - l1 * std::conj(l2))), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(g.entries(1, 0) - 1.0 / (1.0 - l2 * std::conj(l1))), 0.0, 1e-15);
}

TEST(Gram, BallAndPolydiskKernels) {
  const std::vector<Point> nodes{make_point({0.1, 0.2}), make_point({Complex(0.0, 0.3), -0.2})};
  const auto ball = gram(KernelId::cauchy_szego_ball, nodes);
  EXPECT_NEAR(std::abs(ball.entries(0, 0) - std::pow(1.0 - 0.05, -2.0)), 0.0, 1e-14);
  const auto poly = gram(KernelId::szego_polydisk_product, nodes);
  const Complex expected = 1.0 / ((1.0 - 0.1 * Complex(0.0, -0.3)) * (1.0 - 0.2 * -0.2));
  EXPECT_NEAR(std::abs(poly.entries(0, 1) - expected), 0.0, 1e-15);
}

TEST(Gram, HermitianPsdPositiveDiagonalOnRandomNodeSets) {
  Rng rng = make_rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + trial % 6;
    const KernelId id = static_cast<KernelId>(trial % 3);
    const int d = id == KernelId::szego_disk ? 1 : 2;
    std::vector<Point> nodes;
    while (static_cast<int>(nodes.size()) < n) {
      Point p = d == 1 ? make_point({uniform_disk(rng, 0.9)}) : uniform_ball(rng, 2, 0.9);
      bool ok = true;
      for (const auto& q : nodes) ok = ok && (p - q).norm() > 1e-6;
      if (ok) nodes.push_back(p);
    }
    const auto g = gram(id, nodes);
    EXPECT_LE(hermitian_defect(g.entries), 1e-12);
    const auto ev = hermitian_eigenvalues(g.entries);
    EXPECT_GE(ev(0), -1e-10 * ev(ev.size() - 1));
    for (int i = 0; i < n; ++i) EXPECT_GT(g.entries(i, i).real(), 0.0);
  }
}

TEST(Gram, RejectsBadNodes) {
  EXPECT_THROW(gram(KernelId::szego_disk, scalar_nodes({0.1, 1.0})), DomainError);
  EXPECT_THROW(gram(KernelId::szego_disk, scalar_nodes({0.1, 0.1})), InvalidInput);
  EXPECT_THROW(gram(KernelId::szego_disk, {make_point({0.1, 0.1})}), InvalidInput);
  EXPECT_THROW(gram(KernelId::cauchy_szego_ball, {make_point({0.8, 0.8})}), DomainError);
  EXPECT_THROW(gram(KernelId::szego_disk, {}), InvalidInput);
}

TEST(PickMatrix, TwoPointIdentityMap) {
  const auto g = gram(KernelId::szego_disk, scalar_nodes({0.0, 0.5}));
  CVector w(2);
  w << 0.0, 0.5;
  const CMatrix m = pick_matrix(g, w);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_NEAR(std::abs(m(i, j) - 1.0), 0.0, 1e-15);
}

TEST(PickMatrix, ZeroTargetsGiveGram) {
  const auto g = gram(KernelId::szego_disk, scalar_nodes({0.1, Complex(0.2, 0.5), -0.4}));
  EXPECT_EQ(pick_matrix(g, CVector::Zero(3)), g.entries);
}

TEST(PickMatrix, UnimodularTargetsVanish) {
  const auto g = gram(KernelId::szego_disk, scalar_nodes({0.0}));
  CVector w(1);
  w << 1.0;
  EXPECT_EQ(pick_matrix(g, w)(0, 0), Complex(0.0));
  Rng rng = make_rng(13);
  for (int t = 0; t < 50; ++t) {
    const Complex omega = std::polar(1.0, 2 * kPi * t / 50.0);
    const auto g3 = gram(KernelId::szego_disk, random_disk_nodes(rng, 4));
    const CMatrix m = pick_matrix(g3, CVector::Constant(4, omega));
    // 1 - |omega|^2 is exactly 0 only up to rounding of the polar form
    EXPECT_LE(m.cwiseAbs().maxCoeff(), 1e-15 * g3.entries.cwiseAbs().maxCoeff() * 10);
  }
}

TEST(PickMatrix, ExactlyZeroForUnitConstant) {
  Rng rng = make_rng(14);
  const auto g = gram(KernelId::szego_disk, random_disk_nodes(rng, 5));
  for (Complex omega : {Complex(1.0), Complex(-1.0), Complex(0.0, 1.0), Complex(0.0, -1.0)}) {
    EXPECT_EQ(pick_matrix(g, CVector::Constant(5, omega)).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(PickMatrix, LengthMismatchRejected) {
  const auto g = gram(KernelId::szego_disk, scalar_nodes({0.0, 0.5}));
  EXPECT_THROW(pick_matrix(g, CVector::Zero(3)), InvalidInput);
}

TEST(IsPsd, Examples) {
  CMatrix a(2, 2);
  a << 1.0, 1.0, 1.0, 1.0;
  EXPECT_TRUE(is_psd(a, 1e-9));
  CMatrix b(2, 2);
  b << 1.0, 1.0, 1.0, 1.0 - 1e-6;
  EXPECT_FALSE(is_psd(b, 1e-9));
  EXPECT_TRUE(is_psd(CMatrix::Identity(3, 3), 1e-9));
}

TEST(IsPsd, RejectsNonHermitian) {
  CMatrix a(2, 2);
  a << 1.0, 2.0, 0.0, 1.0;
  EXPECT_THROW(is_psd(a, 1e-9), InvalidInput);
}

TEST(MinimalNorm, IdentityInterpolant) {
  CVector w(2);
  w << 0.0, 0.5;
  EXPECT_NEAR(minimal_sup_norm(KernelId::szego_disk, scalar_nodes({0.0, 0.5}), w, 1e-12), 1.0, 1e-10);
}

TEST(MinimalNorm, TwoPointClosedForm) {
  CVector w(2);
  w << 0.0, 0.75;
  const auto r = minimal_sup_norm_report(KernelId::szego_disk, scalar_nodes({0.0, 0.5}), w, 1e-12);
  EXPECT_NEAR(r.t_star, 1.5, 1e-10);
  EXPECT_TRUE(r.exact);
  EXPECT_LE(r.bracket_low, 1.5);
  EXPECT_GE(r.bracket_high, 1.5);
  EXPECT_EQ(r.probes.size(), r.min_eigenvalues.size());
  EXPECT_LE(r.iterations, 200);
}

TEST(MinimalNorm, SingleNodeIsModulus) {
  CVector w(1);
  w << Complex(0.3, -0.4);
  EXPECT_NEAR(minimal_sup_norm(KernelId::szego_disk, scalar_nodes({Complex(0.2, 0.1)}), w, 1e-12), 0.5, 1e-10);
}

TEST(MinimalNorm, ZeroTargetsGiveZero) {
  EXPECT_EQ(minimal_sup_norm(KernelId::szego_disk, scalar_nodes({0.2, 0.4}), CVector::Zero(2), 1e-9), 0.0);
}

TEST(MinimalNorm, Homogeneous) {
  Rng rng = make_rng(15);
  for (int trial = 0; trial < 30; ++trial) {
    const auto nodes = random_disk_nodes(rng, 2 + trial % 4);
    CVector w(static_cast<Eigen::Index>(nodes.size()));
    for (auto& x : w) x = uniform_disk(rng);
    const double tol = 1e-10;
    const double base = minimal_sup_norm(KernelId::szego_disk, nodes, w, tol);
    for (double c : {0.5, 2.0, 10.0}) {
      EXPECT_NEAR(minimal_sup_norm(KernelId::szego_disk, nodes, CVector(c * w), tol), c * base, 4 * c * tol + 1e-12);
    }
  }
}

TEST(MinimalNorm, SchwarzPickTwoPointFormula) {
  // 0 -> 0, lambda -> w: the least norm is |w| / |lambda|.
  Rng rng = make_rng(16);
  for (int trial = 0; trial < 200; ++trial) {
    const Complex lambda = uniform_disk(rng, 0.9);
    if (std::abs(lambda) < 0.05) continue;
    const Complex w = uniform_disk(rng);
    CVector t(2);
    t << 0.0, w;
    const double got = minimal_sup_norm(KernelId::szego_disk, scalar_nodes({0.0, lambda}), t, 1e-12);
    EXPECT_NEAR(got, std::abs(w) / std::abs(lambda), 1e-9);
  }
}

TEST(MinimalNorm, GeneralTwoPointFormula) {
  // For two nodes the least norm t solves rho(w1/t, w2/t) = rho(l1, l2);
  // check the Pick determinant at the returned t vanishes.
  Rng rng = make_rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const auto nodes = random_disk_nodes(rng, 2);
    CVector w(2);
    w << uniform_disk(rng), uniform_disk(rng);
    const double t = minimal_sup_norm(KernelId::szego_disk, nodes, w, 1e-12);
    if (t <= std::max(std::abs(w(0)), std::abs(w(1))) + 1e-9) continue;  // constant-dominated case
    const Complex a = w(0) / t, b = w(1) / t;
    const double rho_w = std::abs(a - b) / std::abs(1.0 - std::conj(a) * b);
    const double rho_l = std::abs(nodes[0](0) - nodes[1](0)) / std::abs(1.0 - std::conj(nodes[0](0)) * nodes[1](0));
    EXPECT_NEAR(rho_w, rho_l, 1e-8);
  }
}

TEST(MinimalNorm, BallKernelIsFlaggedLowerBound) {
  const std::vector<Point> nodes{make_point({0.0, 0.0}), make_point({0.3, 0.4})};
  CVector w(2);
  w << 0.0, 0.5;
  const auto r = minimal_sup_norm_report(KernelId::cauchy_szego_ball, nodes, w, 1e-12);
  EXPECT_FALSE(r.exact);
  // the explicit interpolant z -> <z, (0.6, 0.8)> has sup 1 on the ball
  EXPECT_LE(r.t_star, 1.0 + 1e-9);
}

TEST(MinimalNorm, RejectsBadInput) {
  CVector w(2);
  w << 0.0, 0.5;
  EXPECT_THROW(minimal_sup_norm(KernelId::szego_disk, scalar_nodes({0.0, 0.5}), w, 0.0), InvalidInput);
  EXPECT_THROW(minimal_sup_norm(KernelId::szego_disk, scalar_nodes({0.0}), w, 1e-9), InvalidInput);
  CVector bad(2);
  bad << 0.0, NAN;
  EXPECT_THROW(minimal_sup_norm(KernelId::szego_disk, scalar_nodes({0.0, 0.5}), bad, 1e-9), InvalidInput);
}
