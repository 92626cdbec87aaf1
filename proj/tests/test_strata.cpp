#include "support.hpp"

#include <gtest/gtest.h>

using namespace cpt;

namespace {

GridSpec small_grid(const ModelPackage& M, int res) { return GridSpec{M.default_box, res}; }

}  // namespace

TEST(Strata, HermitianSignature) {
  Eigen::MatrixXcd A(2, 2);
  A << 1.0, 0.0, 0.0, -2.0;
  Tensor J = standard_J(4);
  EXPECT_EQ(hermitian_signature(embed_hermitian(A), J), (SignatureTriple{1, 1, 0}));
  A << 1.0, std::complex<double>(0, 1), std::complex<double>(0, -1), 1.0;  // rank one
  EXPECT_EQ(hermitian_signature(embed_hermitian(A), J), (SignatureTriple{1, 0, 1}));
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(4, 4);
  bad(0, 0) = 2.0;  // not J-Hermitian
  EXPECT_THROW(hermitian_signature(bad, J), PreconditionError);
}

TEST(Strata, LabelFromSignatures) {
  const SignatureTriple T{2, 1, 0};
  EXPECT_EQ(label_from_signatures({2, 0, 0}, T), StratumLabel::plus);
  EXPECT_EQ(label_from_signatures({1, 1, 0}, T), StratumLabel::minus);
  EXPECT_EQ(label_from_signatures({1, 0, 1}, T), StratumLabel::zero);
  // definite tractor metric: every point has signature (P-1, 0)
  EXPECT_EQ(label_from_signatures({2, 0, 0}, {3, 0, 0}), StratumLabel::minus);
}

TEST(Strata, ModelPointsAgainstOrbits) {
  const ModelPackage& M = cp2();
  Splitting s = Splitting::make(M.flat, M.J);
  // origin: X = (1, 0, 0), h(X, X) = 1
  Classification c0 = classify_point(M.zeta, s, Point{0, {0, 0, 0, 0}});
  EXPECT_EQ(orbit_oracle(M.h_form, M.homogeneous({0, 0, 0, 0})), 1);
  EXPECT_EQ(c0.signature, (SignatureTriple{1, 1, 0}));
  EXPECT_EQ(c0.tractor, (SignatureTriple{2, 1, 0}));
  EXPECT_EQ(c0.label, StratumLabel::minus);
  // |z2| = 1.5: h(X, X) < 0
  Classification c1 = classify_point(M.zeta, s, Point{0, {0, 0, 1.5, 0}});
  EXPECT_EQ(orbit_oracle(M.h_form, M.homogeneous({0, 0, 1.5, 0})), -1);
  EXPECT_EQ(c1.signature, (SignatureTriple{2, 0, 0}));
  EXPECT_EQ(c1.label, StratumLabel::plus);
  // isotropic X
  Classification c2 = classify_point(M.zeta, s, Point{0, {0, 0, 1, 0}});
  EXPECT_EQ(orbit_oracle(M.h_form, M.homogeneous({0, 0, 1, 0}), 1e-14), 0);
  EXPECT_EQ(c2.signature, (SignatureTriple{1, 0, 1}));
  EXPECT_EQ(c2.label, StratumLabel::zero);
  for (const Point& p : {Point{0, {0, 0, 0, 0}}, Point{0, {0, 0, 1.5, 0}}, Point{0, {0, 0, 1, 0}}})
    EXPECT_EQ(classify_point(M.zeta, s, p).label, orbit_label(M.h_form, M.homogeneous(p.coords)));
}

TEST(Strata, RandomPointsAgreeWithOrbitLabel) {
  for (const ModelPackage* M : {&cp2(), &cp2_definite()}) {
    Splitting s = Splitting::make(M->flat, M->J);
    for (const Point& p : random_points(*M, 200, 7))
      EXPECT_EQ(classify_point(M->zeta, s, p).label, orbit_label(M->h_form, M->homogeneous(p.coords)));
  }
}

TEST(Strata, NegatedSolutionSwapsLabels) {
  const ModelPackage& M = cp2();
  Splitting s = Splitting::make(M.flat, M.J);
  TensorField neg = scaled(M.zeta, -1.0);
  for (const Point& p : random_points(M, 50, 8)) {
    StratumLabel a = classify_point(M.zeta, s, p).label, b = classify_point(neg, s, p).label;
    if (a == StratumLabel::plus) EXPECT_EQ(b, StratumLabel::minus);
    if (a == StratumLabel::minus) EXPECT_EQ(b, StratumLabel::plus);
  }
}

TEST(Strata, StratifyIndefiniteModel) {
  const ModelPackage& M = cp2();
  StratifyOptions opt;
  opt.cr_limit = 10;
  StratificationReport r = stratify(M.zeta, Splitting::make(M.flat, M.J), small_grid(M, 12), opt);
  EXPECT_EQ(r.counts[0] + r.counts[1] + r.counts[2], r.grid.size());
  EXPECT_GT(r.counts[0], 0u);
  EXPECT_GT(r.counts[2], 0u);
  EXPECT_TRUE(r.separated);
  EXPECT_EQ(r.signatures[0], (SignatureTriple{2, 0, 0}));
  EXPECT_EQ(r.signatures[1], (SignatureTriple{1, 0, 1}));
  EXPECT_EQ(r.signatures[2], (SignatureTriple{1, 1, 0}));
  ASSERT_FALSE(r.roots.empty());
  for (const Root& root : r.roots) {
    EXPECT_LT(std::abs(root.tau), 1e-10);
    EXPECT_GT(root.grad_norm, 1e-6);
    Eigen::VectorXcd X = M.homogeneous(root.coords);
    EXPECT_LT(std::abs((X.adjoint() * M.h_form * X)(0, 0)) / X.squaredNorm(), 1e-8);
  }
  for (std::size_t k = 0; k < r.grid.size(); ++k) {
    StratumLabel want = orbit_label(M.h_form, M.homogeneous(r.grid.coords(k)));
    EXPECT_EQ(r.labels[k], want == StratumLabel::plus ? 1 : want == StratumLabel::zero ? 0 : -1);
  }
}

TEST(Strata, ThreadedStratifyIsIdentical) {
  const ModelPackage& M = cp2();
  StratifyOptions one, four;
  one.cr_limit = four.cr_limit = 5;
  four.threads = 4;
  Splitting s = Splitting::make(M.flat, M.J);
  StratificationReport a = stratify(M.zeta, s, small_grid(M, 8), one), b = stratify(M.zeta, s, small_grid(M, 8), four);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.tau, b.tau);
  ASSERT_EQ(a.roots.size(), b.roots.size());
  for (std::size_t i = 0; i < a.roots.size(); ++i) EXPECT_EQ(a.roots[i].coords, b.roots[i].coords);
}

TEST(Strata, DefiniteAndFlatHaveOneStratum) {
  static const ModelPackage flat11 = flat_model(2, 1, 1);
  for (const ModelPackage* M : {&cp2_definite(), &flat2(), &flat11}) {
    StratificationReport r = stratify(M->zeta, Splitting::make(M->flat, M->J), small_grid(*M, 8));
    int nonempty = 0;
    for (std::size_t c : r.counts) nonempty += c > 0;
    EXPECT_EQ(nonempty, 1);
    EXPECT_TRUE(r.roots.empty());
    EXPECT_TRUE(locate_hypersurface(M->zeta, M->J, small_grid(*M, 6)).empty());
  }
}

TEST(Strata, CRPackageAtRoots) {
  const ModelPackage& M = cp2();
  Splitting s = Splitting::make(M.flat, M.J);
  for (const Point& p : {Point{0, {0, 0, 1, 0}}, Point{0, {0.5, 0, 0, std::sqrt(1.25)}}, Point{0, {0.3, -0.4, 0.6, std::sqrt(0.89)}}}) {
    CRData cr = cr_data(M.zeta, s, p);
    EXPECT_NEAR(cr.theta_T, 1.0, 1e-8);
    EXPECT_LT(cr.T_dtheta, 1e-8);
    EXPECT_LT(cr.kernel_grad, 1e-8);
    EXPECT_LT(cr.kernel_theta, 1e-8);
    EXPECT_LT(cr.levi_agreement, 1e-7);
    EXPECT_EQ(cr.levi_signature, (SignatureTriple{1, 0, 0}));
    EXPECT_LT(std::abs(cr.null_defect), 1e-8);
    EXPECT_EQ(cr.H_basis.size(), 2u);
  }
}

TEST(Strata, CRPackageIndependentOfSplitting) {
  const ModelPackage& M = cp2();
  Point p{0, {0.5, 0, 0, std::sqrt(1.25)}};
  CRData a = cr_data(M.zeta, Splitting::make(M.flat, M.J), p);
  CRData b = cr_data(M.zeta, Splitting::make(M.connection, M.J), p);
  EXPECT_EQ(a.levi_signature, b.levi_signature);
  EXPECT_LT(b.T_dtheta, 1e-8);
  EXPECT_NEAR(b.theta_T, 1.0, 1e-8);
}

TEST(Strata, BisectionRoot) {
  const ModelPackage& M = cp2();
  Root r = bisect_root(M.zeta, M.J, 0, {0, 0, 0.5, 0}, {0, 0, 1.7, 0}, 1e-12);
  EXPECT_NEAR(r.coords[2], 1.0, 1e-10);
  EXPECT_LT(std::abs(r.tau), 1e-12);
  EXPECT_GT(r.grad_norm, 1.0);
}

TEST(Strata, OpenStratumMetric) {
  // definite model: g is the Fubini-Study metric up to a constant
  const ModelPackage& M = cp2_definite();
  double ratio = 0.0;
  for (const Point& p : random_points(M, 10, 9)) {
    OpenStratumMetric g = open_stratum_metric(M.zeta, M.J, p);
    Tensor fs = M.metric.value(p);
    if (ratio == 0.0) ratio = g.g(0, 0) / fs(0, 0);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) EXPECT_NEAR(g.g(a, b), ratio * fs(a, b), 1e-11);
    EXPECT_LT(g.hermitian_defect, 1e-13);
  }
  // indefinite model: a plus point carries a definite metric
  OpenStratumMetric gp = open_stratum_metric(cp2().zeta, cp2().J, Point{0, {0, 0, 1.5, 0}});
  EXPECT_EQ(hermitian_signature(gp.g, standard_J(4)), (SignatureTriple{2, 0, 0}));
  EXPECT_THROW(open_stratum_metric(cp2().zeta, cp2().J, Point{0, {0, 0, 1, 0}}), DomainError);
}
