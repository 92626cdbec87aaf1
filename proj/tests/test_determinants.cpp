#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace cpt;

namespace {

Tensor random_antisymmetric(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-1, 1);
  Tensor A(n, 2, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      A(i, j) = d(rng);
      A(j, i) = -A(i, j);
    }
  return A;
}

}  // namespace

TEST(Determinants, PfaffianSquaredIsDeterminant) {
  for (int n : {2, 4, 6, 8})
    for (unsigned seed = 1; seed <= 5; ++seed) {
      Tensor A = random_antisymmetric(n, seed);
      const double pf = pfaffian(A);
      EXPECT_NEAR(pf * pf, to_matrix(A).determinant(), 1e-12);
      std::vector<int> idx(n);
      for (int i = 0; i < n; ++i) idx[i] = i;
      EXPECT_NEAR(pf, pfaffian_expand(A, idx), 1e-12);
    }
  Tensor S(4, 2, 0.0);
  S(0, 1) = 1;
  S(1, 0) = -1;
  S(2, 3) = 1;
  S(3, 2) = -1;
  EXPECT_EQ(pfaffian(S), 1.0);
}

TEST(Determinants, FlatDeltaFormIsConstant) {
  const ModelPackage& F = flat2();
  for (const Point& p : random_points(F, 5, 1)) EXPECT_DOUBLE_EQ(det_weighted_hermitian(F.zeta, F.J, p), 1.0);
}

TEST(Determinants, RankDeficientFormVanishes) {
  auto chart = whole_chart(4);
  ComplexStructure J = standard_complex_structure(chart);
  TensorField z = poly_field(chart, {2, 0}, Weight::real(-1),
                             {"1", "0", "0", "0", "0", "1", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0"});
  EXPECT_EQ(det_weighted_hermitian(z, J, Point{0, {0.1, 0.2, 0.3, 0.4}}), 0.0);
}

TEST(Determinants, ModelDensityAgreesWithDenseDeterminant) {
  const ModelPackage& M = cp2();
  for (const Point& p : random_points(M, 10, 2)) {
    Tensor z = M.zeta.value(p), J = M.J.J.value(p);
    // the real 4x4 determinant of a Hermitian embedding is the square of the complex one
    const double d = det_weighted_hermitian(M.zeta, M.J, p);
    EXPECT_NEAR(d * d, to_matrix(z).determinant(), 1e-12 * std::max(1.0, d * d));
    // sign: product of complex eigenvalues
    Eigen::MatrixXcd Zc(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) Zc(i, j) = {z(2 * i, 2 * j), z(2 * i + 1, 2 * j)};
    EXPECT_NEAR(d, Zc.determinant().real(), 1e-12 * std::max(1.0, std::abs(d)));
  }
}

TEST(Determinants, TractorDeterminantConstantOnModels) {
  struct Case {
    const ModelPackage* M;
    double expect;
  };
  for (Case c : {Case{&cp2(), -1.0}, Case{&cp2_definite(), 1.0}}) {
    Splitting s = Splitting::make(c.M->connection, c.M->J);
    Splitting t = Splitting::make(c.M->flat, c.M->J);
    for (const Point& p : random_points(*c.M, 20, 3)) {
      EXPECT_NEAR(det_tractor_hermitian(split_zeta(c.M->zeta, s, p, 0)), c.expect, 1e-12);
      EXPECT_NEAR(det_tractor_hermitian(split_zeta(c.M->zeta, t, p, 0)), c.expect, 1e-12);
    }
  }
}

TEST(Determinants, TractorDeterminantMatchesDense) {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> d(-1, 1);
  Tensor J = standard_J(4);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Random(2, 2);
    Eigen::MatrixXcd Hc = A + A.adjoint();
    Tensor zeta = from_matrix(embed_hermitian(Hc));
    Tensor lambda(4, 1, 0.0);
    for (int i = 0; i < 4; ++i) lambda(i) = d(rng);
    const double nu = d(rng);
    Eigen::MatrixXd H = to_matrix(assemble_H(zeta, lambda, nu, J));
    const double pf = det_tractor_matrix(H, J);
    EXPECT_NEAR(pf * pf, H.determinant(), 1e-12 * std::max(1.0, std::abs(H.determinant())));
    // nu on the Schur-complement zero makes the matrix singular
    Eigen::Vector4d l = to_vector(lambda);
    const double nu0 = 0.25 * l.dot(to_matrix(zeta).inverse() * l);
    EXPECT_NEAR(det_tractor_matrix(to_matrix(assemble_H(zeta, lambda, nu0, J)), J), 0.0, 1e-12);
  }
}

TEST(Determinants, TractorDeterminantInvariantUnderChange) {
  const ModelPackage& M = cp2();
  auto chart = whole_chart(4);
  // a non-solution, so the value varies from point to point
  TensorField z = poly_field(chart, {2, 0}, Weight::real(-1),
                             {"2 + x0^2", "0", "x1*x2", "x3", "0", "2 + x0^2", "-x3", "x1*x2",  //
                              "x1*x2", "-x3", "-1 + x1^2", "0", "x3", "x1*x2", "0", "-1 + x1^2"});
  Splitting s = Splitting::make(M.connection, M.J);
  Upsilon u = random_polynomial_upsilon(M.chart, 13, 2);
  Splitting t = s.transformed(u);
  for (const Point& p : random_points(M, 10, 5)) {
    TractorHSection h = split_zeta(z, s, p, 0);
    const double d0 = det_tractor_hermitian(h);
    EXPECT_NEAR(det_tractor_hermitian(change_splitting_H(h, u, t)), d0, 1e-10 * std::max(1.0, std::abs(d0)));
  }
}

TEST(Determinants, InverseTractorMetric) {
  // flat block-diagonal: inverse is the block inverse
  const ModelPackage& F = flat2();
  Splitting sf = Splitting::make(F.flat, F.J);
  TractorHSection hf = split_zeta(F.zeta, sf, Point{0, {0.1, 0.2, 0.3, 0.4}}, 0);
  hf.slots.nu = Taylor(4, 0, 2.0);
  TractorHDualSection phi = inverse_tractor_metric(hf);
  EXPECT_DOUBLE_EQ(phi.slots.tau.value(), 0.5);
  EXPECT_EQ(max_abs(values(phi.slots.lambda)), 0.0);
  EXPECT_LT(max_diff(values(phi.slots.phi), from_matrix(to_matrix(F.zeta.value(hf.p)).inverse())), 1e-15);
  // degenerate: nu = 0 on the flat model
  hf.slots.nu = Taylor(4, 0, 0.0);
  EXPECT_THROW(inverse_tractor_metric(hf), InversionError);
  // random nondegenerate: Phi H = id
  const ModelPackage& M = cp2();
  Splitting s = Splitting::make(M.connection, M.J).transformed(random_polynomial_upsilon(M.chart, 2, 2));
  for (const Point& p : random_points(M, 10, 6)) {
    TractorHSection h = split_zeta(M.zeta, s, p, 0);
    Tensor J = M.J.J.value(p);
    Eigen::MatrixXd H = assemble_H(h.slots, J);
    Eigen::MatrixXd P = to_matrix(values(assemble_Hdual(inverse_tractor_metric(h).slots, M.J.J.jet(p, 0))));
    EXPECT_LT((P * H - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Determinants, InverseAtDegeneracyLocus) {
  const ModelPackage& M = cp2();
  Splitting s = Splitting::make(M.flat, M.J);
  Point p{0, {0, 0, 1, 0}};
  TractorHDualSection phi = inverse_tractor_metric(split_zeta(M.zeta, s, p, 1));
  EXPECT_LT(std::abs(phi.slots.tau.value()), 1e-14);
  // at tau = 0 the weighted gradient is the coordinate gradient: nabla tau = 2 eta
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(phi.slots.tau.d1(i), 2 * phi.slots.lambda(i).value(), 1e-12);
}

TEST(Determinants, ScalarCurvatureCalibration) {
  Calibration c2 = calibrate_scalar_curvature_constant(cp2(), 100, 1);
  EXPECT_LT(c2.spread, 1e-8);
  EXPECT_NEAR(c2.kappa, 1.0 / 24.0, 1e-10);
  Calibration c2d = calibrate_scalar_curvature_constant(cp2_definite(), 100, 2);
  EXPECT_NEAR(c2d.kappa, 1.0 / 24.0, 1e-10);
  Calibration c3 = calibrate_scalar_curvature_constant(cpm_model(3, 1, 1), 30, 3);
  EXPECT_LT(c3.spread, 1e-8);
  EXPECT_NEAR(c3.kappa, 1.0 / 48.0, 1e-10);
  // flat: scalar curvature and tractor determinant both vanish
  EXPECT_EQ(calibrate_scalar_curvature_constant(flat2(), 10, 4).kappa, 0.0);
}
