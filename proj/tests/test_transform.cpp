#include "support.hpp"

#include <gtest/gtest.h>

using namespace cpt;

TEST(Transform, ZeroUpsilonIsIdentity) {
  const ModelPackage& M = cp2();
  Connection t = transform_connection(M.connection, M.J, constant_upsilon(M.chart, {0, 0, 0, 0}));
  for (const Point& p : random_points(M, 5, 1)) EXPECT_EQ(max_diff(t.gamma.value(p), M.connection.gamma.value(p)), 0.0);
}

TEST(Transform, InverseRoundTrip) {
  const ModelPackage& M = cp2();
  Connection t = transform_connection(M.connection, M.J, random_polynomial_upsilon(M.chart, 4, 2));
  Connection back = transform_connection(t, M.J, random_polynomial_upsilon(M.chart, 4, 2, -1.0));
  for (const Point& p : random_points(M, 10, 2))
    EXPECT_LT(max_diff(back.gamma.value(p), M.connection.gamma.value(p)), 1e-12);
}

TEST(Transform, ConstantVectorFieldHandEvaluation) {
  // flat R^4 with Upsilon = dx0; nabla~_a e_1^b = Q^b_{a1}
  auto chart = whole_chart(4);
  ComplexStructure J = standard_complex_structure(chart);
  ASSERT_EQ(standard_J(4)(1, 0), 1.0);
  Connection t = transform_connection(Connection{zero_connection_field(chart)}, J, constant_upsilon(chart, {1, 0, 0, 0}));
  Tensor G = t.gamma.value(Point{0, {0.5, 0.1, -0.3, 0.2}});
  double expect[4][4] = {};  // [a][b]
  expect[0][1] = 2.0;
  expect[1][0] = -2.0;
  expect[2][3] = 1.0;
  expect[3][2] = -1.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) EXPECT_DOUBLE_EQ(G(b, a, 1), expect[a][b]) << "a=" << a << " b=" << b;
}

TEST(Transform, DensityDerivative) {
  auto chart = whole_chart(4);
  ComplexStructure J = standard_complex_structure(chart);
  Connection flat{zero_connection_field(chart)};
  TensorField U = constant_upsilon(chart, {1, 0, 0, 0});
  Connection t = transform_connection(flat, J, U);
  Point p{0, {0.3, -0.2, 0.4, 0.1}};
  // weight (0,0): unchanged
  TensorField s0 = poly_field(chart, {0, 0}, Weight(), {"x0*x1 + x2"});
  auto d0 = density_gradient(flat, J, s0, p), d0t = density_gradient(t, J, s0, p);
  for (int a = 0; a < 4; ++a) EXPECT_NEAR(std::abs(d0[a] - d0t[a]), 0.0, 1e-15);
  // weight (1,1): nabla~ tau = nabla tau + 2 Upsilon tau
  TensorField s1 = poly_field(chart, {0, 0}, Weight::real(1), {"1 + x0*x1 + x2^2"});
  const double tau = 1 + 0.3 * -0.2 + 0.4 * 0.4;
  auto d1 = density_gradient(flat, J, s1, p), d1t = density_gradient(t, J, s1, p);
  auto law = transform_density_derivative(flat, J, U, s1, p);
  for (int a = 0; a < 4; ++a) {
    EXPECT_NEAR(d1t[a].real(), d1[a].real() + 2 * (a == 0) * tau, 1e-14);
    EXPECT_NEAR(std::abs(law[a] - d1t[a]), 0.0, 1e-14);
  }
  // weight (-1,-1), tau = 1, Upsilon = dx0: nabla~_0 tau = -2
  TensorField sm = poly_field(chart, {0, 0}, Weight::real(-1), {"1"});
  auto dm = density_gradient(t, J, sm, p);
  EXPECT_NEAR(dm[0].real(), -2.0, 1e-15);
  for (int a = 1; a < 4; ++a) EXPECT_NEAR(std::abs(dm[a]), 0.0, 1e-15);
}

TEST(Transform, SchoutenFromFlatWithConstantUpsilon) {
  auto chart = whole_chart(4);
  ComplexStructure J = standard_complex_structure(chart);
  std::vector<double> u{0.4, -1.1, 0.7, 0.25};
  Connection t = transform_connection(Connection{zero_connection_field(chart)}, J, constant_upsilon(chart, u));
  Point p{0, {0.1, 0.2, 0.3, 0.4}};
  Tensor P = schouten(t, J, p), Jv = standard_J(4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double ju_a = 0, ju_b = 0;
      for (int i = 0; i < 4; ++i) {
        ju_a += Jv(i, a) * u[i];
        ju_b += Jv(i, b) * u[i];
      }
      EXPECT_NEAR(P(a, b), u[a] * u[b] - ju_a * ju_b, 1e-14);
    }
}

TEST(Transform, SchoutenConsistency) {
  const ModelPackage& M = cp2();
  for (unsigned seed = 1; seed <= 5; ++seed) {
    Upsilon u = random_polynomial_upsilon(M.chart, seed, 2);
    Connection t = transform_connection(M.connection, M.J, u);
    for (const Point& p : random_points(M, 5, seed)) {
      Tensor P = schouten(M.connection, M.J, p);
      EXPECT_LT(max_diff(schouten(t, M.J, p), transform_schouten(P, M.connection, M.J, u, p)), 1e-9);
    }
  }
}

TEST(Transform, WeylInvariance) {
  auto chart = whole_chart(4);
  ComplexStructure J = standard_complex_structure(chart);
  Connection base = curved_connection(chart);
  Point p0{0, {0.1, 0.2, 0.3, 0.4}};
  ASSERT_LT(max_abs(nabla_J(base, J, p0)), 1e-15);
  ASSERT_GT(max_abs(weyl(base, J, p0)), 1e-2);
  for (unsigned seed = 1; seed <= 5; ++seed) {
    Connection t = transform_connection(base, J, random_polynomial_upsilon(chart, seed, 2));
    for (const Point& p : random_points(cp2(), 5, seed)) EXPECT_LT(max_diff(weyl(t, J, p), weyl(base, J, p)), 1e-8);
  }
}

TEST(Transform, JPlanarCurvesPreserved) {
  // Q(X, X) lies in span{X, JX}
  const ModelPackage& M = cp2();
  Upsilon u = random_polynomial_upsilon(M.chart, 8, 2);
  Point p{0, {0.3, 0.2, -0.5, 0.1}};
  Tensor Q = change_tensor(u.value(p), M.J.J.value(p)), J = M.J.J.value(p);
  Eigen::Vector4d X(0.3, -1.2, 0.8, 0.5);
  Eigen::Vector4d q = Eigen::Vector4d::Zero();
  for (int b = 0; b < 4; ++b)
    for (int a = 0; a < 4; ++a)
      for (int d = 0; d < 4; ++d) q(b) += Q(b, a, d) * X(a) * X(d);
  Eigen::Vector4d JX = to_matrix(J) * X;
  Eigen::Matrix<double, 4, 2> B;
  B << X, JX;
  Eigen::Vector2d c = B.colPivHouseholderQr().solve(q);
  EXPECT_LT((B * c - q).norm(), 1e-13);
}
