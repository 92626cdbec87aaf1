#include "support.hpp"

#include <gtest/gtest.h>

using namespace cpt;

namespace {

TensorField sum_fields(const TensorField& a, const TensorField& b) {
  return TensorField(a.chart_ptr(), a.valence(), a.weight(), [a, b](const std::vector<double>& x, int order) {
    Point p{a.chart().id, x};
    JetTensor s = a.jet(p, order), t = b.jet(p, order);
    for (std::size_t k = 0; k < s.size(); ++k) s[k] += t[k];
    return s;
  });
}

// J conjugated by a position-dependent frame change mixing the two complex directions
ComplexStructure perturbed_J(std::shared_ptr<const Chart> chart, double eps) {
  TensorField A = poly_field(chart, {1, 1}, Weight(),
                             {"1", "0", std::to_string(eps) + "*x1", "0",  //
                              "0", "1", "0", "0",                         //
                              "0", "0", "1", "0",                         //
                              "0", std::to_string(eps) + "*x0", "0", "1"});
  Tensor J0 = standard_J(4);
  TensorField J(chart, {1, 1}, Weight(), [A, J0](const std::vector<double>& x, int order) {
    JetTensor a = A.jet(Point{0, x}, order);
    JetTensor ai = jet_inverse(a);
    JetTensor out = jet_zeros(4, 2, 4, order);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l)
            if (J0(k, l) != 0.0) out(i, j) += J0(k, l) * a(i, k) * ai(l, j);
    return out;
  });
  return {J};
}

}  // namespace

TEST(Geometry, StandardJIsIntegrable) {
  auto chart = whole_chart(4);
  ComplexStructure J = standard_complex_structure(chart);
  Point p{0, {0.1, 0.2, 0.3, 0.4}};
  EXPECT_EQ(complex_structure_defect(J, p), 0.0);
  EXPECT_EQ(max_abs(nijenhuis(J, p)), 0.0);
}

TEST(Geometry, ModelJIsIntegrable) {
  for (const Point& p : random_points(cp2(), 20, 3)) EXPECT_LT(max_abs(nijenhuis(cp2().J, p)), 1e-14);
}

TEST(Geometry, PerturbedJIsNotIntegrable) {
  auto chart = whole_chart(4);
  ComplexStructure J = perturbed_J(chart, 0.3);
  Point p{0, {0.2, -0.4, 0.1, 0.5}};
  EXPECT_LT(complex_structure_defect(J, p), 1e-14);
  EXPECT_GT(max_abs(nijenhuis(J, p)), 1e-3);
  // the canonical minimal complex connection carries exactly the Nijenhuis torsion
  Connection c = canonical_complex_connection(J);
  EXPECT_LT(max_abs(nabla_J(c, J, p)), 1e-13);
  Tensor T = torsion(c, p), N = nijenhuis(J, p);
  for (std::size_t k = 0; k < T.size(); ++k) EXPECT_NEAR(T[k], -0.25 * N[k], 1e-13);
}

TEST(Geometry, Torsion) {
  auto chart = whole_chart(4);
  Point p{0, {0.3, 0.1, -0.2, 0.7}};
  EXPECT_EQ(max_abs(torsion(flat2().flat, p)), 0.0);
  EXPECT_LT(max_abs(torsion(cp2_definite().connection, p)), 1e-15);
  Tensor A(4, 3, 0.0);
  A(0, 1, 2) = 0.5;
  A(0, 2, 1) = -0.5;
  A(3, 0, 1) = -1.25;
  A(3, 1, 0) = 1.25;
  Connection c{sum_fields(cp2_definite().connection.gamma, constant_field(chart, {1, 2}, Weight(), A))};
  Tensor T = torsion(c, p);
  for (std::size_t k = 0; k < T.size(); ++k) EXPECT_NEAR(T[k], 2 * A[k], 1e-14);
}

TEST(Geometry, FlatCurvatureVanishes) {
  Point p{0, {0.3, 0.1, -0.2, 0.7}};
  EXPECT_EQ(max_abs(curvature(flat2().flat, p)), 0.0);
  EXPECT_EQ(max_abs(ricci(flat2().flat, p)), 0.0);
  EXPECT_EQ(max_abs(schouten(flat2().flat, flat2().J, p)), 0.0);
  EXPECT_EQ(max_abs(weyl(flat2().flat, flat2().J, p)), 0.0);
}

TEST(Geometry, CurvatureUnderCoordinateScaling) {
  const Connection& c = cp2_definite().connection;
  const double s = 1.7;
  TensorField g(c.gamma.chart_ptr(), c.gamma.valence(), c.gamma.weight(), [c, s](const std::vector<double>& x, int order) {
    std::vector<double> y(x);
    for (double& v : y) v *= s;
    JetTensor t = c.gamma.jet(Point{0, y}, order);
    for (auto& comp : t.data()) {
      const TaylorSpace& sp = comp.space();
      for (int k = 0; k < comp.size(); ++k) comp.coeff(k) *= std::pow(s, sp.degree(k) + 1);
    }
    return t;
  });
  Connection pulled{g};
  Point p{0, {0.2, -0.1, 0.15, 0.3}}, q{0, {0.2 * s, -0.1 * s, 0.15 * s, 0.3 * s}};
  Tensor R1 = curvature(pulled, p), R0 = curvature(c, q);
  for (std::size_t k = 0; k < R1.size(); ++k) EXPECT_NEAR(R1[k], s * s * R0[k], 1e-12);
}

TEST(Geometry, FubiniStudyIsEinstein) {
  const ModelPackage& M = cp2_definite();
  double c0 = 0.0;
  for (const Point& p : random_points(M, 10, 5)) {
    Tensor ric = ricci(M.connection, p), g = M.metric.value(p);
    std::size_t big = 0;
    for (std::size_t k = 0; k < g.size(); ++k)
      if (std::abs(g[k]) > std::abs(g[big])) big = k;
    const double c = ric[big] / g[big];
    if (c0 == 0.0) c0 = c;
    EXPECT_NEAR(c, c0, 1e-11);
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(ric[k], c0 * g[k], 1e-11);
  }
  EXPECT_NE(c0, 0.0);
}

TEST(Geometry, HermitianRicciSchouten) {
  const ModelPackage& M = cp2_definite();
  for (const Point& p : random_points(M, 5, 6)) {
    Tensor ric = ricci(M.connection, p), P = schouten(M.connection, M.J, p), g = M.metric.value(p);
    for (std::size_t k = 0; k < P.size(); ++k) EXPECT_NEAR(P[k], ric[k] / 6.0, 1e-13);
    // proportional to the metric
    const double ratio = P(0, 0) / g(0, 0);
    for (std::size_t k = 0; k < P.size(); ++k) EXPECT_NEAR(P[k], ratio * g[k], 1e-12);
  }
}

TEST(Geometry, ModelIsWeylFlat) {
  for (const ModelPackage* M : {&cp2(), &cp2_definite()})
    for (const Point& p : random_points(*M, 20, 7)) EXPECT_LT(max_abs(weyl(M->connection, M->J, p)), 1e-12);
}

TEST(Geometry, WeylReassemblesCurvature) {
  // a curved connection outside the model: the model class shifted by a quadratic one-form
  const ModelPackage& M = cp2();
  Connection c = transform_connection(M.connection, M.J, random_polynomial_upsilon(M.chart, 11, 2));
  Point p{0, {0.4, 0.2, -0.3, 0.1}};
  Tensor R = curvature(c, p), J = M.J.J.value(p);
  Tensor P = schouten_of(ricci_of(R), J);
  Tensor W = weyl_of(R, P, J);
  EXPECT_LT(max_abs(ricci_of(W)), 1e-12);
  // zero Schouten leaves R unchanged
  EXPECT_LT(max_diff(weyl_of(R, Tensor(4, 2, 0.0), J), R), 1e-15);
  EXPECT_LT(max_abs(W), 1e-10 * std::max(1.0, max_abs(R)));
}
