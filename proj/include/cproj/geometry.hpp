#pragma once

#include "cproj/field.hpp"

#include <complex>

namespace cpg {

// ---- jet level ------------------------------------------------------------
// All functions take component jets at one point. Results lose one order per
// derivative taken.

JetTensor nijenhuis_jet(const JetTensor& J);
JetTensor curvature_jet(const JetTensor& gamma);

// weighted covariant derivative of a tensor with `up` upper then `down`
// lower indices and real density weight (w,w); derivative index first
JetTensor covariant_derivative(const JetTensor& t, int up, int down, double w, const JetTensor& gamma);
// d_c s for a scalar of complex weight (w,w'): returns complex covector jets (re, im)
std::pair<JetTensor, JetTensor> density_derivative(const Taylor& s, Weight wt, const JetTensor& gamma,
                                                   const JetTensor& J);

// ---- algebra shared by jets and numbers -----------------------------------

template <class T>
TensorOf<T> torsion_of(const TensorOf<T>& gamma) {
  const int n = gamma.dim();
  TensorOf<T> out = gamma;
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) out(c, a, b) = gamma(c, a, b) - gamma(c, b, a);
  return out;
}

// R_{bd} = R_{ib}^i_d
template <class T>
TensorOf<T> ricci_of(const TensorOf<T>& R) {
  const int n = R.dim();
  TensorOf<T> out(n, 2, R[0] * 0.0);
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) {
      T s = R(0, b, 0, d);
      for (int i = 1; i < n; ++i) s += R(i, b, i, d);
      out(b, d) = s;
    }
  return out;
}

template <class T>
TensorOf<T> schouten_of(const TensorOf<T>& ric, const TensorOf<T>& J) {
  const int n = ric.dim();
  const int m = n / 2;
  if (m < 2) throw ConstructionError("schouten needs m >= 2");
  // JRJ_{ab} = J^i_a J^j_b R_ij
  TensorOf<T> JR(n, 2, ric[0] * 0.0), JRJ(n, 2, ric[0] * 0.0);
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) JR(a, j) += J(i, a) * ric(i, j);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int j = 0; j < n; ++j) JRJ(a, b) += JR(a, j) * J(j, b);
  TensorOf<T> P(n, 2, ric[0] * 0.0);
  const double c0 = 1.0 / (2.0 * (m + 1)), c1 = 1.0 / (m - 1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      T sym = 0.5 * (ric(a, b) + ric(b, a)) - 0.5 * (JRJ(a, b) + JRJ(b, a));
      P(a, b) = c0 * (ric(a, b) + c1 * sym);
    }
  return P;
}

template <class T>
TensorOf<T> weyl_of(const TensorOf<T>& R, const TensorOf<T>& P, const TensorOf<T>& J) {
  const int n = R.dim();
  // JP_{ab} = J^i_a P_bi
  TensorOf<T> JP(n, 2, P[0] * 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int i = 0; i < n; ++i) JP(a, b) += J(i, a) * P(b, i);
  TensorOf<T> W = R;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          T w = R(a, b, c, d);
          if (c == a) w -= P(b, d);
          if (c == b) w += P(a, d);
          if (c == d) w += P(a, b) - P(b, a);
          w += (JP(a, b) - JP(b, a)) * J(c, d);
          // J^c_a P_bi J^i_d - J^c_b P_ai J^i_d
          for (int i = 0; i < n; ++i) w += (J(c, a) * P(b, i) - J(c, b) * P(a, i)) * J(i, d);
          W(a, b, c, d) = w;
        }
  return W;
}

// Christoffel symbols of the metric with jets g (order K+1) and g^{-1} (order >= K)
JetTensor levi_civita_jet(const JetTensor& g, const JetTensor& ginv);
// inverse of a square rank-2 jet matrix by pivoted elimination on values
JetTensor jet_inverse(const JetTensor& a);

// ---- point level ----------------------------------------------------------

Tensor nijenhuis(const ComplexStructure& J, const Point& p);
Tensor torsion(const Connection& conn, const Point& p);
Tensor curvature(const Connection& conn, const Point& p);
Tensor ricci(const Connection& conn, const Point& p);
Tensor schouten(const Connection& conn, const ComplexStructure& J, const Point& p);
Tensor weyl(const Connection& conn, const ComplexStructure& J, const Point& p);
// nabla_c J^a_b, derivative index first
Tensor nabla_J(const Connection& conn, const ComplexStructure& J, const Point& p);
double complex_structure_defect(const ComplexStructure& J, const Point& p);

// jets of Gamma, R, Ric and P at p; P has order `order`
struct CurvatureJets {
  JetTensor gamma, J, R, ric, P;
};
CurvatureJets curvature_jets(const Connection& conn, const ComplexStructure& J, const Point& p, int order);

// complex connection D - (1/4)(2 J DJ + (D_{J.}J) + J (D_. J)) built from a flat D in the chart;
// complex for any J and with torsion -(1/4) N^J
Connection canonical_complex_connection(const ComplexStructure& J);

}  // namespace cpg
