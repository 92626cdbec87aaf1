#pragma once

#include "cproj/geometry.hpp"

#include <complex>

namespace cpg {

// Upsilon is a (0,1) field of weight (0,0)
using Upsilon = TensorField;

// Q^b_{ad} = U_a d^b_d - U_c J^c_a J^b_d + U_d d^b_a - U_c J^c_d J^b_a
template <class T>
TensorOf<T> change_tensor(const TensorOf<T>& ups, const TensorOf<T>& J) {
  const int n = J.dim();
  TensorOf<T> JU(n, 1, ups[0] * 0.0);  // (JU)_a = U_c J^c_a
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) JU(a) += ups(c) * J(c, a);
  TensorOf<T> Q(n, 3, ups[0] * 0.0);
  for (int b = 0; b < n; ++b)
    for (int a = 0; a < n; ++a)
      for (int d = 0; d < n; ++d) {
        T q = -JU(a) * J(b, d) - JU(d) * J(b, a);
        if (b == d) q += ups(a);
        if (b == a) q += ups(d);
        Q(b, a, d) = q;
      }
  return Q;
}

Connection transform_connection(const Connection& conn, const ComplexStructure& J, const Upsilon& u);

// nabla_a s in the chart trivialization; complex for w != w'
std::vector<std::complex<double>> density_gradient(const Connection& conn, const ComplexStructure& J,
                                                   const TensorField& s, const Point& p);
// the transformation law applied to density_gradient(conn, ...)
std::vector<std::complex<double>> transform_density_derivative(const Connection& conn, const ComplexStructure& J,
                                                               const Upsilon& u, const TensorField& s,
                                                               const Point& p);

// P - nabla_a U_b + U_a U_b - J^i_a J^j_b U_i U_j with nabla from conn
Tensor transform_schouten(const Tensor& P, const Connection& conn, const ComplexStructure& J, const Upsilon& u,
                          const Point& p);

// seeded polynomial one-form with coefficients in [-1,1] up to the given degree
Upsilon random_polynomial_upsilon(std::shared_ptr<const Chart> chart, unsigned seed, int degree = 2,
                                  double scale = 1.0);

}  // namespace cpg
