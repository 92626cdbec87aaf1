#pragma once

#include "cproj/models.hpp"
#include "cproj/tractor.hpp"

namespace cpg {

// Pfaffian by expansion along the first row of the index subset
template <class T>
T pfaffian_expand(const TensorOf<T>& A, const std::vector<int>& idx) {
  if (idx.empty()) return A(0, 0) * 0.0 + 1.0;
  T out = A(0, 0) * 0.0;
  std::vector<int> rest(idx.size() - 2);
  for (std::size_t j = 1; j < idx.size(); ++j) {
    std::size_t r = 0;
    for (std::size_t k = 1; k < idx.size(); ++k)
      if (k != j) rest[r++] = idx[k];
    const T term = A(idx[0], idx[j]) * pfaffian_expand(A, rest);
    out = j % 2 ? out + term : out - term;
  }
  return out;
}

// Pfaffian of an antisymmetric matrix of even size by pivoted elimination
template <class T>
T pfaffian(TensorOf<T> A) {
  const int n = A.dim();
  T result = A(0, 0) * 0.0 + 1.0;
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  for (int k = 0; k < n; k += 2) {
    // pivot: largest |A(k, j)| for j > k, swapped into position k+1
    int piv = k + 1;
    for (int j = k + 2; j < n; ++j)
      if (std::abs(value_of(A(k, j))) > std::abs(value_of(A(k, piv)))) piv = j;
    if (value_of(A(k, piv)) == 0.0) {
      // singular value: the jet may still carry derivatives
      std::vector<int> rest;
      for (int i = k; i < n; ++i) rest.push_back(i);
      return result * pfaffian_expand(A, rest);
    }
    if (piv != k + 1) {
      for (int r = 0; r < n; ++r) std::swap(A(r, k + 1), A(r, piv));
      for (int c = 0; c < n; ++c) std::swap(A(k + 1, c), A(piv, c));
      result = -result;
    }
    const T a01 = A(k, k + 1);
    result = result * a01;
    const T inv = 1.0 / a01;
    for (int i = k + 2; i < n; ++i)
      for (int j = k + 2; j < n; ++j) {
        if (i == j) continue;
        A(i, j) = A(i, j) - (A(i, k + 1) * A(k, j) - A(i, k) * A(k + 1, j)) * inv;
      }
  }
  return result;
}

// det of zeta^{ab} as a (1,1) density in the chart trivialization: Pf(zeta J^T), 1 on the standard form
template <class T>
T det_hermitian_of(const TensorOf<T>& zeta, const TensorOf<T>& J) {
  const int n = zeta.dim();
  TensorOf<T> pi(n, 2, zeta[0] * 0.0);  // pi^{ab} = J^b_c zeta^{ac}
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) pi(a, b) += J(b, c) * zeta(a, c);
  return pfaffian(pi);
}

double det_weighted_hermitian(const TensorField& zeta, const ComplexStructure& J, const Point& p);
// jet of the same density
Taylor det_weighted_hermitian_jet(const TensorField& zeta, const ComplexStructure& J, const Point& p, int order);

// Pf(H J_T^T) with J_T = J on the W-part and the standard J on the X-line
double det_tractor_hermitian(const TractorHSection& h);
double det_tractor_matrix(const Eigen::MatrixXd& H, const Tensor& J);

// Phi = H^{-1} as dual slots, jets of the slot order
TractorHDualSection inverse_tractor_metric(const TractorHSection& h);

// g^{-1} = tau zeta and scalar curvature R^g of its Levi-Civita connection
struct ScalarCurvatureSample {
  double det_L = 0.0;
  double scalar_curvature = 0.0;
  double ratio = 0.0;
};
ScalarCurvatureSample scalar_curvature_sample(const TensorField& zeta, const Splitting& s, const Point& p);

struct Calibration {
  double kappa = 0.0;
  double spread = 0.0;  // max relative deviation of the ratio over the sample
  std::size_t samples = 0;
};
// throws CalibrationError when the ratio is not constant to rel_tol
Calibration calibrate_scalar_curvature_constant(const TensorField& zeta, const Splitting& s,
                                                const std::vector<Point>& sample, double rel_tol = 1e-8);
Calibration calibrate_scalar_curvature_constant(const ModelPackage& model, std::size_t samples = 100,
                                                unsigned seed = 1, double rel_tol = 1e-8);

}  // namespace cpg
