#pragma once

#include "cproj/geometry.hpp"

#include <complex>
#include <string>

namespace cpg {

struct ModelPackage {
  std::string key;
  bool projective = false;  // CP^m model (otherwise flat C^m)
  int m = 0, p = 0, q = 0;  // flat: complex signature (p,q) of zeta; CP^m: h has (p+1,q+1)
  std::shared_ptr<const Chart> chart;
  ComplexStructure J;
  Connection connection;  // canonical connection of the package
  Connection flat;        // chart connection Gamma = 0, in the same class
  TensorField zeta;       // weight (-1,-1) J-Hermitian solution
  TensorField metric;     // Fubini-Study metric (CP^m) or flat metric
  Eigen::MatrixXcd h_form;  // (m+1)x(m+1) form on C^{m+1}; empty for the flat model
  Box default_box;

  // homogeneous coordinates X = (1, z) of a chart point
  Eigen::VectorXcd homogeneous(const std::vector<double>& x) const;
};

ModelPackage flat_model(int m, int p, int q);
ModelPackage cpm_model(int m, int p, int q);

// registry keys "flat:m=<m>,sig=<p>,<q>" and "cpm:m=<m>,p=<p>,q=<q>"
ModelPackage model_from_key(const std::string& key);

// strict sign of h(X, X) in {-1, 0, +1}
int orbit_oracle(const Eigen::MatrixXcd& h_form, const Eigen::VectorXcd& X, double tol = 0.0);

}  // namespace cpg
