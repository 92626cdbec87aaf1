#pragma once

#include "cproj/geometry.hpp"
#include "cproj/transform.hpp"

#include <cstdint>

namespace cpg {

// A choice of connection in the class. Splittings obtained by a change of
// connection remember the one-forms applied since their root.
struct Splitting {
  Connection conn;
  ComplexStructure J;
  std::uint64_t id = 0;
  std::uint64_t root_id = 0;
  std::vector<Upsilon> chain;

  static Splitting make(const Connection& conn, const ComplexStructure& J);
  Splitting transformed(const Upsilon& u) const;
};

// Slot triples as jets at a point; the real tractor frame is (W-part, X-line).
struct HSlots {
  JetTensor zeta;    // zeta^{ab}
  JetTensor lambda;  // lambda^a
  Taylor nu;
};

struct HDualSlots {
  Taylor tau;
  JetTensor lambda;  // lambda_a
  JetTensor phi;     // phi_{ab}
};

struct TractorHSection {
  Point p;
  HSlots slots;
  Splitting split;
};

struct TractorHDualSection {
  Point p;
  HDualSlots slots;
  Splitting split;
};

// standard tractor (lambda^b, rho) and cotractor (upsilon, nu_b); complex slots as pairs
struct StandardTractor {
  Eigen::VectorXd top;
  std::complex<double> rho;
};
struct StandardCotractor {
  std::complex<double> upsilon;
  Eigen::VectorXd nu;
};

int slot_order(const HSlots& s);
HSlots slots_at_order(const HSlots& s, int order);
Tensor slots_values_flat(const HSlots& s);  // concatenated values, for norms
double slots_norm(const HSlots& s);
double slots_norm(const HDualSlots& s);

// ---- real matrix representation -------------------------------------------
// H = [[zeta, 1/2 (lambda, J lambda)], [., nu I2]], Phi = [[phi, (eta, -J^T eta)], [., tau I2]]
template <class T>
TensorOf<T> assemble_H(const TensorOf<T>& zeta, const TensorOf<T>& lambda, const T& nu, const TensorOf<T>& J);
JetTensor assemble_H(const HSlots& s, const JetTensor& J);
Eigen::MatrixXd assemble_H(const HSlots& s, const Tensor& J);
HSlots extract_H(const JetTensor& M);
JetTensor assemble_Hdual(const HDualSlots& s, const JetTensor& J);
HDualSlots extract_Hdual(const JetTensor& M);

// the change-of-splitting matrix G acting on standard tractors
Eigen::MatrixXd change_matrix(const Tensor& ups, const Tensor& J);
// full tractor connection matrix in direction c (includes Levi-Civita and weight parts)
std::vector<JetTensor> tractor_connection_matrices(const CurvatureJets& cj);

// ---- operations -----------------------------------------------------------
struct SplittingRelations {
  double YX = 0, YW = 0, ZX = 0, ZW = 0;  // max deviations from 1, 0, 0, delta
  bool exact(double tol = 1e-12) const { return YX <= tol && YW <= tol && ZX <= tol && ZW <= tol; }
};
SplittingRelations splitting_relation_check(const Splitting& s, const Point& p);

TractorHSection change_splitting_H(const TractorHSection& h, const Upsilon& u, const Splitting& target);
TractorHSection change_splitting_H(const TractorHSection& h, const Upsilon& u);
TractorHDualSection change_splitting_Hdual(const TractorHDualSection& h, const Upsilon& u, const Splitting& target);
StandardTractor change_splitting(const StandardTractor& t, const Tensor& ups, const Tensor& J);
StandardCotractor change_splitting(const StandardCotractor& t, const Tensor& ups, const Tensor& J);

// displayed slot formulas; one entry per direction c, order drops by one
std::vector<HSlots> tractor_derivative_H(const TractorHSection& h);
HSlots tractor_derivative_H(const TractorHSection& h, int c);
std::vector<HDualSlots> tractor_derivative_Hdual(const TractorHDualSection& h);
HDualSlots tractor_derivative_Hdual(const TractorHDualSection& h, int c);
// the same via the connection matrices: dH + C H + H C^T
std::vector<HSlots> tractor_derivative_H_matrix(const TractorHSection& h);
std::vector<HDualSlots> tractor_derivative_Hdual_matrix(const TractorHDualSection& h);
// curvature of the tractor connection, Omega_ab as (2m+2)x(2m+2) matrices, [a][b]
std::vector<std::vector<Eigen::MatrixXd>> tractor_curvature(const Splitting& s, const Point& p);

// D s = (w s, nabla_a s)
struct ThomasD {
  double y_slot = 0.0;
  std::vector<double> z_slot;
};
ThomasD thomasD_density(const TensorField& s, const Splitting& split, const Point& p);
// as a real cotractor (1/2 nabla s ; w s, 0) in the frame of the splitting
Eigen::VectorXd thomas_cotractor(const ThomasD& d);

}  // namespace cpg
