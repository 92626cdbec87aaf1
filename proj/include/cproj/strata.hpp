#pragma once

#include "cproj/bgg.hpp"
#include "cproj/determinants.hpp"

#include <array>
#include <optional>
#include <string>

namespace cpg {

// complex signature (real eigenvalue counts halved)
struct SignatureTriple {
  int p = 0, q = 0, r = 0;
  bool operator==(const SignatureTriple&) const = default;
};
std::string to_string(const SignatureTriple& s);

enum class StratumLabel { plus, zero, minus };
std::string to_string(StratumLabel l);

// Hermitian signature of a J-Hermitian symmetric form; eps_eig is relative to the spectral radius
SignatureTriple hermitian_signature(const Eigen::MatrixXd& S, const Tensor& J, double eps_eig = 1e-9,
                                    double eps_alg = 1e-10);

struct Classification {
  SignatureTriple signature;  // of |scale| zeta
  SignatureTriple tractor;    // of L(zeta)
  StratumLabel label = StratumLabel::plus;
  double tau = 0.0;           // det zeta in the chart trivialization
};

// label from the signature of zeta against the tractor signature (P,Q) of L(zeta):
// plus = (P, Q-1), minus = (P-1, Q), zero = (P-1, Q-1, 1); degenerate L(zeta) gives one open stratum
StratumLabel label_from_signatures(const SignatureTriple& zeta_sig, const SignatureTriple& tractor_sig);

Classification classify_point(const TensorField& zeta, const Splitting& s, const Point& p, double scale = 1.0,
                              double eps_eig = 1e-9);
// the same with the tractor signature supplied, using only the value of zeta at p
Classification classify_value(const Tensor& zeta, const Tensor& J, const SignatureTriple& tractor_sig,
                              double det_L, double scale = 1.0, double eps_eig = 1e-9);

struct CRData {
  std::vector<Eigen::VectorXd> H_basis;  // orthonormal in the chart, spans H
  Eigen::VectorXd grad_tau;              // nabla tau_hat
  Eigen::VectorXd theta;                 // J_a^i nabla_i tau_hat
  Eigen::VectorXd reeb;                  // T^a
  Eigen::MatrixXd dtheta;                // (d theta)_ab
  Eigen::MatrixXd levi;                  // dtheta(J e_i, e_j) on the H basis
  Eigen::MatrixXd levi_from_zeta;        // the same from the inverse of J zeta restricted to H
  SignatureTriple levi_signature;
  double tau_hat = 0.0;
  double theta_T = 0.0;         // theta(T)
  double T_dtheta = 0.0;        // max |T^a dtheta_ab e^b| over the H basis
  double T_dtheta_full = 0.0;   // max |T^a dtheta_ab| over all b
  double kernel_grad = 0.0;     // |zeta . nabla tau_hat|
  double kernel_theta = 0.0;    // |zeta . theta|
  double levi_agreement = 0.0;  // relative difference of the two Levi routes
  double null_defect = 0.0;     // h(Y^gamma, Y^gamma)
};

// CR package at a point of the degeneracy locus; f is the scale density (constant 1 when empty)
CRData cr_data(const TensorField& zeta, const Splitting& s, const Point& p,
               const std::optional<TensorField>& f = std::nullopt);

struct Root {
  std::vector<double> coords;
  double tau = 0.0;
  double grad_norm = 0.0;
  std::size_t edge_from = 0, edge_to = 0;  // grid indices of the bracketing edge
  std::optional<CRData> cr;
};

struct GridSpec {
  Box box;
  int resolution = 2;  // points per axis
  std::size_t size() const;
  std::vector<double> coords(std::size_t idx) const;
};

struct StratifyOptions {
  double eps_eig = 1e-9;
  double root_tol = 1e-12;     // |tau| at an accepted root
  double grad_tol = 1e-8;      // smallest admissible |nabla tau| at a root
  std::size_t cr_limit = 0;    // evaluate CR data at most at this many roots, evenly spread; 0 = all
  bool residuals = false;      // per-point metrizability residuals
  int threads = 1;
};

struct StratificationReport {
  GridSpec grid;
  SignatureTriple tractor_signature;
  double det_L = 0.0;
  std::vector<std::int8_t> labels;  // +1 plus, 0 zero, -1 minus
  std::vector<double> tau;
  std::vector<double> residual;     // empty unless requested
  std::array<std::size_t, 3> counts{};  // plus, zero, minus
  std::array<SignatureTriple, 3> signatures{};
  std::vector<Root> roots;
  std::size_t sign_change_edges = 0;
  std::size_t plus_minus_edges = 0;
  bool separated = true;
};

std::vector<Root> locate_hypersurface(const TensorField& zeta, const ComplexStructure& J, const GridSpec& grid,
                                      const StratifyOptions& opt = {});
// bisection along the segment a-b where tau changes strict sign
Root bisect_root(const TensorField& zeta, const ComplexStructure& J, int chart_id, const std::vector<double>& a,
                 const std::vector<double>& b, double tol);

struct OpenStratumMetric {
  Eigen::MatrixXd g_inv, g;
  double tau = 0.0;
  double hermitian_defect = 0.0;  // |J g J^T - g|
};
OpenStratumMetric open_stratum_metric(const TensorField& zeta, const ComplexStructure& J, const Point& p,
                                      double eps_eig = 1e-9);

StratificationReport stratify(const TensorField& zeta, const Splitting& s, const GridSpec& grid,
                              const StratifyOptions& opt = {});

}  // namespace cpg
