#pragma once

#include "cproj/tractor.hpp"

namespace cpg {

// L(zeta) in splitting s; slot jets of the given order (zeta is evaluated to order + 2)
TractorHSection split_zeta(const TensorField& zeta, const Splitting& s, const Point& p, int order = 0);
// L(tau) for a real density of weight (1,1); slot jets of the given order
TractorHDualSection split_tau(const TensorField& tau, const Splitting& s, const Point& p, int order = 0);

// nabla_c zeta^{ab} - (1/m) d_c^(a nabla_d zeta^b)d - (1/m) J_c^(b J^a)_e nabla_d zeta^ed, as R(c,a,b)
Tensor metrizability_residual(const TensorField& zeta, const Splitting& s, const Point& p);

struct NormalityDefect {
  double defect = 0.0;     // sup of |nabla L(zeta)| over the sample and directions
  double max_residual = 0.0;
  std::size_t worst = 0;   // sample index of the largest defect
};
// throws PreconditionError naming the worst point when the residual exceeds tol
NormalityDefect normality_defect(const TensorField& zeta, const Splitting& s, const std::vector<Point>& sample,
                                 double tol = 1e-8);

struct BoundaryScale {
  Taylor gamma;             // f + xi tau_hat
  double xi = 0.0;
  double rho = 0.0;         // Y Y h in the splitting of f
  double null_defect = 0.0; // h(D gamma, D gamma) / gamma^2
};
// gamma = f + xi tau_hat with xi = xi_factor f rho
BoundaryScale special_boundary_scale(const TensorField& f, const TractorHSection& h, const Taylor& tau_hat,
                                     double xi_factor = -0.5);
// the same with tau_hat read off the inverse of L(zeta) at p
BoundaryScale special_boundary_scale(const TensorField& f, const TensorField& zeta, const Splitting& s,
                                     const Point& p, double xi_factor = -0.5);

// weighted nabla of a real density of weight (w,w); jet order drops by one
JetTensor density_nabla(const Taylor& s, double w, const JetTensor& gamma);

}  // namespace cpg
