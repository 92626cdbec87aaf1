#include "cproj/bgg.hpp"

#include "cproj/determinants.hpp"

#include <sstream>

namespace cpg {

JetTensor density_nabla(const Taylor& s, double w, const JetTensor& gamma) {
  return covariant_derivative(JetTensor(gamma.dim(), 0, s), 0, 0, w, gamma);
}

TractorHSection split_zeta(const TensorField& zeta, const Splitting& s, const Point& p, int order) {
  const int n = zeta.dim();
  const int m = n / 2;
  JetTensor z = zeta.jet(p, order + 2);
  CurvatureJets cj = curvature_jets(s.conn, s.J, p, order);
  JetTensor dz = covariant_derivative(z, 2, 0, -1.0, cj.gamma);  // order + 1
  JetTensor lam(n, 1, Taylor(n, order + 1));
  for (int c = 0; c < n; ++c)
    for (int i = 0; i < n; ++i) lam(c).axpy(-1.0 / m, dz(i, i, c));
  // nabla_i nabla_j zeta^{ij} = -m nabla_i lambda^i
  JetTensor dl = covariant_derivative(lam, 1, 0, -1.0, cj.gamma);
  Taylor nu(n, order);
  for (int i = 0; i < n; ++i) {
    nu.axpy(-1.0 / (4.0 * m), dl(i, i));
    for (int j = 0; j < n; ++j) nu.add_product((1.0 / (2.0 * m)) * cj.P(i, j), z(i, j).truncated(order));
  }
  HSlots slots{truncated(z, order), truncated(lam, order), nu};
  return {p, slots, s};
}

TractorHDualSection split_tau(const TensorField& tau, const Splitting& s, const Point& p, int order) {
  if (tau.valence().rank() != 0) throw PreconditionError("split_tau needs a scalar density");
  const int n = tau.dim();
  Taylor t = tau.jet(p, order + 2)[0];
  CurvatureJets cj = curvature_jets(s.conn, s.J, p, order);
  JetTensor dt = density_nabla(t, 1.0, cj.gamma);              // order + 1
  JetTensor ddt = covariant_derivative(dt, 0, 1, 1.0, cj.gamma);  // (i, j) = nabla_i nabla_j tau
  JetTensor B(n, 2, Taylor(n, order));  // 1/2 nabla nabla tau + P tau
  Taylor tk = t.truncated(order);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      B(i, j) = 0.5 * ddt(i, j);
      B(i, j).add_product(cj.P(i, j), tk);
    }
  const JetTensor& J = cj.J;
  JetTensor JB(n, 2, Taylor(n, order));  // J^i_a J^j_b B_ij
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int i = 0; i < n; ++i) {
        Taylor row(n, order);
        for (int j = 0; j < n; ++j) row.add_product(J(j, b), B(i, j));
        JB(a, b).add_product(J(i, a), row);
      }
  HDualSlots slots{tk, JetTensor(n, 1, Taylor()), JetTensor(n, 2, Taylor())};
  for (int a = 0; a < n; ++a) {
    slots.lambda(a) = 0.5 * dt(a).truncated(order);
    for (int b = 0; b < n; ++b) slots.phi(a, b) = 0.5 * (B(a, b) + JB(a, b));
  }
  return {p, slots, s};
}

Tensor metrizability_residual(const TensorField& zeta, const Splitting& s, const Point& p) {
  const int n = zeta.dim();
  const int m = n / 2;
  Tensor dz = values(covariant_derivative(zeta.jet(p, 1), 2, 0, -1.0, s.conn.gamma.jet(p, 0)));
  Tensor J = s.J.J.value(p);
  Tensor mu(n, 1, 0.0), Jmu(n, 1, 0.0);  // mu^b = nabla_d zeta^{bd}
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) mu(b) += dz(d, b, d);
  for (int a = 0; a < n; ++a)
    for (int e = 0; e < n; ++e) Jmu(a) += J(a, e) * mu(e);
  Tensor R = dz;
  const double k = 0.5 / m;
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double v = dz(c, a, b);
        if (a == c) v -= k * mu(b);
        if (b == c) v -= k * mu(a);
        v -= k * (J(b, c) * Jmu(a) + J(a, c) * Jmu(b));
        R(c, a, b) = v;
      }
  return R;
}

NormalityDefect normality_defect(const TensorField& zeta, const Splitting& s, const std::vector<Point>& sample,
                                 double tol) {
  NormalityDefect out;
  std::size_t worst_res = 0;
  for (std::size_t k = 0; k < sample.size(); ++k) {
    double r = max_abs(metrizability_residual(zeta, s, sample[k]));
    if (r > out.max_residual) {
      out.max_residual = r;
      worst_res = k;
    }
  }
  if (out.max_residual > tol) {
    std::ostringstream os;
    os.precision(17);
    os << "normality_defect: metrizability residual " << out.max_residual << " exceeds " << tol << " at (";
    for (std::size_t i = 0; i < sample[worst_res].coords.size(); ++i)
      os << (i ? ", " : "") << sample[worst_res].coords[i];
    os << ")";
    throw PreconditionError(os.str());
  }
  for (std::size_t k = 0; k < sample.size(); ++k) {
    TractorHSection h = split_zeta(zeta, s, sample[k], 1);
    for (const HSlots& d : tractor_derivative_H(h)) {
      double v = slots_norm(d);
      if (v > out.defect) {
        out.defect = v;
        out.worst = k;
      }
    }
  }
  return out;
}

BoundaryScale special_boundary_scale(const TensorField& f, const TractorHSection& h, const Taylor& tau_hat,
                                     double xi_factor) {
  const Point& p = h.p;
  const int n = f.dim();
  const int K = std::max(1, std::min(tau_hat.order(), slot_order(h.slots)));
  Taylor fj = f.jet(p, K)[0];
  if (fj.value() == 0.0) throw DomainError("special_boundary_scale: the scale f vanishes at p");
  JetTensor gamma0 = h.split.conn.gamma.jet(p, 0);
  Tensor df = values(density_nabla(fj, 1.0, gamma0));
  Tensor U(n, 1, 0.0);
  for (int a = 0; a < n; ++a) U(a) = -df(a) / (2.0 * fj.value());
  // nu in the splitting of f
  Tensor z = values(h.slots.zeta), lam = values(h.slots.lambda);
  double rho = h.slots.nu.value();
  for (int a = 0; a < n; ++a) {
    rho -= U(a) * lam(a);
    for (int b = 0; b < n; ++b) rho += U(a) * z(a, b) * U(b);
  }
  BoundaryScale out;
  out.rho = rho;
  out.xi = xi_factor * fj.value() * rho;
  out.gamma = fj + out.xi * tau_hat.truncated(K);
  Tensor dg = values(density_nabla(out.gamma, 1.0, gamma0));
  ThomasD d;
  d.y_slot = out.gamma.value();
  d.z_slot.assign(dg.data().begin(), dg.data().end());
  Eigen::VectorXd Dg = thomas_cotractor(d);
  Eigen::MatrixXd H = assemble_H(h.slots, h.split.J.J.value(p));
  out.null_defect = Dg.dot(H * Dg) / (d.y_slot * d.y_slot);
  return out;
}

BoundaryScale special_boundary_scale(const TensorField& f, const TensorField& zeta, const Splitting& s,
                                     const Point& p, double xi_factor) {
  TractorHSection h = split_zeta(zeta, s, p, 1);
  TractorHDualSection phi = inverse_tractor_metric(h);
  return special_boundary_scale(f, h, phi.slots.tau, xi_factor);
}

}  // namespace cpg
