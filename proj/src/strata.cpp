#include "cproj/strata.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>
#include <thread>

namespace cpg {

namespace {

Tensor tractor_J(const Tensor& J) {
  const int n = J.dim();
  Tensor JT(n + 2, 2, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) JT(a, b) = J(a, b);
  JT(n + 1, n) = 1.0;
  JT(n, n + 1) = -1.0;
  return JT;
}

std::string coords_string(const std::vector<double>& x) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

double tau_at(const TensorField& zeta, const ComplexStructure& J, int chart_id, const std::vector<double>& x) {
  Point p{chart_id, x};
  return det_hermitian_of(zeta.value(p), J.J.value(p));
}

Eigen::MatrixXd null_space_basis(const Eigen::MatrixXd& rows) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeFullV);
  const int r = static_cast<int>(rows.rows());
  return svd.matrixV().rightCols(rows.cols() - r);
}

}  // namespace

std::string to_string(const SignatureTriple& s) {
  std::string out = "(" + std::to_string(s.p) + "," + std::to_string(s.q);
  if (s.r) out += "," + std::to_string(s.r);
  return out + ")";
}

std::string to_string(StratumLabel l) {
  switch (l) {
    case StratumLabel::plus: return "plus";
    case StratumLabel::zero: return "zero";
    case StratumLabel::minus: return "minus";
  }
  return "?";
}

SignatureTriple hermitian_signature(const Eigen::MatrixXd& S, const Tensor& J, double eps_eig, double eps_alg) {
  Eigen::MatrixXd Jm = to_matrix(J);
  const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
  if ((Jm * S * Jm.transpose() - S).cwiseAbs().maxCoeff() > eps_alg * scale)
    throw PreconditionError("hermitian_signature: form is not J-Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (S + S.transpose()), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double rad = ev.cwiseAbs().maxCoeff();
  int pos = 0, neg = 0, zero = 0;
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= eps_eig * rad || rad == 0.0)
      ++zero;
    else if (ev(i) > 0)
      ++pos;
    else
      ++neg;
  }
  if (pos % 2 || neg % 2 || zero % 2) throw HypothesisViolation("hermitian_signature: eigenvalues are not J-paired");
  return {pos / 2, neg / 2, zero / 2};
}

StratumLabel label_from_signatures(const SignatureTriple& z, const SignatureTriple& t) {
  if (t.r > 0) {
    // degenerate L(zeta): no orbit structure, a single open stratum
    if (z.r == 0) return StratumLabel::plus;
    return StratumLabel::zero;
  }
  if (z.r == 0 && z.p == t.p && z.q == t.q - 1) return StratumLabel::plus;
  if (z.r == 0 && z.p == t.p - 1 && z.q == t.q) return StratumLabel::minus;
  if (z.r == 1 && z.p == t.p - 1 && z.q == t.q - 1) return StratumLabel::zero;
  throw HypothesisViolation("signature " + to_string(z) + " of zeta is incompatible with tractor signature " +
                            to_string(t));
}

Classification classify_value(const Tensor& zeta, const Tensor& J, const SignatureTriple& tractor_sig, double det_L,
                              double scale, double eps_eig) {
  if (scale == 0.0) throw DomainError("classify_point: the scale vanishes");
  Classification c;
  c.tractor = tractor_sig;
  c.tau = det_hermitian_of(zeta, J);
  c.signature = hermitian_signature(std::abs(scale) * to_matrix(zeta), J, eps_eig);
  if (c.signature.r > 1 || (c.signature.r == 1 && tractor_sig.r == 0 && std::abs(det_L) < 1e-12))
    throw HypothesisViolation("classify_point: zeta degenerates where L(zeta) is degenerate");
  c.label = label_from_signatures(c.signature, tractor_sig);
  return c;
}

Classification classify_point(const TensorField& zeta, const Splitting& s, const Point& p, double scale,
                              double eps_eig) {
  TractorHSection h = split_zeta(zeta, s, p, 0);
  Tensor J = s.J.J.value(p);
  Eigen::MatrixXd H = assemble_H(h.slots, J);
  SignatureTriple t = hermitian_signature(H, tractor_J(J), eps_eig);
  return classify_value(values(h.slots.zeta), J, t, det_tractor_matrix(H, J), scale, eps_eig);
}

CRData cr_data(const TensorField& zeta, const Splitting& s, const Point& p, const std::optional<TensorField>& f) {
  const int n = zeta.dim();
  const int m = n / 2;
  TensorField scale = f ? *f : constant_field(zeta.chart_ptr(), {0, 0}, Weight::real(1), Tensor(n, 0, 1.0));
  TractorHSection h = split_zeta(zeta, s, p, 2);
  TractorHDualSection phi = inverse_tractor_metric(h);
  const Taylor& tau_hat = phi.slots.tau;
  BoundaryScale bs = special_boundary_scale(scale, h, tau_hat);

  CRData cr;
  cr.tau_hat = tau_hat.value();
  cr.null_defect = bs.null_defect;
  Tensor Jv = s.J.J.value(p);
  Eigen::MatrixXd Jm = to_matrix(Jv);
  // connection of the scale gamma at p
  Tensor gamma0 = s.conn.gamma.value(p);
  Tensor dg = values(density_nabla(bs.gamma, 1.0, constant_jet(gamma0, n, 0)));
  Tensor U(n, 1, 0.0);
  for (int a = 0; a < n; ++a) U(a) = -dg(a) / (2.0 * bs.gamma.value());
  Tensor Q = change_tensor(U, Jv);
  Tensor G = gamma0;
  for (std::size_t k = 0; k < G.size(); ++k) G[k] += Q[k];
  JetTensor Gj = constant_jet(G, n, 1);

  JetTensor t = density_nabla(tau_hat.truncated(2), 1.0, Gj);  // order 1
  JetTensor th(n, 1, Taylor(n, 1));
  JetTensor Jj = s.J.J.jet(p, 1);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) th(a).add_product(Jj(i, a), t(i));
  Tensor dth = values(covariant_derivative(th, 0, 1, 1.0, Gj));
  cr.dtheta.resize(n, n);
  cr.grad_tau.resize(n);
  cr.theta.resize(n);
  for (int a = 0; a < n; ++a) {
    cr.grad_tau(a) = t(a).value();
    cr.theta(a) = th(a).value();
    for (int b = 0; b < n; ++b) cr.dtheta(a, b) = dth(a, b) - dth(b, a);
  }
  Tensor dz = values(covariant_derivative(zeta.jet(p, 1), 2, 0, -1.0, constant_jet(G, n, 0)));
  Eigen::VectorXd div = Eigen::VectorXd::Zero(n);  // nabla_i zeta^{ij}
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) div(j) += dz(i, i, j);
  cr.reeb = (1.0 / (4.0 * m)) * (Jm * div);
  cr.theta_T = cr.theta.dot(cr.reeb);

  Eigen::MatrixXd Z = to_matrix(zeta.value(p));
  cr.kernel_grad = (Z * cr.grad_tau).norm();
  cr.kernel_theta = (Z * cr.theta).norm();

  Eigen::MatrixXd rows(2, n);
  rows.row(0) = cr.grad_tau.transpose();
  rows.row(1) = cr.theta.transpose();
  Eigen::MatrixXd E = null_space_basis(rows);
  const int k = static_cast<int>(E.cols());
  for (int i = 0; i < k; ++i) cr.H_basis.push_back(E.col(i));
  Eigen::MatrixXd Jh = E.transpose() * Jm * E;  // J e_j = sum_i Jh_ij e_i
  Eigen::MatrixXd D = E.transpose() * cr.dtheta * E;
  Eigen::MatrixXd Zh = E.transpose() * Z * E;
  cr.levi = Jh.transpose() * D;
  cr.levi_from_zeta = Jh.transpose() * (-4.0 * (Jh * Zh).inverse());
  cr.levi_agreement = (cr.levi - cr.levi_from_zeta).norm() / std::max(cr.levi.norm(), 1e-300);
  cr.levi_signature = hermitian_signature(0.5 * (cr.levi + cr.levi.transpose()), from_matrix(Jh.transpose()), 1e-9,
                                          1e-6);
  Eigen::VectorXd Td = cr.dtheta.transpose() * cr.reeb;  // T^a dtheta_ab
  cr.T_dtheta_full = Td.cwiseAbs().maxCoeff();
  cr.T_dtheta = (E.transpose() * Td).cwiseAbs().maxCoeff();
  return cr;
}

std::size_t GridSpec::size() const {
  std::size_t s = 1;
  for (std::size_t i = 0; i < box.lo.size(); ++i) s *= static_cast<std::size_t>(resolution);
  return s;
}

std::vector<double> GridSpec::coords(std::size_t idx) const {
  const std::size_t n = box.lo.size();
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    const std::size_t k = idx % resolution;
    idx /= resolution;
    x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * static_cast<double>(k) / (resolution - 1);
  }
  return x;
}

Root bisect_root(const TensorField& zeta, const ComplexStructure& J, int chart_id, const std::vector<double>& a,
                 const std::vector<double>& b, double tol) {
  const std::size_t n = a.size();
  auto at = [&](double s) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = a[i] + s * (b[i] - a[i]);
    return x;
  };
  // Illinois iteration on [lo, hi], falling back to bisection when it stalls
  double lo = 0.0, hi = 1.0;
  double flo = tau_at(zeta, J, chart_id, a), fhi = tau_at(zeta, J, chart_id, b);
  double best_s = std::abs(flo) <= std::abs(fhi) ? 0.0 : 1.0;
  double best_f = std::abs(flo) <= std::abs(fhi) ? flo : fhi;
  int side = 0;
  for (int it = 0; it < 200 && std::abs(best_f) >= tol && hi - lo > 1e-17; ++it) {
    double s = (fhi - flo) != 0.0 ? lo - flo * (hi - lo) / (fhi - flo) : 0.5 * (lo + hi);
    if (!(s > lo && s < hi) || it % 8 == 7) s = 0.5 * (lo + hi);
    const double fs = tau_at(zeta, J, chart_id, at(s));
    if (std::abs(fs) < std::abs(best_f)) {
      best_f = fs;
      best_s = s;
    }
    if ((fs < 0) == (flo < 0)) {
      lo = s;
      flo = fs;
      if (side == -1) fhi *= 0.5;
      side = -1;
    } else {
      hi = s;
      fhi = fs;
      if (side == 1) flo *= 0.5;
      side = 1;
    }
  }
  Root r;
  r.coords = at(best_s);
  r.tau = best_f;
  Point p{chart_id, r.coords};
  Taylor tj = det_hermitian_of(zeta.jet(p, 1), J.J.jet(p, 1));
  double g2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) g2 += tj.d1(static_cast<int>(i)) * tj.d1(static_cast<int>(i));
  r.grad_norm = std::sqrt(g2);
  return r;
}

std::vector<Root> locate_hypersurface(const TensorField& zeta, const ComplexStructure& J, const GridSpec& grid,
                                      const StratifyOptions& opt) {
  const std::size_t N = grid.size();
  const int id = zeta.chart().id;
  std::vector<double> tau(N);
  for (std::size_t k = 0; k < N; ++k) tau[k] = tau_at(zeta, J, id, grid.coords(k));
  std::vector<Root> roots;
  const std::size_t dim = grid.box.lo.size();
  for (std::size_t k = 0; k < N; ++k) {
    std::size_t stride = 1;
    std::size_t rem = k;
    for (std::size_t ax = dim; ax-- > 0;) {
      const std::size_t pos = rem % grid.resolution;
      rem /= grid.resolution;
      if (pos + 1 < static_cast<std::size_t>(grid.resolution)) {
        const std::size_t k2 = k + stride;
        if (tau[k] * tau[k2] < 0.0) {
          Root r = bisect_root(zeta, J, id, grid.coords(k), grid.coords(k2), opt.root_tol);
          r.edge_from = k;
          r.edge_to = k2;
          if (r.grad_norm < opt.grad_tol)
            throw HypothesisViolation("locate_hypersurface: |nabla tau| = " + std::to_string(r.grad_norm) +
                                      " at root " + coords_string(r.coords));
          roots.push_back(std::move(r));
        }
      }
      stride *= grid.resolution;
    }
  }
  return roots;
}

OpenStratumMetric open_stratum_metric(const TensorField& zeta, const ComplexStructure& J, const Point& p,
                                      double eps_eig) {
  Tensor Jv = J.J.value(p);
  Eigen::MatrixXd Z = to_matrix(zeta.value(p));
  SignatureTriple sig = hermitian_signature(Z, Jv, eps_eig);
  OpenStratumMetric out;
  out.tau = det_hermitian_of(zeta.value(p), Jv);
  if (sig.r > 0 || out.tau == 0.0) throw DomainError("open_stratum_metric: point lies on the degeneracy locus");
  out.g_inv = (out.tau < 0 ? -out.tau : out.tau) * Z;
  out.g = out.g_inv.inverse();
  Eigen::MatrixXd Jm = to_matrix(Jv);
  out.hermitian_defect = (Jm.transpose() * out.g * Jm - out.g).cwiseAbs().maxCoeff();
  return out;
}

StratificationReport stratify(const TensorField& zeta, const Splitting& s, const GridSpec& grid,
                              const StratifyOptions& opt) {
  if (grid.resolution < 2) throw UsageError("resolution must be at least 2");
  const std::size_t N = grid.size();
  const int id = zeta.chart().id;
  const std::size_t dim = grid.box.lo.size();
  StratificationReport rep;
  rep.grid = grid;

  std::vector<double> center(dim);
  for (std::size_t i = 0; i < dim; ++i) center[i] = 0.5 * (grid.box.lo[i] + grid.box.hi[i]);
  Point pc{id, center};
  TractorHSection hc = split_zeta(zeta, s, pc, 0);
  Tensor Jc = s.J.J.value(pc);
  Eigen::MatrixXd Hc = assemble_H(hc.slots, Jc);
  rep.det_L = det_tractor_matrix(Hc, Jc);
  rep.tractor_signature = hermitian_signature(Hc, tractor_J(Jc), opt.eps_eig);

  rep.labels.assign(N, 0);
  rep.tau.assign(N, 0.0);
  if (opt.residuals) rep.residual.assign(N, 0.0);
  std::vector<std::array<SignatureTriple, 3>> sigs(std::max(1, opt.threads));
  std::vector<std::array<bool, 3>> seen(std::max(1, opt.threads), {false, false, false});
  auto work = [&](int tid, std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      Point p{id, grid.coords(k)};
      Tensor Jv = s.J.J.value(p);
      Classification c;
      Tensor zv = zeta.value(p);
      SignatureTriple zs = hermitian_signature(to_matrix(zv), Jv, opt.eps_eig);
      if (zs.r > 0)
        c = classify_point(zeta, s, p, 1.0, opt.eps_eig);
      else
        c = classify_value(zv, Jv, rep.tractor_signature, rep.det_L, 1.0, opt.eps_eig);
      const int li = c.label == StratumLabel::plus ? 0 : c.label == StratumLabel::zero ? 1 : 2;
      rep.labels[k] = static_cast<std::int8_t>(1 - li);
      rep.tau[k] = c.tau;
      sigs[tid][li] = c.signature;
      seen[tid][li] = true;
      if (opt.residuals) rep.residual[k] = max_abs(metrizability_residual(zeta, s, p));
    }
  };
  const int T = std::max(1, opt.threads);
  if (T == 1) {
    work(0, 0, N);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < T; ++t) pool.emplace_back(work, t, N * t / T, N * (t + 1) / T);
    for (auto& th : pool) th.join();
  }
  for (int t = 0; t < T; ++t)
    for (int i = 0; i < 3; ++i)
      if (seen[t][i]) rep.signatures[i] = sigs[t][i];
  for (std::int8_t l : rep.labels) ++rep.counts[1 - l];

  // edges: sign changes of tau carry roots; plus-minus edges must be among them
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t k = 0; k < N; ++k) {
    std::size_t stride = 1, rem = k;
    for (std::size_t ax = dim; ax-- > 0;) {
      const std::size_t pos = rem % grid.resolution;
      rem /= grid.resolution;
      if (pos + 1 < static_cast<std::size_t>(grid.resolution)) {
        const std::size_t k2 = k + stride;
        const bool pm = rep.labels[k] * rep.labels[k2] == -1;
        const bool change = rep.tau[k] * rep.tau[k2] < 0.0;
        if (pm) ++rep.plus_minus_edges;
        if (change) {
          ++rep.sign_change_edges;
          edges.emplace_back(k, k2);
        } else if (pm) {
          rep.separated = false;
        }
      }
      stride *= grid.resolution;
    }
  }
  if (!rep.separated)
    throw RefinementRequest("stratify: a plus-minus edge carries no sign change of tau; refine the grid");

  rep.roots.resize(edges.size());
  auto find = [&](std::size_t begin, std::size_t end) {
    for (std::size_t e = begin; e < end; ++e) {
      Root r = bisect_root(zeta, s.J, id, grid.coords(edges[e].first), grid.coords(edges[e].second), opt.root_tol);
      r.edge_from = edges[e].first;
      r.edge_to = edges[e].second;
      rep.roots[e] = std::move(r);
    }
  };
  if (T == 1) {
    find(0, edges.size());
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < T; ++t) pool.emplace_back(find, edges.size() * t / T, edges.size() * (t + 1) / T);
    for (auto& th : pool) th.join();
  }
  for (const Root& r : rep.roots)
    if (r.grad_norm < opt.grad_tol)
      throw HypothesisViolation("stratify: |nabla tau| = " + std::to_string(r.grad_norm) + " at root " +
                                coords_string(r.coords));

  // the zero stratum is met at the roots even when no grid point lies on it
  if (rep.counts[1] == 0 && !rep.roots.empty()) {
    const Root& r = rep.roots.front();
    Point p{id, r.coords};
    Classification c = classify_value(zeta.value(p), s.J.J.value(p), rep.tractor_signature, rep.det_L, 1.0,
                                      opt.eps_eig);
    if (c.label == StratumLabel::zero) rep.signatures[1] = c.signature;
  }

  const std::size_t R = rep.roots.size();
  const std::size_t ncr = opt.cr_limit == 0 ? R : std::min(R, opt.cr_limit);
  std::vector<std::size_t> pick(ncr);
  for (std::size_t i = 0; i < ncr; ++i) pick[i] = ncr == R ? i : i * R / ncr;
  auto crw = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Root& r = rep.roots[pick[i]];
      r.cr = cr_data(zeta, s, Point{id, r.coords});
    }
  };
  if (T == 1) {
    crw(0, ncr);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < T; ++t) pool.emplace_back(crw, ncr * t / T, ncr * (t + 1) / T);
    for (auto& th : pool) th.join();
  }
  return rep;
}

}  // namespace cpg
