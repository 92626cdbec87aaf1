#include "cproj/tractor.hpp"

#include <atomic>
#include <cmath>

namespace cpg {

namespace {

std::uint64_t next_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter++;
}

// one-form jets applied along the splitting chain, summed
JetTensor chain_upsilon(const Splitting& s, const Point& p, int order) {
  const int n = s.conn.gamma.dim();
  JetTensor u(n, 1, Taylor(n, order));
  for (const auto& f : s.chain) {
    JetTensor v = f.jet(p, order);
    for (int a = 0; a < n; ++a) u(a) += v(a);
  }
  return u;
}

JetTensor JT_of(const JetTensor& J, const JetTensor& ups) {  // (J U)_a = U_c J^c_a
  const int n = J.dim();
  JetTensor out(n, 1, Taylor(ups[0].nvars(), std::min(ups[0].order(), J[0].order())));
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) out(a).add_product(ups(c), J(c, a));
  return out;
}

}  // namespace

Splitting Splitting::make(const Connection& conn, const ComplexStructure& J) {
  Splitting s;
  s.conn = conn;
  s.J = J;
  s.id = next_id();
  s.root_id = s.id;
  return s;
}

Splitting Splitting::transformed(const Upsilon& u) const {
  Splitting s;
  s.conn = transform_connection(conn, J, u);
  s.J = J;
  s.id = next_id();
  s.root_id = root_id;
  s.chain = chain;
  s.chain.push_back(u);
  return s;
}

int slot_order(const HSlots& s) { return s.nu.order(); }

HSlots slots_at_order(const HSlots& s, int order) {
  return {truncated(s.zeta, order), truncated(s.lambda, order), s.nu.truncated(order)};
}

Tensor slots_values_flat(const HSlots& s) {
  Tensor out(static_cast<int>(s.zeta.size() + s.lambda.size() + 1), 1, 0.0);
  std::size_t k = 0;
  for (auto& x : s.zeta.data()) out[k++] = x.value();
  for (auto& x : s.lambda.data()) out[k++] = x.value();
  out[k] = s.nu.value();
  return out;
}

double slots_norm(const HSlots& s) { return frobenius(slots_values_flat(s)); }

double slots_norm(const HDualSlots& s) {
  double acc = s.tau.value() * s.tau.value();
  for (auto& x : s.lambda.data()) acc += x.value() * x.value();
  for (auto& x : s.phi.data()) acc += x.value() * x.value();
  return std::sqrt(acc);
}

template <class T>
TensorOf<T> assemble_H(const TensorOf<T>& zeta, const TensorOf<T>& lambda, const T& nu, const TensorOf<T>& J) {
  const int n = zeta.dim();
  TensorOf<T> M(n + 2, 2, nu * 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) M(a, b) = zeta(a, b);
  for (int a = 0; a < n; ++a) {
    T Jl = nu * 0.0;
    for (int i = 0; i < n; ++i) Jl += J(a, i) * lambda(i);
    M(a, n) = 0.5 * lambda(a);
    M(n, a) = M(a, n);
    M(a, n + 1) = 0.5 * Jl;
    M(n + 1, a) = M(a, n + 1);
  }
  M(n, n) = nu;
  M(n + 1, n + 1) = nu;
  return M;
}

template TensorOf<double> assemble_H(const TensorOf<double>&, const TensorOf<double>&, const double&,
                                     const TensorOf<double>&);

JetTensor assemble_H(const HSlots& s, const JetTensor& J) { return assemble_H(s.zeta, s.lambda, s.nu, J); }

Eigen::MatrixXd assemble_H(const HSlots& s, const Tensor& J) {
  Tensor lam = values(s.lambda);
  return to_matrix(assemble_H(values(s.zeta), lam, s.nu.value(), J));
}

HSlots extract_H(const JetTensor& M) {
  const int n = M.dim() - 2;
  HSlots s{JetTensor(n, 2, Taylor()), JetTensor(n, 1, Taylor()), M(n, n)};
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) s.zeta(a, b) = M(a, b);
    s.lambda(a) = 2.0 * M(a, n);
  }
  return s;
}

JetTensor assemble_Hdual(const HDualSlots& s, const JetTensor& J) {
  const int n = s.phi.dim();
  const Taylor zero = s.tau * 0.0;
  JetTensor M(n + 2, 2, zero);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) M(a, b) = s.phi(a, b);
  for (int a = 0; a < n; ++a) {
    Taylor JTe = zero;  // (J^T eta)_a = J^b_a eta_b
    for (int b = 0; b < n; ++b) JTe.add_product(J(b, a), s.lambda(b));
    M(a, n) = s.lambda(a);
    M(n, a) = s.lambda(a);
    M(a, n + 1) = -JTe;
    M(n + 1, a) = -JTe;
  }
  M(n, n) = s.tau;
  M(n + 1, n + 1) = s.tau;
  return M;
}

HDualSlots extract_Hdual(const JetTensor& M) {
  const int n = M.dim() - 2;
  HDualSlots s{M(n, n), JetTensor(n, 1, Taylor()), JetTensor(n, 2, Taylor())};
  for (int a = 0; a < n; ++a) {
    s.lambda(a) = M(a, n);
    for (int b = 0; b < n; ++b) s.phi(a, b) = M(a, b);
  }
  return s;
}

Eigen::MatrixXd change_matrix(const Tensor& ups, const Tensor& J) {
  const int n = J.dim();
  Eigen::MatrixXd G = Eigen::MatrixXd::Identity(n + 2, n + 2);
  for (int b = 0; b < n; ++b) {
    G(n, b) = -ups(b);
    double JU = 0.0;
    for (int c = 0; c < n; ++c) JU += ups(c) * J(c, b);
    G(n + 1, b) = JU;
  }
  return G;
}

std::vector<JetTensor> tractor_connection_matrices(const CurvatureJets& cj) {
  const JetTensor& P = cj.P;
  const int n = P.dim();
  const int m = n / 2;
  const int nv = P[0].nvars(), K = P[0].order();
  JetTensor Gm = truncated(cj.gamma, K);
  JetTensor Jm = truncated(cj.J, K);
  std::vector<JetTensor> out;
  for (int c = 0; c < n; ++c) {
    JetTensor C(n + 2, 2, Taylor(nv, K));
    Taylor alpha(nv, K), beta(nv, K);
    for (int i = 0; i < n; ++i) alpha.axpy(0.5, Gm(i, c, i));
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d) beta.add_product(-0.5 * Jm(d, b), Gm(b, c, d));
    const double wf = -1.0 / (m + 1);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) C(a, b) = Gm(a, c, b) + wf * beta * Jm(a, b);
      C(a, a) += wf * alpha;
      C(a, n) = Taylor(nv, K, a == c ? 1.0 : 0.0);
      C(a, n + 1) = Jm(a, c);
      C(n, a) = -P(c, a);
      Taylor PJ(nv, K);
      for (int i = 0; i < n; ++i) PJ.add_product(P(c, i), Jm(i, a));
      C(n + 1, a) = PJ;
    }
    C(n, n) = wf * alpha;
    C(n + 1, n + 1) = wf * alpha;
    C(n, n + 1) = -wf * beta;
    C(n + 1, n) = wf * beta;
    out.push_back(std::move(C));
  }
  return out;
}

SplittingRelations splitting_relation_check(const Splitting& s, const Point& p) {
  Tensor J = s.J.J.value(p);
  const int n = J.dim();
  Tensor U = values(chain_upsilon(s, p, 0));
  Eigen::MatrixXd G = change_matrix(U, J);
  Eigen::MatrixXd Gi = G.inverse();
  // frame of s in root coordinates: tractors G^{-1} e_k, cotractors G^T e_k
  auto tr = [&](int k) { return Eigen::VectorXd(Gi.col(k)); };
  auto co = [&](int k) { return Eigen::VectorXd(G.transpose().col(k)); };
  SplittingRelations r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.YX = std::max(r.YX, std::abs(co(n + i).dot(tr(n + j)) - (i == j ? 1.0 : 0.0)));
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < n; ++a) {
      r.YW = std::max(r.YW, std::abs(co(n + i).dot(tr(a))));
      r.ZX = std::max(r.ZX, std::abs(co(a).dot(tr(n + i))));
    }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) r.ZW = std::max(r.ZW, std::abs(co(b).dot(tr(a)) - (a == b ? 1.0 : 0.0)));
  return r;
}

TractorHSection change_splitting_H(const TractorHSection& h, const Upsilon& u, const Splitting& target) {
  if (target.root_id != h.split.root_id || target.chain.size() != h.split.chain.size() + 1)
    throw PreconditionError("change_splitting_H: target splitting is not derived from the source by one step");
  const int K = slot_order(h.slots);
  const int n = h.slots.zeta.dim();
  JetTensor U = u.jet(h.p, K);
  const HSlots& s = h.slots;
  HSlots out = s;
  JetTensor Uz(n, 1, Taylor(n, K));  // U_i zeta^{ia}
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) Uz(a).add_product(U(i), s.zeta(i, a));
  for (int a = 0; a < n; ++a) {
    out.lambda(a).axpy(-2.0, Uz(a));
    out.nu.add_product(-U(a), s.lambda(a));
    out.nu.add_product(U(a), Uz(a));
  }
  return {h.p, out, target};
}

TractorHSection change_splitting_H(const TractorHSection& h, const Upsilon& u) {
  return change_splitting_H(h, u, h.split.transformed(u));
}

TractorHDualSection change_splitting_Hdual(const TractorHDualSection& h, const Upsilon& u, const Splitting& target) {
  if (target.root_id != h.split.root_id || target.chain.size() != h.split.chain.size() + 1)
    throw PreconditionError("change_splitting_Hdual: target splitting is not derived from the source by one step");
  const HDualSlots& s = h.slots;
  const int K = s.tau.order();
  const int n = s.phi.dim();
  JetTensor U = u.jet(h.p, K);
  JetTensor J = h.split.J.J.jet(h.p, K);
  JetTensor JU = JT_of(J, U), Jl = JT_of(J, s.lambda);
  HDualSlots out = s;
  for (int a = 0; a < n; ++a) {
    out.lambda(a).add_product(U(a), s.tau);
    for (int b = 0; b < n; ++b) {
      Taylor& f = out.phi(a, b);
      f.add_product(U(a), s.lambda(b));
      f.add_product(U(b), s.lambda(a));
      f.add_product(JU(a), Jl(b));
      f.add_product(JU(b), Jl(a));
      f.add_product(U(a) * U(b) + JU(a) * JU(b), s.tau);
    }
  }
  return {h.p, out, target};
}

StandardTractor change_splitting(const StandardTractor& t, const Tensor& ups, const Tensor& J) {
  const int n = J.dim();
  Eigen::VectorXd v(n + 2);
  v << t.top, t.rho.real(), t.rho.imag();
  Eigen::VectorXd w = change_matrix(ups, J) * v;
  return {w.head(n), {w(n), w(n + 1)}};
}

StandardCotractor change_splitting(const StandardCotractor& t, const Tensor& ups, const Tensor& J) {
  const int n = J.dim();
  Eigen::VectorXd v(n + 2);
  v << t.nu, t.upsilon.real(), t.upsilon.imag();
  Eigen::VectorXd w = change_matrix(ups, J).transpose().inverse() * v;
  return {{w(n), w(n + 1)}, w.head(n)};
}

std::vector<HSlots> tractor_derivative_H(const TractorHSection& h) {
  const HSlots& s = h.slots;
  const int K = slot_order(s);
  if (K < 1) throw PreconditionError("tractor_derivative_H needs slots with a 1-jet");
  const int n = s.zeta.dim();
  CurvatureJets cj = curvature_jets(h.split.conn, h.split.J, h.p, K - 1);
  const JetTensor& P = cj.P;
  JetTensor J = cj.J;
  JetTensor dz = covariant_derivative(s.zeta, 2, 0, -1.0, cj.gamma);
  JetTensor dl = covariant_derivative(s.lambda, 1, 0, -1.0, cj.gamma);
  JetTensor nu_t(n, 0, s.nu);
  JetTensor dn = covariant_derivative(nu_t, 0, 0, -1.0, cj.gamma);
  HSlots low = slots_at_order(s, K - 1);
  JetTensor Jl(n, 1, Taylor(n, K - 1));  // J^a_i lambda^i
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) Jl(a).add_product(J(a, i), low.lambda(i));
  std::vector<HSlots> out;
  for (int c = 0; c < n; ++c) {
    HSlots d{JetTensor(n, 2, Taylor()), JetTensor(n, 1, Taylor()), dn(c)};
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Taylor t = dz(c, a, b);
        if (a == c) t.axpy(0.5, low.lambda(b));
        if (b == c) t.axpy(0.5, low.lambda(a));
        t.add_product(0.5 * J(a, c), Jl(b));
        t.add_product(0.5 * J(b, c), Jl(a));
        d.zeta(a, b) = t;
      }
    for (int a = 0; a < n; ++a) {
      Taylor t = dl(c, a);
      if (a == c) t.axpy(2.0, low.nu);
      for (int b = 0; b < n; ++b) t.add_product(-2.0 * P(c, b), low.zeta(a, b));
      d.lambda(a) = t;
      d.nu.add_product(-P(c, a), low.lambda(a));
    }
    out.push_back(std::move(d));
  }
  return out;
}

HSlots tractor_derivative_H(const TractorHSection& h, int c) { return tractor_derivative_H(h).at(c); }

std::vector<HDualSlots> tractor_derivative_Hdual(const TractorHDualSection& h) {
  const HDualSlots& s = h.slots;
  const int K = s.tau.order();
  if (K < 1) throw PreconditionError("tractor_derivative_Hdual needs slots with a 1-jet");
  const int n = s.phi.dim();
  CurvatureJets cj = curvature_jets(h.split.conn, h.split.J, h.p, K - 1);
  const JetTensor& P = cj.P;
  const JetTensor& J = cj.J;
  JetTensor tau_t(n, 0, s.tau);
  JetTensor dt = covariant_derivative(tau_t, 0, 0, 1.0, cj.gamma);
  JetTensor dl = covariant_derivative(s.lambda, 0, 1, 1.0, cj.gamma);
  JetTensor dp = covariant_derivative(s.phi, 0, 2, 1.0, cj.gamma);
  Taylor tau = s.tau.truncated(K - 1);
  JetTensor lam = truncated(s.lambda, K - 1), phi = truncated(s.phi, K - 1);
  JetTensor Jl = JT_of(J, lam);  // J^j_b lambda_j
  std::vector<HDualSlots> out;
  for (int c = 0; c < n; ++c) {
    HDualSlots d{dt(c) - 2.0 * lam(c), JetTensor(n, 1, Taylor()), JetTensor(n, 2, Taylor())};
    JetTensor PJ(n, 1, Taylor(n, K - 1));  // P_ci J^i_a
    for (int a = 0; a < n; ++a)
      for (int i = 0; i < n; ++i) PJ(a).add_product(P(c, i), J(i, a));
    for (int a = 0; a < n; ++a) {
      Taylor t = dl(c, a) - phi(c, a);
      t.add_product(P(c, a), tau);
      d.lambda(a) = t;
      for (int b = 0; b < n; ++b) {
        Taylor f = dp(c, a, b);
        f.add_product(P(c, b), lam(a));
        f.add_product(P(c, a), lam(b));
        f.add_product(PJ(a), Jl(b));
        f.add_product(PJ(b), Jl(a));
        d.phi(a, b) = f;
      }
    }
    out.push_back(std::move(d));
  }
  return out;
}

HDualSlots tractor_derivative_Hdual(const TractorHDualSection& h, int c) { return tractor_derivative_Hdual(h).at(c); }

std::vector<HSlots> tractor_derivative_H_matrix(const TractorHSection& h) {
  const int K = slot_order(h.slots);
  const int n = h.slots.zeta.dim();
  CurvatureJets cj = curvature_jets(h.split.conn, h.split.J, h.p, K - 1);
  JetTensor M = assemble_H(h.slots, h.split.J.J.jet(h.p, K));
  JetTensor Mk = truncated(M, K - 1);
  auto C = tractor_connection_matrices(cj);
  const int N = n + 2;
  std::vector<HSlots> out;
  for (int c = 0; c < n; ++c) {
    JetTensor D(N, 2, Taylor(n, K - 1));
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        Taylor t = M(i, j).derivative(c);
        for (int k = 0; k < N; ++k) {
          t.add_product(C[c](i, k), Mk(k, j));
          t.add_product(Mk(i, k), C[c](j, k));
        }
        D(i, j) = t;
      }
    out.push_back(extract_H(D));
  }
  return out;
}

std::vector<HDualSlots> tractor_derivative_Hdual_matrix(const TractorHDualSection& h) {
  const int K = h.slots.tau.order();
  const int n = h.slots.phi.dim();
  CurvatureJets cj = curvature_jets(h.split.conn, h.split.J, h.p, K - 1);
  JetTensor M = assemble_Hdual(h.slots, h.split.J.J.jet(h.p, K));
  JetTensor Mk = truncated(M, K - 1);
  auto C = tractor_connection_matrices(cj);
  const int N = n + 2;
  std::vector<HDualSlots> out;
  for (int c = 0; c < n; ++c) {
    JetTensor D(N, 2, Taylor(n, K - 1));
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        Taylor t = M(i, j).derivative(c);
        for (int k = 0; k < N; ++k) {
          t.add_product(-C[c](k, i), Mk(k, j));
          t.add_product(-Mk(i, k), C[c](k, j));
        }
        D(i, j) = t;
      }
    out.push_back(extract_Hdual(D));
  }
  return out;
}

std::vector<std::vector<Eigen::MatrixXd>> tractor_curvature(const Splitting& s, const Point& p) {
  CurvatureJets cj = curvature_jets(s.conn, s.J, p, 1);
  auto C = tractor_connection_matrices(cj);
  const int n = static_cast<int>(C.size());
  const int N = n + 2;
  std::vector<Eigen::MatrixXd> Cv(n), dC(n * n);  // dC[a*n+b] = d_a C_b
  for (int b = 0; b < n; ++b) {
    Cv[b].resize(N, N);
    for (int a = 0; a < n; ++a) dC[a * n + b].resize(N, N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        Cv[b](i, j) = C[b](i, j).value();
        for (int a = 0; a < n; ++a) dC[a * n + b](i, j) = C[b](i, j).d1(a);
      }
  }
  std::vector<std::vector<Eigen::MatrixXd>> out(n, std::vector<Eigen::MatrixXd>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out[a][b] = dC[a * n + b] - dC[b * n + a] + Cv[a] * Cv[b] - Cv[b] * Cv[a];
  return out;
}

ThomasD thomasD_density(const TensorField& s, const Splitting& split, const Point& p) {
  if (s.valence().rank() != 0) throw PreconditionError("thomasD_density needs a scalar density");
  if (!s.weight().is_real()) throw PreconditionError("thomasD_density: only real weights (w,w) are supported");
  const int n = s.dim();
  JetTensor sj = s.jet(p, 1);
  JetTensor g = covariant_derivative(sj, 0, 0, s.weight().w, split.conn.gamma.jet(p, 0));
  ThomasD d;
  d.y_slot = s.weight().w * sj[0].value();
  d.z_slot.resize(n);
  for (int a = 0; a < n; ++a) d.z_slot[a] = g(a).value();
  return d;
}

Eigen::VectorXd thomas_cotractor(const ThomasD& d) {
  const int n = static_cast<int>(d.z_slot.size());
  Eigen::VectorXd v(n + 2);
  for (int a = 0; a < n; ++a) v(a) = 0.5 * d.z_slot[a];
  v(n) = d.y_slot;
  v(n + 1) = 0.0;
  return v;
}

}  // namespace cpg
