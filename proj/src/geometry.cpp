#include "cproj/geometry.hpp"

#include <algorithm>

namespace cpg {

JetTensor nijenhuis_jet(const JetTensor& J) {
  const int n = J.dim();
  const int K = J[0].order() - 1;
  JetTensor dJ = partial(J);  // dJ(d,a,b) = d_d J^a_b
  JetTensor Jt = truncated(J, K);
  const Taylor zero(J[0].nvars(), K);
  // sign fixed so that a complex connection has torsion -(1/4) N
  JetTensor N(n, 3, zero);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        Taylor s = zero;
        for (int d = 0; d < n; ++d) {
          s.add_product(Jt(d, b), dJ(d, a, c));
          s.add_product(-Jt(d, c), dJ(d, a, b));
          s.add_product(Jt(a, d), dJ(c, d, b));
          s.add_product(-Jt(a, d), dJ(b, d, c));
        }
        N(a, b, c) = -s;
      }
  return N;
}

JetTensor curvature_jet(const JetTensor& gamma) {
  const int n = gamma.dim();
  const int K = gamma[0].order() - 1;
  JetTensor dG = partial(gamma);
  JetTensor G = truncated(gamma, K);
  JetTensor R(n, 4, Taylor(gamma[0].nvars(), K));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          Taylor s = dG(a, c, b, d) - dG(b, c, a, d);
          for (int e = 0; e < n; ++e) {
            s.add_product(G(c, a, e), G(e, b, d));
            s.add_product(-G(c, b, e), G(e, a, d));
          }
          R(a, b, c, d) = s;
        }
    }
  return R;
}

JetTensor covariant_derivative(const JetTensor& t, int up, int down, double w, const JetTensor& gamma) {
  const int n = t.dim();
  const int r = up + down;
  const int K = std::min(t[0].order() - 1, static_cast<int>(gamma[0].order()));
  const int m = n / 2;
  const std::size_t blk = t.size();
  JetTensor tk = truncated(t, K);
  JetTensor out(n, r + 1, Taylor());
  std::vector<std::size_t> stride(r, 1);
  for (int s = r - 2; s >= 0; --s) stride[s] = stride[s + 1] * n;
  std::vector<int> idx(r);
  for (int c = 0; c < n; ++c) {
    Taylor tr(t[0].nvars(), K);
    for (int i = 0; i < n; ++i) tr += gamma(i, c, i).truncated(K);
    for (std::size_t k = 0; k < blk; ++k) {
      std::size_t rem = k;
      for (int s = 0; s < r; ++s) {
        idx[s] = static_cast<int>(rem / stride[s]);
        rem %= stride[s];
      }
      Taylor v = t[k].derivative(c).truncated(K);
      for (int s = 0; s < r; ++s) {
        const std::size_t base = k - idx[s] * stride[s];
        for (int i = 0; i < n; ++i) {
          const Taylor& ti = tk[base + i * stride[s]];
          if (s < up)
            v.add_product(gamma(idx[s], c, i), ti);
          else
            v.add_product(-gamma(i, c, idx[s]), ti);
        }
      }
      if (w != 0.0) v.add_product(tr * (w / (m + 1)), tk[k]);
      out[c * blk + k] = v;
    }
  }
  return out;
}

std::pair<JetTensor, JetTensor> density_derivative(const Taylor& s, Weight wt, const JetTensor& gamma,
                                                   const JetTensor& J) {
  const int n = gamma.dim();
  const int m = n / 2;
  const int K = std::min(s.order() - 1, static_cast<int>(gamma[0].order()));
  JetTensor re(n, 1, Taylor(s.nvars(), K)), im(n, 1, Taylor(s.nvars(), K));
  Taylor sk = s.truncated(K);
  for (int a = 0; a < n; ++a) {
    // c_a = alpha_a + i beta_a, alpha = tr Gamma_a / 2, beta = -J^d_b Gamma^b_{ad} / 2
    Taylor alpha(s.nvars(), K), beta(s.nvars(), K);
    for (int i = 0; i < n; ++i) alpha.axpy(0.5, gamma(i, a, i).truncated(K));
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d) beta.add_product(-0.5 * J(d, b), gamma(b, a, d));
    re(a) = s.derivative(a).truncated(K) + ((wt.w + wt.wp) / (m + 1)) * alpha * sk;
    im(a) = ((wt.w - wt.wp) / (m + 1)) * beta * sk;
  }
  return {re, im};
}

JetTensor levi_civita_jet(const JetTensor& g, const JetTensor& ginv) {
  const int n = g.dim();
  const int K = g[0].order() - 1;
  JetTensor dg = partial(g);  // dg(e,a,b) = d_e g_ab
  JetTensor L(n, 3, Taylor(g[0].nvars(), K));  // lowered: Gamma_{d,ab}
  for (int d = 0; d < n; ++d)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) L(d, a, b) = 0.5 * (dg(a, d, b) + dg(b, d, a) - dg(d, a, b));
  JetTensor G(n, 3, Taylor(g[0].nvars(), K));
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d) G(c, a, b).add_product(ginv(c, d), L(d, a, b));
  return G;
}

JetTensor jet_inverse(const JetTensor& a) {
  const int n = a.dim();
  const int nv = a[0].nvars(), K = a[0].order();
  JetTensor m = a;
  JetTensor inv(n, 2, Taylor(nv, K));
  for (int i = 0; i < n; ++i) inv(i, i) = Taylor(nv, K, 1.0);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(m(r, col).value()) > std::abs(m(piv, col).value())) piv = r;
    if (m(piv, col).value() == 0.0) throw InversionError("singular jet matrix", 0.0);
    if (piv != col)
      for (int k = 0; k < n; ++k) {
        std::swap(m(piv, k), m(col, k));
        std::swap(inv(piv, k), inv(col, k));
      }
    Taylor r = reciprocal(m(col, col));
    for (int k = 0; k < n; ++k) {
      m(col, k) = m(col, k) * r;
      inv(col, k) = inv(col, k) * r;
    }
    for (int row = 0; row < n; ++row) {
      if (row == col) continue;
      Taylor f = m(row, col);
      if (f.value() == 0.0 && f.order() == 0) continue;
      for (int k = 0; k < n; ++k) {
        m(row, k).add_product(-f, m(col, k));
        inv(row, k).add_product(-f, inv(col, k));
      }
    }
  }
  return inv;
}

Tensor nijenhuis(const ComplexStructure& J, const Point& p) { return values(nijenhuis_jet(J.J.jet(p, 1))); }

Tensor torsion(const Connection& conn, const Point& p) { return torsion_of(conn.gamma.value(p)); }

Tensor curvature(const Connection& conn, const Point& p) { return values(curvature_jet(conn.gamma.jet(p, 1))); }

Tensor ricci(const Connection& conn, const Point& p) { return ricci_of(curvature(conn, p)); }

Tensor schouten(const Connection& conn, const ComplexStructure& J, const Point& p) {
  return schouten_of(ricci(conn, p), J.J.value(p));
}

Tensor weyl(const Connection& conn, const ComplexStructure& J, const Point& p) {
  Tensor R = curvature(conn, p);
  Tensor Jv = J.J.value(p);
  return weyl_of(R, schouten_of(ricci_of(R), Jv), Jv);
}

Tensor nabla_J(const Connection& conn, const ComplexStructure& J, const Point& p) {
  return values(covariant_derivative(J.J.jet(p, 1), 1, 1, 0.0, conn.gamma.jet(p, 0)));
}

double complex_structure_defect(const ComplexStructure& J, const Point& p) {
  Eigen::MatrixXd Jm = to_matrix(J.J.value(p));
  return (Jm * Jm + Eigen::MatrixXd::Identity(Jm.rows(), Jm.cols())).cwiseAbs().maxCoeff();
}

CurvatureJets curvature_jets(const Connection& conn, const ComplexStructure& J, const Point& p, int order) {
  CurvatureJets cj;
  cj.gamma = conn.gamma.jet(p, order + 1);
  cj.J = J.J.jet(p, order);
  cj.R = curvature_jet(cj.gamma);
  cj.ric = ricci_of(cj.R);
  cj.P = schouten_of(cj.ric, cj.J);
  return cj;
}

Connection canonical_complex_connection(const ComplexStructure& J) {
  TensorField Jf = J.J;
  auto eval = [Jf](const std::vector<double>& x, int order) {
    Point p{Jf.chart().id, x};
    JetTensor Jj = Jf.jet(p, order + 1);
    JetTensor dJ = partial(Jj);  // dJ(d,c,e) = d_d J^c_e
    JetTensor Jt = truncated(Jj, order);
    const int n = Jj.dim();
    JetTensor G(n, 3, Taylor(n, order));
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          Taylor s(n, order);
          for (int e = 0; e < n; ++e) {
            s.add_product(2.0 * Jt(c, e), dJ(a, e, b));
            s.add_product(Jt(e, b), dJ(e, c, a));
            s.add_product(Jt(c, e), dJ(b, e, a));
          }
          G(c, a, b) = -0.25 * s;
        }
    return G;
  };
  return {TensorField(Jf.chart_ptr(), {1, 2}, Weight(), eval), true};
}

}  // namespace cpg
