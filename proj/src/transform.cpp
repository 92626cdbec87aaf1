#include "cproj/transform.hpp"

#include "cproj/polynomial.hpp"

#include <random>

namespace cpg {

Connection transform_connection(const Connection& conn, const ComplexStructure& J, const Upsilon& u) {
  TensorField G = conn.gamma, Jf = J.J, U = u;
  auto eval = [G, Jf, U](const std::vector<double>& x, int order) {
    Point p{G.chart().id, x};
    JetTensor g = G.jet(p, order);
    JetTensor Q = change_tensor(U.jet(p, order), Jf.jet(p, order));
    for (std::size_t k = 0; k < g.size(); ++k) g[k] += Q[k];
    return g;
  };
  return {TensorField(G.chart_ptr(), {1, 2}, Weight(), eval), conn.minimal_complex};
}

std::vector<std::complex<double>> density_gradient(const Connection& conn, const ComplexStructure& J,
                                                   const TensorField& s, const Point& p) {
  if (s.valence().rank() != 0) throw PreconditionError("density_gradient needs a scalar density");
  auto [re, im] = density_derivative(s.jet(p, 1)[0], s.weight(), conn.gamma.jet(p, 0), J.J.jet(p, 0));
  std::vector<std::complex<double>> out(re.size());
  for (std::size_t a = 0; a < re.size(); ++a) out[a] = {re[a].value(), im[a].value()};
  return out;
}

std::vector<std::complex<double>> transform_density_derivative(const Connection& conn, const ComplexStructure& J,
                                                               const Upsilon& u, const TensorField& s,
                                                               const Point& p) {
  auto g = density_gradient(conn, J, s, p);
  const Weight wt = s.weight();
  Tensor U = u.value(p), Jv = J.J.value(p);
  const double sv = s.value(p)[0];
  const int n = static_cast<int>(g.size());
  const std::complex<double> I(0.0, 1.0);
  for (int a = 0; a < n; ++a) {
    double JU = 0.0;
    for (int b = 0; b < n; ++b) JU += U(b) * Jv(b, a);
    g[a] += (wt.w + wt.wp) * U(a) * sv - (wt.w - wt.wp) * I * JU * sv;
  }
  return g;
}

Tensor transform_schouten(const Tensor& P, const Connection& conn, const ComplexStructure& J, const Upsilon& u,
                          const Point& p) {
  Tensor dU = values(covariant_derivative(u.jet(p, 1), 0, 1, 0.0, conn.gamma.jet(p, 0)));
  Tensor U = u.value(p), Jv = J.J.value(p);
  const int n = P.dim();
  Tensor JU(n, 1, 0.0);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) JU(a) += Jv(i, a) * U(i);
  Tensor out = P;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out(a, b) += -dU(a, b) + U(a) * U(b) - JU(a) * JU(b);
  return out;
}

Upsilon random_polynomial_upsilon(std::shared_ptr<const Chart> chart, unsigned seed, int degree, double scale) {
  const int n = chart->dim;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<Polynomial> comps;
  for (int a = 0; a < n; ++a) {
    Polynomial poly(n);
    // monomials of degree <= `degree`, enumerated by exponent vectors
    std::vector<int> e(n, 0);
    for (;;) {
      int deg = 0;
      for (int x : e) deg += x;
      if (deg <= degree) poly.add_term(scale * coef(rng), e);
      int i = 0;
      while (i < n && ++e[i] > degree) e[i++] = 0;
      if (i == n) break;
    }
    comps.push_back(poly);
  }
  return TensorField(chart, {0, 1}, Weight(), [comps, n](const std::vector<double>& x, int order) {
    JetTensor t(n, 1, Taylor());
    for (int a = 0; a < n; ++a) t(a) = comps[a].jet(x, order);
    return t;
  });
}

}  // namespace cpg
