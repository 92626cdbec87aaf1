#include "cproj/models.hpp"

#include <regex>

namespace cpg {

namespace {

struct CTaylor {
  Taylor re, im;
};

CTaylor cmul(const CTaylor& a, const CTaylor& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
CTaylor cscale(const CTaylor& a, std::complex<double> s) {
  return {a.re * s.real() - a.im * s.imag(), a.re * s.imag() + a.im * s.real()};
}
CTaylor cconj(const CTaylor& a) { return {a.re, -a.im}; }
void cadd(CTaylor& a, const CTaylor& b) {
  a.re += b.re;
  a.im += b.im;
}

// complex m x m matrix of jets embedded as a real rank-2 jet tensor
JetTensor embed_jets(const std::vector<std::vector<CTaylor>>& M) {
  const int k = static_cast<int>(M.size());
  JetTensor out(2 * k, 2, Taylor());
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      out(2 * a, 2 * b) = M[a][b].re;
      out(2 * a + 1, 2 * b + 1) = M[a][b].re;
      out(2 * a, 2 * b + 1) = -M[a][b].im;
      out(2 * a + 1, 2 * b) = M[a][b].im;
    }
  return out;
}

std::vector<CTaylor> chart_z(const std::vector<double>& x, int order) {
  const int n = static_cast<int>(x.size());
  std::vector<CTaylor> z;
  for (int k = 0; k < n / 2; ++k)
    z.push_back({Taylor::variable(n, order, 2 * k, x[2 * k]), Taylor::variable(n, order, 2 * k + 1, x[2 * k + 1])});
  return z;
}

// Z H Z^* with Z = [-z | I]
std::vector<std::vector<CTaylor>> descend(const Eigen::MatrixXcd& H, const std::vector<CTaylor>& z) {
  const int m = static_cast<int>(z.size());
  const int n = 2 * m;
  const int order = z[0].re.order();
  std::vector<CTaylor> row0;  // Z_{a,k}: column 0 is -z_a, column b+1 is delta
  std::vector<std::vector<CTaylor>> out(m, std::vector<CTaylor>(m, {Taylor(n, order), Taylor(n, order)}));
  auto Zentry = [&](int a, int k) -> CTaylor {
    if (k == 0) return {-z[a].re, -z[a].im};
    return {Taylor(n, order, k - 1 == a ? 1.0 : 0.0), Taylor(n, order)};
  };
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      CTaylor acc{Taylor(n, order), Taylor(n, order)};
      for (int k = 0; k <= m; ++k) {
        if (k != 0 && k - 1 != a) continue;
        CTaylor za = Zentry(a, k);
        for (int l = 0; l <= m; ++l) {
          if (l != 0 && l - 1 != b) continue;
          if (H(k, l) == std::complex<double>(0.0)) continue;
          cadd(acc, cmul(cscale(za, H(k, l)), cconj(Zentry(b, l))));
        }
      }
      out[a][b] = acc;
    }
  return out;
}

// (1 + |z|^2)
Taylor one_plus_r(const std::vector<CTaylor>& z) {
  Taylor r(2 * static_cast<int>(z.size()), z[0].re.order(), 1.0);
  for (auto& c : z) {
    r.add_product(c.re, c.re);
    r.add_product(c.im, c.im);
  }
  return r;
}

JetTensor fs_inverse_metric(const std::vector<double>& x, int order) {
  auto z = chart_z(x, order);
  const int m = static_cast<int>(z.size());
  Taylor s = one_plus_r(z);
  auto M = descend(Eigen::MatrixXcd::Identity(m + 1, m + 1), z);  // I + z z^*
  JetTensor g = embed_jets(M);
  for (auto& c : g.data()) c = c * s;
  return g;
}

JetTensor fs_metric(const std::vector<double>& x, int order) {
  auto z = chart_z(x, order);
  const int m = static_cast<int>(z.size());
  const int n = 2 * m;
  Taylor inv = reciprocal(one_plus_r(z));
  std::vector<std::vector<CTaylor>> M(m, std::vector<CTaylor>(m, {Taylor(n, order), Taylor(n, order)}));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      CTaylor zz = cmul(z[a], cconj(z[b]));
      M[a][b].re = -(zz.re * inv);
      M[a][b].im = -(zz.im * inv);
      if (a == b) M[a][b].re += 1.0;
      M[a][b].re = M[a][b].re * inv;
      M[a][b].im = M[a][b].im * inv;
    }
  return embed_jets(M);
}

Eigen::MatrixXcd signature_diag(int pos, int neg) {
  Eigen::VectorXcd d(pos + neg);
  for (int i = 0; i < pos + neg; ++i) d(i) = i < pos ? 1.0 : -1.0;
  return d.asDiagonal();
}

Box cube(int n, double r) { return {std::vector<double>(n, -r), std::vector<double>(n, r)}; }

}  // namespace

Eigen::VectorXcd ModelPackage::homogeneous(const std::vector<double>& x) const {
  Eigen::VectorXcd X(m + 1);
  X(0) = 1.0;
  for (int k = 0; k < m; ++k) X(k + 1) = {x[2 * k], x[2 * k + 1]};
  return X;
}

ModelPackage flat_model(int m, int p, int q) {
  if (m < 2) throw ConstructionError("flat model needs m >= 2");
  if (p < 0 || q < 0 || p + q != m) throw ConstructionError("flat model signature must satisfy p + q = m");
  ModelPackage pkg;
  pkg.key = "flat:m=" + std::to_string(m) + ",sig=" + std::to_string(p) + "," + std::to_string(q);
  pkg.m = m;
  pkg.p = p;
  pkg.q = q;
  const int n = 2 * m;
  pkg.chart = whole_chart(n);
  pkg.J = standard_complex_structure(pkg.chart);
  pkg.flat = {zero_connection_field(pkg.chart), true};
  pkg.connection = pkg.flat;
  Tensor z = from_matrix(embed_hermitian(signature_diag(p, q)));
  pkg.zeta = constant_field(pkg.chart, {2, 0}, Weight::real(-1), z);
  pkg.metric = constant_field(pkg.chart, {0, 2}, Weight(), z);
  pkg.default_box = cube(n, 2.0);
  return pkg;
}

ModelPackage cpm_model(int m, int p, int q) {
  if (m < 2) throw ConstructionError("CP^m model needs m >= 2");
  if (p < -1 || q < -1 || p + q != m - 1) throw ConstructionError("CP^m model signature must satisfy p + q = m - 1");
  ModelPackage pkg;
  pkg.key = "cpm:m=" + std::to_string(m) + ",p=" + std::to_string(p) + ",q=" + std::to_string(q);
  pkg.projective = true;
  pkg.m = m;
  pkg.p = p;
  pkg.q = q;
  const int n = 2 * m;
  pkg.chart = whole_chart(n);
  pkg.J = standard_complex_structure(pkg.chart);
  pkg.flat = {zero_connection_field(pkg.chart), true};
  pkg.h_form = signature_diag(p + 1, q + 1);
  pkg.metric = TensorField(pkg.chart, {0, 2}, Weight(), fs_metric);
  pkg.connection = {TensorField(pkg.chart, {1, 2}, Weight(),
                                [](const std::vector<double>& x, int order) {
                                  return levi_civita_jet(fs_metric(x, order + 1), fs_inverse_metric(x, order));
                                }),
                    true};
  Eigen::MatrixXcd H = pkg.h_form.inverse();
  pkg.zeta = TensorField(pkg.chart, {2, 0}, Weight::real(-1), [H, m, n](const std::vector<double>& x, int order) {
    if (order == 0) {
      Eigen::MatrixXcd Z = Eigen::MatrixXcd::Zero(m, m + 1);
      for (int a = 0; a < m; ++a) {
        Z(a, 0) = -std::complex<double>(x[2 * a], x[2 * a + 1]);
        Z(a, a + 1) = 1.0;
      }
      return constant_jet(from_matrix(embed_hermitian(Z * H * Z.adjoint())), n, 0);
    }
    return embed_jets(descend(H, chart_z(x, order)));
  });
  pkg.default_box = cube(n, 2.0);
  return pkg;
}

ModelPackage model_from_key(const std::string& key) {
  std::smatch mt;
  static const std::regex flat_re(R"(flat:m=(\d+),sig=(-?\d+),(-?\d+))");
  static const std::regex cpm_re(R"(cpm:m=(\d+),p=(-?\d+),q=(-?\d+))");
  if (std::regex_match(key, mt, flat_re))
    return flat_model(std::stoi(mt[1]), std::stoi(mt[2]), std::stoi(mt[3]));
  if (std::regex_match(key, mt, cpm_re)) return cpm_model(std::stoi(mt[1]), std::stoi(mt[2]), std::stoi(mt[3]));
  throw UsageError("unknown model key '" + key + "'");
}

int orbit_oracle(const Eigen::MatrixXcd& h_form, const Eigen::VectorXcd& X, double tol) {
  if (X.norm() == 0.0) throw DomainError("orbit_oracle: zero homogeneous vector");
  double v = (X.adjoint() * h_form * X)(0, 0).real();
  if (v > tol) return 1;
  if (v < -tol) return -1;
  return 0;
}

}  // namespace cpg
