#include "cproj/field.hpp"

#include <cmath>
#include <string>

namespace cpg {

bool Box::contains(const std::vector<double>& x) const {
  if (x.size() != lo.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  return true;
}

Weight::Weight(double w_, double wp_) : w(w_), wp(wp_) {
  double d = w - wp;
  if (std::abs(d - std::round(d)) > 1e-12)
    throw ConstructionError("density weight difference w - w' must be an integer");
}

TensorField::TensorField(std::shared_ptr<const Chart> chart, Valence valence, Weight weight, Evaluator eval)
    : chart_(std::move(chart)), valence_(valence), weight_(weight), eval_(std::move(eval)) {
  if (!chart_) throw ConstructionError("tensor field without chart");
  if (chart_->dim < 4 || chart_->dim % 2) throw ConstructionError("chart dimension must be 2m with m >= 2");
}

JetTensor TensorField::jet(const Point& p, int order) const {
  if (static_cast<int>(p.coords.size()) != dim()) throw DomainError("point has wrong coordinate count");
  if (p.chart_id != chart_->id) throw DomainError("point belongs to chart " + std::to_string(p.chart_id));
  if (chart_->domain && !chart_->domain->contains(p.coords)) throw DomainError("point outside chart domain");
  JetTensor t = eval_(p.coords, order);
  if (t.rank() != valence_.rank() || t.dim() != dim())
    throw ConstructionError("evaluator returned a tensor of the wrong shape");
  return t;
}

Jet2 eval_jet2(const TensorField& field, const Point& p) {
  JetTensor t = field.jet(p, 2);
  const int n = field.dim();
  Jet2 out;
  out.dim = n;
  out.value.resize(t.size());
  out.d1.resize(t.size() * n);
  out.d2.resize(t.size() * n * n);
  for (std::size_t k = 0; k < t.size(); ++k) {
    out.value[k] = t[k].value();
    for (int i = 0; i < n; ++i) {
      out.d1[k * n + i] = t[k].d1(i);
      for (int j = 0; j < n; ++j) out.d2[(k * n + i) * n + j] = t[k].d2(i, j);
    }
  }
  return out;
}

TensorField constant_field(std::shared_ptr<const Chart> chart, Valence v, Weight w, const Tensor& value) {
  const int n = chart->dim;
  return TensorField(chart, v, w, [value, n](const std::vector<double>&, int order) {
    return constant_jet(value, n, order);
  });
}

TensorField zero_connection_field(std::shared_ptr<const Chart> chart) {
  return constant_field(chart, {1, 2}, Weight(), Tensor(chart->dim, 3, 0.0));
}

std::shared_ptr<const Chart> whole_chart(int dim, int id) {
  auto c = std::make_shared<Chart>();
  c->id = id;
  c->dim = dim;
  return c;
}

Tensor standard_J(int dim) {
  Tensor J(dim, 2, 0.0);
  for (int k = 0; k < dim / 2; ++k) {
    J(2 * k + 1, 2 * k) = 1.0;
    J(2 * k, 2 * k + 1) = -1.0;
  }
  return J;
}

ComplexStructure standard_complex_structure(std::shared_ptr<const Chart> chart) {
  return {constant_field(chart, {1, 1}, Weight(), standard_J(chart->dim))};
}

Eigen::MatrixXd embed_hermitian(const Eigen::MatrixXcd& m) {
  const auto k = m.rows();
  Eigen::MatrixXd out(2 * k, 2 * k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      double re = m(a, b).real(), im = m(a, b).imag();
      out(2 * a, 2 * b) = re;
      out(2 * a + 1, 2 * b + 1) = re;
      out(2 * a, 2 * b + 1) = -im;
      out(2 * a + 1, 2 * b) = im;
    }
  return out;
}

}  // namespace cpg
