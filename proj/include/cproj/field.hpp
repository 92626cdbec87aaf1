#pragma once

#include "cproj/errors.hpp"
#include "cproj/tensor.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace cpg {

struct Box {
  std::vector<double> lo, hi;
  bool contains(const std::vector<double>& x) const;
};

struct Chart {
  int id = 0;
  int dim = 0;
  std::optional<Box> domain;  // whole R^dim when empty
};

struct Point {
  int chart_id = 0;
  std::vector<double> coords;
};

struct Valence {
  int up = 0, down = 0;
  int rank() const { return up + down; }
};

// density weight (w, w'); w - w' must be an integer
struct Weight {
  double w = 0.0, wp = 0.0;
  Weight() = default;
  Weight(double w_, double wp_);
  static Weight real(double w_) { return Weight(w_, w_); }
  bool is_real() const { return w == wp; }
};

struct Jet2 {
  int dim = 0;
  std::vector<double> value;  // components
  std::vector<double> d1;     // [comp][i]
  std::vector<double> d2;     // [comp][i][j]
};

class TensorField {
 public:
  // evaluator returns the component jets at x in dim variables to the given order
  using Evaluator = std::function<JetTensor(const std::vector<double>& x, int order)>;

  TensorField() = default;
  TensorField(std::shared_ptr<const Chart> chart, Valence valence, Weight weight, Evaluator eval);

  const Chart& chart() const { return *chart_; }
  std::shared_ptr<const Chart> chart_ptr() const { return chart_; }
  int dim() const { return chart_->dim; }
  Valence valence() const { return valence_; }
  Weight weight() const { return weight_; }

  JetTensor jet(const Point& p, int order) const;
  Tensor value(const Point& p) const { return values(jet(p, 0)); }

 private:
  std::shared_ptr<const Chart> chart_;
  Valence valence_;
  Weight weight_;
  Evaluator eval_;
};

Jet2 eval_jet2(const TensorField& field, const Point& p);

struct ComplexStructure {
  TensorField J;  // J(a,b) = J^a_b
};

struct Connection {
  TensorField gamma;  // gamma(c,a,b) = Gamma^c_{ab}
  bool minimal_complex = true;
};

// field helpers
TensorField constant_field(std::shared_ptr<const Chart> chart, Valence v, Weight w, const Tensor& value);
TensorField zero_connection_field(std::shared_ptr<const Chart> chart);
std::shared_ptr<const Chart> whole_chart(int dim, int id = 0);

// standard J on interleaved coordinates (x0, y0, x1, y1, ...)
Tensor standard_J(int dim);
ComplexStructure standard_complex_structure(std::shared_ptr<const Chart> chart);

// embedding of a complex Hermitian m x m matrix A + iB as real 2m x 2m blocks [[A,-B],[B,A]]
Eigen::MatrixXd embed_hermitian(const Eigen::MatrixXcd& m);

}  // namespace cpg
