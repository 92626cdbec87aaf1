#pragma once

#include "cproj/field.hpp"
#include "cproj/polynomial.hpp"

#include <string>

namespace cpg {

// Chart data file (JSON):
//   m      : complex dimension
//   J      : 2m x 2m array of polynomial strings, J[a][b] = J^a_b
//   Gamma  : optional 2m x 2m x 2m array, Gamma[c][a][b] = Gamma^c_{ab}; zero when absent
//   zeta   : 2m x 2m array, zeta[a][b] = zeta^{ab}, weight (-1,-1)
//   box    : optional {"lo": [...], "hi": [...]}
// Polynomials use + - * ^ ( ), integer or decimal coefficients and variables x0 .. x{2m-1};
// plain JSON numbers are accepted as constants.
struct ChartData {
  int m = 0;
  std::shared_ptr<const Chart> chart;
  ComplexStructure J;
  Connection connection;
  TensorField zeta;
  std::optional<Box> box;
};

// field with polynomial components in row-major index order
TensorField polynomial_field(std::shared_ptr<const Chart> chart, Valence val, Weight w, std::vector<Polynomial> comps);

ChartData parse_chart_data(const std::string& text);
ChartData load_chart_data(const std::string& path);

}  // namespace cpg
