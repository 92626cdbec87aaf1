#pragma once

#include "cproj/bgg.hpp"
#include "cproj/chart_file.hpp"
#include "cproj/determinants.hpp"
#include "cproj/driver.hpp"
#include "cproj/models.hpp"
#include "cproj/strata.hpp"
#include "cproj/transform.hpp"

#include <random>
#include <string>
#include <vector>

namespace cpt {

using namespace cpg;

inline const ModelPackage& cp2() {
  static const ModelPackage m = cpm_model(2, 1, 0);
  return m;
}
inline const ModelPackage& cp2_definite() {
  static const ModelPackage m = cpm_model(2, 2, -1);
  return m;
}
inline const ModelPackage& flat2() {
  static const ModelPackage m = flat_model(2, 2, 0);
  return m;
}

inline std::vector<Point> random_points(const ModelPackage& M, std::size_t count, unsigned seed) {
  std::mt19937 rng(seed);
  const int n = 2 * M.m;
  std::vector<Point> pts;
  for (std::size_t k = 0; k < count; ++k) {
    Point p{M.chart->id, std::vector<double>(n)};
    for (int i = 0; i < n; ++i)
      p.coords[i] = std::uniform_real_distribution<double>(M.default_box.lo[i], M.default_box.hi[i])(rng);
    pts.push_back(std::move(p));
  }
  return pts;
}

inline TensorField poly_field(std::shared_ptr<const Chart> chart, Valence v, Weight w,
                              const std::vector<std::string>& comps) {
  std::vector<Polynomial> polys;
  for (const auto& c : comps) polys.push_back(Polynomial::parse(c, chart->dim));
  return polynomial_field(chart, v, w, polys);
}

// complex-bilinear symmetric term with non-holomorphic coefficients c^0_{11} = x2^2, c^1_{00} = x1 x3:
// commutes with the standard J and has nonzero Weyl curvature
inline Connection curved_connection(std::shared_ptr<const Chart> chart) {
  using Cx = std::pair<std::string, std::string>;
  Cx c[2][2][2];
  for (auto& x : c)
    for (auto& y : x)
      for (auto& z : y) z = {"0", "0"};
  c[0][1][1] = {"x2^2", "0"};
  c[1][0][0] = {"x1*x3", "0"};
  auto neg = [](const std::string& e) { return "-(" + e + ")"; };
  std::vector<std::string> comps(64);
  for (int k = 0; k < 4; ++k)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        const Cx& w = c[k / 2][a / 2][b / 2];
        Cx r = w;
        if (a % 2 + b % 2 == 1) r = {neg(w.second), w.first};
        if (a % 2 + b % 2 == 2) r = {neg(w.first), neg(w.second)};
        comps[(k * 4 + a) * 4 + b] = k % 2 ? r.second : r.first;
      }
  return Connection{poly_field(chart, {1, 2}, Weight(), comps)};
}

inline TensorField scaled(const TensorField& f, double s) {
  return TensorField(f.chart_ptr(), f.valence(), f.weight(), [f, s](const std::vector<double>& x, int order) {
    JetTensor t = f.jet(Point{f.chart().id, x}, order);
    for (auto& c : t.data()) c *= s;
    return t;
  });
}

inline TensorField constant_upsilon(std::shared_ptr<const Chart> chart, std::vector<double> u) {
  Tensor t(chart->dim, 1, 0.0);
  for (int i = 0; i < chart->dim; ++i) t(i) = u[i];
  return constant_field(chart, {0, 1}, Weight(), t);
}

inline double max_diff(const Tensor& a, const Tensor& b) { return max_abs(a - b); }

inline double slots_diff(const HSlots& a, const HSlots& b) {
  return max_abs(slots_values_flat(a) - slots_values_flat(b));
}

}  // namespace cpt
