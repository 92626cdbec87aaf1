#include "cproj/determinants.hpp"

#include "cproj/bgg.hpp"

#include <cmath>
#include <random>

namespace cpg {

double det_weighted_hermitian(const TensorField& zeta, const ComplexStructure& J, const Point& p) {
  return det_hermitian_of(zeta.value(p), J.J.value(p));
}

Taylor det_weighted_hermitian_jet(const TensorField& zeta, const ComplexStructure& J, const Point& p, int order) {
  return det_hermitian_of(zeta.jet(p, order), J.J.jet(p, order));
}

double det_tractor_matrix(const Eigen::MatrixXd& H, const Tensor& J) {
  const int n = J.dim();
  Tensor JT(n + 2, 2, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) JT(a, b) = J(a, b);
  JT(n + 1, n) = 1.0;
  JT(n, n + 1) = -1.0;
  return det_hermitian_of(from_matrix(H), JT);
}

double det_tractor_hermitian(const TractorHSection& h) {
  Tensor J = h.split.J.J.value(h.p);
  return det_tractor_matrix(assemble_H(h.slots, J), J);
}

TractorHDualSection inverse_tractor_metric(const TractorHSection& h) {
  const int K = slot_order(h.slots);
  JetTensor J = h.split.J.J.jet(h.p, K);
  JetTensor H = assemble_H(h.slots, J);
  Eigen::MatrixXd Hv = to_matrix(values(H));
  double rownorms = 1.0;
  for (int i = 0; i < Hv.rows(); ++i) rownorms *= Hv.row(i).norm();
  const double det = Hv.determinant();
  if (rownorms == 0.0 || std::abs(det) < 1e-12 * rownorms)
    throw InversionError("inverse_tractor_metric: degenerate tractor metric", rownorms == 0.0 ? 0.0 : std::abs(det) / rownorms);
  return {h.p, extract_Hdual(jet_inverse(H)), h.split};
}

ScalarCurvatureSample scalar_curvature_sample(const TensorField& zeta, const Splitting& s, const Point& p) {
  const int n = zeta.dim();
  JetTensor z = zeta.jet(p, 2);
  Taylor tau = det_hermitian_of(z, s.J.J.jet(p, 2));
  JetTensor ginv = z;
  for (auto& c : ginv.data()) c = c * tau;
  JetTensor g = jet_inverse(ginv);
  JetTensor R = curvature_jet(levi_civita_jet(g, ginv));
  Tensor ric = values(ricci_of(R));
  Tensor gi = values(ginv);
  ScalarCurvatureSample out;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out.scalar_curvature += gi(a, b) * ric(a, b);
  out.det_L = det_tractor_hermitian(split_zeta(zeta, s, p, 0));
  out.ratio = out.det_L / out.scalar_curvature;
  return out;
}

Calibration calibrate_scalar_curvature_constant(const TensorField& zeta, const Splitting& s,
                                                const std::vector<Point>& sample, double rel_tol) {
  Calibration c;
  std::vector<double> ratios;
  double max_det = 0.0, max_r = 0.0;
  for (const Point& p : sample) {
    ScalarCurvatureSample v = scalar_curvature_sample(zeta, s, p);
    max_det = std::max(max_det, std::abs(v.det_L));
    max_r = std::max(max_r, std::abs(v.scalar_curvature));
    ratios.push_back(v.ratio);
  }
  c.samples = sample.size();
  if (max_r < 1e-12) {
    // flat scalar curvature: consistent only with a vanishing tractor determinant
    if (max_det > 1e-12) throw CalibrationError("scalar curvature vanishes but det L(zeta) does not");
    return c;
  }
  c.kappa = ratios.front();
  for (double r : ratios) c.spread = std::max(c.spread, std::abs(r - c.kappa) / std::abs(c.kappa));
  if (!(c.spread <= rel_tol))
    throw CalibrationError("det L(zeta) / R^g is not constant: relative spread " + std::to_string(c.spread));
  return c;
}

Calibration calibrate_scalar_curvature_constant(const ModelPackage& model, std::size_t samples, unsigned seed,
                                                double rel_tol) {
  std::mt19937 rng(seed);
  const Box& box = model.default_box;
  const int n = 2 * model.m;
  Splitting s = Splitting::make(model.flat, model.J);
  std::vector<Point> pts;
  while (pts.size() < samples) {
    Point p{model.chart->id, std::vector<double>(n)};
    for (int i = 0; i < n; ++i) p.coords[i] = std::uniform_real_distribution<double>(box.lo[i], box.hi[i])(rng);
    // stay away from the degeneracy locus where g is undefined
    if (std::abs(det_weighted_hermitian(model.zeta, model.J, p)) < 1e-2) continue;
    pts.push_back(p);
  }
  return calibrate_scalar_curvature_constant(model.zeta, s, pts, rel_tol);
}

}  // namespace cpg
