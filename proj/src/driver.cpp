#include "cproj/driver.hpp"

#include "cproj/chart_file.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

namespace cpg {

namespace {

double max_diff(const Tensor& a, const Tensor& b) { return max_abs(a - b); }

double slots_diff(const HSlots& a, const HSlots& b) {
  return max_diff(slots_values_flat(a), slots_values_flat(b));
}

// the Weyl part carries no Ricci trace
double weyl_trace_defect(const Tensor& R, const Tensor& J) {
  return max_abs(ricci_of(weyl_of(R, schouten_of(ricci_of(R), J), J)));
}

SignatureTriple complex_signature(const Eigen::MatrixXcd& A, double eps = 1e-9) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double rad = ev.cwiseAbs().maxCoeff();
  SignatureTriple s;
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= eps * rad)
      ++s.r;
    else if (ev(i) > 0)
      ++s.p;
    else
      ++s.q;
  }
  return s;
}

TensorField det_density(const Geometry& g) {
  TensorField zeta = g.zeta;
  TensorField J = g.J.J;
  return TensorField(g.chart, {0, 0}, Weight::real(1), [zeta, J](const std::vector<double>& x, int order) {
    Point p{zeta.chart().id, x};
    JetTensor t(zeta.dim(), 0, Taylor());
    t[0] = det_hermitian_of(zeta.jet(p, order), J.jet(p, order));
    return t;
  });
}

}  // namespace

void validate(const RunConfig& cfg) {
  if (cfg.model_key.empty() == cfg.input_path.empty())
    throw UsageError("exactly one of 'model' and 'input' must be given");
  if (cfg.resolution < 2) throw UsageError("field 'resolution' must be at least 2");
  if (cfg.box) {
    if (cfg.box->lo.size() != cfg.box->hi.size() || cfg.box->lo.empty())
      throw UsageError("field 'box' must give matching lower and upper bounds");
    for (std::size_t i = 0; i < cfg.box->lo.size(); ++i)
      if (!(cfg.box->lo[i] < cfg.box->hi[i])) throw UsageError("field 'box' is empty along axis " + std::to_string(i));
  }
  if (!(cfg.tol_alg > 0)) throw UsageError("field 'tol-alg' must be positive");
  if (!(cfg.tol_num > 0)) throw UsageError("field 'tol-num' must be positive");
  if (!(cfg.tol_eig > 0)) throw UsageError("field 'tol-eig' must be positive");
  if (cfg.format != "json" && cfg.format != "csv") throw UsageError("field 'format' must be json or csv");
  if (cfg.samples == 0) throw UsageError("field 'samples' must be positive");
  if (cfg.threads < 1) throw UsageError("field 'threads' must be positive");
}

Geometry resolve_geometry(const RunConfig& cfg) {
  validate(cfg);
  Geometry g;
  if (!cfg.model_key.empty()) {
    ModelPackage pkg;
    try {
      pkg = model_from_key(cfg.model_key);
    } catch (const ConstructionError& e) {
      throw UsageError(std::string("field 'model': ") + e.what());
    }
    g.source = pkg.key;
    g.m = pkg.m;
    g.chart = pkg.chart;
    g.J = pkg.J;
    g.connection = pkg.connection;
    g.flat = pkg.flat;
    g.zeta = pkg.zeta;
    g.box = pkg.default_box;
    g.model = pkg;
  } else {
    ChartData cd = load_chart_data(cfg.input_path);
    g.source = cfg.input_path;
    g.m = cd.m;
    g.chart = cd.chart;
    g.J = cd.J;
    g.connection = cd.connection;
    g.zeta = cd.zeta;
    g.box = cd.box ? *cd.box
                   : Box{std::vector<double>(2 * cd.m, -1.0), std::vector<double>(2 * cd.m, 1.0)};
  }
  if (cfg.box) {
    if (static_cast<int>(cfg.box->lo.size()) != 2 * g.m)
      throw UsageError("field 'box' must have " + std::to_string(2 * g.m) + " axes");
    g.box = *cfg.box;
  }
  return g;
}

std::vector<Point> sample_points(const Geometry& g, std::size_t count, unsigned seed) {
  std::mt19937 rng(seed);
  const int n = 2 * g.m;
  std::vector<Point> pts;
  for (std::size_t k = 0; k < count; ++k) {
    Point p{g.chart->id, std::vector<double>(n)};
    for (int i = 0; i < n; ++i) p.coords[i] = std::uniform_real_distribution<double>(g.box.lo[i], g.box.hi[i])(rng);
    pts.push_back(std::move(p));
  }
  return pts;
}

Assertion assert_below(std::string name, double measured, double tolerance) {
  return {std::move(name), measured, tolerance, measured < tolerance};
}

std::vector<Assertion> suite_structure(const Geometry& g, const std::vector<Point>& pts, double tol_alg) {
  double j2 = 0, nj = 0, tn = 0, anti = 0, jc = 0, reas = 0;
  const int n = 2 * g.m;
  for (const Point& p : pts) {
    j2 = std::max(j2, complex_structure_defect(g.J, p));
    nj = std::max(nj, max_abs(nabla_J(g.connection, g.J, p)));
    Tensor T = torsion(g.connection, p), N = nijenhuis(g.J, p);
    for (std::size_t k = 0; k < T.size(); ++k) tn = std::max(tn, std::abs(T[k] + 0.25 * N[k]));
    Tensor R = curvature(g.connection, p), J = g.J.J.value(p);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            anti = std::max(anti, std::abs(R(a, b, c, d) + R(b, a, c, d)));
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += R(a, b, c, i) * J(i, d) - R(a, b, i, d) * J(c, i);
            jc = std::max(jc, std::abs(s));
          }
    reas = std::max(reas, weyl_trace_defect(R, J));
  }
  return {assert_below("J_squared_plus_identity", j2, tol_alg),
          assert_below("nabla_J", nj, tol_alg),
          assert_below("torsion_plus_quarter_nijenhuis", tn, tol_alg),
          assert_below("curvature_antisymmetry", anti, tol_alg),
          assert_below("curvature_J_compatibility", jc, 1e3 * tol_alg),
          assert_below("weyl_trace_free", reas, 1e3 * tol_alg)};
}

std::vector<Assertion> suite_solution(const Geometry& g, const std::vector<Point>& pts, double tol_num) {
  Splitting s = Splitting::make(g.connection, g.J);
  const int n = 2 * g.m;
  double res = 0, trace_top = 0, trace_mid = 0, proj = 0, routes = 0;
  for (const Point& p : pts) res = std::max(res, max_abs(metrizability_residual(g.zeta, s, p)));
  NormalityDefect nd;
  if (res < tol_num) nd = normality_defect(g.zeta, s, pts, tol_num);
  for (const Point& p : pts) {
    TractorHSection h = split_zeta(g.zeta, s, p, 1);
    proj = std::max(proj, max_diff(values(h.slots.zeta), g.zeta.value(p)));
    auto d = tractor_derivative_H(h);
    auto dm = tractor_derivative_H_matrix(h);
    Tensor J = g.J.J.value(p);
    for (int c = 0; c < n; ++c) routes = std::max(routes, slots_diff(d[c], dm[c]));
    for (int b = 0; b < n; ++b) {
      double t = 0.0, tj = 0.0;
      for (int c = 0; c < n; ++c) {
        t += d[c].zeta(c, b).value();
        for (int a = 0; a < n; ++a) tj += J(a, c) * d[c].zeta(a, b).value();
      }
      trace_top = std::max({trace_top, std::abs(t), std::abs(tj)});
    }
    double tm = 0.0;
    for (int c = 0; c < n; ++c) tm += d[c].lambda(c).value();
    trace_mid = std::max(trace_mid, std::abs(tm));
  }
  std::vector<Assertion> out{assert_below("metrizability_residual", res, tol_num),
                             assert_below("projection_property", proj, 1e-15),
                             assert_below("tractor_derivative_display_vs_matrix", routes, tol_num),
                             assert_below("trace_free_top_slot", trace_top, tol_num),
                             assert_below("trace_free_middle_slot", trace_mid, tol_num)};
  if (res < tol_num)
    out.push_back(assert_below("normality_defect", nd.defect, tol_num));
  else
    out.push_back({"normality_defect", NAN, tol_num, false});
  return out;
}

std::vector<Assertion> suite_invariance(const Geometry& g, const std::vector<Point>& pts, unsigned seed,
                                        int upsilons) {
  Splitting s = Splitting::make(g.connection, g.J);
  TensorField tau = det_density(g);
  double weyl = 0, sch = 0, resid = 0, lcomm = 0, detinv = 0, dcomm = 0, thomas = 0, inv = 0, comp = 0;
  double res0 = 0;
  const int n = 2 * g.m;
  for (int k = 0; k < upsilons; ++k) {
    Upsilon u = random_polynomial_upsilon(g.chart, seed + 7919u * k, 2);
    Upsilon u2 = random_polynomial_upsilon(g.chart, seed + 7919u * k + 1, 1);
    Upsilon mu = random_polynomial_upsilon(g.chart, seed + 7919u * k, 2, -1.0);
    Splitting st = s.transformed(u);
    Connection back = transform_connection(st.conn, g.J, mu);
    Connection two = transform_connection(st.conn, g.J, u2);
    TensorField U = u, U2 = u2;
    Upsilon sum(g.chart, {0, 1}, Weight(), [U, U2](const std::vector<double>& x, int order) {
      Point p{U.chart().id, x};
      JetTensor a = U.jet(p, order), b = U2.jet(p, order);
      for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
      return a;
    });
    Connection one = transform_connection(s.conn, g.J, sum);
    for (std::size_t i = 0; i < pts.size(); i += std::max<std::size_t>(1, pts.size() / 10)) {
      const Point& p = pts[i];
      weyl = std::max(weyl, max_diff(cpg::weyl(s.conn, g.J, p), cpg::weyl(st.conn, g.J, p)));
      Tensor P = schouten(s.conn, g.J, p);
      sch = std::max(sch, max_diff(schouten(st.conn, g.J, p), transform_schouten(P, s.conn, g.J, u, p)));
      res0 = std::max(res0, max_abs(metrizability_residual(g.zeta, s, p)));
      resid = std::max(resid, max_abs(metrizability_residual(g.zeta, st, p)));
      inv = std::max(inv, max_diff(back.gamma.value(p), s.conn.gamma.value(p)));
      comp = std::max(comp, max_diff(two.gamma.value(p), one.gamma.value(p)));

      TractorHSection h = split_zeta(g.zeta, s, p, 1);
      TractorHSection ht = split_zeta(g.zeta, st, p, 1);
      TractorHSection hc = change_splitting_H(h, u, st);
      lcomm = std::max(lcomm, slots_diff(slots_at_order(ht.slots, 0), slots_at_order(hc.slots, 0)));
      const double d0 = det_tractor_hermitian(h), d1 = det_tractor_hermitian(ht);
      detinv = std::max(detinv, std::abs(d1 - d0) / std::max(std::abs(d0), 1.0));

      // derivative then transport versus transport then derivative
      auto dh = tractor_derivative_H(h);
      auto dht = tractor_derivative_H(hc);
      for (int c = 0; c < n; ++c) {
        TractorHSection dc{p, dh[c], s};
        TractorHSection moved = change_splitting_H(dc, u, st);
        dcomm = std::max(dcomm, slots_diff(moved.slots, slots_at_order(dht[c], 0)));
      }

      Eigen::VectorXd w0 = thomas_cotractor(thomasD_density(tau, s, p));
      Eigen::VectorXd w1 = thomas_cotractor(thomasD_density(tau, st, p));
      Eigen::MatrixXd G = change_matrix(u.value(p), g.J.J.value(p));
      Eigen::VectorXd pred = G.transpose().inverse() * w0;
      thomas = std::max(thomas, (pred - w1).cwiseAbs().maxCoeff() / std::max(1.0, w0.cwiseAbs().maxCoeff()));
    }
  }
  const double rtol = std::max(1e-9, 10 * res0);
  return {assert_below("weyl_invariance", weyl, 1e-8),
          assert_below("schouten_transformation", sch, 1e-9),
          assert_below("residual_invariance", resid, rtol),
          assert_below("splitting_operator_commutes_with_change", lcomm, 1e-9),
          assert_below("tractor_determinant_invariance", detinv, 1e-10),
          assert_below("tractor_derivative_commutes_with_change", dcomm, 1e-9),
          assert_below("thomas_D_invariance", thomas, 1e-10),
          assert_below("transform_inverse", inv, 1e-12),
          assert_below("transform_composition", comp, 1e-10)};
}

std::vector<Assertion> suite_splitting(const Geometry& g, const std::vector<Point>& pts, unsigned seed,
                                       double tol_alg) {
  std::vector<Splitting> splits{Splitting::make(g.connection, g.J)};
  if (g.flat) splits.push_back(Splitting::make(*g.flat, g.J));
  Splitting t = splits[0].transformed(random_polynomial_upsilon(g.chart, seed, 2));
  splits.push_back(t);
  splits.push_back(t.transformed(random_polynomial_upsilon(g.chart, seed + 1, 2)));
  double worst = 0.0;
  for (const Splitting& s : splits)
    for (const Point& p : pts) {
      SplittingRelations r = splitting_relation_check(s, p);
      worst = std::max({worst, r.YX, r.YW, r.ZX, r.ZW});
    }
  return {assert_below("splitting_relations", worst, tol_alg)};
}

std::vector<Assertion> suite_jets(const Geometry& g, const std::vector<Point>& pts) {
  std::vector<TensorField> fields{g.zeta, g.J.J, g.connection.gamma};
  if (g.model) fields.push_back(g.model->metric);
  const int n = 2 * g.m;
  const double h1 = 1e-5, h2 = 1e-3;
  double e1 = 0.0, e2 = 0.0;
  for (const TensorField& f : fields)
    for (const Point& p : pts) {
      Jet2 j = eval_jet2(f, p);
      auto at = [&](int i, double di, int k, double dk) {
        Point q = p;
        q.coords[i] += di;
        q.coords[k] += dk;
        return f.value(q);
      };
      const std::size_t C = j.value.size();
      for (int i = 0; i < n; ++i) {
        Tensor fp = at(i, h1, i, 0.0), fm = at(i, -h1, i, 0.0);
        for (std::size_t c = 0; c < C; ++c) {
          const double fd = (fp[c] - fm[c]) / (2 * h1);
          const double jet = j.d1[c * n + i];
          e1 = std::max(e1, std::abs(fd - jet) / std::max(1.0, std::abs(jet)));
        }
        for (int k = i; k < n; ++k) {
          Tensor pp = at(i, h2, k, h2), pm = at(i, h2, k, -h2), mp = at(i, -h2, k, h2), mm = at(i, -h2, k, -h2);
          for (std::size_t c = 0; c < C; ++c) {
            const double fd = (pp[c] - pm[c] - mp[c] + mm[c]) / (4 * h2 * h2);
            const double jet = j.d2[(c * n + i) * n + k];
            e2 = std::max(e2, std::abs(fd - jet) / std::max(1.0, std::abs(jet)));
          }
        }
      }
    }
  return {assert_below("jet_first_partials_vs_central_differences", e1, 1e-5),
          assert_below("jet_second_partials_vs_central_differences", e2, 1e-5)};
}

std::vector<Assertion> suite_model(const Geometry& g, const std::vector<Point>& pts, double tol_num) {
  std::vector<Assertion> out;
  if (!g.model) return out;
  Splitting s = Splitting::make(g.connection, g.J);
  double omega = 0, weyl = 0, nij = 0, dmin = INFINITY, dmax = -INFINITY;
  for (const Point& p : pts) {
    for (auto& row : tractor_curvature(s, p))
      for (auto& M : row) omega = std::max(omega, M.cwiseAbs().maxCoeff());
    weyl = std::max(weyl, max_abs(cpg::weyl(g.connection, g.J, p)));
    nij = std::max(nij, max_abs(nijenhuis(g.J, p)));
    const double d = det_tractor_hermitian(split_zeta(g.zeta, s, p, 0));
    dmin = std::min(dmin, d);
    dmax = std::max(dmax, d);
  }
  out.push_back(assert_below("tractor_curvature", omega, tol_num));
  out.push_back(assert_below("weyl_curvature", weyl, tol_num));
  out.push_back(assert_below("nijenhuis", nij, tol_num));
  out.push_back(assert_below("tractor_determinant_constant", dmax - dmin, tol_num));
  return out;
}

VerifyReport run_verify(const RunConfig& cfg) {
  Geometry g = resolve_geometry(cfg);
  std::vector<Point> pts = sample_points(g, cfg.samples, cfg.seed);
  VerifyReport rep;
  rep.config = cfg;
  auto add = [&](std::vector<Assertion> v) { rep.assertions.insert(rep.assertions.end(), v.begin(), v.end()); };
  add(suite_structure(g, pts, cfg.tol_alg));
  add(suite_solution(g, pts, cfg.tol_num));
  add(suite_splitting(g, pts, cfg.seed, cfg.tol_alg));
  add(suite_invariance(g, pts, cfg.seed));
  add(suite_jets(g, std::vector<Point>(pts.begin(), pts.begin() + std::min<std::size_t>(pts.size(), 10))));
  add(suite_model(g, pts, cfg.tol_num));
  for (const Assertion& a : rep.assertions) rep.ok = rep.ok && a.pass;
  return rep;
}

StratumLabel orbit_label(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& X) {
  Eigen::RowVectorXcd row = X.adjoint() * h;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(row, Eigen::ComputeFullV);
  Eigen::MatrixXcd B = svd.matrixV().rightCols(h.rows() - 1);
  return label_from_signatures(complex_signature(B.adjoint() * h * B), complex_signature(h));
}

StratifyRun run_stratify(const RunConfig& cfg) {
  Geometry g = resolve_geometry(cfg);
  StratifyRun run;
  run.config = cfg;
  // the chart-flat connection is cheaper and in the same class when known
  Splitting s = Splitting::make(g.flat ? *g.flat : g.connection, g.J);
  StratifyOptions opt;
  opt.eps_eig = cfg.tol_eig;
  opt.grad_tol = cfg.tol_num;
  opt.cr_limit = cfg.cr_limit;
  opt.threads = cfg.threads;
  GridSpec grid{g.box, cfg.resolution};
  run.report = stratify(g.zeta, s, grid, opt);
  const StratificationReport& rep = run.report;

  std::vector<Point> pts = sample_points(g, cfg.samples, cfg.seed);
  Splitting sc = Splitting::make(g.connection, g.J);
  run.det_L_min = INFINITY;
  run.det_L_max = -INFINITY;
  for (const Point& p : pts) {
    run.max_residual = std::max(run.max_residual, max_abs(metrizability_residual(g.zeta, sc, p)));
    const double d = det_tractor_hermitian(split_zeta(g.zeta, sc, p, 0));
    run.det_L_min = std::min(run.det_L_min, d);
    run.det_L_max = std::max(run.det_L_max, d);
  }
  if (run.max_residual < cfg.tol_num) run.normality = normality_defect(g.zeta, sc, pts, cfg.tol_num).defect;
  run.assertions.push_back(assert_below("metrizability_residual", run.max_residual, cfg.tol_num));
  run.assertions.push_back(assert_below("normality_defect", run.normality, cfg.tol_num));

  std::size_t total = rep.counts[0] + rep.counts[1] + rep.counts[2];
  run.assertions.push_back({"counts_sum_to_grid", static_cast<double>(total), static_cast<double>(grid.size()),
                            total == grid.size()});
  run.assertions.push_back({"separation", rep.separated ? 1.0 : 0.0, 1.0, rep.separated});

  if (g.model && g.model->projective) {
    const ModelPackage& M = *g.model;
    std::size_t agree = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      StratumLabel want = orbit_label(M.h_form, M.homogeneous(grid.coords(k)));
      const std::int8_t lw = want == StratumLabel::plus ? 1 : want == StratumLabel::zero ? 0 : -1;
      agree += lw == rep.labels[k];
    }
    run.oracle_agreement = static_cast<double>(agree) / grid.size();
    run.assertions.push_back({"orbit_oracle_agreement", *run.oracle_agreement, 1.0, agree == grid.size()});
    double on_locus = 0.0;
    for (const Root& r : rep.roots) {
      Eigen::VectorXcd X = M.homogeneous(r.coords);
      on_locus = std::max(on_locus, std::abs((X.adjoint() * M.h_form * X)(0, 0).real()) / X.squaredNorm());
    }
    run.assertions.push_back(assert_below("roots_on_isotropic_locus", on_locus, cfg.tol_num));
    try {
      run.kappa = calibrate_scalar_curvature_constant(M, 20, cfg.seed).kappa;
    } catch (const CalibrationError&) {
    }
  }

  double tau_max = 0.0, grad_min = INFINITY;
  double thetaT = 0.0, tdth = 0.0, kern = 0.0, levi = 0.0, nul = 0.0;
  bool levi_sig = true, zero_sig = true;
  const SignatureTriple expect{rep.tractor_signature.p - 1, rep.tractor_signature.q - 1, 0};
  std::size_t with_cr = 0;
  for (const Root& r : rep.roots) {
    tau_max = std::max(tau_max, std::abs(r.tau));
    grad_min = std::min(grad_min, r.grad_norm);
    if (!r.cr) continue;
    ++with_cr;
    const CRData& cr = *r.cr;
    thetaT = std::max(thetaT, std::abs(cr.theta_T - 1.0));
    tdth = std::max(tdth, cr.T_dtheta);
    kern = std::max({kern, cr.kernel_grad, cr.kernel_theta});
    levi = std::max(levi, cr.levi_agreement);
    nul = std::max(nul, std::abs(cr.null_defect));
    levi_sig = levi_sig && cr.levi_signature == expect;
    Classification c = classify_value(values(g.zeta.jet(Point{g.chart->id, r.coords}, 0)),
                                      g.J.J.value(Point{g.chart->id, r.coords}), rep.tractor_signature, rep.det_L,
                                      1.0, cfg.tol_eig);
    zero_sig = zero_sig && c.label == StratumLabel::zero &&
               c.signature == SignatureTriple{expect.p, expect.q, 1};
  }
  if (!rep.roots.empty()) {
    run.assertions.push_back(assert_below("root_tau", tau_max, 1e-10));
    run.assertions.push_back({"root_grad_tau", grad_min, 1e-6, grad_min > 1e-6});
  }
  if (with_cr) {
    run.assertions.push_back(assert_below("reeb_normalization", thetaT, cfg.tol_num));
    run.assertions.push_back(assert_below("reeb_contracts_dtheta", tdth, cfg.tol_num));
    run.assertions.push_back(assert_below("kernel_property", kern, cfg.tol_num));
    run.assertions.push_back(assert_below("levi_two_route_agreement", levi, 1e-7));
    run.assertions.push_back(assert_below("special_boundary_scale_null", nul, cfg.tol_num));
    run.assertions.push_back({"levi_signature", levi_sig ? 1.0 : 0.0, 1.0, levi_sig});
    run.assertions.push_back({"zero_stratum_signature", zero_sig ? 1.0 : 0.0, 1.0, zero_sig});
  }
  for (const Assertion& a : run.assertions) run.ok = run.ok && a.pass;
  return run;
}

CalibrateRun run_calibrate(const RunConfig& cfg) {
  Geometry g = resolve_geometry(cfg);
  CalibrateRun run;
  run.config = cfg;
  run.m = g.m;
  std::vector<Point> pts;
  TensorField tau = det_density(g);
  std::mt19937 rng(cfg.seed);
  const int n = 2 * g.m;
  for (int guard = 0; pts.size() < cfg.samples && guard < 1000000; ++guard) {
    Point p{g.chart->id, std::vector<double>(n)};
    for (int i = 0; i < n; ++i) p.coords[i] = std::uniform_real_distribution<double>(g.box.lo[i], g.box.hi[i])(rng);
    if (std::abs(tau.value(p)[0]) < 1e-2) continue;
    pts.push_back(std::move(p));
  }
  Splitting s = Splitting::make(g.flat ? *g.flat : g.connection, g.J);
  run.calibration = calibrate_scalar_curvature_constant(g.zeta, s, pts);
  return run;
}

}  // namespace cpg
