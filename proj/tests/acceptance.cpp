// Acceptance run: one PASS/FAIL line per criterion.
#include "cproj/report.hpp"
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

using namespace cpt;

namespace {

struct Line {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int k, double budget_s, const std::function<Line()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Line l;
  try {
    l = body();
  } catch (const std::exception& e) {
    l = {false, std::string("exception: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = l.pass && dt < budget_s;
  failures += !ok;
  std::printf("criterion %2d: %s  %s  [%.1f s of %.0f s]\n", k, ok ? "PASS" : "FAIL", l.detail.c_str(), dt, budget_s);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Geometry geometry_of(const std::string& key) {
  RunConfig c;
  c.model_key = key;
  return resolve_geometry(c);
}

const Assertion& find(const std::vector<Assertion>& v, const std::string& name) {
  for (const Assertion& a : v)
    if (a.name == name) return a;
  throw std::runtime_error("no assertion " + name);
}

}  // namespace

int main() {
  const Geometry cp = geometry_of("cpm:m=2,p=1,q=0");
  const Geometry flat = geometry_of("flat:m=2,sig=2,0");
  const std::vector<Point> samples = sample_points(cp, 10000, 1);
  const Splitting s_cp = Splitting::make(cp.connection, cp.J);

  criterion(1, 10, [&] {
    double r = 0.0, rf = 0.0;
    for (const Point& p : samples) r = std::max(r, max_abs(metrizability_residual(cp.zeta, s_cp, p)));
    Splitting sf = Splitting::make(flat.connection, flat.J);
    for (const Point& p : sample_points(flat, 10000, 2)) rf = std::max(rf, max_abs(metrizability_residual(flat.zeta, sf, p)));
    return Line{r < 1e-10 && rf < 1e-14,
                fmt("max residual CP2 %.3g over %.0f samples, flat %.3g", r, double(samples.size()), rf)};
  });

  criterion(2, 10, [&] {
    NormalityDefect d = normality_defect(cp.zeta, s_cp, samples, 1e-8);
    return Line{d.defect < 1e-9, fmt("normality defect %.3g over %.0f samples", d.defect, double(samples.size()))};
  });

  criterion(3, 30, [&] {
    std::vector<Point> pts = sample_points(cp, 100, 3);
    std::vector<Assertion> a = suite_invariance(cp, pts, 1, 10);
    const double w = find(a, "weyl_invariance").measured, sch = find(a, "schouten_transformation").measured;
    const double res = find(a, "residual_invariance").measured;
    const double L = find(a, "splitting_operator_commutes_with_change").measured;
    // Weyl invariance on a Weyl-curved class as well
    auto chart = whole_chart(4);
    ComplexStructure J = standard_complex_structure(chart);
    Connection base = curved_connection(chart);
    double wc = 0.0, wsize = 0.0;
    for (unsigned k = 0; k < 10; ++k) {
      Connection t = transform_connection(base, J, random_polynomial_upsilon(chart, 1 + 7919u * k, 2));
      for (std::size_t i = 0; i < pts.size(); i += 10) {
        Tensor W0 = weyl(base, J, pts[i]);
        wsize = std::max(wsize, max_abs(W0));
        wc = std::max(wc, max_diff(weyl(t, J, pts[i]), W0));
      }
    }
    const bool ok = w < 1e-8 && wc < 1e-8 && wsize > 1e-2 && sch < 1e-9 && res < 1e-9 && L < 1e-9;
    return Line{ok, fmt("weyl %.3g (curved class %.3g), schouten %.3g, residual %.3g", w, wc, sch, res) +
                        fmt(", L-change %.3g", L)};
  });

  criterion(4, 30, [&] {
    double worst = 0.0;
    for (const Geometry* g : {&flat, &cp}) {
      std::vector<Assertion> a = suite_splitting(*g, sample_points(*g, 100, 4), 4, 1e-12);
      worst = std::max(worst, a.front().measured);
    }
    return Line{worst < 1e-12, fmt("max relation deviation %.3g at 100 points, both models, 4 splittings each", worst)};
  });

  // criteria 5, 6, 7 and 9 share one stratification of the 40^4 grid
  RunConfig sc;
  sc.model_key = "cpm:m=2,p=1,q=0";
  sc.resolution = 40;
  sc.cr_limit = 200;
  sc.samples = 100;
  StratifyRun run;
  double strat_seconds = 0.0;
  std::string strat_error;
  {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      run = run_stratify(sc);
    } catch (const std::exception& e) {
      strat_error = e.what();
    }
    strat_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  const StratificationReport& rep = run.report;

  criterion(5, 60, [&] {
    if (!strat_error.empty()) return Line{false, strat_error};
    const bool sig = rep.signatures[0] == SignatureTriple{2, 0, 0} && rep.signatures[2] == SignatureTriple{1, 1, 0} &&
                     rep.signatures[1] == SignatureTriple{1, 0, 1};
    const double agree = run.oracle_agreement.value_or(0.0);
    std::ostringstream d;
    d << "grid " << rep.grid.size() << " (40^4), agreement " << agree * 100 << "%, counts plus/zero/minus "
      << rep.counts[0] << "/" << rep.counts[1] << "/" << rep.counts[2] << ", signatures " << to_string(rep.signatures[0])
      << " " << to_string(rep.signatures[2]) << " " << to_string(rep.signatures[1]) << ", stratify " << strat_seconds
      << " s";
    return Line{agree == 1.0 && sig && strat_seconds < 60, d.str()};
  });

  criterion(6, 60, [&] {
    if (!strat_error.empty()) return Line{false, strat_error};
    double tau = 0.0, grad = INFINITY;
    for (const Root& r : rep.roots) {
      tau = std::max(tau, std::abs(r.tau));
      grad = std::min(grad, r.grad_norm);
    }
    RunConfig dc = sc;
    dc.model_key = "cpm:m=2,p=2,q=-1";
    dc.resolution = 20;
    StratifyRun def = run_stratify(dc);
    const bool ok = rep.separated && rep.plus_minus_edges <= rep.sign_change_edges &&
                    rep.roots.size() == rep.sign_change_edges && !rep.roots.empty() && tau < 1e-10 && grad > 1e-6 &&
                    def.report.roots.empty();
    std::ostringstream d;
    d << rep.roots.size() << " roots on " << rep.plus_minus_edges << " plus-minus edges, max |tau| " << tau
      << ", min |grad tau| " << grad << "; definite model roots " << def.report.roots.size();
    return Line{ok, d.str()};
  });

  criterion(7, 60, [&] {
    if (!strat_error.empty()) return Line{false, strat_error};
    std::size_t n = 0;
    double th = 0, tdt = 0, ker = 0, levi = 0;
    bool sig = true;
    for (const Root& r : rep.roots) {
      if (!r.cr) continue;
      ++n;
      th = std::max(th, std::abs(r.cr->theta_T - 1));
      tdt = std::max(tdt, r.cr->T_dtheta);
      ker = std::max({ker, r.cr->kernel_grad, r.cr->kernel_theta});
      levi = std::max(levi, r.cr->levi_agreement);
      sig = sig && r.cr->levi_signature == SignatureTriple{1, 0, 0};
    }
    const bool ok = n >= 100 && th < 1e-8 && tdt < 1e-8 && ker < 1e-8 && levi < 1e-7 && sig;
    std::ostringstream d;
    d << n << " roots: |theta(T)-1| " << th << ", T.dtheta " << tdt << ", kernel " << ker << ", Levi routes " << levi
      << ", Levi signature " << (sig ? "(1,0) at all" : "mismatch");
    return Line{ok, d.str()};
  });

  criterion(8, 30, [&] {
    Calibration c2 = calibrate_scalar_curvature_constant(cpm_model(2, 1, 0), 100, 8);
    Calibration c3 = calibrate_scalar_curvature_constant(cpm_model(3, 1, 1), 100, 9);
    return Line{c2.spread < 1e-8 && c3.spread < 1e-8,
                fmt("kappa2 %.12g (spread %.2g), kappa3 %.12g (spread %.2g)", c2.kappa, c2.spread, c3.kappa, c3.spread)};
  });

  criterion(9, 10, [&] {
    if (!strat_error.empty()) return Line{false, strat_error};
    // time only the boundary-scale construction at the located roots
    Splitting s = Splitting::make(*cp.flat, cp.J);
    TensorField f = poly_field(cp.chart, {0, 0}, Weight::real(1), {"1"});
    std::size_t n = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < rep.roots.size() && n < 100; i += std::max<std::size_t>(1, rep.roots.size() / 100)) {
      BoundaryScale b = special_boundary_scale(f, cp.zeta, s, Point{0, rep.roots[i].coords});
      worst = std::max(worst, std::abs(b.null_defect));
      ++n;
    }
    return Line{n >= 20 && worst < 1e-8, fmt("h(Y,Y) for gamma = f + xi tau_hat: max %.3g at %.0f roots", worst, double(n))};
  });

  criterion(10, 10, [&] {
    double e1 = 0, e2 = 0;
    for (const Geometry* g : {&cp, &flat}) {
      std::vector<Assertion> a = suite_jets(*g, sample_points(*g, 100, 10));
      e1 = std::max(e1, a[0].measured);
      e2 = std::max(e2, a[1].measured);
    }
    return Line{e1 < 1e-5 && e2 < 1e-5, fmt("max relative error first %.3g, second %.3g at 100 points", e1, e2)};
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
