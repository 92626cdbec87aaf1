#include "cproj/chart_file.hpp"
#include "cproj/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace cpg;

namespace {

// "lo:hi" for every axis, or one "lo:hi" per axis separated by commas
Box parse_box(const std::string& text, int dim) {
  Box b;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw UsageError("field 'box': expected lo:hi, got '" + item + "'");
    try {
      b.lo.push_back(std::stod(item.substr(0, colon)));
      b.hi.push_back(std::stod(item.substr(colon + 1)));
    } catch (const std::exception&) {
      throw UsageError("field 'box': not a number in '" + item + "'");
    }
  }
  if (b.lo.size() == 1 && dim > 1) {
    b.lo.assign(dim, b.lo[0]);
    b.hi.assign(dim, b.hi[0]);
  }
  return b;
}

int geometry_dim(const RunConfig& cfg) {
  if (!cfg.model_key.empty()) {
    try {
      return 2 * model_from_key(cfg.model_key).m;
    } catch (const ConstructionError& e) {
      throw UsageError(std::string("field 'model': ") + e.what());
    }
  }
  return 2 * load_chart_data(cfg.input_path).m;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(path);
  if (!os) throw UsageError("field 'out': cannot open " + path);
  os << text;
}

std::string assertions_csv(const std::vector<Assertion>& v) {
  std::ostringstream os;
  os << "name,measured,tolerance,pass\n";
  char buf[64];
  for (const Assertion& a : v) {
    os << a.name << ",";
    std::snprintf(buf, sizeof buf, "%.17g,%.17g", a.measured, a.tolerance);
    os << buf << "," << (a.pass ? "true" : "false") << "\n";
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical engine for almost c-projective geometry"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string box;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--model", cfg.model_key, "model key, e.g. cpm:m=2,p=1,q=0 or flat:m=2,sig=2,0");
    sub->add_option("--input", cfg.input_path, "chart data file");
    sub->add_option("--box", box, "region: lo:hi for all axes, or lo:hi per axis separated by commas");
    sub->add_option("--resolution", cfg.resolution, "grid points per axis");
    sub->add_option("--tol-alg", cfg.tol_alg, "algebraic tolerance");
    sub->add_option("--tol-num", cfg.tol_num, "numerical tolerance");
    sub->add_option("--tol-eig", cfg.tol_eig, "relative eigenvalue threshold");
    sub->add_option("--seed", cfg.seed, "seed for random transformations and samples");
    sub->add_option("--samples", cfg.samples, "sample points");
    sub->add_option("--cr-limit", cfg.cr_limit, "CR diagnostics at most at this many roots (0: all)");
    sub->add_option("--threads", cfg.threads, "worker threads");
    sub->add_option("--out", cfg.out, "report path (standard output when absent)");
    sub->add_option("--format", cfg.format, "json or csv");
  };
  CLI::App* verify = app.add_subcommand("verify", "run the invariant suites");
  CLI::App* strat = app.add_subcommand("stratify", "classify a grid into curved orbits");
  CLI::App* calib = app.add_subcommand("calibrate", "measure det L(zeta) / scalar curvature");
  for (CLI::App* s : {verify, strat, calib}) add_common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (!box.empty()) {
      if (cfg.model_key.empty() == cfg.input_path.empty())
        throw UsageError("exactly one of 'model' and 'input' must be given");
      cfg.box = parse_box(box, geometry_dim(cfg));
    }
    if (verify->parsed()) {
      VerifyReport r = run_verify(cfg);
      write_text(cfg.out, cfg.format == "csv" ? assertions_csv(r.assertions) : dump_json(verify_json(r)));
      return r.ok ? kExitPass : kExitFail;
    }
    if (strat->parsed()) {
      StratifyRun r = run_stratify(cfg);
      if (cfg.format == "csv") {
        if (cfg.out.empty()) throw UsageError("field 'out': csv output needs a path");
        std::ofstream pts(cfg.out), m0(cfg.out + ".m0.csv");
        if (!pts || !m0) throw UsageError("field 'out': cannot open " + cfg.out);
        write_points_csv(r, pts);
        write_roots_csv(r, m0);
        nlohmann::json j = stratify_json(r);
        j.erase("points");
        std::cout << dump_json(j);
      } else {
        write_text(cfg.out, dump_json(stratify_json(r)));
      }
      return r.ok ? kExitPass : kExitFail;
    }
    CalibrateRun r = run_calibrate(cfg);
    write_text(cfg.out, dump_json(calibrate_json(r)));
    return kExitPass;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CalibrationError& e) {
    std::cerr << "calibration failed: " << e.what() << "\n";
    return kExitFail;
  } catch (const std::runtime_error& e) {
    std::cerr << "hypothesis violation: " << e.what() << "\n";
    return kExitHypothesis;
  }
}
