#pragma once

#include "cproj/determinants.hpp"
#include "cproj/strata.hpp"

#include <optional>
#include <string>

namespace cpg {

struct RunConfig {
  std::string model_key;   // registry key, or
  std::string input_path;  // chart data file
  std::optional<Box> box;
  int resolution = 40;
  double tol_alg = 1e-10;
  double tol_num = 1e-8;
  double tol_eig = 1e-9;
  unsigned seed = 1;
  std::string out;           // empty: standard output
  std::string format = "json";
  std::size_t samples = 100;  // sample points for the verify suites
  std::size_t cr_limit = 0;   // 0: CR data at every root
  std::size_t max_json_points = 200000;
  int threads = 1;
};

// throws UsageError naming the offending field
void validate(const RunConfig& cfg);

// the geometry a run operates on
struct Geometry {
  std::string source;
  int m = 0;
  std::shared_ptr<const Chart> chart;
  ComplexStructure J;
  Connection connection;
  std::optional<Connection> flat;  // second connection in the class, when known
  TensorField zeta;
  Box box;
  std::optional<ModelPackage> model;
};
Geometry resolve_geometry(const RunConfig& cfg);

std::vector<Point> sample_points(const Geometry& g, std::size_t count, unsigned seed);

struct Assertion {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};
Assertion assert_below(std::string name, double measured, double tolerance);

// ---- invariant suites -----------------------------------------------------
std::vector<Assertion> suite_structure(const Geometry& g, const std::vector<Point>& pts, double tol_alg);
std::vector<Assertion> suite_solution(const Geometry& g, const std::vector<Point>& pts, double tol_num);
std::vector<Assertion> suite_invariance(const Geometry& g, const std::vector<Point>& pts, unsigned seed,
                                        int upsilons = 10);
std::vector<Assertion> suite_splitting(const Geometry& g, const std::vector<Point>& pts, unsigned seed,
                                       double tol_alg);
std::vector<Assertion> suite_jets(const Geometry& g, const std::vector<Point>& pts);
std::vector<Assertion> suite_model(const Geometry& g, const std::vector<Point>& pts, double tol_num);

struct VerifyReport {
  RunConfig config;
  std::vector<Assertion> assertions;
  bool ok = true;
};
VerifyReport run_verify(const RunConfig& cfg);

struct StratifyRun {
  RunConfig config;
  StratificationReport report;
  double max_residual = 0.0;
  double normality = 0.0;
  double det_L_min = 0.0, det_L_max = 0.0;
  std::optional<double> oracle_agreement;  // fraction of grid points agreeing with the orbit oracle
  std::optional<double> kappa;
  std::vector<Assertion> assertions;
  bool ok = true;
};
StratifyRun run_stratify(const RunConfig& cfg);

struct CalibrateRun {
  RunConfig config;
  Calibration calibration;
  int m = 0;
};
CalibrateRun run_calibrate(const RunConfig& cfg);

// the expected label at a chart point from the form h on C^{m+1}: signature of h on the h-orthogonal of X
StratumLabel orbit_label(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& X);

// exit codes
constexpr int kExitPass = 0, kExitFail = 1, kExitUsage = 2, kExitHypothesis = 3;

}  // namespace cpg
