#include "cproj/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>

namespace cpg {

using nlohmann::json;

namespace {

std::string timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json metadata(const RunConfig& cfg, const char* verb) {
  return {{"verb", verb}, {"version", kVersion}, {"timestamp", timestamp()}, {"config", config_json(cfg)}};
}

json signature_json(const SignatureTriple& s) { return json::array({s.p, s.q, s.r}); }

std::string label_name(std::int8_t l) { return l > 0 ? "plus" : l == 0 ? "zero" : "minus"; }

int label_slot(std::int8_t l) { return l > 0 ? 0 : l == 0 ? 1 : 2; }

json vec_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void emit(const json& j, std::string& out, int indent) {
  const std::string pad(indent, ' '), pad2(indent + 2, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad2 + json(it.key()).dump() + ": ";
        emit(it.value(), out, indent + 2);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // arrays of scalars on one line
      bool flat = true;
      for (const json& e : j) flat = flat && !e.is_structured();
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const json& e : j) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) out += pad2;
        emit(e, out, indent + 2);
      }
      out += flat ? "]" : "\n" + pad + "]";
      return;
    }
    case json::value_t::number_float: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

std::string csv_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

json config_json(const RunConfig& cfg) {
  json c;
  c["model"] = cfg.model_key.empty() ? json(nullptr) : json(cfg.model_key);
  c["input"] = cfg.input_path.empty() ? json(nullptr) : json(cfg.input_path);
  if (cfg.box)
    c["box"] = {{"lo", cfg.box->lo}, {"hi", cfg.box->hi}};
  else
    c["box"] = nullptr;
  c["resolution"] = cfg.resolution;
  c["tol_alg"] = cfg.tol_alg;
  c["tol_num"] = cfg.tol_num;
  c["tol_eig"] = cfg.tol_eig;
  c["seed"] = cfg.seed;
  c["samples"] = cfg.samples;
  c["cr_limit"] = cfg.cr_limit;
  c["format"] = cfg.format;
  return c;
}

json assertions_json(const std::vector<Assertion>& v) {
  json a = json::array();
  for (const Assertion& x : v)
    a.push_back({{"name", x.name}, {"measured", number(x.measured)}, {"tolerance", x.tolerance}, {"pass", x.pass}});
  return a;
}

json verify_json(const VerifyReport& r) {
  json j;
  j["metadata"] = metadata(r.config, "verify");
  j["assertions"] = assertions_json(r.assertions);
  j["pass"] = r.ok;
  return j;
}

json stratify_json(const StratifyRun& r) {
  const StratificationReport& rep = r.report;
  json j;
  j["metadata"] = metadata(r.config, "stratify");
  json s;
  s["grid_size"] = rep.grid.size();
  s["box"] = {{"lo", rep.grid.box.lo}, {"hi", rep.grid.box.hi}};
  s["counts"] = {{"plus", rep.counts[0]}, {"zero", rep.counts[1]}, {"minus", rep.counts[2]}};
  s["signatures"] = {{"plus", signature_json(rep.signatures[0])},
                     {"zero", signature_json(rep.signatures[1])},
                     {"minus", signature_json(rep.signatures[2])}};
  s["tractor_signature"] = signature_json(rep.tractor_signature);
  s["M0_points"] = rep.roots.size();
  s["sign_change_edges"] = rep.sign_change_edges;
  s["separated"] = rep.separated;
  s["max_residual"] = r.max_residual;
  s["normality_defect"] = number(r.normality);
  s["det_L_min"] = r.det_L_min;
  s["det_L_max"] = r.det_L_max;
  s["kappa"] = r.kappa ? json(*r.kappa) : json(nullptr);
  s["oracle_agreement"] = r.oracle_agreement ? json(*r.oracle_agreement) : json(nullptr);
  j["summary"] = s;
  j["assertions"] = assertions_json(r.assertions);
  j["pass"] = r.ok;

  json cloud = json::array();
  for (const Root& root : rep.roots) {
    json e{{"coords", root.coords}, {"tau", root.tau}, {"grad_norm", root.grad_norm}};
    if (root.cr) {
      const CRData& cr = *root.cr;
      e["theta_T"] = cr.theta_T;
      e["levi_signature"] = signature_json(cr.levi_signature);
      e["reeb"] = vec_json(cr.reeb);
      e["T_dtheta"] = cr.T_dtheta;
      e["kernel_grad"] = cr.kernel_grad;
      e["kernel_theta"] = cr.kernel_theta;
      e["levi_agreement"] = cr.levi_agreement;
      e["null_defect"] = cr.null_defect;
    } else {
      e["theta_T"] = nullptr;
      e["levi_signature"] = nullptr;
    }
    cloud.push_back(std::move(e));
  }
  j["M0"] = std::move(cloud);

  if (rep.grid.size() <= r.config.max_json_points) {
    json pts = json::array();
    for (std::size_t k = 0; k < rep.grid.size(); ++k) {
      const std::int8_t l = rep.labels[k];
      json e{{"coords", rep.grid.coords(k)},
             {"label", label_name(l)},
             {"signature", signature_json(rep.signatures[label_slot(l)])},
             {"tau", rep.tau[k]}};
      e["residual"] = rep.residual.empty() ? json(nullptr) : json(rep.residual[k]);
      pts.push_back(std::move(e));
    }
    j["points"] = std::move(pts);
  } else {
    j["points"] = nullptr;
  }
  return j;
}

json calibrate_json(const CalibrateRun& r) {
  json j;
  j["metadata"] = metadata(r.config, "calibrate");
  j["m"] = r.m;
  j["kappa"] = r.calibration.kappa;
  j["spread"] = r.calibration.spread;
  j["samples"] = r.calibration.samples;
  return j;
}

std::string dump_json(const json& j) {
  std::string out;
  emit(j, out, 0);
  out += "\n";
  return out;
}

void write_points_csv(const StratifyRun& r, std::ostream& os) {
  const StratificationReport& rep = r.report;
  const int n = static_cast<int>(rep.grid.box.lo.size());
  for (int i = 0; i < n; ++i) os << "x" << i << ",";
  os << "label,sig_p,sig_q,sig_r,tau,residual\n";
  for (std::size_t k = 0; k < rep.grid.size(); ++k) {
    for (double x : rep.grid.coords(k)) os << csv_double(x) << ",";
    const std::int8_t l = rep.labels[k];
    const SignatureTriple& s = rep.signatures[label_slot(l)];
    os << label_name(l) << "," << s.p << "," << s.q << "," << s.r << "," << csv_double(rep.tau[k]) << ","
       << (rep.residual.empty() ? std::string() : csv_double(rep.residual[k])) << "\n";
  }
}

void write_roots_csv(const StratifyRun& r, std::ostream& os) {
  const StratificationReport& rep = r.report;
  const int n = static_cast<int>(rep.grid.box.lo.size());
  for (int i = 0; i < n; ++i) os << "x" << i << ",";
  os << "tau,grad_norm,theta_T,levi_p,levi_q,levi_r,T_dtheta,levi_agreement,null_defect\n";
  for (const Root& root : rep.roots) {
    for (double x : root.coords) os << csv_double(x) << ",";
    os << csv_double(root.tau) << "," << csv_double(root.grad_norm);
    if (root.cr) {
      const CRData& cr = *root.cr;
      os << "," << csv_double(cr.theta_T) << "," << cr.levi_signature.p << "," << cr.levi_signature.q << ","
         << cr.levi_signature.r << "," << csv_double(cr.T_dtheta) << "," << csv_double(cr.levi_agreement) << ","
         << csv_double(cr.null_defect) << "\n";
    } else {
      os << ",,,,,,,\n";
    }
  }
}

}  // namespace cpg
