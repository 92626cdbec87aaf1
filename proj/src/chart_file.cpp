#include "cproj/chart_file.hpp"

#include "cproj/polynomial.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace cpg {

namespace {

using nlohmann::json;

Polynomial entry(const json& v, int n, const std::string& where) {
  if (v.is_number()) return Polynomial::constant(n, v.get<double>());
  if (!v.is_string()) throw UsageError("chart data: " + where + " must be a polynomial string or number");
  try {
    return Polynomial::parse(v.get<std::string>(), n);
  } catch (const UsageError& e) {
    throw UsageError("chart data: " + where + ": " + e.what());
  }
}

// flatten a nested array of the given rank and extent n
void collect(const json& v, int n, int rank, const std::string& name, std::vector<Polynomial>& out,
             const std::string& where) {
  if (rank == 0) {
    out.push_back(entry(v, n, where));
    return;
  }
  if (!v.is_array() || static_cast<int>(v.size()) != n)
    throw UsageError("chart data: " + where + " must be an array of length " + std::to_string(n));
  for (int i = 0; i < n; ++i) collect(v[i], n, rank - 1, name, out, where + "[" + std::to_string(i) + "]");
}

std::vector<double> number_list(const json& v, std::size_t n, const std::string& where) {
  if (!v.is_array() || v.size() != n)
    throw UsageError("chart data: " + where + " must be an array of " + std::to_string(n) + " numbers");
  std::vector<double> out;
  for (auto& x : v) {
    if (!x.is_number()) throw UsageError("chart data: " + where + " must contain numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

TensorField polynomial_field(std::shared_ptr<const Chart> chart, Valence val, Weight w, std::vector<Polynomial> comps) {
  const int n = chart->dim;
  const int rank = val.rank();
  return TensorField(chart, val, w, [comps = std::move(comps), n, rank](const std::vector<double>& x, int order) {
    JetTensor t(n, rank, Taylor());
    for (std::size_t k = 0; k < comps.size(); ++k) t[k] = comps[k].jet(x, order);
    return t;
  });
}

ChartData parse_chart_data(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("chart data: malformed JSON: ") + e.what());
  }
  if (!doc.contains("m") || !doc["m"].is_number_integer()) throw UsageError("chart data: field 'm' is required");
  ChartData cd;
  cd.m = doc["m"].get<int>();
  if (cd.m < 2) throw UsageError("chart data: field 'm' must be at least 2");
  const int n = 2 * cd.m;
  cd.chart = whole_chart(n);
  for (const char* key : {"J", "zeta"})
    if (!doc.contains(key)) throw UsageError(std::string("chart data: field '") + key + "' is required");
  std::vector<Polynomial> J, Z, G;
  collect(doc["J"], n, 2, "J", J, "J");
  collect(doc["zeta"], n, 2, "zeta", Z, "zeta");
  if (doc.contains("Gamma"))
    collect(doc["Gamma"], n, 3, "Gamma", G, "Gamma");
  else
    G.assign(static_cast<std::size_t>(n) * n * n, Polynomial(n));
  cd.J = {polynomial_field(cd.chart, {1, 1}, Weight(), J)};
  cd.connection = {polynomial_field(cd.chart, {1, 2}, Weight(), G), true};
  cd.zeta = polynomial_field(cd.chart, {2, 0}, Weight::real(-1), Z);
  if (doc.contains("box")) {
    const json& b = doc["box"];
    if (!b.is_object() || !b.contains("lo") || !b.contains("hi"))
      throw UsageError("chart data: field 'box' needs 'lo' and 'hi'");
    Box box{number_list(b["lo"], n, "box.lo"), number_list(b["hi"], n, "box.hi")};
    for (int i = 0; i < n; ++i)
      if (!(box.lo[i] < box.hi[i])) throw UsageError("chart data: box is empty along axis " + std::to_string(i));
    cd.box = box;
  }
  return cd;
}

ChartData load_chart_data(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open chart data file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_chart_data(ss.str());
}

}  // namespace cpg
