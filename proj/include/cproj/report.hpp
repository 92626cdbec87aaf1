#pragma once

#include "cproj/driver.hpp"

#include <json.hpp>

#include <ostream>
#include <string>

namespace cpg {

inline constexpr const char* kVersion = "1.0.0";

nlohmann::json config_json(const RunConfig& cfg);
nlohmann::json verify_json(const VerifyReport& r);
nlohmann::json stratify_json(const StratifyRun& r);
nlohmann::json calibrate_json(const CalibrateRun& r);

// indented JSON with floating values at 17 significant digits
std::string dump_json(const nlohmann::json& j);

// flat per-point records and the degeneracy-locus cloud
void write_points_csv(const StratifyRun& r, std::ostream& os);
void write_roots_csv(const StratifyRun& r, std::ostream& os);

}  // namespace cpg
