#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace fiberlab {

inline constexpr const char* kVersion = "0.1.0";

struct CheckRecord {
    std::string id;
    std::string claim;   // serialized under "paper_ref" in the report schema
    std::string status;  // "pass" | "fail" | "inconclusive"
    std::map<std::string, double> metrics;
    std::string note;
    double elapsed_seconds = 0.0;
};

struct Report {
    std::string scenario;
    std::string version = kVersion;
    std::vector<CheckRecord> checks;
    std::string overall;  // pass iff every check passes; inconclusive never counts as pass
    std::map<std::string, std::string> parameters;  // full parameter echo
};

/// Recompute the overall status from the checks.
std::string overall_status(const std::vector<CheckRecord>& checks);

nlohmann::ordered_json report_to_json(const Report& rep);

/// 0 on pass, 2 on fail, 3 when the only deviations are inconclusive checks.
int exit_code_for(const Report& rep);

}  // namespace fiberlab
