#include "fiberlab/report.hpp"

namespace fiberlab {

std::string overall_status(const std::vector<CheckRecord>& checks) {
    bool inconclusive = false;
    for (const auto& c : checks) {
        if (c.status == "fail") return "fail";
        if (c.status == "inconclusive") inconclusive = true;
    }
    return inconclusive ? "inconclusive" : "pass";
}

nlohmann::ordered_json report_to_json(const Report& rep) {
    nlohmann::ordered_json j;
    j["scenario"] = rep.scenario;
    j["version"] = rep.version;
    j["overall_status"] = rep.overall;
    j["parameters"] = rep.parameters;
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : rep.checks) {
        nlohmann::ordered_json jc;
        jc["id"] = c.id;
        jc["paper_ref"] = c.claim;
        jc["status"] = c.status;
        jc["metrics"] = c.metrics;
        if (!c.note.empty()) jc["note"] = c.note;
        jc["elapsed_seconds"] = c.elapsed_seconds;
        j["checks"].push_back(std::move(jc));
    }
    return j;
}

int exit_code_for(const Report& rep) {
    if (rep.overall == "pass") return 0;
    if (rep.overall == "inconclusive") return 3;
    return 2;
}

}  // namespace fiberlab
