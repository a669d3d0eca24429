#pragma once

#include <map>
#include <string>
#include <vector>

#include "fiberlab/report.hpp"

namespace fiberlab {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScenarioInfo {
    std::string name;
    std::string description;  // carries the claim summary for the registry listing
    std::map<std::string, std::string> default_params;
};

/// Deterministic order; six entries.
std::vector<ScenarioInfo> list_scenarios();

/// Runs every check of the named scenario. Overrides are validated against
/// the declared parameter schema; unknown names or malformed values raise
/// UsageError. All sampling uses fixed low-discrepancy lattices, so reports
/// are reproducible byte for byte apart from elapsed times.
Report run_scenario(const std::string& name,
                    const std::map<std::string, std::string>& overrides = {});

/// Low-discrepancy lattice coordinate: frac((i+1) * sqrt(prime_dim)) with
/// primes 2, 3, 5, 7, 11, 13, ... per dimension. Deterministic by design.
double lattice_coord(std::size_t index, std::size_t dim);

}  // namespace fiberlab
