#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kframe/cli/scenario.hpp"

namespace kframe::cli {

/// Unknown property id or malformed command-line request.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Property ids in canonical execution order.
const std::vector<std::string>& all_property_ids();
double default_tolerance(const std::string& property_id);

struct PropertyRecord {
    std::string id;
    std::size_t instances = 0;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    /// First failing trial: {"trial_index", "seed", "scenario"} with the scenario
    /// narrowed to that single trial.
    std::optional<Json> witness;
    std::optional<std::string> error;
    std::map<std::string, std::int64_t> details;
};

struct SuiteReport {
    std::string version = "1";
    Json scenario_echo;
    std::vector<PropertyRecord> properties;
    Json toolchain;
    double wall_time_ms = 0.0;

    bool all_pass() const;
};

/// Runs the selected property suites (all when `properties` is empty) over the
/// scenario's trials. Deterministic for a fixed scenario.
SuiteReport run_suite(const Scenario& s, const std::vector<std::string>& properties = {});

/// Splits "l4,t1" and validates every id. Throws UsageError.
std::vector<std::string> parse_property_list(const std::string& csv);

/// Smallest lambda (60 bisection steps) with S S^* <= lambda T T^* by the
/// Loewner test alone; +inf when no tested lambda works.
double loewner_bisection_lambda(const Matrix& s, const Matrix& t, int iterations = 60);

} // namespace kframe::cli
