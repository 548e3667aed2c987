#pragma once

// Running scenario queries and rendering the results.

#include "cap/scenario.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cap {

struct RunOptions {
    /// Seed for queries that do not set one.
    std::uint64_t seed = 0;
    /// Tolerance for evaluate expectations that do not set one.
    double tolerance = 1e-6;
    /// Run independent queries concurrently; results keep scenario order.
    bool parallel = false;
};

enum class QueryStatus { Ok, ExpectationFailed, Error };

struct QueryResult {
    std::size_t index = 0;
    std::string kind;
    std::string label;
    QueryStatus status = QueryStatus::Ok;
    /// Whether the query carried any expectation.
    bool has_expectation = false;
    std::string error;
    /// Kind-specific values, verdicts and witnesses.
    nlohmann::ordered_json data = nlohmann::ordered_json::object();
    /// One line per fact for the human rendering.
    std::vector<std::string> lines;
    double seconds = 0.0;
};

struct ScenarioReport {
    std::string scenario;
    std::vector<QueryResult> results;
};

struct Report {
    std::vector<ScenarioReport> scenarios;

    /// 0 success, 1 an expectation failed, 3 a query raised an error.
    int exit_code() const;
    /// Deterministic given the scenario and seeds (no timing).
    nlohmann::ordered_json machine() const;
    std::string human() const;
};

ScenarioReport run_queries(const Scenario& scenario, const RunOptions& options = {});

/// Every bundled scenario; each expected utility is a closed form from the
/// examples, compared at 1e-6.
Report builtin_machina_suite(const RunOptions& options = {});

} // namespace cap
