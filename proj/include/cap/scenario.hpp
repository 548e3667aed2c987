#pragma once

// Scenario files: states, acts, perception families, models and an ordered
// list of queries, stored as JSON.

#include "cap/axioms.hpp"
#include "cap/comparatives.hpp"
#include "cap/expression.hpp"
#include "cap/model.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cap {

/// One atom of a lottery named in a scenario.
struct LotteryTerm {
    double probability = 1.0;
    std::string act;
};

using LotterySpec = std::vector<LotteryTerm>;

/// A perception named in an expectation: a member label (finite families)
/// or a parameter vector (parametric families).
using PerceptionRef = std::variant<std::string, std::vector<double>>;

enum class Relation { Greater, Less, Indifferent, AtLeast, AtMost };

std::string_view to_string(Relation r);

struct EvaluateQuery {
    std::string model;
    LotterySpec lottery;
    std::optional<double> expect_value;
    std::optional<double> tolerance;
    std::vector<PerceptionRef> expect_optimal;
};

struct CompareQuery {
    std::string model;
    LotterySpec left;
    LotterySpec right;
    std::optional<Relation> expect;
};

struct AxiomsQuery {
    std::string model;
    std::vector<AxiomId> axioms;
    std::size_t trials = 1000;
    std::optional<std::uint64_t> seed;
    /// Expected verdict per axiom (true = holds).
    std::map<AxiomId, bool> expect;
};

struct IdentifyQuery {
    std::string model;
    /// Grid used for parametric families.
    std::size_t grid = 5;
    std::size_t budget = 5000;
    std::optional<std::uint64_t> seed;
    /// Expect every estimate inside [c - below, c + above].
    bool expect_recovery = false;
    double below = 0.5;
    double above = 1e-3;
};

struct ComparativesQuery {
    Comparative relation = Comparative::Ambiguity;
    std::string first;
    std::string second;
    std::size_t samples = 2000;
    std::optional<std::uint64_t> seed;
    std::optional<bool> expect_holds;
};

struct DominanceQuery {
    std::string first;
    std::string second;
    std::size_t samples = 2000;
    std::optional<std::uint64_t> seed;
    std::optional<bool> expect_holds;
};

/// The auxiliary-act implication for dual-self families in the 50-51 box:
/// on the model's own family and on `random_families` random families.
struct AuxiliaryQuery {
    std::optional<std::string> model;
    std::size_t random_families = 0;
    std::size_t members = 10;
    std::size_t trials = 100;
    std::optional<std::uint64_t> seed;
    std::optional<bool> expect_holds;
};

struct CoreQuery {
    std::string model;
    std::size_t samples = 200;
    std::optional<std::uint64_t> seed;
    std::vector<PerceptionRef> expect_contains;
};

struct CanonicalQuery {
    std::string family;
    std::size_t grid = 5;
    std::optional<bool> expect_canonical;
};

using QueryBody = std::variant<EvaluateQuery, CompareQuery, AxiomsQuery, IdentifyQuery, ComparativesQuery,
                               DominanceQuery, AuxiliaryQuery, CoreQuery, CanonicalQuery>;

std::string_view query_kind(const QueryBody& body);

struct Query {
    std::string label;
    QueryBody body;
};

struct NamedAct {
    std::string name;
    UtilityAct act;
};

struct NamedFamily {
    std::string name;
    PerceptionFamily family;
};

struct NamedModel {
    std::string name;
    std::string family;
    Variant variant = Variant::Cap;
    CapModel model;
};

struct Scenario {
    std::string name;
    std::string description;
    StateSpace states{{"s1", "s2"}};
    ConstantTable constants;
    /// Consequence name -> utility; acts may name consequences.
    std::map<std::string, double> utility_table;
    std::vector<NamedAct> acts;
    std::vector<NamedFamily> families;
    std::vector<NamedModel> models;
    std::vector<Query> queries;

    const UtilityAct& act(std::string_view name) const;
    const PerceptionFamily& family(std::string_view name) const;
    const CapModel& model(std::string_view name) const;
    Lottery lottery(const LotterySpec& spec) const;

    /// Copy with every parametric family searched on the given grid.
    Scenario with_grid(std::size_t grid_resolution) const;
};

/// Throws ValidationError naming the offending entry.
Scenario parse_scenario(const nlohmann::ordered_json& document);
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

nlohmann::ordered_json serialize(const Scenario& scenario);

std::string format_lottery(const LotterySpec& spec);

struct BundledScenario {
    const char* name;
    const char* text;
};

/// Scenario files compiled into the library.
const std::vector<BundledScenario>& bundled_scenarios();

} // namespace cap
