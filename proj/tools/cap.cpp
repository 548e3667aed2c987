// Command-line front end: evaluate acts, run scenario queries, and run the
// bundled golden suite.

#include "cap/errors.hpp"
#include "cap/report.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kValidationError = 2;
constexpr int kInternalError = 3;

cap::Scenario load(const std::string& ref) {
    constexpr std::string_view prefix = "bundled:";
    if (ref.rfind(prefix, 0) == 0) {
        const std::string name = ref.substr(prefix.size());
        for (const auto& b : cap::bundled_scenarios()) {
            if (name == b.name) return cap::parse_scenario(std::string_view(b.text));
        }
        throw cap::ValidationError(ref, "no bundled scenario of that name");
    }
    return cap::load_scenario(ref);
}

std::vector<std::string> model_names(const cap::Scenario& s, const std::vector<std::string>& requested) {
    if (!requested.empty()) return requested;
    std::vector<std::string> out;
    for (const auto& m : s.models) out.push_back(m.name);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Costly ambiguity perception: evaluation, identification, comparatives and axiom checks"};
    app.require_subcommand(1);
    app.fallthrough();

    cap::RunOptions options;
    std::optional<std::size_t> grid;
    std::string format = "human";
    app.add_option("--seed", options.seed, "Seed for queries without their own");
    app.add_option("--grid", grid, "Grid resolution for parametric families")->check(CLI::PositiveNumber);
    app.add_option("--tolerance", options.tolerance, "Tolerance for expected values")->check(CLI::PositiveNumber);
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"human", "machine"}));
    app.add_flag("--parallel", options.parallel, "Run independent queries concurrently");

    std::vector<std::string> scenarios;
    std::vector<std::string> models, acts, axioms;
    std::string first, second, relation;
    std::size_t trials = 1000, budget = 5000, members = 5, samples = 2000;

    auto* eval = app.add_subcommand("eval", "Evaluate acts of a scenario under its models");
    eval->add_option("scenario", scenarios, "Scenario file or bundled:<name>")->required()->expected(1);
    eval->add_option("--model", models, "Models to use (default: all)");
    eval->add_option("--act", acts, "Acts to evaluate (default: all)");

    auto* suite = app.add_subcommand("suite", "Run the bundled golden scenarios");

    auto* ax = app.add_subcommand("axioms", "Check axioms on a model by seeded sampling");
    ax->add_option("scenario", scenarios, "Scenario file or bundled:<name>")->required()->expected(1);
    ax->add_option("--model", models, "Models to check (default: all)");
    ax->add_option("--axiom", axioms, "Axiom ids (default: all)");
    ax->add_option("--trials", trials, "Trials per axiom");

    auto* identify = app.add_subcommand("identify", "Recover filtering costs from behaviour");
    identify->add_option("scenario", scenarios, "Scenario file or bundled:<name>")->required()->expected(1);
    identify->add_option("--model", models, "Models (default: all maximising ones)");
    identify->add_option("--budget", budget, "Supergradient iterations per estimate");
    identify->add_option("--members", members, "Grid points per axis for parametric families");

    auto* compare = app.add_subcommand("compare", "Comparative statics between two models");
    compare->add_option("scenario", scenarios, "Scenario file or bundled:<name>")->required()->expected(1);
    compare->add_option("--relation", relation, "ea-randomization, ambiguity or filtering")->required();
    compare->add_option("--first", first, "First model")->required();
    compare->add_option("--second", second, "Second model")->required();
    compare->add_option("-n,--samples", samples, "Sampled instances");

    auto* report = app.add_subcommand("report", "Run the queries of one or more scenarios");
    report->add_option("scenarios", scenarios, "Scenario files or bundled:<name>")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kValidationError;
    }

    cap::Report out;
    try {
        if (suite->parsed()) {
            out = cap::builtin_machina_suite(options);
        } else {
            for (const auto& ref : scenarios) {
                cap::Scenario s = load(ref);
                if (s.name.empty()) s.name = ref;
                if (grid) s = s.with_grid(*grid);
                if (!report->parsed()) {
                    std::vector<cap::Query> queries;
                    if (eval->parsed()) {
                        for (const auto& m : model_names(s, models)) {
                            (void)s.model(m);
                            std::vector<std::string> names = acts;
                            if (names.empty()) {
                                for (const auto& a : s.acts) names.push_back(a.name);
                            }
                            for (const auto& a : names) {
                                (void)s.act(a);
                                queries.push_back({m + ": U(" + a + ")", cap::EvaluateQuery{m, {{1.0, a}}, {}, {}, {}}});
                            }
                        }
                    } else if (ax->parsed()) {
                        cap::AxiomsQuery q;
                        for (const auto& id : axioms) q.axioms.push_back(cap::parse_axiom(id));
                        if (q.axioms.empty()) q.axioms = cap::all_axioms();
                        q.trials = trials;
                        for (const auto& m : model_names(s, models)) {
                            (void)s.model(m);
                            q.model = m;
                            queries.push_back({m + ": axioms", q});
                        }
                    } else if (identify->parsed()) {
                        for (const auto& m : model_names(s, models)) {
                            if (!s.model(m).maximizes()) continue;
                            cap::IdentifyQuery q;
                            q.model = m;
                            q.grid = members;
                            q.budget = budget;
                            queries.push_back({m + ": cost identification", q});
                        }
                    } else if (compare->parsed()) {
                        cap::ComparativesQuery q;
                        q.relation = cap::parse_comparative(relation);
                        q.first = first;
                        q.second = second;
                        (void)s.model(first);
                        (void)s.model(second);
                        q.samples = samples;
                        queries.push_back({first + " vs " + second + ": " + relation, q});
                    }
                    s.queries = std::move(queries);
                }
                out.scenarios.push_back(cap::run_queries(s, options));
            }
        }
    } catch (const cap::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kValidationError;
    } catch (const cap::InvalidArgument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kValidationError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternalError;
    }

    if (format == "machine") std::cout << out.machine().dump(2) << "\n";
    else std::cout << out.human();
    return out.exit_code();
}
