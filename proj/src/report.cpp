#include "cap/report.hpp"

#include "cap/errors.hpp"
#include "cap/identification.hpp"
#include "cap/machina.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <sstream>

namespace cap {

using Json = nlohmann::ordered_json;

namespace {

std::string fmt(double x, int digits = 10) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*g", digits, x);
    return buffer;
}

Json act_json(const UtilityAct& act) { return std::vector<double>(act.payoffs().begin(), act.payoffs().end()); }

Json lottery_json(const Lottery& lottery) {
    Json out = Json::array();
    for (const auto& a : lottery.atoms()) out.push_back({{"p", a.probability}, {"act", act_json(a.act)}});
    return out;
}

std::string describe(const Lottery& lottery) {
    std::string out;
    for (const auto& a : lottery.atoms()) {
        std::string act = "(";
        for (std::size_t i = 0; i < a.act.size(); ++i) act += (i ? "," : "") + fmt(a.act[i], 6);
        act += ")";
        out += (out.empty() ? "" : " + ") + (a.probability == 1.0 ? act : fmt(a.probability, 6) + "·" + act);
    }
    return out;
}

Json perception_json(const OptimalPerception& p) {
    Json j;
    j["label"] = p.label;
    if (p.index) j["index"] = *p.index;
    if (!p.parameters.empty()) j["parameters"] = p.parameters;
    j["cost"] = p.cost;
    j["objective"] = p.objective;
    return j;
}

bool matches(const PerceptionRef& ref, const OptimalPerception& p) {
    if (const auto* label = std::get_if<std::string>(&ref)) return p.label == *label;
    const auto& theta = std::get<std::vector<double>>(ref);
    if (theta.size() != p.parameters.size()) return false;
    for (std::size_t j = 0; j < theta.size(); ++j) {
        if (std::abs(theta[j] - p.parameters[j]) > 1e-9) return false;
    }
    return true;
}

std::string ref_text(const PerceptionRef& ref) {
    if (const auto* label = std::get_if<std::string>(&ref)) return *label;
    std::string out = "(";
    const auto& theta = std::get<std::vector<double>>(ref);
    for (std::size_t j = 0; j < theta.size(); ++j) out += (j ? "," : "") + fmt(theta[j], 6);
    return out + ")";
}

Json witness_json(const AxiomWitness& w) {
    Json j;
    if (w.premise) j["premise"] = {{"left", lottery_json(w.premise->left)}, {"right", lottery_json(w.premise->right)}};
    j["conclusion"] = {{"left", lottery_json(w.conclusion.left)}, {"right", lottery_json(w.conclusion.right)}};
    j["indifference"] = w.indifference;
    j["lambda"] = w.lambda;
    j["kappa"] = w.kappa;
    j["violation"] = w.violation;
    return j;
}

Json comparative_witness_json(const ComparativeWitness& w) {
    return {{"p", lottery_json(w.p)}, {"q", lottery_json(w.q)}, {"lambda", w.lambda}, {"level", w.level}};
}

SamplerConfig scenario_sampler(const Scenario& s) {
    SamplerConfig config;
    for (const auto& a : s.acts) config.act_pool.push_back(a.act);
    return config;
}

class Runner {
public:
    Runner(const Scenario& scenario, const RunOptions& options, QueryResult& result)
        : s_(scenario), options_(options), r_(result) {}

    void operator()(const EvaluateQuery& q) {
        const auto result = evaluate(s_.model(q.model), s_.lottery(q.lottery));
        r_.data["value"] = result.value;
        r_.data["certainty_equivalent"] = result.certainty_equivalent;
        Json optimal = Json::array();
        std::string names;
        for (const auto& p : result.optimal_perceptions) {
            optimal.push_back(perception_json(p));
            names += (names.empty() ? "" : ", ") + p.label;
        }
        r_.data["optimal_perceptions"] = std::move(optimal);
        r_.lines.push_back("value " + fmt(result.value, 17) + ", optimal perception " + names);
        if (q.expect_value) {
            const double tol = q.tolerance.value_or(options_.tolerance);
            const bool ok = std::abs(result.value - *q.expect_value) <= tol;
            r_.data["expect_value"] = *q.expect_value;
            r_.data["tolerance"] = tol;
            expect(ok, "expected " + fmt(*q.expect_value, 17) + " within " + fmt(tol, 3) + " (off by " +
                           fmt(std::abs(result.value - *q.expect_value), 3) + ")");
        }
        for (const auto& ref : q.expect_optimal) {
            bool found = false;
            for (const auto& p : result.optimal_perceptions) found = found || matches(ref, p);
            expect(found, "expected optimal perception " + ref_text(ref));
        }
    }

    void operator()(const CompareQuery& q) {
        const CapModel& model = s_.model(q.model);
        const double left = utility(model, s_.lottery(q.left));
        const double right = utility(model, s_.lottery(q.right));
        const double diff = left - right;
        const double tie = optimality_tolerance(std::max(std::abs(left), std::abs(right)));
        const Relation observed = diff > tie ? Relation::Greater : diff < -tie ? Relation::Less : Relation::Indifferent;
        r_.data["left"] = left;
        r_.data["right"] = right;
        r_.data["relation"] = std::string(to_string(observed));
        r_.lines.push_back(fmt(left, 17) + " " + std::string(to_string(observed)) + " " + fmt(right, 17));
        if (q.expect) {
            bool ok = false;
            switch (*q.expect) {
            case Relation::Greater: ok = observed == Relation::Greater; break;
            case Relation::Less: ok = observed == Relation::Less; break;
            case Relation::Indifferent: ok = observed == Relation::Indifferent; break;
            case Relation::AtLeast: ok = observed != Relation::Less; break;
            case Relation::AtMost: ok = observed != Relation::Greater; break;
            }
            expect(ok, "expected " + std::string(to_string(*q.expect)));
        }
    }

    void operator()(const AxiomsQuery& q) {
        const CapModel& model = s_.model(q.model);
        Json list = Json::array();
        const std::uint64_t seed = q.seed.value_or(options_.seed);
        for (std::size_t i = 0; i < q.axioms.size(); ++i) {
            LotterySampler sampler(model.states().size(), seed + i, scenario_sampler(s_));
            const AxiomReport report = check_axiom(model, q.axioms[i], sampler, q.trials);
            Json j;
            j["axiom"] = std::string(to_string(report.axiom));
            j["holds"] = report.holds;
            j["trials"] = report.trials;
            if (report.counterexample) j["counterexample"] = witness_json(*report.counterexample);
            list.push_back(std::move(j));
            std::string line = std::string(to_string(report.axiom)) + (report.holds ? " holds" : " fails") + " (" +
                               std::to_string(report.trials) + " trials";
            if (report.counterexample) line += ", violation " + fmt(report.counterexample->violation, 6);
            line += ")";
            if (auto it = q.expect.find(report.axiom); it != q.expect.end()) {
                expect(it->second == report.holds, line + ", expected " + (it->second ? "holds" : "fails"));
            } else {
                r_.lines.push_back(line);
            }
            if (report.counterexample) {
                const auto& w = *report.counterexample;
                r_.lines.push_back("  witness " + describe(w.conclusion.left) + (w.indifference ? "  vs  " : "  >=?  ") +
                                   describe(w.conclusion.right));
            }
        }
        r_.data["axioms"] = std::move(list);
    }

    void operator()(const IdentifyQuery& q) {
        const CapModel& model = s_.model(q.model);
        FiniteFamily members;
        if (const auto* p = std::get_if<ParametricFamily>(&model.family())) members = p->with_grid(q.grid).sampled();
        else members = std::get<FiniteFamily>(model.family());
        const Dictionary dictionary = Dictionary::standard(model.states().size());
        EstimateOptions opt;
        opt.budget = q.budget;
        opt.seed = q.seed.value_or(options_.seed);
        Json list = Json::array();
        bool all = true;
        double worst = 0.0;
        for (const auto& m : members.members) {
            const CostEstimate e = estimate_cost_star(model, m.set, dictionary, opt);
            const bool within = e.value >= m.cost - q.below && e.value <= m.cost + q.above;
            all = all && within;
            worst = std::max(worst, std::abs(e.value - m.cost));
            list.push_back({{"member", m.label},
                            {"cost", m.cost},
                            {"estimate", e.value},
                            {"upper_bound", std::isfinite(e.dictionary_upper_bound) ? Json(e.dictionary_upper_bound) : Json()},
                            {"within", within},
                            {"iterations", e.iterations}});
            r_.lines.push_back(m.label + ": cost " + fmt(m.cost, 8) + ", estimate " + fmt(e.value, 10) +
                               (within ? "" : "  OUTSIDE BAND"));
        }
        r_.data["members"] = std::move(list);
        r_.data["max_abs_error"] = worst;
        if (q.expect_recovery) {
            expect(all, "every estimate within [c - " + fmt(q.below, 3) + ", c + " + fmt(q.above, 3) + "] (max |error| " +
                            fmt(worst, 3) + ")");
        }
    }

    void operator()(const ComparativesQuery& q) {
        const CapModel& first = s_.model(q.first);
        LotterySampler sampler(first.states().size(), q.seed.value_or(options_.seed), scenario_sampler(s_));
        const ComparativeVerdict v = run_comparative(q.relation, first, s_.model(q.second), sampler, q.samples);
        r_.data["holds"] = v.holds;
        r_.data["samples"] = v.samples_used;
        r_.data["diagnostics"] = v.diagnostics;
        if (v.counterexample) r_.data["counterexample"] = comparative_witness_json(*v.counterexample);
        const std::string line = std::string(v.holds ? "holds" : "fails") + " on " + std::to_string(v.samples_used) + " samples";
        if (q.expect_holds) expect(*q.expect_holds == v.holds, line + ", expected " + (*q.expect_holds ? "holds" : "fails"));
        else r_.lines.push_back(line);
        if (v.counterexample) {
            r_.lines.push_back("  witness P = " + describe(v.counterexample->p) + ", Q = " + describe(v.counterexample->q));
        }
    }

    void operator()(const DominanceQuery& q) {
        auto sets = [&](const std::string& name) {
            std::vector<BeliefSet> out;
            for (const auto& m : as_finite(s_.model(name).family()).members) out.push_back(m.set);
            return out;
        };
        LotterySampler sampler(s_.states.size(), q.seed.value_or(options_.seed), scenario_sampler(s_));
        const BenefitDominance d = dominates_benefit(sets(q.first), sets(q.second), sampler, q.samples);
        r_.data["holds"] = d.holds;
        r_.data["samples"] = d.samples_used;
        r_.data["sampled_failures"] = d.sampled_failures;
        r_.data["contradiction"] = d.contradiction ? lottery_json(*d.contradiction) : Json();
        const std::string line = std::string(d.holds ? "holds" : "fails") + " (sampled failures " +
                                 std::to_string(d.sampled_failures) + " of " + std::to_string(d.samples_used) + ")";
        if (q.expect_holds) expect(*q.expect_holds == d.holds, line + ", expected " + (*q.expect_holds ? "holds" : "fails"));
        else r_.lines.push_back(line);
        if (d.contradiction) expect(false, "sampled form contradicts the structural answer at " + describe(*d.contradiction));
    }

    void operator()(const AuxiliaryQuery& q) {
        const std::uint64_t seed = q.seed.value_or(options_.seed);
        bool holds = true;
        std::size_t families = 0;
        double affinity = 0.0;
        Json failures = Json::array();
        auto run = [&](const std::vector<BeliefSet>& sets, std::uint64_t s, const std::string& name) {
            LotterySampler sampler(4, s);
            const auto report = machina::dual_self_property(sets, sampler, q.trials);
            ++families;
            affinity = std::max(affinity, report.affinity_error);
            if (!report.holds) {
                holds = false;
                failures.push_back({{"family", name}, {"reason", *report.counterexample}});
            }
            return report;
        };
        if (q.model) {
            std::vector<BeliefSet> sets;
            for (const auto& m : std::get<FiniteFamily>(s_.model(*q.model).family()).members) sets.push_back(m.set);
            const auto report = run(sets, seed, *q.model);
            r_.data["f"] = {report.f1, report.f2, report.f3, report.f4};
            r_.lines.push_back(*q.model + ": U(f1..f4) = " + fmt(report.f1, 12) + ", " + fmt(report.f2, 12) + ", " +
                               fmt(report.f3, 12) + ", " + fmt(report.f4, 12));
        }
        for (std::size_t k = 0; k < q.random_families; ++k) {
            Rng rng(seed + 1 + k);
            std::vector<BeliefSet> sets;
            for (std::size_t i = 0; i < q.members; ++i) sets.push_back(machina::random_box_set(rng));
            run(sets, seed + 1 + k, "random#" + std::to_string(k));
        }
        r_.data["holds"] = holds;
        r_.data["families"] = families;
        r_.data["max_affinity_error"] = affinity;
        r_.data["failures"] = std::move(failures);
        const std::string line = std::string(holds ? "implication holds" : "implication fails") + " on " +
                                 std::to_string(families) + " families (max affinity error " + fmt(affinity, 3) + ")";
        if (q.expect_holds) expect(*q.expect_holds == holds, line + ", expected " + (*q.expect_holds ? "holds" : "fails"));
        else r_.lines.push_back(line);
    }

    void operator()(const CoreQuery& q) {
        const CapModel& model = s_.model(q.model);
        LotterySampler sampler(model.states().size(), q.seed.value_or(options_.seed), scenario_sampler(s_));
        const auto core = estimate_multi_meu_core(model, sampler, q.samples);
        Json sets = Json::array();
        for (const auto& m : core) {
            Json vertices = Json::array();
            for (const auto& v : m.vertices()) vertices.push_back(std::vector<double>(v.weights().begin(), v.weights().end()));
            sets.push_back(std::move(vertices));
        }
        r_.data["sets"] = std::move(sets);
        r_.lines.push_back(std::to_string(core.size()) + " distinct optimal perceptions over " + std::to_string(q.samples) + " lotteries");
        for (const auto& ref : q.expect_contains) {
            const BeliefSet target = resolve(model, ref);
            bool found = false;
            for (const auto& m : core) found = found || same_set(m, target);
            expect(found, "expected " + ref_text(ref) + " in the core");
        }
    }

    void operator()(const CanonicalQuery& q) {
        PerceptionFamily family = s_.family(q.family);
        if (auto* p = std::get_if<ParametricFamily>(&family)) *p = p->with_grid(q.grid);
        const CanonicalReport report = check_canonical(family);
        r_.data["canonical"] = report.canonical();
        r_.data["monotonicity_violations"] = report.monotonicity_violations.size();
        r_.data["convexity_violations"] = report.convexity_violations.size();
        const std::string line = std::string(report.canonical() ? "canonical" : "not canonical") + " (" +
                                 std::to_string(report.monotonicity_violations.size()) + " monotonicity, " +
                                 std::to_string(report.convexity_violations.size()) + " convexity violations)";
        if (q.expect_canonical) expect(*q.expect_canonical == report.canonical(), line);
        else r_.lines.push_back(line);
    }

private:
    BeliefSet resolve(const CapModel& model, const PerceptionRef& ref) const {
        if (const auto* p = std::get_if<ParametricFamily>(&model.family())) {
            const auto* theta = std::get_if<std::vector<double>>(&ref);
            if (!theta) throw InvalidArgument("parametric families are named by parameter vectors");
            return p->set_at(*theta);
        }
        const auto* label = std::get_if<std::string>(&ref);
        if (!label) throw InvalidArgument("finite family members are named by label");
        for (const auto& m : std::get<FiniteFamily>(model.family()).members) {
            if (m.label == *label) return m.set;
        }
        throw InvalidArgument("no member labelled '" + *label + "'");
    }

    void expect(bool ok, const std::string& line) {
        r_.has_expectation = true;
        if (!ok && r_.status == QueryStatus::Ok) r_.status = QueryStatus::ExpectationFailed;
        r_.lines.push_back(std::string(ok ? "ok: " : "FAILED: ") + line);
    }

    const Scenario& s_;
    const RunOptions& options_;
    QueryResult& r_;
};

QueryResult run_one(const Scenario& scenario, std::size_t index, const RunOptions& options) {
    const Query& query = scenario.queries[index];
    QueryResult result;
    result.index = index;
    result.kind = std::string(query_kind(query.body));
    result.label = query.label;
    const auto start = std::chrono::steady_clock::now();
    try {
        std::visit(Runner(scenario, options, result), query.body);
    } catch (const std::exception& e) {
        result.status = QueryStatus::Error;
        result.error = e.what();
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

std::string_view status_name(QueryStatus s) {
    switch (s) {
    case QueryStatus::Ok: return "ok";
    case QueryStatus::ExpectationFailed: return "expectation-failed";
    case QueryStatus::Error: return "error";
    }
    return "?";
}

} // namespace

ScenarioReport run_queries(const Scenario& scenario, const RunOptions& options) {
    ScenarioReport report;
    report.scenario = scenario.name;
    const std::size_t n = scenario.queries.size();
    if (options.parallel) {
        std::vector<std::future<QueryResult>> futures;
        for (std::size_t i = 0; i < n; ++i) {
            futures.push_back(std::async(std::launch::async, [&, i] { return run_one(scenario, i, options); }));
        }
        for (auto& f : futures) report.results.push_back(f.get());
    } else {
        for (std::size_t i = 0; i < n; ++i) report.results.push_back(run_one(scenario, i, options));
    }
    return report;
}

int Report::exit_code() const {
    int code = 0;
    for (const auto& s : scenarios) {
        for (const auto& r : s.results) {
            if (r.status == QueryStatus::Error) return 3;
            if (r.status == QueryStatus::ExpectationFailed) code = 1;
        }
    }
    return code;
}

Json Report::machine() const {
    Json out;
    Json list = Json::array();
    std::size_t queries = 0, failed = 0, errors = 0;
    for (const auto& s : scenarios) {
        Json js;
        js["scenario"] = s.scenario;
        Json results = Json::array();
        for (const auto& r : s.results) {
            ++queries;
            failed += r.status == QueryStatus::ExpectationFailed;
            errors += r.status == QueryStatus::Error;
            Json jr;
            jr["index"] = r.index;
            jr["kind"] = r.kind;
            jr["label"] = r.label;
            jr["status"] = std::string(status_name(r.status));
            jr["has_expectation"] = r.has_expectation;
            if (r.status == QueryStatus::Error) jr["error"] = r.error;
            jr["result"] = r.data;
            results.push_back(std::move(jr));
        }
        js["queries"] = std::move(results);
        list.push_back(std::move(js));
    }
    out["scenarios"] = std::move(list);
    out["summary"] = {{"queries", queries}, {"expectations_failed", failed}, {"errors", errors}, {"exit_code", exit_code()}};
    return out;
}

std::string Report::human() const {
    std::ostringstream out;
    std::size_t queries = 0, failed = 0, errors = 0;
    for (const auto& s : scenarios) {
        out << "== " << (s.scenario.empty() ? "scenario" : s.scenario) << "\n";
        for (const auto& r : s.results) {
            ++queries;
            const char* tag = "[ ok ]";
            if (r.status == QueryStatus::ExpectationFailed) {
                tag = "[FAIL]";
                ++failed;
            } else if (r.status == QueryStatus::Error) {
                tag = "[ERR ]";
                ++errors;
            } else if (!r.has_expectation) {
                tag = "[    ]";
            }
            out << tag << " " << r.label << "  (" << fmt(r.seconds, 3) << " s)\n";
            for (const auto& line : r.lines) out << "       " << line << "\n";
            if (r.status == QueryStatus::Error) out << "       error: " << r.error << "\n";
        }
    }
    out << queries << " queries, " << failed << " failed expectations, " << errors << " errors\n";
    return out.str();
}

Report builtin_machina_suite(const RunOptions& options) {
    Report report;
    for (const auto& bundled : bundled_scenarios()) {
        try {
            Scenario s = parse_scenario(std::string_view(bundled.text));
            if (s.name.empty()) s.name = bundled.name;
            report.scenarios.push_back(run_queries(s, options));
        } catch (const std::exception& e) {
            QueryResult r;
            r.kind = "load";
            r.label = bundled.name;
            r.status = QueryStatus::Error;
            r.error = e.what();
            report.scenarios.push_back({bundled.name, {std::move(r)}});
        }
    }
    return report;
}

} // namespace cap
