// Acceptance criteria. Prints one PASS/FAIL line per criterion; with an
// argument, runs only the named criterion.

#include "cap/axioms.hpp"
#include "cap/comparatives.hpp"
#include "cap/identification.hpp"
#include "cap/machina.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <sstream>
#include <string>
#include <vector>

using namespace cap;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            notes.push_back(what);
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x) {
    std::ostringstream out;
    out.precision(12);
    out << x;
    return out.str();
}

void expect_value(Outcome& out, const std::string& name, double got, double want, double tolerance) {
    out.require(std::abs(got - want) <= tolerance, "U(" + name + ") = " + fmt(got) + ", expected " + fmt(want));
}

double u(const CapModel& model, int act) { return utility(model, machina::act(act)); }

bool optimal_at(const CapModel& model, int act, std::vector<double> theta) {
    const auto r = evaluate(model, Lottery::degenerate(machina::act(act)));
    const auto& family = std::get<ParametricFamily>(model.family());
    const double objective = support_value(family.set_at(theta), machina::act(act)) - family.cost_at(theta);
    const bool attains = objective >= r.value - optimality_tolerance(r.value);
    const bool reported = std::any_of(r.optimal_perceptions.begin(), r.optimal_perceptions.end(), [&](const auto& p) {
        for (std::size_t i = 0; i < theta.size(); ++i)
            if (std::abs(p.parameters[i] - theta[i]) > 1e-6) return false;
        return true;
    });
    return attains && reported;
}

Outcome machina_5051() {
    Outcome out;
    const auto start = Clock::now();
    const auto model = machina::model_5051();
    const double p = 50.0 / 101.0;
    const double f1 = u(model, 1), f2 = u(model, 2), f3 = u(model, 3), f4 = u(model, 4);
    expect_value(out, "f1", f1, 100.0 * (1.0 + p), 1e-6);
    expect_value(out, "f2", f2, 125.0 - 2500.0 / 101.0, 1e-6);
    expect_value(out, "f3", f3, 25.0 + 7500.0 / 101.0, 1e-6);
    expect_value(out, "f4", f4, 50.0 + 5000.0 / 101.0, 1e-6);
    out.require(f1 > f2, "f1 not preferred to f2");
    out.require(f4 > f3, "f4 not preferred to f3");
    const double t = seconds_since(start);
    out.require(t < 1.0, "runtime " + fmt(t) + " s");
    return out;
}

Outcome reflection_ellsberg() {
    Outcome out;
    const auto start = Clock::now();
    const auto model = machina::model_reflection();
    const double want[] = {50, 70, 70, 50, 50, -50};
    for (int i = 5; i <= 10; ++i) expect_value(out, "f" + std::to_string(i), u(model, i), want[i - 5], 1e-6);
    out.require(optimal_at(model, 6, {1.0, 0.0}), "M(1,0) not optimal at f6");
    out.require(optimal_at(model, 7, {0.0, 1.0}), "M(0,1) not optimal at f7");
    const double t = seconds_since(start);
    out.require(t < 1.0, "runtime " + fmt(t) + " s");
    return out;
}

Outcome dual_self_appendix_c() {
    Outcome out;
    const auto model = machina::dual_self_model(machina::dual_self_sets());
    const double want[] = {75, 100, 100, 75, 50, 25};
    for (int i = 5; i <= 10; ++i) expect_value(out, "f" + std::to_string(i), u(model, i), want[i - 5], 1e-6);

    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed);
        std::vector<BeliefSet> sets;
        for (int m = 0; m < 10; ++m) sets.push_back(machina::random_box_set(rng));
        LotterySampler sampler(4, seed);
        const auto report = machina::dual_self_property(sets, sampler, 100);
        out.require(report.holds, "seed " + std::to_string(seed) + ": " + report.counterexample.value_or("violated"));
    }
    return out;
}

Outcome axiom_necessity() {
    Outcome out;
    struct Job {
        ModelClass kind;
        std::vector<AxiomId> axioms;
        const char* name;
    };
    const std::vector<Job> jobs{
        {ModelClass::Cap, {AxiomId::Fsd, AxiomId::Aepr, AxiomId::Imtc, AxiomId::Eaar, AxiomId::Ica}, "cap"},
        {ModelClass::Cautious, {AxiomId::Eapr}, "cautious"},
        {ModelClass::DualSelf, {AxiomId::Sica}, "dual-self"},
        {ModelClass::MoralHazard, {AxiomId::Imt}, "moral-hazard"},
        {ModelClass::ChoquetCore, {AxiomId::Imtcm}, "choquet-core"},
    };
    std::vector<std::future<std::vector<std::string>>> tasks;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        for (std::uint64_t m = 0; m < 20; ++m) {
            tasks.push_back(std::async(std::launch::async, [&, j, m] {
                std::vector<std::string> failures;
                Rng rng(1000 * j + m);
                const std::size_t states = 2 + rng.index(3);
                const auto model = random_model(rng, states, 25, jobs[j].kind);
                for (std::size_t a = 0; a < jobs[j].axioms.size(); ++a) {
                    LotterySampler sampler(states, 7919 * m + 31 * j + a);
                    const auto r = check_axiom(model, jobs[j].axioms[a], sampler, 1000, 1e-7);
                    if (!r.holds || r.trials != 1000) {
                        failures.push_back(std::string(jobs[j].name) + " model " + std::to_string(m) + ": " +
                                           std::string(to_string(jobs[j].axioms[a])) + " violated by " +
                                           fmt(r.counterexample ? r.counterexample->violation : 0.0));
                    }
                }
                return failures;
            }));
        }
    }
    for (auto& t : tasks)
        for (const auto& f : t.get()) out.require(false, f);
    return out;
}

Outcome axiom_separation() {
    Outcome out;
    const auto m5051 = machina::model_5051();
    const auto reflection = machina::model_reflection();
    const auto sica = machina::sica_witness_5051(m5051);
    const auto imt = machina::imt_witness_bets();
    out.require(reverify(m5051, sica, 1e-8), "50-51 A-sica witness, margin " + fmt(violation_margin(m5051, sica)));
    out.require(reverify(m5051, imt, 1e-8), "50-51 A-imt witness, margin " + fmt(violation_margin(m5051, imt)));
    out.require(reverify(reflection, imt, 1e-8),
                "reflection A-imt witness, margin " + fmt(violation_margin(reflection, imt)));
    return out;
}

Outcome cost_identification() {
    Outcome out;
    const auto start = Clock::now();
    const Dictionary dictionary = Dictionary::standard(4);
    for (const auto& model : {machina::model_5051(5), machina::model_reflection(5)}) {
        const auto& family = std::get<ParametricFamily>(model.family());
        for (const auto& theta : family.grid_points()) {
            const double cost = family.cost_at(theta);
            const auto e = estimate_cost_star(model, family.set_at(theta), dictionary, {.budget = 5000});
            out.require(e.value >= cost - 0.5 && e.value <= cost + 1e-3,
                        "c*(" + fmt(theta[0]) + "," + fmt(theta[1]) + ") = " + fmt(e.value) + ", cost " + fmt(cost));
        }
    }
    const double t = seconds_since(start);
    out.require(t < 60.0, "runtime " + fmt(t) + " s");
    return out;
}

Outcome comparatives_coherence() {
    Outcome out;
    std::vector<UtilityAct> pool;
    for (int i = 1; i <= 4; ++i) pool.push_back(machina::act(i));
    const auto m5051 = machina::model_5051(5);

    for (auto which : {Comparative::ExAnteRandomization, Comparative::Ambiguity, Comparative::FilteringIncentives}) {
        LotterySampler sampler(4, 17, {.act_pool = pool});
        const auto v = run_comparative(which, m5051, m5051, sampler, 500);
        out.require(v.holds && v.samples_used == 500, std::string(to_string(which)) + " not reflexive");
    }

    // Linearity along [P, Q] against intersection of optimal perceptions.
    std::size_t agree = 0, total = 0;
    Rng rng(23);
    auto pairs = [&](const CapModel& model, LotterySampler& sampler, std::size_t n) {
        for (std::size_t s = 0; s < n; ++s) {
            const Lottery p = sampler.lottery();
            const Lottery q = rng.bernoulli(0.25) ? p.shifted(rng.uniform(-50, 50)) : sampler.lottery();
            agree += check_shared_perception(model, p, q).agree();
            ++total;
        }
    };
    LotterySampler machina_sampler(4, 29, {.act_pool = pool});
    pairs(m5051, machina_sampler, 1000);
    for (std::uint64_t m = 0; m < 10; ++m) {
        Rng model_rng(500 + m);
        const std::size_t states = 2 + model_rng.index(3);
        const auto model = random_model(model_rng, states, 25, ModelClass::Cap);
        LotterySampler sampler(states, 600 + m);
        pairs(model, sampler, 100);
    }
    const double rate = double(agree) / double(total);
    out.require(total == 2000 && rate >= 0.999, "agreement " + fmt(rate) + " over " + std::to_string(total));

    // Structural ⊵ against its sampled form.
    std::size_t samples = 0;
    for (std::uint64_t k = 0; k < 20; ++k) {
        Rng frng(700 + k);
        const std::size_t states = 2 + frng.index(4);
        std::vector<BeliefSet> first, second;
        for (std::size_t i = 0, n = 1 + frng.index(4); i < n; ++i) first.push_back(random_belief_set(frng, states));
        if (k % 2 == 0) {
            // Dominated family: supersets of members of the first.
            for (const auto& m : first) second.push_back(mix_sets(frng.uniform(), m, BeliefSet::simplex(states)));
        } else {
            for (std::size_t i = 0, n = 1 + frng.index(4); i < n; ++i)
                second.push_back(random_belief_set(frng, states));
        }
        LotterySampler sampler(states, 800 + k);
        const auto d = dominates_benefit(first, second, sampler, 100);
        samples += d.samples_used;
        out.require(!d.contradiction, "sampled contradiction of the structural check, family pair " + std::to_string(k));
        if (k % 2 == 0) out.require(d.holds, "constructed dominance not detected, family pair " + std::to_string(k));
    }
    out.require(samples == 2000, "Lemma B.7 samples " + std::to_string(samples));
    return out;
}

Outcome geometry_oracles() {
    Outcome out;
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.index(4);
        const auto nu = random_convex_capacity(rng, n);
        std::vector<double> x(n);
        for (auto& xi : x) xi = rng.uniform(-100, 100);
        const UtilityAct phi(x);
        const auto core = core_of_capacity(nu);
        double brute = INFINITY;
        for (const auto& v : core.vertices()) brute = std::min(brute, phi.expectation(v));
        const double c = choquet_integral(nu, phi);
        out.require(std::abs(c - brute) <= 1e-9, "capacity " + std::to_string(trial) + ": " + fmt(c) + " vs " + fmt(brute));
    }
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + rng.index(4);
        const auto m = random_belief_set(rng, n), m2 = random_belief_set(rng, n);
        std::vector<double> x(n);
        for (auto& xi : x) xi = rng.uniform(-100, 100);
        const UtilityAct phi(x);
        const double lambda = rng.uniform();
        const double lhs = support_value(mix_sets(lambda, m, m2), phi);
        const double rhs = lambda * support_value(m, phi) + (1.0 - lambda) * support_value(m2, phi);
        out.require(std::abs(lhs - rhs) <= 1e-9, "mixture " + std::to_string(trial) + ": " + fmt(lhs) + " vs " + fmt(rhs));
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"machina-5051", machina_5051},
        {"reflection-ellsberg", reflection_ellsberg},
        {"dual-self-appendix-c", dual_self_appendix_c},
        {"axiom-necessity", axiom_necessity},
        {"axiom-separation", axiom_separation},
        {"cost-identification", cost_identification},
        {"comparatives-coherence", comparatives_coherence},
        {"geometry-oracles", geometry_oracles},
    };
    const std::string only = argc > 1 ? argv[1] : "";
    bool matched = false, all = true;
    for (const auto& [name, run] : criteria) {
        if (!only.empty() && only != name) continue;
        matched = true;
        const auto start = Clock::now();
        Outcome outcome;
        try {
            outcome = run();
        } catch (const std::exception& e) {
            outcome.require(false, std::string("error: ") + e.what());
        }
        std::printf("%s %s (%.2f s)\n", outcome.pass ? "PASS" : "FAIL", name.c_str(), seconds_since(start));
        for (std::size_t i = 0; i < outcome.notes.size() && i < 20; ++i) std::printf("  %s\n", outcome.notes[i].c_str());
        all = all && outcome.pass;
    }
    if (!matched) {
        std::fprintf(stderr, "unknown criterion '%s'\n", only.c_str());
        return 2;
    }
    return all ? 0 : 1;
}
