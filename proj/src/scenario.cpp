#include "cap/scenario.hpp"

#include "cap/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace cap {

using Json = nlohmann::ordered_json;

namespace {

// A JSON value together with its location in the document.
class Node {
public:
    Node(const Json& value, std::string path) : value_(&value), path_(std::move(path)) {}

    const Json& json() const { return *value_; }
    const std::string& path() const { return path_; }

    [[noreturn]] void fail(const std::string& what) const { throw ValidationError(path_, what); }

    bool has(const char* key) const { return value_->is_object() && value_->contains(key); }

    Node at(const char* key) const {
        require_object();
        if (!value_->contains(key)) fail(std::string("missing field '") + key + "'");
        return {(*value_)[key], child_path(key)};
    }

    std::optional<Node> find(const char* key) const {
        require_object();
        if (!value_->contains(key)) return std::nullopt;
        return Node((*value_)[key], child_path(key));
    }

    std::vector<Node> elements() const {
        if (!value_->is_array()) fail("expected a list");
        std::vector<Node> out;
        for (std::size_t i = 0; i < value_->size(); ++i) out.emplace_back((*value_)[i], path_ + "[" + std::to_string(i) + "]");
        return out;
    }

    std::vector<std::pair<std::string, Node>> members() const {
        require_object();
        std::vector<std::pair<std::string, Node>> out;
        for (auto it = value_->begin(); it != value_->end(); ++it) out.emplace_back(it.key(), Node(it.value(), child_path(it.key())));
        return out;
    }

    void only(std::initializer_list<const char*> allowed) const {
        require_object();
        for (auto it = value_->begin(); it != value_->end(); ++it) {
            if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; })) {
                fail("unknown field '" + it.key() + "'");
            }
        }
    }

    std::string string() const {
        if (!value_->is_string()) fail("expected a string");
        return value_->get<std::string>();
    }

    std::size_t count() const {
        if (!value_->is_number_unsigned() && !(value_->is_number_integer() && value_->get<long long>() >= 0)) {
            fail("expected a nonnegative integer");
        }
        return value_->get<std::size_t>();
    }

    std::uint64_t seed() const {
        if (!value_->is_number_unsigned() && !(value_->is_number_integer() && value_->get<long long>() >= 0)) {
            fail("expected a nonnegative integer seed");
        }
        return value_->get<std::uint64_t>();
    }

    bool boolean() const {
        if (!value_->is_boolean()) fail("expected true or false");
        return value_->get<bool>();
    }

    double number(const ConstantTable& constants) const {
        if (value_->is_number()) return value_->get<double>();
        if (value_->is_string()) {
            try {
                return parse_number(value_->get<std::string>(), constants);
            } catch (const InvalidArgument& e) {
                fail(e.what());
            }
        }
        fail("expected a number or an arithmetic expression");
    }

    AffineExpression affine(const std::vector<std::string>& parameters, const ConstantTable& constants) const {
        if (value_->is_number()) return {value_->get<double>(), std::vector<double>(parameters.size(), 0.0)};
        if (value_->is_string()) {
            try {
                return parse_affine(value_->get<std::string>(), parameters, constants);
            } catch (const InvalidArgument& e) {
                fail(e.what());
            }
        }
        fail("expected a number or an affine expression");
    }

private:
    void require_object() const {
        if (!value_->is_object()) fail("expected an object");
    }
    std::string child_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const Json* value_;
    std::string path_;
};

std::string format_number(double x) {
    char buffer[64];
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, x);
    return ec == std::errc() ? std::string(buffer, end) : std::to_string(x);
}

std::string format_affine(const AffineExpression& e, const std::vector<std::string>& parameters) {
    std::string out = format_number(e.constant);
    for (std::size_t j = 0; j < parameters.size(); ++j) {
        if (e.coefficients[j] != 0.0) out += " + " + format_number(e.coefficients[j]) + "*" + parameters[j];
    }
    return out;
}

Relation parse_relation(const Node& node) {
    const std::string s = node.string();
    if (s == ">") return Relation::Greater;
    if (s == "<") return Relation::Less;
    if (s == "~") return Relation::Indifferent;
    if (s == ">=") return Relation::AtLeast;
    if (s == "<=") return Relation::AtMost;
    node.fail("unknown relation '" + s + "' (use >, <, ~, >= or <=)");
}

bool parse_verdict(const Node& node, const char* yes, const char* no) {
    const std::string s = node.string();
    if (s == yes) return true;
    if (s == no) return false;
    node.fail("expected '" + std::string(yes) + "' or '" + std::string(no) + "'");
}

std::string capacity_key(std::uint32_t mask, const StateSpace& states) {
    std::string key;
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (mask & (std::uint32_t{1} << i)) key += (key.empty() ? "" : ",") + states.label(i);
    }
    return key;
}

class Loader {
public:
    explicit Loader(const Json& document) : root_(document, "") {}

    Scenario load() {
        root_.only({"name", "description", "states", "constants", "utility", "acts", "families", "models", "queries"});
        Scenario s;
        if (auto n = root_.find("name")) s.name = n->string();
        if (auto d = root_.find("description")) s.description = d->string();
        load_states(s);
        if (auto c = root_.find("constants")) {
            for (auto& [key, node] : c->members()) s.constants[key] = node.number(s.constants);
        }
        if (auto u = root_.find("utility")) {
            for (auto& [key, node] : u->members()) s.utility_table[key] = node.number(s.constants);
        }
        if (auto a = root_.find("acts")) {
            for (auto& [key, node] : a->members()) s.acts.push_back({key, load_act(s, node)});
        }
        if (auto f = root_.find("families")) {
            for (auto& [key, node] : f->members()) s.families.push_back({key, load_family(s, node)});
        }
        if (auto m = root_.find("models")) {
            for (auto& [key, node] : m->members()) s.models.push_back(load_model(s, key, node));
        }
        if (auto q = root_.find("queries")) {
            for (const auto& node : q->elements()) s.queries.push_back(load_query(s, node));
        }
        return s;
    }

private:
    void load_states(Scenario& s) {
        const Node node = root_.at("states");
        std::vector<std::string> labels;
        for (const auto& e : node.elements()) labels.push_back(e.string());
        try {
            s.states = StateSpace(std::move(labels));
        } catch (const Error& e) {
            node.fail(e.what());
        }
    }

    UtilityAct load_act(const Scenario& s, const Node& node) {
        const auto entries = node.elements();
        if (entries.size() != s.states.size()) {
            node.fail("act has " + std::to_string(entries.size()) + " payoffs for " + std::to_string(s.states.size()) +
                      " states");
        }
        std::vector<double> payoffs;
        for (const auto& e : entries) {
            if (e.json().is_string()) {
                if (auto it = s.utility_table.find(e.string()); it != s.utility_table.end()) {
                    payoffs.push_back(it->second);
                    continue;
                }
            }
            payoffs.push_back(e.number(s.constants));
        }
        try {
            return UtilityAct(std::move(payoffs));
        } catch (const Error& e) {
            node.fail(e.what());
        }
    }

    Prior load_prior(const Scenario& s, const Node& node) {
        std::vector<double> w;
        for (const auto& e : node.elements()) w.push_back(e.number(s.constants));
        if (w.size() != s.states.size()) node.fail("prior has " + std::to_string(w.size()) + " weights");
        try {
            return Prior(std::move(w));
        } catch (const Error& e) {
            node.fail(e.what());
        }
    }

    ConvexCapacity load_capacity(const Scenario& s, const Node& node) {
        const std::size_t n = s.states.size();
        if (n > kMaxCapacityStates) node.fail("capacities support at most 12 states");
        const std::uint32_t full = (std::uint32_t{1} << n) - 1;
        std::vector<double> values(std::size_t{full} + 1, 0.0);
        std::vector<bool> seen(values.size(), false);
        for (auto& [key, entry] : node.members()) {
            std::uint32_t mask = 0;
            std::stringstream labels(key);
            std::string label;
            while (std::getline(labels, label, ',')) {
                try {
                    mask |= std::uint32_t{1} << s.states.index_of(label);
                } catch (const Error&) {
                    entry.fail("unknown state '" + label + "'");
                }
            }
            values[mask] = entry.number(s.constants);
            seen[mask] = true;
        }
        if (!seen[full]) values[full] = 1.0;
        for (std::uint32_t m = 1; m < full; ++m) {
            if (!seen[m]) node.fail("missing value for {" + capacity_key(m, s.states) + "}");
        }
        try {
            return ConvexCapacity(n, std::move(values));
        } catch (const Error& e) {
            node.fail(e.what());
        }
    }

    PerceptionFamily load_family(const Scenario& s, const Node& node) {
        if (node.has("members")) {
            node.only({"members"});
            FiniteFamily family;
            const auto members = node.at("members").elements();
            if (members.empty()) node.at("members").fail("family has no members");
            for (std::size_t i = 0; i < members.size(); ++i) {
                const Node& m = members[i];
                m.only({"label", "vertices", "cost", "capacity"});
                FamilyMember member{"M" + std::to_string(i + 1), BeliefSet::simplex(s.states.size()), 0.0, std::nullopt};
                if (auto l = m.find("label")) member.label = l->string();
                if (auto c = m.find("cost")) member.cost = c->number(s.constants);
                if (auto c = m.find("capacity")) member.capacity = load_capacity(s, *c);
                if (auto v = m.find("vertices")) {
                    std::vector<Prior> vertices;
                    for (const auto& e : v->elements()) vertices.push_back(load_prior(s, e));
                    if (vertices.empty()) v->fail("belief set has no vertices");
                    member.set = BeliefSet(std::move(vertices));
                } else if (member.capacity) {
                    try {
                        member.set = core_of_capacity(*member.capacity);
                    } catch (const Error& e) {
                        m.at("capacity").fail(e.what());
                    }
                } else {
                    m.fail("member needs 'vertices' or 'capacity'");
                }
                family.members.push_back(std::move(member));
            }
            return family;
        }
        node.only({"parameters", "grid", "vertices", "cost"});
        std::vector<std::string> parameters;
        for (const auto& p : node.at("parameters").elements()) parameters.push_back(p.string());
        std::vector<std::vector<AffineExpression>> templates;
        for (const auto& v : node.at("vertices").elements()) {
            std::vector<AffineExpression> row;
            for (const auto& e : v.elements()) row.push_back(e.affine(parameters, s.constants));
            if (row.size() != s.states.size()) v.fail("vertex template has " + std::to_string(row.size()) + " entries");
            templates.push_back(std::move(row));
        }
        AffineExpression cost{0.0, std::vector<double>(parameters.size(), 0.0)};
        if (auto c = node.find("cost")) cost = c->affine(parameters, s.constants);
        const std::size_t grid = node.has("grid") ? node.at("grid").count() : 101;
        try {
            return ParametricFamily(std::move(parameters), std::move(templates), std::move(cost), grid);
        } catch (const Error& e) {
            node.fail(e.what());
        }
    }

    NamedModel load_model(const Scenario& s, const std::string& name, const Node& node) {
        node.only({"family", "variant"});
        const Node fam = node.at("family");
        const std::string family = fam.string();
        const PerceptionFamily* f = nullptr;
        for (const auto& nf : s.families) {
            if (nf.name == family) f = &nf.family;
        }
        if (!f) fam.fail("unknown family '" + family + "'");
        Variant variant = Variant::Cap;
        if (auto v = node.find("variant")) {
            try {
                variant = parse_variant(v->string());
            } catch (const InvalidArgument& e) {
                v->fail(e.what());
            }
        }
        try {
            return NamedModel{name, family, variant, CapModel(s.states, *f, variant)};
        } catch (const Error& e) {
            node.fail(e.what());
        }
    }

    LotterySpec load_lottery(const Scenario& s, const Node& node) {
        LotterySpec spec;
        if (node.json().is_string()) {
            spec.push_back({1.0, node.string()});
        } else {
            for (const auto& e : node.elements()) {
                e.only({"p", "act"});
                spec.push_back({e.at("p").number(s.constants), e.at("act").string()});
            }
        }
        for (std::size_t i = 0; i < spec.size(); ++i) {
            const bool known = std::any_of(s.acts.begin(), s.acts.end(), [&](const NamedAct& a) { return a.name == spec[i].act; });
            if (!known) {
                const std::string where = node.json().is_string() ? node.path() : node.path() + "[" + std::to_string(i) + "].act";
                throw ValidationError(where, "unknown act '" + spec[i].act + "'");
            }
        }
        try {
            (void)s.lottery(spec);
        } catch (const Error& e) {
            node.fail(e.what());
        }
        return spec;
    }

    std::string model_ref(const Scenario& s, const Node& node) {
        const std::string name = node.string();
        if (std::none_of(s.models.begin(), s.models.end(), [&](const NamedModel& m) { return m.name == name; })) {
            node.fail("unknown model '" + name + "'");
        }
        return name;
    }

    std::vector<PerceptionRef> load_perceptions(const Scenario& s, const Node& node) {
        std::vector<PerceptionRef> out;
        for (const auto& e : node.elements()) {
            if (e.json().is_string()) {
                out.emplace_back(e.string());
            } else {
                std::vector<double> theta;
                for (const auto& x : e.elements()) theta.push_back(x.number(s.constants));
                out.emplace_back(std::move(theta));
            }
        }
        return out;
    }

    static std::optional<std::uint64_t> load_seed(const Node& node) {
        if (auto s = node.find("seed")) return s->seed();
        return std::nullopt;
    }

    Query load_query(const Scenario& s, const Node& node) {
        const std::string kind = node.at("kind").string();
        Query q;
        if (auto l = node.find("label")) q.label = l->string();
        if (kind == "evaluate") {
            node.only({"kind", "label", "model", "lottery", "expect_value", "tolerance", "expect_optimal"});
            EvaluateQuery e;
            e.model = model_ref(s, node.at("model"));
            e.lottery = load_lottery(s, node.at("lottery"));
            if (auto v = node.find("expect_value")) e.expect_value = v->number(s.constants);
            if (auto t = node.find("tolerance")) e.tolerance = t->number(s.constants);
            if (auto o = node.find("expect_optimal")) e.expect_optimal = load_perceptions(s, *o);
            if (q.label.empty()) q.label = e.model + ": U(" + format_lottery(e.lottery) + ")";
            q.body = std::move(e);
        } else if (kind == "compare") {
            node.only({"kind", "label", "model", "left", "right", "expect"});
            CompareQuery c;
            c.model = model_ref(s, node.at("model"));
            c.left = load_lottery(s, node.at("left"));
            c.right = load_lottery(s, node.at("right"));
            if (auto r = node.find("expect")) c.expect = parse_relation(*r);
            if (q.label.empty()) {
                q.label = c.model + ": " + format_lottery(c.left) + " " +
                          std::string(c.expect ? to_string(*c.expect) : "vs") + " " + format_lottery(c.right);
            }
            q.body = std::move(c);
        } else if (kind == "axioms") {
            node.only({"kind", "label", "model", "axioms", "trials", "seed", "expect"});
            AxiomsQuery a;
            a.model = model_ref(s, node.at("model"));
            const Node list = node.at("axioms");
            if (list.json().is_string() && list.string() == "all") {
                a.axioms = all_axioms();
            } else {
                for (const auto& e : list.elements()) {
                    try {
                        a.axioms.push_back(parse_axiom(e.string()));
                    } catch (const InvalidArgument& err) {
                        e.fail(err.what());
                    }
                }
            }
            if (auto t = node.find("trials")) a.trials = t->count();
            a.seed = load_seed(node);
            if (auto x = node.find("expect")) {
                if (x->json().is_string()) {
                    const bool holds = parse_verdict(*x, "holds", "fails");
                    for (auto id : a.axioms) a.expect[id] = holds;
                } else {
                    for (auto& [key, v] : x->members()) {
                        AxiomId id{};
                        try {
                            id = parse_axiom(key);
                        } catch (const InvalidArgument& err) {
                            v.fail(err.what());
                        }
                        if (std::find(a.axioms.begin(), a.axioms.end(), id) == a.axioms.end()) v.fail("axiom not checked by this query");
                        a.expect[id] = parse_verdict(v, "holds", "fails");
                    }
                }
            }
            if (q.label.empty()) q.label = a.model + ": axioms";
            q.body = std::move(a);
        } else if (kind == "identify") {
            node.only({"kind", "label", "model", "grid", "budget", "seed", "expect", "below", "above"});
            IdentifyQuery i;
            i.model = model_ref(s, node.at("model"));
            if (!s.model(i.model).maximizes()) node.at("model").fail("cost identification needs a maximising variant");
            if (auto g = node.find("grid")) i.grid = g->count();
            if (auto b = node.find("budget")) i.budget = b->count();
            i.seed = load_seed(node);
            if (auto x = node.find("expect")) {
                if (x->string() != "recovers") x->fail("expected 'recovers'");
                i.expect_recovery = true;
            }
            if (auto b = node.find("below")) i.below = b->number(s.constants);
            if (auto a = node.find("above")) i.above = a->number(s.constants);
            if (q.label.empty()) q.label = i.model + ": cost identification";
            q.body = std::move(i);
        } else if (kind == "comparatives") {
            node.only({"kind", "label", "relation", "first", "second", "n", "seed", "expect"});
            ComparativesQuery c;
            try {
                c.relation = parse_comparative(node.at("relation").string());
            } catch (const InvalidArgument& e) {
                node.at("relation").fail(e.what());
            }
            c.first = model_ref(s, node.at("first"));
            c.second = model_ref(s, node.at("second"));
            if (auto n = node.find("n")) c.samples = n->count();
            c.seed = load_seed(node);
            if (auto x = node.find("expect")) c.expect_holds = parse_verdict(*x, "holds", "fails");
            if (q.label.empty()) q.label = c.first + " vs " + c.second + ": " + std::string(to_string(c.relation));
            q.body = std::move(c);
        } else if (kind == "dominance") {
            node.only({"kind", "label", "first", "second", "n", "seed", "expect"});
            DominanceQuery d;
            d.first = model_ref(s, node.at("first"));
            d.second = model_ref(s, node.at("second"));
            if (auto n = node.find("n")) d.samples = n->count();
            d.seed = load_seed(node);
            if (auto x = node.find("expect")) d.expect_holds = parse_verdict(*x, "holds", "fails");
            if (q.label.empty()) q.label = d.first + " dominates " + d.second;
            q.body = std::move(d);
        } else if (kind == "auxiliary") {
            node.only({"kind", "label", "model", "random_families", "members", "trials", "seed", "expect"});
            AuxiliaryQuery a;
            if (auto m = node.find("model")) {
                a.model = model_ref(s, *m);
                if (!std::holds_alternative<FiniteFamily>(s.model(*a.model).family())) m->fail("model needs a finite family");
            }
            if (auto r = node.find("random_families")) a.random_families = r->count();
            if (auto m = node.find("members")) a.members = m->count();
            if (auto t = node.find("trials")) a.trials = t->count();
            a.seed = load_seed(node);
            if (auto x = node.find("expect")) a.expect_holds = parse_verdict(*x, "holds", "fails");
            if (q.label.empty()) q.label = "auxiliary-act implication";
            q.body = std::move(a);
        } else if (kind == "core") {
            node.only({"kind", "label", "model", "n", "seed", "expect_contains"});
            CoreQuery c;
            c.model = model_ref(s, node.at("model"));
            if (!s.model(c.model).maximizes()) node.at("model").fail("the multi-MEU core needs a maximising variant");
            if (auto n = node.find("n")) c.samples = n->count();
            c.seed = load_seed(node);
            if (auto e = node.find("expect_contains")) c.expect_contains = load_perceptions(s, *e);
            if (q.label.empty()) q.label = c.model + ": multi-MEU core";
            q.body = std::move(c);
        } else if (kind == "canonical") {
            node.only({"kind", "label", "family", "grid", "expect"});
            CanonicalQuery c;
            const Node fam = node.at("family");
            c.family = fam.string();
            if (std::none_of(s.families.begin(), s.families.end(), [&](const NamedFamily& f) { return f.name == c.family; })) {
                fam.fail("unknown family '" + c.family + "'");
            }
            if (auto g = node.find("grid")) c.grid = g->count();
            if (auto x = node.find("expect")) c.expect_canonical = parse_verdict(*x, "canonical", "violations");
            if (q.label.empty()) q.label = c.family + ": canonical";
            q.body = std::move(c);
        } else {
            node.at("kind").fail("unknown query kind '" + kind + "'");
        }
        return q;
    }

    Node root_;
};

Json lottery_json(const LotterySpec& spec) {
    if (spec.size() == 1 && spec.front().probability == 1.0) return spec.front().act;
    Json out = Json::array();
    for (const auto& t : spec) out.push_back({{"p", t.probability}, {"act", t.act}});
    return out;
}

Json perceptions_json(const std::vector<PerceptionRef>& refs) {
    Json out = Json::array();
    for (const auto& r : refs) {
        if (const auto* s = std::get_if<std::string>(&r)) out.push_back(*s);
        else out.push_back(std::get<std::vector<double>>(r));
    }
    return out;
}

Json prior_json(const Prior& p) { return Json(std::vector<double>(p.weights().begin(), p.weights().end())); }

Json family_json(const PerceptionFamily& family, const StateSpace& states) {
    Json out;
    if (const auto* f = std::get_if<FiniteFamily>(&family)) {
        Json members = Json::array();
        for (const auto& m : f->members) {
            Json j;
            j["label"] = m.label;
            Json vertices = Json::array();
            for (const auto& v : m.set.vertices()) vertices.push_back(prior_json(v));
            j["vertices"] = std::move(vertices);
            j["cost"] = m.cost;
            if (m.capacity) {
                Json cap = Json::object();
                for (std::uint32_t mask = 1; mask <= m.capacity->full_mask(); ++mask) cap[capacity_key(mask, states)] = (*m.capacity)(mask);
                j["capacity"] = std::move(cap);
            }
            members.push_back(std::move(j));
        }
        out["members"] = std::move(members);
        return out;
    }
    const auto& p = std::get<ParametricFamily>(family);
    out["parameters"] = p.parameters();
    out["grid"] = p.grid_resolution();
    Json vertices = Json::array();
    for (const auto& row : p.vertex_templates()) {
        Json r = Json::array();
        for (const auto& e : row) r.push_back(format_affine(e, p.parameters()));
        vertices.push_back(std::move(r));
    }
    out["vertices"] = std::move(vertices);
    out["cost"] = format_affine(p.cost(), p.parameters());
    return out;
}

template <class Q>
void put_seed(Json& j, const Q& q) {
    if (q.seed) j["seed"] = *q.seed;
}

Json query_json(const Query& query) {
    Json j;
    j["kind"] = std::string(query_kind(query.body));
    j["label"] = query.label;
    std::visit(
        [&](const auto& q) {
            using T = std::decay_t<decltype(q)>;
            if constexpr (std::is_same_v<T, EvaluateQuery>) {
                j["model"] = q.model;
                j["lottery"] = lottery_json(q.lottery);
                if (q.expect_value) j["expect_value"] = *q.expect_value;
                if (q.tolerance) j["tolerance"] = *q.tolerance;
                if (!q.expect_optimal.empty()) j["expect_optimal"] = perceptions_json(q.expect_optimal);
            } else if constexpr (std::is_same_v<T, CompareQuery>) {
                j["model"] = q.model;
                j["left"] = lottery_json(q.left);
                j["right"] = lottery_json(q.right);
                if (q.expect) j["expect"] = std::string(to_string(*q.expect));
            } else if constexpr (std::is_same_v<T, AxiomsQuery>) {
                j["model"] = q.model;
                Json ids = Json::array();
                for (auto id : q.axioms) ids.push_back(std::string(to_string(id)));
                j["axioms"] = std::move(ids);
                j["trials"] = q.trials;
                put_seed(j, q);
                if (!q.expect.empty()) {
                    Json e = Json::object();
                    for (auto id : q.axioms) {
                        if (auto it = q.expect.find(id); it != q.expect.end()) e[std::string(to_string(id))] = it->second ? "holds" : "fails";
                    }
                    j["expect"] = std::move(e);
                }
            } else if constexpr (std::is_same_v<T, IdentifyQuery>) {
                j["model"] = q.model;
                j["grid"] = q.grid;
                j["budget"] = q.budget;
                put_seed(j, q);
                if (q.expect_recovery) j["expect"] = "recovers";
                j["below"] = q.below;
                j["above"] = q.above;
            } else if constexpr (std::is_same_v<T, ComparativesQuery>) {
                j["relation"] = std::string(to_string(q.relation));
                j["first"] = q.first;
                j["second"] = q.second;
                j["n"] = q.samples;
                put_seed(j, q);
                if (q.expect_holds) j["expect"] = *q.expect_holds ? "holds" : "fails";
            } else if constexpr (std::is_same_v<T, DominanceQuery>) {
                j["first"] = q.first;
                j["second"] = q.second;
                j["n"] = q.samples;
                put_seed(j, q);
                if (q.expect_holds) j["expect"] = *q.expect_holds ? "holds" : "fails";
            } else if constexpr (std::is_same_v<T, AuxiliaryQuery>) {
                if (q.model) j["model"] = *q.model;
                j["random_families"] = q.random_families;
                j["members"] = q.members;
                j["trials"] = q.trials;
                put_seed(j, q);
                if (q.expect_holds) j["expect"] = *q.expect_holds ? "holds" : "fails";
            } else if constexpr (std::is_same_v<T, CoreQuery>) {
                j["model"] = q.model;
                j["n"] = q.samples;
                put_seed(j, q);
                if (!q.expect_contains.empty()) j["expect_contains"] = perceptions_json(q.expect_contains);
            } else if constexpr (std::is_same_v<T, CanonicalQuery>) {
                j["family"] = q.family;
                j["grid"] = q.grid;
                if (q.expect_canonical) j["expect"] = *q.expect_canonical ? "canonical" : "violations";
            }
        },
        query.body);
    return j;
}

} // namespace

std::string_view to_string(Relation r) {
    switch (r) {
    case Relation::Greater: return ">";
    case Relation::Less: return "<";
    case Relation::Indifferent: return "~";
    case Relation::AtLeast: return ">=";
    case Relation::AtMost: return "<=";
    }
    return "?";
}

std::string_view query_kind(const QueryBody& body) {
    static constexpr std::string_view names[] = {"evaluate", "compare",   "axioms", "identify", "comparatives",
                                                  "dominance", "auxiliary", "core",   "canonical"};
    return names[body.index()];
}

std::string format_lottery(const LotterySpec& spec) {
    if (spec.size() == 1 && spec.front().probability == 1.0) return spec.front().act;
    std::string out;
    for (const auto& t : spec) out += (out.empty() ? "" : " + ") + format_number(t.probability) + "·" + t.act;
    return out;
}

const UtilityAct& Scenario::act(std::string_view name) const {
    for (const auto& a : acts) {
        if (a.name == name) return a.act;
    }
    throw InvalidArgument("unknown act '" + std::string(name) + "'");
}

const PerceptionFamily& Scenario::family(std::string_view name) const {
    for (const auto& f : families) {
        if (f.name == name) return f.family;
    }
    throw InvalidArgument("unknown family '" + std::string(name) + "'");
}

const CapModel& Scenario::model(std::string_view name) const {
    for (const auto& m : models) {
        if (m.name == name) return m.model;
    }
    throw InvalidArgument("unknown model '" + std::string(name) + "'");
}

Lottery Scenario::lottery(const LotterySpec& spec) const {
    std::vector<Atom> atoms;
    for (const auto& t : spec) atoms.push_back({t.probability, act(t.act)});
    return Lottery(std::move(atoms));
}

Scenario Scenario::with_grid(std::size_t grid_resolution) const {
    Scenario out = *this;
    for (auto& f : out.families) {
        if (auto* p = std::get_if<ParametricFamily>(&f.family)) *p = p->with_grid(grid_resolution);
    }
    for (auto& m : out.models) m.model = m.model.with_family(out.family(m.family));
    return out;
}

Scenario parse_scenario(const Json& document) { return Loader(document).load(); }

Scenario parse_scenario(std::string_view text) {
    Json document;
    try {
        document = Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("", std::string("parse error: ") + e.what());
    }
    return parse_scenario(document);
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(path.string(), "cannot open scenario file");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    try {
        return parse_scenario(std::string_view(text));
    } catch (const ValidationError& e) {
        throw ValidationError(path.string(), e.what());
    }
}

Json serialize(const Scenario& s) {
    Json j;
    if (!s.name.empty()) j["name"] = s.name;
    if (!s.description.empty()) j["description"] = s.description;
    j["states"] = s.states.labels();
    if (!s.constants.empty()) {
        Json c = Json::object();
        for (const auto& [k, v] : s.constants) c[k] = v;
        j["constants"] = std::move(c);
    }
    if (!s.utility_table.empty()) {
        Json u = Json::object();
        for (const auto& [k, v] : s.utility_table) u[k] = v;
        j["utility"] = std::move(u);
    }
    Json acts = Json::object();
    for (const auto& a : s.acts) acts[a.name] = std::vector<double>(a.act.payoffs().begin(), a.act.payoffs().end());
    j["acts"] = std::move(acts);
    Json families = Json::object();
    for (const auto& f : s.families) families[f.name] = family_json(f.family, s.states);
    j["families"] = std::move(families);
    Json models = Json::object();
    for (const auto& m : s.models) models[m.name] = {{"family", m.family}, {"variant", std::string(to_string(m.variant))}};
    j["models"] = std::move(models);
    Json queries = Json::array();
    for (const auto& q : s.queries) queries.push_back(query_json(q));
    j["queries"] = std::move(queries);
    return j;
}

} // namespace cap
