// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any FAIL.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>

#include "oracles.hpp"
#include "random_models.hpp"

#include "lyphc/analysis.hpp"
#include "lyphc/composer.hpp"
#include "lyphc/crossing.hpp"
#include "lyphc/document.hpp"
#include "lyphc/editor.hpp"
#include "lyphc/exporter.hpp"
#include "lyphc/generator.hpp"
#include "lyphc/layout.hpp"
#include "lyphc/relations.hpp"
#include "lyphc/schema.hpp"

using namespace lyphc;

namespace {

constexpr double kCorpusSeconds = 5.0;
constexpr double kNeurulateSeconds = 10.0;
constexpr double kHostedTol = 1e-9;
constexpr double kWiredTol = 1e-6;
constexpr double kAxisTol = 1e-6;  // radians

struct Outcome {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

const std::vector<std::string> kCorpus{
    "bladder.json",  "chain_housing.json", "chain_levels.json", "chain_lyphs.json", "empty.json",
    "ganglion.json", "groups.json",        "layout_rules.json", "neuron.json",      "too.json",
    "variance.json", "vascular.json",      "wbkg.json",
};

// Fixture with its imports resolved from the data directory.
Model linked_fixture(const std::string& name, Outcome& out) {
    Model spec = oracle::fixture(name);
    if (spec.imports.empty()) return spec;
    auto r = resolve_imports(spec, default_fetcher(), oracle::data(name));
    if (r.report.has_errors()) out.fail(name + ": " + r.report.render());
    return r.model;
}

std::string text(const Model& m) { return serialize(m, DocumentKind::Generated); }

Outcome corpus_fixpoint() {
    Outcome out;
    auto t0 = Clock::now();
    for (const auto& f : kCorpus) {
        Model spec = linked_fixture(f, out);
        auto g = generate(spec);
        if (!g.ok()) {
            out.fail(f + ": " + g.report.render());
            continue;
        }
        std::string once = text(g.model);
        auto again = generate(parse_model_text(once));
        if (!again.ok() || text(again.model) != once) out.fail(f + " is not a fixpoint");
    }
    double s = seconds_since(t0);
    if (s >= kCorpusSeconds) out.fail("took " + std::to_string(s) + " s");
    if (out.ok) out.detail = std::to_string(kCorpus.size()) + " fixtures, " + std::to_string(s) + " s";
    return out;
}

Outcome schema_compliance() {
    Outcome out;
    for (const auto& f : kCorpus) {
        auto g = generate(linked_fixture(f, out));
        if (!g.ok()) {
            out.fail(f + " did not generate");
            continue;
        }
        auto rep = validate_syntax(serialize_generated(g.model), f);
        if (rep.has_errors()) out.fail(f + ": " + rep.render());
        if (validate_generated(g.model).has_errors()) out.fail(f + ": generated model invalid");
    }
    if (out.ok) out.detail = std::to_string(kCorpus.size()) + " generated documents";
    return out;
}

Outcome chain_expansion() {
    Outcome out;
    for (int n = 1; n <= 20; ++n) {
        json d = {{"id", "c"},
                  {"namespace", "c"},
                  {"lyphs", json::array({{{"id", "t"}, {"isTemplate", true}}})},
                  {"chains", json::array({{{"id", "ch"}, {"numLevels", n}, {"lyphTemplate", "t"}}})}};
        auto g = generate(parse_model(d));
        if (!g.ok()) {
            out.fail("N=" + std::to_string(n) + ": " + g.report.render());
            continue;
        }
        const Resource* ch = g.model.get("c", "ch");
        std::size_t links = g.model.of_class(ResourceClass::Link).size();
        std::size_t instances = g.trace.source_template.size();
        if (links != std::size_t(n) || instances != std::size_t(n) || ch->refs("levels").size() != std::size_t(n) ||
            !oracle::is_chain_path(g.model, *ch))
            out.fail("N=" + std::to_string(n) + ": " + std::to_string(links) + " links, " +
                     std::to_string(instances) + " instances");
    }
    if (out.ok) out.detail = "N = 1..20";
    return out;
}

using Triple = std::tuple<std::size_t, std::string, std::size_t>;

std::set<Triple> relation_triples(const Model& m) {
    std::set<Triple> out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const Resource& r = m.at(i);
        for (const auto& p : randmodel::pairs())
            for (auto [cls, prop, tcls] : {std::tuple{p.a, p.pa, p.b}, std::tuple{p.b, p.pb, p.a}}) {
                if (r.cls != cls) continue;
                for (const auto& v : r.refs(prop)) {
                    auto t = m.lookup(v, r.ns);
                    if (t && m.at(*t).cls == tcls) out.insert({i, prop, *t});
                }
            }
    }
    return out;
}

Outcome relation_closure() {
    Outcome out;
    std::mt19937 rng(101);
    std::uniform_int_distribution<std::size_t> size(0, 60);
    for (int trial = 0; trial < 100; ++trial) {
        Model m = randmodel::relation_model(rng, size(rng));
        auto expected = relation_triples(m);
        for (const auto& [a, prop, b] : std::set<Triple>(expected))
            for (const auto& p : randmodel::pairs()) {
                if (m.at(a).cls == p.a && prop == p.pa && m.at(b).cls == p.b) expected.insert({b, p.pb, a});
                if (m.at(a).cls == p.b && prop == p.pb && m.at(b).cls == p.a) expected.insert({b, p.pa, a});
            }
        if (sync_relations(m).has_errors()) out.fail("trial " + std::to_string(trial) + ": conflict reported");
        if (relation_triples(m) != expected) out.fail("trial " + std::to_string(trial) + ": closure differs");
        std::string once = text(m);
        if (!sync_relations(m).empty() || text(m) != once) out.fail("trial " + std::to_string(trial) + ": not idempotent");
    }
    if (out.ok) out.detail = "100 models";
    return out;
}

Outcome neurulation() {
    Outcome out;
    std::mt19937 rng(202);
    auto t0 = Clock::now();
    std::size_t closed = 0;
    for (int trial = 0; trial < 200; ++trial) {
        Model m = randmodel::link_graph(randmodel::random_segments(rng, 30));
        auto r = neurulate(m);
        std::set<std::set<std::string>> found;
        for (const auto& comp : r.components) {
            std::set<std::string> keys;
            for (auto i : comp) keys.insert(m.at(i).key());
            found.insert(keys);
        }
        closed += found.size();
        if (found != oracle::closed_components(m)) out.fail("trial " + std::to_string(trial));
    }
    double s = seconds_since(t0);
    if (s >= kNeurulateSeconds) out.fail("took " + std::to_string(s) + " s");
    if (out.ok) out.detail = "200 graphs, " + std::to_string(closed) + " closed components, " + std::to_string(s) + " s";
    return out;
}

double line_angle(const Vec3& a, const Vec3& b) {
    double c = std::abs(dot(normalized(a), normalized(b)));
    return std::acos(std::min(1.0, c));
}

Outcome layout_constraints() {
    Outcome out;
    Model m = generate(oracle::fixture("layout_rules.json")).model;
    auto r = run_layout(m);
    const auto& st = r.state;
    std::size_t checked = 0;
    auto pos = [&](const Resource& n) -> std::optional<Vec3> {
        auto it = st.positions.find(n.key());
        if (it == st.positions.end()) return std::nullopt;
        return it->second;
    };

    for (std::size_t i : m.of_class(ResourceClass::Node)) {
        const Resource& n = m.at(i);
        auto p = pos(n);
        if (!p) continue;
        if (auto a = n.ref("anchoredTo")) {
            auto ai = m.lookup(*a, n.ns);
            auto layout = m.at(*ai).props["layout"];
            Vec3 want{layout[0].get<double>(), layout[1].get<double>(), 0};
            if (!(*p == want)) out.fail(n.key() + " off its anchor");
            ++checked;
        } else if (n.flag("fixed")) {
            auto layout = n.props["layout"];
            Vec3 want{layout[0].get<double>(), layout[1].get<double>(), layout.size() > 2 ? layout[2].get<double>() : 0};
            if (!(*p == want)) out.fail(n.key() + " moved");
            ++checked;
        }
    }

    for (std::size_t li : r.graph.links) {
        const Resource& l = m.at(li);
        auto curve = link_curve(m, li, st);
        if (!curve) continue;
        auto hosted = l.refs("hostedNodes");
        for (std::size_t k = 0; k < hosted.size(); ++k) {
            const Resource& n = m.at(*m.lookup(hosted[k], l.ns));
            auto p = pos(n);
            if (!p) continue;
            double f = n.number("offset").value_or(double(k + 1) / double(hosted.size() + 1));
            if (norm(*p - curve->at_fraction(f)) > kHostedTol) out.fail(n.key() + " off its host link");
            ++checked;
        }
        if (auto y = l.ref("conveyingLyph")) {
            auto yi = m.lookup(*y, l.ns);
            auto it = st.lyphs.find(m.at(*yi).key());
            Vec3 dir = curve->end() - curve->start();
            if (it != st.lyphs.end() && norm(dir) > 1e-9) {
                if (line_angle(it->second.axis, dir) > kAxisTol) out.fail(m.at(*yi).key() + " axis");
                ++checked;
            }
        }
    }

    for (std::size_t ci : m.of_class(ResourceClass::Chain)) {
        const Resource& c = m.at(ci);
        auto w = c.ref("wiredTo");
        if (!w) continue;
        auto wire = wire_curve(m, *m.lookup(*w, c.ns));
        auto levels = c.refs("levels");
        double total = oracle::polyline_length(*wire, 1.0);
        bool reversed = c.flag("startFromLeaf");
        for (std::size_t k = 0; k <= levels.size(); ++k) {
            const Resource& link = m.at(*m.lookup(levels[std::min(k, levels.size() - 1)], c.ns));
            std::string end = k < levels.size() ? *link.ref("source") : *link.ref("target");
            const Resource& n = m.at(*m.lookup(end, link.ns));
            double f = double(k) / double(levels.size());
            if (reversed) f = 1 - f;
            auto p = pos(n);
            if (!p) continue;
            double t = wire->param_at_fraction(f);
            double measured = oracle::polyline_length(*wire, t) / total;
            if (std::abs(measured - f) > kWiredTol || norm(*p - wire->at(t)) > kWiredTol)
                out.fail(n.key() + " off its wire");
            ++checked;
        }
    }

    std::string a = layout_to_json(st).dump();
    std::string b = layout_to_json(run_layout(m).state).dump();
    if (a != b) out.fail("seed 0 output differs between runs");
    if (out.ok) out.detail = std::to_string(checked) + " constraints, deterministic";
    return out;
}

Outcome crossing_minimisation() {
    Outcome out;
    std::mt19937 rng(303);
    std::uniform_int_distribution<std::size_t> slots(1, 8);
    for (int trial = 0; trial < 50; ++trial) {
        CrossingProblem p;
        p.n = slots(rng);
        std::uniform_int_distribution<long> item(-1, long(p.n));
        std::uniform_int_distribution<int> edges(0, int(2 * p.n));
        for (int e = edges(rng); e > 0; --e) {
            long a = item(rng), b = item(rng);
            if (a != b) p.edges.push_back({a, b});
        }
        std::vector<std::size_t> initial(p.n);
        std::iota(initial.begin(), initial.end(), 0);
        std::shuffle(initial.begin(), initial.end(), rng);
        auto order = order_chain_in_host(p, initial);
        if (oracle::crossings(p.n, p.edges, order) != oracle::min_crossings(p.n, p.edges))
            out.fail("trial " + std::to_string(trial));
    }
    if (out.ok) out.detail = "50 instances";
    return out;
}

Outcome composer_semantics() {
    Outcome out;
    Model a = parse_model_text(R"({"id":"a","namespace":"a","materials":[{"id":"blood"},{"id":"lymph"},{"id":"bile"}]})");
    Model b = parse_model_text(R"({"id":"b","namespace":"b","materials":[{"id":"blood"},{"id":"lymph"},{"id":"urine"}]})");
    auto merged = merge(a, b);
    if (merged.report.count(Severity::Warning) != 2) out.fail("merge: expected 2 warnings");

    Model base = oracle::fixture("chain_lyphs.json");
    Model other = oracle::fixture("too.json");
    std::size_t groups = base.of_class(ResourceClass::Group).size();
    auto joined = join(base, other);
    if (joined.model.of_class(ResourceClass::Group).size() != groups + 1) out.fail("join: expected one new group");

    auto linked = resolve_imports(oracle::fixture("vascular.json"), default_fetcher(), oracle::data("vascular.json"));
    std::size_t foreign = validate_references(linked.model, linked.linked).count(codes::kUnresolvedForeign);
    if (foreign != 0) out.fail("import: " + std::to_string(foreign) + " unresolved foreign references");
    if (out.ok) out.detail = "merge 2 warnings, join +1 group, 0 unresolved foreign";
    return out;
}

Outcome ganglion_delete() {
    Outcome out;
    Model m = generate(oracle::fixture("ganglion.json")).model;
    std::string before = text(m);
    EditLog log;
    auto r = log.apply(m, EditOp{EditKind::Delete, "Ganglion", json::object()});
    if (!r.ok()) out.fail(r.report.render());
    auto dangling = oracle::dangling(m);
    if (!dangling.empty()) out.fail(std::to_string(dangling.size()) + " dangling references");
    log.undo(m);
    if (text(m) != before) out.fail("undo is not byte-identical");
    if (out.ok) out.detail = "0 dangling, undo identical";
    return out;
}

std::size_t predicted_reference_triples(const Model& m) {
    std::size_t n = 0;
    for (const auto& r : m.resources())
        for (const auto& [key, value] : r.props.items()) {
            const PropertyDef* def = find_property(r.cls, key);
            if (!def) continue;
            if (def->kind == PropKind::Ref) n += 1;
            if (def->kind == PropKind::RefList || def->kind == PropKind::CurieList) n += value.size();
        }
    return n;
}

Outcome json_ld_export() {
    Outcome out;
    std::size_t triples = 0;
    for (const auto& f : kCorpus) {
        auto g = generate(linked_fixture(f, out));
        if (!g.ok()) continue;
        auto ld = to_json_ld(g.model);
        if (!ld.report.empty()) out.fail(f + ": " + ld.report.render());
        auto e = oracle::expand_json_ld(ld.document);
        if (!e.problems.empty()) out.fail(f + ": " + e.problems.front());
        if (e.typed_nodes != g.model.size()) out.fail(f + ": typed nodes");
        if (e.iri_objects() - e.count_predicate(oracle::kRdfType) != predicted_reference_triples(g.model))
            out.fail(f + ": reference triples");
        triples += e.triples.size();
    }
    if (out.ok) out.detail = std::to_string(triples) + " triples";
    return out;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"corpus generates to a fixpoint", corpus_fixpoint},
        {"generated documents pass the schema", schema_compliance},
        {"level-count chains expand to paths", chain_expansion},
        {"relation closure and idempotence", relation_closure},
        {"neurulation matches the oracle", neurulation},
        {"layout constraints hold", layout_constraints},
        {"crossing minimisation is optimal", crossing_minimisation},
        {"merge, join and import semantics", composer_semantics},
        {"template delete leaves no dangling references", ganglion_delete},
        {"JSON-LD export", json_ld_export},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        failed += !o.ok;
        std::printf("%s %2zu %s (%s)\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    }
    return failed ? 1 : 0;
}
