#include "doctest.h"
#include "oracles.hpp"
#include "random_models.hpp"

#include "lyphc/analysis.hpp"
#include "lyphc/crossing.hpp"
#include "lyphc/document.hpp"
#include "lyphc/editor.hpp"
#include "lyphc/generator.hpp"
#include "lyphc/relations.hpp"
#include "lyphc/tabular.hpp"

using namespace lyphc;

using Triple = std::tuple<std::size_t, std::string, std::size_t>;

// Relationship references present in a model, by resource index.
static std::set<Triple> relation_triples(const Model& m) {
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

static std::set<Triple> closure(const Model& m, const std::set<Triple>& in) {
    std::set<Triple> out = in;
    for (const auto& [a, prop, b] : in)
        for (const auto& p : randmodel::pairs()) {
            if (m.at(a).cls == p.a && prop == p.pa && m.at(b).cls == p.b) out.insert({b, p.pb, a});
            if (m.at(a).cls == p.b && prop == p.pb && m.at(b).cls == p.a) out.insert({b, p.pa, a});
        }
    return out;
}

static std::string text(const Model& m) { return serialize(m, DocumentKind::Generated); }

TEST_CASE("relation sync adds exactly the missing inverses") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<std::size_t> size(0, 60);
    for (int trial = 0; trial < 100; ++trial) {
        Model m = randmodel::relation_model(rng, size(rng));
        auto expected = closure(m, relation_triples(m));
        CAPTURE(serialize(m, DocumentKind::Input));
        auto rep = sync_relations(m);
        CHECK_FALSE(rep.has_errors());
        CHECK(relation_triples(m) == expected);
        std::string once = text(m);
        CHECK(sync_relations(m).empty());
        CHECK(text(m) == once);
    }
}

TEST_CASE("neurulation matches the closed-component oracle") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        Model m = randmodel::link_graph(randmodel::random_segments(rng, 30));
        auto r = neurulate(m);
        std::set<std::set<std::string>> found;
        for (const auto& comp : r.components) {
            std::set<std::string> keys;
            for (auto i : comp) keys.insert(m.at(i).key());
            found.insert(keys);
        }
        CAPTURE(trial);
        CHECK(found == oracle::closed_components(m));
        CHECK(r.groups.size() == r.components.size());
    }
}

TEST_CASE("composition cycles are found exactly when present") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<std::size_t> size(1, 25);
    std::uniform_real_distribution<double> density(0.0, 0.12);
    std::size_t cyclic = 0;
    for (int trial = 0; trial < 200; ++trial) {
        auto [m, adj] = randmodel::composition_graph(rng, size(rng), density(rng));
        bool expect = oracle::has_cycle(adj);
        cyclic += expect;
        auto cycles = composition_cycles(m);
        CAPTURE(serialize(m, DocumentKind::Input));
        CHECK(cycles.empty() == !expect);
        CHECK(composition_cycle_check(m).has_errors() == expect);
        for (const auto& c : cycles) {
            REQUIRE(c.path.size() >= 2);
            CHECK(c.path.front() == c.path.back());
        }
    }
    CHECK(cyclic > 0);
    CHECK(cyclic < 200);
}

TEST_CASE("workbook round trip of random models") {
    std::mt19937 rng(17);
    std::uniform_int_distribution<std::size_t> size(0, 40);
    for (int trial = 0; trial < 50; ++trial) {
        Model m = randmodel::relation_model(rng, size(rng));
        auto back = workbook_to_spec(spec_to_workbook(m));
        CAPTURE(serialize(m, DocumentKind::Input));
        CHECK_FALSE(back.report.has_errors());
        CHECK(structurally_equal(back.model, m));
    }
}

TEST_CASE("crossing minimisation is optimal up to eight slots") {
    std::mt19937 rng(23);
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
        CHECK(count_crossings(p, order) == oracle::crossings(p.n, p.edges, order));
        CHECK(count_crossings(p, order) == oracle::min_crossings(p.n, p.edges));
    }
}

TEST_CASE("random edits are undone by their inverses") {
    std::mt19937 rng(29);
    for (const char* f : {"ganglion.json", "chain_levels.json", "bladder.json"}) {
        auto g = generate(oracle::fixture(f));
        REQUIRE(g.ok());
        const Model base = g.model;
        std::uniform_int_distribution<std::size_t> pick(0, base.size() - 1);
        std::uniform_int_distribution<int> kind(0, 4);
        std::size_t applied = 0;
        for (int trial = 0; trial < 40; ++trial) {
            const Resource& r = base.at(pick(rng));
            EditOp op;
            op.target = r.id;
            switch (kind(rng)) {
            case 0: op = {EditKind::Update, r.id, {{"name", "n" + std::to_string(trial)}}}; break;
            case 1: op = {EditKind::Delete, r.id, json::object()}; break;
            case 2: op = {EditKind::Rename, r.id, {{"id", r.id + "_r"}}}; break;
            case 3: op = {EditKind::Annotate, r.id, {{"add", json::array({"FMA:" + std::to_string(trial)})}}}; break;
            default: op = {EditKind::Create, "new" + std::to_string(trial), {{"class", "Node"}}}; break;
            }
            CAPTURE(op.to_json().dump());
            auto res = apply_edit(base, op);
            if (!res.ok()) {
                CHECK(text(res.model) == text(base));
                continue;
            }
            ++applied;
            auto back = apply_edit(res.model, res.inverse);
            REQUIRE(back.ok());
            CHECK(text(back.model) == text(base));
            CHECK(oracle::dangling(res.model).size() <= oracle::dangling(base).size());
        }
        CHECK(applied > 20);
    }
}
