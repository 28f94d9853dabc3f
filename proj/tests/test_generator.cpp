#include "doctest.h"
#include "oracles.hpp"

#include "lyphc/document.hpp"
#include "lyphc/generator.hpp"
#include "lyphc/schema.hpp"

using namespace lyphc;

static Model doc(const char* text) { return parse_model_text(text); }

static std::size_t count_generated(const Model& m, ResourceClass c) {
    std::size_t n = 0;
    for (auto i : m.of_class(c))
        if (m.at(i).generated()) ++n;
    return n;
}

TEST_CASE("stub for a dangling node") {
    Model m = doc(R"({"id":"m","namespace":"m","nodes":[{"id":"n2"}],"links":[{"id":"l","source":"n1","target":"n2"}]})");
    GenerationTrace trace;
    auto rep = autogenerate_stubs(m, &trace);
    CHECK_FALSE(rep.has_errors());
    const Resource* n1 = m.get("m", "n1");
    REQUIRE(n1);
    CHECK(n1->cls == ResourceClass::Node);
    CHECK(n1->generated());
    REQUIRE(trace.created.size() == 1);
    CHECK(trace.created[0] == TraceEntry{"m:n1", Cause::Stub});
}

TEST_CASE("foreign references are not stubbed") {
    Model m = doc(R"({"id":"m","namespace":"m","chains":[{"id":"c","numLevels":2,"lyphTemplate":"wbkg:lt"}]})");
    autogenerate_stubs(m);
    CHECK(m.size() == 1);
    CHECK(validate_references(m).count(codes::kUnresolvedForeign) == 1);
}

TEST_CASE("one id used as a lyph and as a node") {
    Model m = doc(R"({"id":"m","namespace":"m","nodes":[{"id":"a"}],
        "lyphs":[{"id":"L","layers":["x"]}],"links":[{"id":"k","source":"a","target":"x"}]})");
    auto rep = autogenerate_stubs(m);
    CHECK(rep.has_errors());
    CHECK_FALSE(m.get("m", "x"));
}

TEST_CASE("template instances") {
    Model m = doc(R"({"id":"m","namespace":"m","materials":[{"id":"a"},{"id":"b"}],
        "lyphs":[{"id":"neuron-seg","isTemplate":true,"layers":["a","b"]},{"id":"bare","isTemplate":true},{"id":"plain"}]})");
    auto tpl = *m.find("m", "neuron-seg");
    auto i1 = instantiate_lyph_template(m, tpl, "ch1_lnk1", "m");
    const Resource& inst = m.at(i1);
    CHECK(inst.id == "neuron-seg_ch1_lnk1");
    auto layers = inst.refs("layers");
    REQUIRE(layers.size() == 2);
    CHECK(layers[0] == "neuron-seg_ch1_lnk1_1");
    for (const auto& l : layers) CHECK(m.get("m", l)->generated());
    CHECK(inst.ref("supertype") == "neuron-seg");

    auto bare = instantiate_lyph_template(m, *m.find("m", "bare"), "x", "m");
    CHECK(m.at(bare).refs("layers").empty());
    CHECK(m.at(bare).ref("supertype") == "bare");

    auto i2 = instantiate_lyph_template(m, *m.find("m", "neuron-seg"), "ch1_lnk2", "m");
    CHECK(m.at(i2).id != m.get("m", "neuron-seg_ch1_lnk1")->id);
    CHECK(m.get("m", "neuron-seg")->refs("subtypes").size() == 2);

    CHECK_THROWS_AS(instantiate_lyph_template(m, *m.find("m", "plain"), "x", "m"), GenerationError);
    CHECK_THROWS_AS(instantiate_lyph_template(m, *m.find("m", "neuron-seg"), "ch1_lnk1", "m"), GenerationError);
}

TEST_CASE("chain from a level count") {
    auto g = generate(oracle::fixture("chain_levels.json"));
    REQUIRE(g.ok());
    const Model& m = g.model;
    CHECK(count_generated(m, ResourceClass::Link) == 3);
    CHECK(count_generated(m, ResourceClass::Node) == 4);
    std::size_t instances = 0;
    for (auto i : m.of_class(ResourceClass::Lyph))
        if (m.at(i).generated() && m.at(i).has("supertype")) ++instances;
    CHECK(instances == 3);
    const Resource* group = m.get("cl", "artery_group");
    REQUIRE(group);
    CHECK(group->refs("links").size() + group->refs("nodes").size() + group->refs("lyphs").size() == 10);
    CHECK(oracle::is_chain_path(m, *m.get("cl", "artery")));
    CHECK(m.get("cl", "artery_lnk2")->ref("conveyingLyph") == "vessel_artery_lnk2");
}

TEST_CASE("smallest chain from a lyph list") {
    auto g = generate(doc(R"({"id":"m","namespace":"m","lyphs":[{"id":"A"}],"chains":[{"id":"c","lyphs":["A"]}]})"));
    REQUIRE(g.ok());
    CHECK(g.model.of_class(ResourceClass::Link).size() == 1);
    CHECK(g.model.of_class(ResourceClass::Node).size() == 2);
    CHECK(g.model.get("m", "c_lnk1")->ref("conveyingLyph") == "A");
    CHECK(g.model.get("m", "A")->ref("conveys") == "c_lnk1");
}

TEST_CASE("chain with a declared root") {
    auto g = generate(oracle::fixture("chain_lyphs.json"));
    REQUIRE(g.ok());
    const Resource* chain = g.model.get("cly", "ureter");
    CHECK(chain->ref("root") == "start");
    CHECK(oracle::is_chain_path(g.model, *chain));
}

TEST_CASE("housed chain borders") {
    auto g = generate(oracle::fixture("chain_housing.json"));
    REQUIRE(g.ok());
    const Model& m = g.model;
    const Resource* chain = m.get("ch", "axon");
    REQUIRE(oracle::is_chain_path(m, *chain));
    auto levels = chain->refs("levels");
    auto housing = chain->refs("housingLyphs");
    for (std::size_t k = 1; k < levels.size(); ++k) {
        const Resource* node = oracle::get(m, *m.get("ch", levels[k])->ref("source"), "ch");
        CHECK(node->refs("borderOf") == std::vector<std::string>{housing[k - 1], housing[k]});
    }
    for (std::size_t k = 0; k < levels.size(); ++k) {
        auto lyph = m.get("ch", levels[k])->ref("conveyingLyph");
        CHECK(m.get("ch", *lyph)->ref("internalIn") == housing[k]);
    }
}

TEST_CASE("chain errors") {
    SUBCASE("zero levels") {
        auto g = generate(doc(R"({"id":"m","namespace":"m","chains":[{"id":"c","numLevels":0}]})"));
        CHECK(g.report.has_errors());
    }
    SUBCASE("unresolved housing lyph") {
        Model m = doc(R"({"id":"m","namespace":"m","chains":[{"id":"c","housingLyphs":["other:H"]}]})");
        ValidationReport r;
        expand_chain(m, *m.find("m", "c"), r);
        CHECK(r.has_errors());
    }
}

TEST_CASE("generation pipeline") {
    SUBCASE("empty spec") {
        auto g = generate(Model{});
        CHECK(g.report.empty());
        CHECK(g.model.size() == 0);
        CHECK(g.model.generated);
    }
    SUBCASE("bypass contract") {
        auto g = generate(doc(R"({"id":"m","namespace":"m","chains":[{"id":"c","numLevels":2}]})"));
        REQUIRE(g.ok());
        CHECK(g.model.of_class(ResourceClass::Link).size() == 2);
        Model reloaded = parse_model_text(serialize(g.model, DocumentKind::Generated));
        auto again = generate(reloaded);
        CHECK(again.ok());
        CHECK(structurally_equal(again.model, g.model));
    }
    SUBCASE("unresolved foreign reference stops") {
        auto g = generate(doc(R"({"id":"m","namespace":"m","chains":[{"id":"c","numLevels":2,"lyphTemplate":"wbkg:lt"}]})"));
        CHECK(g.report.count(codes::kUnresolvedForeign) == 1);
        CHECK_FALSE(g.ok());
    }
    SUBCASE("composition cycle stops") {
        auto g = generate(doc(R"({"id":"m","namespace":"m","materials":[{"id":"a","materials":["b"]},{"id":"b","materials":["a"]}]})"));
        CHECK_FALSE(g.ok());
    }
}

TEST_CASE("trace records causes and templates") {
    auto g = generate(oracle::fixture("chain_levels.json"));
    CHECK(g.trace.contains("cl:artery_lnk1"));
    CHECK(g.trace.contains("cl:artery_group"));
    CHECK(g.trace.source_template.at("cl:vessel_artery_lnk1") == "cl:vessel");
    std::size_t levels = 0;
    for (const auto& e : g.trace.created)
        if (e.cause == Cause::ChainLevel) ++levels;
    CHECK(levels == 3);
}

TEST_CASE("generated output passes validation") {
    for (const char* f : {"bladder.json", "neuron.json", "ganglion.json", "chain_housing.json"}) {
        CAPTURE(f);
        auto g = generate(oracle::fixture(f));
        REQUIRE(g.ok());
        std::string text = serialize(g.model, DocumentKind::Generated);
        CHECK_FALSE(validate_syntax(text).has_errors());
        CHECK_FALSE(validate_generated(g.model).has_errors());
    }
}
