#include "doctest.h"
#include "oracles.hpp"

#include "lyphc/composer.hpp"
#include "lyphc/document.hpp"
#include "lyphc/exporter.hpp"
#include "lyphc/generator.hpp"

using namespace lyphc;

static Model doc(const char* text) { return parse_model_text(text); }

// Expected IRI-valued triples: one per reference value and per ontology term.
static std::size_t predicted_reference_triples(const Model& m) {
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

TEST_CASE("one lyph with one term") {
    Model m = doc(R"({"id":"t","namespace":"t","lyphs":[{"id":"y","ontologyTerms":["UBERON:0001255"]}]})");
    auto ld = to_json_ld(m);
    CHECK(ld.report.empty());
    auto e = oracle::expand_json_ld(ld.document);
    CHECK(e.problems.empty());
    CHECK(e.triples.size() == 2);
    CHECK(e.count_predicate(oracle::kRdfType) == 1);
    CHECK(e.count_predicate(std::string(kDefaultVocab) + "ontologyTerms") == 1);
    CHECK(e.triples[0].s == "https://apinatomy.example/models/t#y");
}

TEST_CASE("empty model") {
    auto ld = to_json_ld(Model{});
    CHECK(ld.document.contains("@context"));
    CHECK(ld.document["@graph"].empty());
    CHECK(serialize_generated(Model{}) == serialize(Model{}, DocumentKind::Generated));
}

TEST_CASE("link ends become node references") {
    Model m = doc(R"({"id":"t","namespace":"t","nodes":[{"id":"a"},{"id":"b"}],
        "links":[{"id":"ab","source":"a","target":"b"}]})");
    auto e = oracle::expand_json_ld(to_json_ld(m).document);
    std::vector<oracle::Triple> refs;
    for (const auto& t : e.triples)
        if (t.iri_object && t.p != oracle::kRdfType) refs.push_back(t);
    REQUIRE(refs.size() == 2);
    std::set<std::string> objects{refs[0].o, refs[1].o};
    CHECK(objects == std::set<std::string>{"https://apinatomy.example/models/t#a", "https://apinatomy.example/models/t#b"});
}

TEST_CASE("base iri and foreign references") {
    auto linked = resolve_imports(oracle::fixture("wbkg.json"), default_fetcher(), oracle::data("wbkg.json"));
    auto g = generate(linked.model);
    REQUIRE(g.ok());
    auto ld = to_json_ld(g.model, default_context("http://example.org/kb/"));
    auto e = oracle::expand_json_ld(ld.document);
    bool foreign = false;
    for (const auto& t : e.triples)
        if (t.s == "http://example.org/kb/wbkg#heart" && t.o == "http://example.org/kb/too#a1") foreign = true;
    CHECK(foreign);
}

TEST_CASE("missing context term") {
    Model m = doc(R"({"id":"t","namespace":"t","lyphs":[{"id":"y","name":"Y","ontologyTerms":["A:1"]}]})");
    JsonLdContext ctx = default_context();
    ctx.terms.erase("name");
    ctx.terms.erase("ontologyTerms");
    auto ld = to_json_ld(m, ctx);
    REQUIRE(ld.report.count(Severity::Error) == 1);
    CHECK(ld.report.issues()[0].message.find("name") != std::string::npos);
    CHECK(ld.report.issues()[0].message.find("ontologyTerms") != std::string::npos);
    CHECK(oracle::expand_json_ld(ld.document).problems.empty());
}

TEST_CASE("fixture exports expand to the predicted triples") {
    for (const char* f : {"bladder.json", "neuron.json", "ganglion.json", "layout_rules.json"}) {
        CAPTURE(f);
        auto g = generate(oracle::fixture(f));
        REQUIRE(g.ok());
        auto ld = to_json_ld(g.model);
        CHECK(ld.report.empty());
        auto e = oracle::expand_json_ld(ld.document);
        CHECK(e.problems.empty());
        CHECK(e.blank_subjects == 0);
        CHECK(e.typed_nodes == g.model.size());
        CHECK(e.iri_objects() - e.count_predicate(oracle::kRdfType) == predicted_reference_triples(g.model));
    }
}

TEST_CASE("resource map") {
    Model m = doc(R"({"id":"t","namespace":"t","materials":[{"id":"mat"}],"lyphs":[{"id":"y","ontologyTerms":["FMA:1"]}],
        "links":[{"id":"ab","source":"a","target":"b"}]})");
    auto g = generate(m);
    REQUIRE(g.ok());
    json map = resource_map(g.model);
    CHECK(map.size() == 5);
    std::size_t declared = 0, generated = 0;
    for (const auto& [k, v] : map.items()) {
        if (v["provenance"] == "declared") ++declared;
        if (v["provenance"] == "generated") {
            ++generated;
            CHECK(g.trace.contains(k));
        }
    }
    CHECK(declared == 3);
    CHECK(generated == 2);
    CHECK(map["t:mat"]["ontologyTerms"] == json::array());
    CHECK(map["t:y"]["ontologyTerms"] == json::array({"FMA:1"}));
    CHECK(map["t:y"]["class"] == "Lyph");

    auto linked = resolve_imports(oracle::fixture("wbkg.json"), default_fetcher(), oracle::data("wbkg.json"));
    json with_imports = resource_map(linked.model);
    CHECK(with_imports["too:a1"]["namespace"] == "too");
    CHECK(with_imports["too:a1"]["imported"] == true);
    CHECK(with_imports["wbkg:heart"]["imported"] == false);
}

TEST_CASE("generated serialization is canonical") {
    auto g = generate(oracle::fixture("bladder.json"));
    std::string a = serialize_generated(g.model);
    std::string b = serialize_generated(parse_model_text(a));
    CHECK(a == b);
}
