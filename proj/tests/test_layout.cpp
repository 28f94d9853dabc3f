#include "doctest.h"
#include "oracles.hpp"

#include "lyphc/document.hpp"
#include "lyphc/generator.hpp"
#include "lyphc/layout.hpp"

using namespace lyphc;

static Model generated(const char* fixture) {
    auto g = generate(oracle::fixture(fixture));
    REQUIRE(g.ok());
    return g.model;
}

static Model generated_text(const char* text) {
    auto g = generate(parse_model_text(text));
    REQUIRE(g.ok());
    return g.model;
}

static std::size_t idx(const Model& m, const char* key) { return *m.find_key(key); }

static double line_angle(const Vec3& a, const Vec3& b) {
    double c = std::abs(dot(normalized(a), normalized(b)));
    return std::acos(std::min(1.0, c));
}

struct Rules {
    Model model;
    LayoutResult result;
    Rules() : model(generated("layout_rules.json")) { result = run_layout(model); }
    Vec3 at(const std::string& key) const { return result.state.positions.at("lay:" + key); }
    Rank rank(const std::string& key) const { return result.state.ranks.at("lay:" + key); }
};

static const Rules& rules() {
    static const Rules r;
    return r;
}

TEST_CASE("visibility from groups") {
    Model m = oracle::fixture("groups.json");
    auto none = visible_subgraph(m, std::set<std::string>{});
    CHECK(none.nodes.empty());
    CHECK(none.links.empty());
    CHECK(none.lyphs.empty());

    auto outer = visible_subgraph(m, std::set<std::string>{"outer"});
    CHECK(outer.nodes.size() == 2);
    REQUIRE(outer.links.size() == 1);
    CHECK(m.at(outer.links[0]).id == "pq");

    auto tail = visible_subgraph(m, std::set<std::string>{"tail"});
    CHECK(tail.nodes.size() == 2);
    CHECK(tail.links.size() == 1);

    auto all = visible_subgraph(m, std::nullopt);
    CHECK(all.nodes.size() == 4);
    CHECK(all.links.size() == 2);
}

TEST_CASE("all groups off lays out nothing") {
    Model m = oracle::fixture("groups.json");
    LayoutOptions o;
    o.active_groups = std::set<std::string>{};
    auto r = run_layout(m, o);
    CHECK(r.state.positions.empty());
    CHECK(r.state.lyphs.empty());
}

TEST_CASE("non-positive budget is a no-op") {
    Model m = oracle::fixture("groups.json");
    auto g = visible_subgraph(m, std::nullopt);
    LayoutOptions o;
    auto s = initial_state(m, g, o);
    auto before = layout_to_json(s);
    solve(m, g, s, 0, o);
    solve(m, g, s, -3, o);
    CHECK(layout_to_json(s) == before);
    CHECK(s.positions.at("grp:q").x == 10);
}

TEST_CASE("anchored and fixed nodes") {
    const auto& r = rules();
    CHECK(r.at("anch") == Vec3{0, 30, 0});
    CHECK(r.rank("anch") == Rank::Anchored);
    CHECK(r.at("fixd") == Vec3{20, 50, 0});
    CHECK(r.rank("fixd") == Rank::Fixed);
}

TEST_CASE("hosted nodes spread evenly on the link") {
    const auto& r = rules();
    auto curve = link_curve(r.model, idx(r.model, "lay:L1"), r.result.state);
    REQUIRE(curve);
    for (auto [node, f] : {std::pair{"h1", 0.25}, {"h2", 0.5}, {"h3", 0.75}}) {
        CAPTURE(node);
        CHECK(r.rank(node) == Rank::HostedByLink);
        CHECK(norm(r.at(node) - curve->at_fraction(f)) <= 1e-9);
    }
    auto spline = link_curve(r.model, idx(r.model, "lay:L2"), r.result.state);
    REQUIRE(spline);
    CHECK(spline->kind() == Curve::Kind::Bezier);
    CHECK(norm(r.at("h4") - spline->at_fraction(0.25)) <= 1e-9);
}

TEST_CASE("other placement rules") {
    const auto& r = rules();
    CHECK(r.rank("in1") == Rank::InternalIn);
    CHECK(r.rank("ctrl") == Rank::ControlCentroid);
    Vec3 centroid = (r.at("fixd") + r.at("free1")) * 0.5;
    CHECK(norm(r.at("ctrl") - centroid) <= 1e-9);
    CHECK(r.rank("free2") == Rank::Free);
    CHECK(r.rank("housed_node1") == Rank::BorderHosted);
    for (const char* n : {"regionChain_node1", "regionChain_node2"}) {
        CAPTURE(n);
        CHECK(r.rank(n) == Rank::InternalIn);
        Vec3 p = r.at(n);
        CHECK(p.x >= 0);
        CHECK(p.x <= 40);
        CHECK(p.y >= 0);
        CHECK(p.y <= 30);
    }
}

TEST_CASE("wired chain on a straight wire") {
    Model m = generated_text(R"({"id":"w","namespace":"w",
        "anchors":[{"id":"s","layout":[0,0]},{"id":"t","layout":[10,0]}],
        "wires":[{"id":"wire","source":"s","target":"t"}],
        "chains":[{"id":"c","numLevels":2,"wiredTo":"wire"}]})");
    auto r = run_layout(m);
    CHECK(norm(r.state.positions.at("w:c_node1") - Vec3{5, 0, 0}) <= 1e-9);
    CHECK(norm(r.state.positions.at("w:c_root") - Vec3{0, 0, 0}) <= 1e-9);
    CHECK(norm(r.state.positions.at("w:c_leaf") - Vec3{10, 0, 0}) <= 1e-9);
}

TEST_CASE("wired chains follow arc length") {
    const auto& r = rules();
    for (int k = 1; k <= 3; ++k)
        CHECK(norm(r.at("wired_node" + std::to_string(k)) - Vec3{10.0 * k, 0, 0}) <= 1e-6);

    // w2: half circle of radius 15 around (40, 15), counter-clockwise from (40, 0).
    auto on_arc = [](double f) {
        double th = -M_PI / 2 + M_PI * f;
        return Vec3{40 + 15 * std::cos(th), 15 + 15 * std::sin(th), 0};
    };
    CHECK(norm(r.at("arcChain_root") - on_arc(1)) <= 1e-6);
    CHECK(norm(r.at("arcChain_leaf") - on_arc(0)) <= 1e-6);
    for (int k = 1; k <= 3; ++k)
        CHECK(norm(r.at("arcChain_node" + std::to_string(k)) - on_arc(1 - k / 4.0)) <= 1e-6);
}

TEST_CASE("degenerate wire collapses to the anchor") {
    Model m = generated_text(R"({"id":"w","namespace":"w",
        "anchors":[{"id":"s","layout":[3,4]},{"id":"t","layout":[3,4]}],
        "wires":[{"id":"wire","source":"s","target":"t"}],
        "chains":[{"id":"c","numLevels":2,"wiredTo":"wire"}]})");
    auto r = run_layout(m);
    CHECK(r.report.count("degenerate-wire") == 1);
    CHECK(norm(r.state.positions.at("w:c_node1") - Vec3{3, 4, 0}) <= 1e-9);
}

TEST_CASE("lyph sizes") {
    Model m = generated_text(R"({"id":"s","namespace":"s",
        "nodes":[{"id":"a","fixed":true,"layout":[0,0,0]},{"id":"b","fixed":true,"layout":[10,0,0]},
                 {"id":"c","fixed":true,"layout":[0,20,0]},{"id":"d","fixed":true,"layout":[10,20,0]}],
        "materials":[{"id":"m"}],
        "lyphs":[{"id":"one","layers":["m"]},{"id":"four","layers":["l1","l2","l3","l4"]},
                 {"id":"l1"},{"id":"l2"},{"id":"l3"},{"id":"l4"}],
        "links":[{"id":"ab","source":"a","target":"b","conveyingLyph":"one"},
                 {"id":"cd","source":"c","target":"d","conveyingLyph":"four"}]})");
    auto r = run_layout(m);
    const auto& one = r.state.lyphs.at("s:one");
    CHECK(one.length == doctest::Approx(8));
    const auto& four = r.state.lyphs.at("s:four");
    REQUIRE(four.layer_widths.size() == 4);
    for (double w : four.layer_widths) CHECK(w == doctest::Approx(four.width / 4));
    CHECK(norm(one.center - Vec3{5, 0, 0}) <= 1e-9);
}

TEST_CASE("zero length link gets a minimal size") {
    Model m = generated_text(R"({"id":"z","namespace":"z",
        "nodes":[{"id":"a","fixed":true,"layout":[1,1,0]},{"id":"b","fixed":true,"layout":[1,1,0]}],
        "lyphs":[{"id":"y"}],"links":[{"id":"ab","source":"a","target":"b","conveyingLyph":"y"}]})");
    auto r = run_layout(m);
    CHECK(r.report.count("zero-length") == 1);
    CHECK(r.state.lyphs.at("z:y").length > 0);
}

TEST_CASE("internal grid fits the host") {
    const auto& r = rules();
    const auto& host = r.result.state.lyphs.at("lay:Hbig");
    int placed = 0;
    for (int k = 1; k <= 9; ++k) {
        auto it = r.result.state.lyphs.find("lay:i" + std::to_string(k));
        REQUIRE(it != r.result.state.lyphs.end());
        const auto& p = it->second;
        Vec3 d = p.center - host.center;
        double along = std::abs(dot(d, host.axis)) + std::abs(dot(p.axis, host.axis)) * p.length / 2 +
                       std::abs(dot(p.normal, host.axis)) * p.width / 2;
        double across = std::abs(dot(d, host.normal)) + std::abs(dot(p.axis, host.normal)) * p.length / 2 +
                        std::abs(dot(p.normal, host.normal)) * p.width / 2;
        CHECK(along <= host.length / 2 + 1e-9);
        CHECK(across <= host.width / 2 + 1e-9);
        ++placed;
    }
    CHECK(placed == 9);
}

TEST_CASE("conveyed lyphs follow their links") {
    const auto& r = rules();
    for (const auto& [key, p] : r.result.state.lyphs) {
        auto i = idx(r.model, key.c_str());
        auto link = r.model.at(i).ref("conveys");
        if (!link) continue;
        auto curve = link_curve(r.model, *r.model.lookup(*link, "lay"), r.result.state);
        REQUIRE(curve);
        Vec3 dir = curve->end() - curve->start();
        if (norm(dir) < 1e-9) continue;
        CAPTURE(key);
        CHECK(line_angle(p.axis, dir) <= 1e-6);
    }
}

TEST_CASE("connecting coalescence aligns the links") {
    const auto& r = rules();
    auto la = link_curve(r.model, idx(r.model, "lay:c1"), r.result.state);
    auto lb = link_curve(r.model, idx(r.model, "lay:c2"), r.result.state);
    REQUIRE(la);
    REQUIRE(lb);
    CHECK(line_angle(la->end() - la->start(), lb->end() - lb->start()) <= 1e-6);
    const auto& a = r.result.state.lyphs.at("lay:LA");
    const auto& b = r.result.state.lyphs.at("lay:LB");
    double gap = std::abs(dot(b.center - a.center, a.normal));
    CHECK(gap == doctest::Approx((a.width + b.width) / 2 - a.layer_widths.back()).epsilon(1e-6));
}

TEST_CASE("embedding coalescence puts the lyph in the host layer") {
    Model m = generated_text(R"({"id":"e","namespace":"e",
        "nodes":[{"id":"a","fixed":true,"layout":[0,0,0]},{"id":"b","fixed":true,"layout":[20,0,0]}],
        "materials":[{"id":"m"}],
        "lyphs":[{"id":"host","layers":["m","m2"]},{"id":"m2"},{"id":"emb"}],
        "links":[{"id":"ab","source":"a","target":"b","conveyingLyph":"host"},
                 {"id":"cd","source":"c","target":"d","conveyingLyph":"emb"}],
        "coalescences":[{"id":"co","kind":"EMBEDDING","lyphs":["host","emb"]}]})");
    auto r = run_layout(m);
    const auto& host = r.state.lyphs.at("e:host");
    const auto& emb = r.state.lyphs.at("e:emb");
    double across = std::abs(dot(emb.center - host.center, host.normal));
    double outer = host.layer_widths.back();
    CHECK(across <= host.width / 2 + 1e-9);
    CHECK(across >= host.width / 2 - outer - 1e-9);
    CHECK(std::abs(dot(emb.center - host.center, host.axis)) <= host.length / 2 + 1e-9);
}

TEST_CASE("rotation stays at zero without coalescences") {
    const auto& r = rules();
    CHECK(r.result.state.lyphs.at("lay:Lhost").angle == 0);
    CHECK_FALSE(r.result.state.rotations.count("lay:Lhost"));
}

TEST_CASE("same seed, same bytes") {
    Model m = generated("layout_rules.json");
    auto a = layout_to_json(run_layout(m).state).dump();
    auto b = layout_to_json(run_layout(m).state).dump();
    CHECK(a == b);
    LayoutOptions other;
    other.seed = 1;
    CHECK(layout_to_json(run_layout(m, other).state).dump() != a);
}

TEST_CASE("three dimensional runs") {
    Model m = generated("neuron.json");
    LayoutOptions o;
    o.three_d = true;
    auto r = run_layout(m, o);
    bool any_z = false;
    for (const auto& [k, p] : r.state.positions) any_z = any_z || p.z != 0;
    CHECK(any_z);
    o.three_d = false;
    for (const auto& [k, p] : run_layout(m, o).state.positions) CHECK(p.z == 0);
}

TEST_CASE("free pair settles near the rest length") {
    Model m = parse_model_text(R"({"id":"f","namespace":"f","nodes":[{"id":"a"},{"id":"b"}],
        "links":[{"id":"ab","source":"a","target":"b"}]})");
    LayoutOptions o;
    o.iterations = 1000;
    auto r = run_layout(m, o);
    double d = norm(r.state.positions.at("f:a") - r.state.positions.at("f:b"));
    CHECK(d == doctest::Approx(o.rest_length).epsilon(0.1));
}

TEST_CASE("wires and anchors from the scaffold") {
    Model m = oracle::fixture("too.json");
    CHECK(*anchor_position(m, idx(m, "too:a3")) == Vec3{100, 60, 0});
    auto w2 = wire_curve(m, idx(m, "too:w2"));
    REQUIRE(w2);
    CHECK(w2->kind() == Curve::Kind::Arc);
    CHECK(w2->length() == doctest::Approx(30 * M_PI).epsilon(1e-9));
    auto w4 = wire_curve(m, idx(m, "too:w4"));
    CHECK(w4->kind() == Curve::Kind::Bezier);
}

TEST_CASE("snapshot outputs") {
    const auto& r = rules();
    json j = layout_to_json(r.result.state);
    CHECK(j["seed"] == 0);
    CHECK(j["nodes"]["lay:anch"]["rank"] == "ANCHORED");
    CHECK(j["nodes"]["lay:anch"]["position"] == json::array({0.0, 30.0, 0.0}));
    CHECK(j["lyphs"].contains("lay:Lhost"));
    std::string svg = layout_to_svg(r.model, r.result.state);
    CHECK(svg.starts_with("<svg"));
    CHECK(svg.find("</svg>") != std::string::npos);
}
