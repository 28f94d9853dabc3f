#include "lyphc/vocabulary.hpp"

#include <algorithm>
#include <map>

namespace lyphc {

namespace {

using RC = ResourceClass;
using PK = PropKind;

constexpr std::array<std::pair<RC, std::string_view>, 11> kNames = {{
    {RC::Node, "Node"},
    {RC::Link, "Link"},
    {RC::Lyph, "Lyph"},
    {RC::Material, "Material"},
    {RC::Chain, "Chain"},
    {RC::Group, "Group"},
    {RC::Coalescence, "Coalescence"},
    {RC::Scaffold, "Scaffold"},
    {RC::Anchor, "Anchor"},
    {RC::Wire, "Wire"},
    {RC::Region, "Region"},
}};

constexpr std::array<std::pair<RC, std::string_view>, 11> kCollections = {{
    {RC::Node, "nodes"},
    {RC::Link, "links"},
    {RC::Lyph, "lyphs"},
    {RC::Material, "materials"},
    {RC::Chain, "chains"},
    {RC::Group, "groups"},
    {RC::Coalescence, "coalescences"},
    {RC::Scaffold, "scaffolds"},
    {RC::Anchor, "anchors"},
    {RC::Wire, "wires"},
    {RC::Region, "regions"},
}};

PropertyDef str(std::string_view n) { return {n, PK::String, {}, {}}; }
PropertyDef flag(std::string_view n) { return {n, PK::Bool, {}, {}}; }
PropertyDef num(std::string_view n) { return {n, PK::Number, {}, {}}; }
PropertyDef ref(std::string_view n, std::vector<RC> t) { return {n, PK::Ref, std::move(t), {}}; }
PropertyDef refs(std::string_view n, std::vector<RC> t) { return {n, PK::RefList, std::move(t), {}}; }
PropertyDef choice(std::string_view n, std::vector<std::string_view> v) {
    return {n, PK::Enum, {}, std::move(v)};
}

std::vector<PropertyDef> common() {
    return {str("name"), str("description"), {"ontologyTerms", PK::CurieList, {}, {}},
            flag("generated"), flag("isVisible")};
}

std::map<RC, std::vector<PropertyDef>> build_table() {
    std::map<RC, std::vector<PropertyDef>> t;
    auto add = [&](RC c, std::vector<PropertyDef> extra) {
        auto props = common();
        props.insert(props.end(), extra.begin(), extra.end());
        t[c] = std::move(props);
    };
    add(RC::Node, {
        {"layout", PK::Vector, {}, {}},
        flag("fixed"),
        refs("controlNodes", {RC::Node}),
        ref("hostedBy", {RC::Link}),
        {"offset", PK::Fraction, {}, {}},
        ref("internalIn", {RC::Lyph}),
        ref("anchoredTo", {RC::Anchor}),
        refs("sourceOf", {RC::Link}),
        refs("targetOf", {RC::Link}),
        refs("rootOf", {RC::Chain}),
        refs("leafOf", {RC::Chain}),
        refs("borderOf", {RC::Lyph}),
    });
    add(RC::Link, {
        ref("source", {RC::Node}),
        ref("target", {RC::Node}),
        ref("conveyingLyph", {RC::Lyph}),
        refs("hostedNodes", {RC::Node}),
        ref("levelIn", {RC::Chain}),
        num("length"),
        choice("geometry", {"LINK", "SPLINE"}),
    });
    add(RC::Lyph, {
        flag("isTemplate"),
        ref("supertype", {RC::Lyph}),
        refs("subtypes", {RC::Lyph}),
        refs("layers", {RC::Lyph, RC::Material}),
        ref("layerIn", {RC::Lyph}),
        refs("internalLyphs", {RC::Lyph}),
        refs("internalNodes", {RC::Node}),
        ref("internalIn", {RC::Lyph, RC::Region}),
        ref("conveys", {RC::Link}),
        choice("topology", {topology::kTube, topology::kBagLeft, topology::kBagRight, topology::kCyst}),
        ref("hostedBy", {RC::Region}),
        num("angle"),
        refs("materials", {RC::Material, RC::Lyph}),
        refs("materialIn", {RC::Material, RC::Lyph}),
    });
    add(RC::Material, {
        refs("materials", {RC::Material, RC::Lyph}),
        refs("materialIn", {RC::Material, RC::Lyph}),
        refs("layerIn", {RC::Lyph}),
    });
    add(RC::Chain, {
        {"numLevels", PK::PositiveInteger, {}, {}},
        ref("lyphTemplate", {RC::Lyph}),
        refs("lyphs", {RC::Lyph}),
        refs("housingLyphs", {RC::Lyph}),
        refs("levels", {RC::Link}),
        ref("root", {RC::Node}),
        ref("leaf", {RC::Node}),
        ref("wiredTo", {RC::Wire}),
        flag("startFromLeaf"),
        ref("hostedBy", {RC::Region}),
    });
    add(RC::Group, {
        refs("nodes", {RC::Node}),
        refs("links", {RC::Link}),
        refs("lyphs", {RC::Lyph}),
        refs("groups", {RC::Group}),
        flag("dynamic"),
        choice("origin", {"NEURULATED", "QUERY", "VARIANCE"}),
        str("seed"),
    });
    add(RC::Coalescence, {
        refs("lyphs", {RC::Lyph}),
        choice("kind", {"EMBEDDING", "CONNECTING"}),
    });
    add(RC::Scaffold, {
        refs("anchors", {RC::Anchor}),
        refs("wires", {RC::Wire}),
        refs("regions", {RC::Region}),
    });
    add(RC::Anchor, {
        {"layout", PK::Vector2, {}, {}},
        ref("hostedBy", {RC::Wire, RC::Region}),
        {"offset", PK::Fraction, {}, {}},
    });
    add(RC::Wire, {
        ref("source", {RC::Anchor}),
        ref("target", {RC::Anchor}),
        choice("geometry", {"LINE", "ARC", "SPLINE"}),
        {"arcCenter", PK::Vector2, {}, {}},
        {"controlPoint", PK::Vector2, {}, {}},
    });
    add(RC::Region, {
        refs("border", {RC::Anchor, RC::Wire}),
        refs("hostedLyphs", {RC::Lyph, RC::Group}),
        refs("internalLyphs", {RC::Lyph}),
    });
    return t;
}

const std::map<RC, std::vector<PropertyDef>>& table() {
    static const auto t = build_table();
    return t;
}

std::vector<RelationEnd> build_relations() {
    std::vector<RelationEnd> r;
    auto pair = [&](RC a, std::string_view pa, RC b, std::string_view pb) {
        r.push_back({a, pa, b, pb});
        r.push_back({b, pb, a, pa});
    };
    pair(RC::Lyph, "layers", RC::Lyph, "layerIn");
    pair(RC::Lyph, "layers", RC::Material, "layerIn");
    pair(RC::Link, "conveyingLyph", RC::Lyph, "conveys");
    pair(RC::Lyph, "internalNodes", RC::Node, "internalIn");
    pair(RC::Lyph, "internalLyphs", RC::Lyph, "internalIn");
    pair(RC::Region, "internalLyphs", RC::Lyph, "internalIn");
    pair(RC::Link, "hostedNodes", RC::Node, "hostedBy");
    pair(RC::Link, "source", RC::Node, "sourceOf");
    pair(RC::Link, "target", RC::Node, "targetOf");
    pair(RC::Chain, "root", RC::Node, "rootOf");
    pair(RC::Chain, "leaf", RC::Node, "leafOf");
    pair(RC::Lyph, "supertype", RC::Lyph, "subtypes");
    for (RC a : {RC::Material, RC::Lyph})
        for (RC b : {RC::Material, RC::Lyph}) r.push_back({a, "materials", b, "materialIn"});
    for (RC a : {RC::Material, RC::Lyph})
        for (RC b : {RC::Material, RC::Lyph}) r.push_back({a, "materialIn", b, "materials"});
    pair(RC::Chain, "levels", RC::Link, "levelIn");
    return r;
}

const std::vector<RelationEnd>& relations() {
    static const auto r = build_relations();
    return r;
}

}  // namespace

std::string_view class_name(ResourceClass c) noexcept {
    for (const auto& [k, v] : kNames)
        if (k == c) return v;
    return "?";
}

std::optional<ResourceClass> class_from_name(std::string_view name) noexcept {
    for (const auto& [k, v] : kNames)
        if (v == name) return k;
    return std::nullopt;
}

std::string_view collection_name(ResourceClass c) noexcept {
    for (const auto& [k, v] : kCollections)
        if (k == c) return v;
    return "?";
}

std::optional<ResourceClass> class_from_collection(std::string_view name) noexcept {
    for (const auto& [k, v] : kCollections)
        if (v == name) return k;
    return std::nullopt;
}

std::span<const PropertyDef> properties(ResourceClass c) {
    return table().at(c);
}

const PropertyDef* find_property(ResourceClass c, std::string_view name) {
    const auto& props = table().at(c);
    auto it = std::find_if(props.begin(), props.end(), [&](const PropertyDef& p) { return p.name == name; });
    return it == props.end() ? nullptr : &*it;
}

std::span<const RelationEnd> relation_ends() {
    return relations();
}

const RelationEnd* find_relation(ResourceClass owner, std::string_view property, ResourceClass target) {
    for (const auto& r : relations())
        if (r.owner == owner && r.property == property && r.target == target) return &r;
    return nullptr;
}

bool is_relational(ResourceClass owner, std::string_view property) {
    for (const auto& r : relations())
        if (r.owner == owner && r.property == property) return true;
    return false;
}

bool is_composition_property(std::string_view property) noexcept {
    return property == "layers" || property == "internalLyphs" || property == "materials";
}

}  // namespace lyphc
