#include "lyphc/exporter.hpp"

#include <set>

#include "lyphc/document.hpp"
#include "lyphc/identifier.hpp"

namespace lyphc {

std::string JsonLdContext::resource_iri(std::string_view ns, std::string_view local) const {
    return base + std::string(ns) + "#" + std::string(local);
}

std::string JsonLdContext::type_iri(ResourceClass c) const {
    return vocab + std::string(class_name(c));
}

json JsonLdContext::to_json() const {
    json ctx = json::object();
    ctx["@vocab"] = vocab;
    for (const auto& [term, def] : terms) ctx[term] = def;
    return ctx;
}

JsonLdContext default_context(std::string base) {
    JsonLdContext ctx;
    ctx.base = std::move(base);
    for (ResourceClass c : kAllClasses)
        for (const auto& p : properties(c)) {
            std::string name(p.name);
            json def = {{"@id", ctx.vocab + name}};
            if (p.is_reference() || p.kind == PropKind::CurieList) def["@type"] = "@id";
            else if (p.kind == PropKind::Vector || p.kind == PropKind::Vector2) def["@type"] = "@json";
            ctx.terms[name] = def;
        }
    return ctx;
}

std::string serialize_generated(const Model& model) {
    return serialize(model, DocumentKind::Generated);
}

namespace {

std::string ref_iri(const Model& m, const JsonLdContext& ctx, const Resource& from, const std::string& ref) {
    if (auto i = m.lookup(ref, from.ns)) return ctx.resource_iri(m.at(*i).ns, m.at(*i).id);
    try {
        Identifier id = Identifier::parse(ref);
        return ctx.resource_iri(id.has_prefix() ? id.prefix() : from.ns, id.local());
    } catch (const IdentifierError&) {
        return ctx.resource_iri(from.ns, ref);
    }
}

}  // namespace

JsonLdResult to_json_ld(const Model& model, const JsonLdContext& ctx) {
    JsonLdResult res;
    json graph = json::array();
    std::set<std::string> missing;
    for (std::size_t i = 0; i < model.size(); ++i) {
        const Resource& r = model.at(i);
        json node = json::object();
        node["@id"] = ctx.resource_iri(r.ns, r.id);
        node["@type"] = ctx.type_iri(r.cls);
        for (const auto& [p, v] : r.props.items()) {
            if (!ctx.terms.count(p)) {
                missing.insert(p);
                continue;
            }
            const PropertyDef* def = find_property(r.cls, p);
            if (def && def->is_reference()) {
                auto one = [&](const json& x) { return json{{"@id", ref_iri(model, ctx, r, x.get<std::string>())}}; };
                if (v.is_string()) node[p] = one(v);
                else if (v.is_array()) {
                    json arr = json::array();
                    for (const auto& x : v)
                        if (x.is_string()) arr.push_back(one(x));
                    node[p] = arr;
                }
            } else if (def && def->kind == PropKind::CurieList && v.is_array()) {
                json arr = json::array();
                for (const auto& x : v)
                    if (x.is_string()) arr.push_back(json{{"@id", x}});
                node[p] = arr;
            } else if (def && (def->kind == PropKind::Vector || def->kind == PropKind::Vector2)) {
                node[p] = v;
            } else {
                node[p] = v;
            }
        }
        graph.push_back(std::move(node));
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto& p : missing) list += (list.empty() ? "" : ", ") + p;
        res.report.error("context", "no context term for properties: " + list);
    }
    res.document = {{"@context", ctx.to_json()}, {"@graph", graph}};
    return res;
}

json resource_map(const Model& model) {
    json out = json::object();
    for (std::size_t i = 0; i < model.size(); ++i) {
        const Resource& r = model.at(i);
        json terms = r.props.contains("ontologyTerms") ? r.props["ontologyTerms"] : json::array();
        out[r.key()] = {{"class", class_name(r.cls)},
                        {"ontologyTerms", terms},
                        {"provenance", r.generated() ? "generated" : "declared"},
                        {"namespace", r.ns},
                        {"imported", r.imported}};
    }
    return out;
}

}  // namespace lyphc
