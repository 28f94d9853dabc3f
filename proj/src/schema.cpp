#include "lyphc/schema.hpp"

#include <map>

namespace lyphc {

namespace {

std::string escape(std::string_view token) {
    std::string out;
    for (char c : token) {
        if (c == '~') out += "~0";
        else if (c == '/') out += "~1";
        else out += c;
    }
    return out;
}

class SyntaxChecker {
public:
    SyntaxChecker(std::string_view source, ValidationReport& report) : source_(source), report_(report) {}

    void document(const json& doc) {
        if (!doc.is_object()) {
            error(codes::kType, "model document must be an object", "");
            return;
        }
        for (auto it = doc.begin(); it != doc.end(); ++it) {
            const std::string& key = it.key();
            const json& v = it.value();
            std::string ptr = "/" + escape(key);
            if (auto cls = class_from_collection(key)) {
                if (!v.is_array()) {
                    error(codes::kType, "'" + key + "' must be a list of " + std::string(class_name(*cls)) +
                                            " definitions", ptr);
                    continue;
                }
                for (std::size_t i = 0; i < v.size(); ++i) resource(*cls, v[i], ptr + "/" + std::to_string(i), false);
            } else if (key == "id" || key == "name" || key == "description") {
                expect_string(v, ptr);
            } else if (key == "namespace") {
                if (!v.is_string() || !Identifier::valid_namespace(v.get<std::string>()))
                    error(codes::kIdentifier, "namespace must match [A-Za-z0-9_-]+", ptr);
            } else if (key == "schemaVersion") {
                if (!v.is_string()) error(codes::kType, "schemaVersion must be a string", ptr);
                else if (v.get<std::string>() != kSchemaVersion)
                    error(codes::kSchemaVersion,
                          "unsupported schema version '" + v.get<std::string>() + "' (supported: " +
                              std::string(kSchemaVersion) + ")",
                          ptr);
            } else if (key == "generated") {
                if (!v.is_boolean()) error(codes::kType, "generated must be a boolean", ptr);
            } else if (key == "imports") {
                imports(v, ptr);
            } else if (key == "variance") {
                variance(v, ptr);
            } else {
                warn(codes::kUnknownProperty, "unknown model property '" + key + "' (kept as is)", ptr);
            }
        }
    }

private:
    void error(std::string_view code, std::string message, const std::string& ptr,
               std::optional<std::string> resource = {}) {
        report_.error(std::string(code), std::move(message), std::move(resource), location(ptr));
    }
    void warn(std::string_view code, std::string message, const std::string& ptr,
              std::optional<std::string> resource = {}) {
        report_.warn(std::string(code), std::move(message), std::move(resource), location(ptr));
    }
    std::string location(const std::string& ptr) const { return std::string(source_) + "#" + ptr; }

    void expect_string(const json& v, const std::string& ptr) {
        if (!v.is_string()) error(codes::kType, "expected a string", ptr);
    }

    void imports(const json& v, const std::string& ptr) {
        if (!v.is_array()) {
            error(codes::kType, "imports must be a list", ptr);
            return;
        }
        for (std::size_t i = 0; i < v.size(); ++i) {
            const json& e = v[i];
            std::string p = ptr + "/" + std::to_string(i);
            if (e.is_string()) continue;
            if (!e.is_object() || !e.contains("url") || !e["url"].is_string()) {
                error(codes::kType, "import must be a URL string or {url, namespace}", p);
                continue;
            }
            if (e.contains("namespace") &&
                (!e["namespace"].is_string() || !Identifier::valid_namespace(e["namespace"].get<std::string>())))
                error(codes::kIdentifier, "import namespace must match [A-Za-z0-9_-]+", p + "/namespace");
        }
    }

    void variance(const json& v, const std::string& ptr) {
        if (!v.is_object()) {
            error(codes::kType, "variance must be an object", ptr);
            return;
        }
        std::set<std::string> clades;
        if (v.contains("clades")) {
            const json& c = v["clades"];
            if (!c.is_array()) error(codes::kType, "variance.clades must be a list", ptr + "/clades");
            else
                for (std::size_t i = 0; i < c.size(); ++i) {
                    if (c[i].is_string()) clades.insert(c[i].get<std::string>());
                    else error(codes::kType, "clade names must be strings", ptr + "/clades/" + std::to_string(i));
                }
        }
        if (v.contains("presence")) {
            const json& p = v["presence"];
            if (!p.is_object()) {
                error(codes::kType, "variance.presence must be an object", ptr + "/presence");
                return;
            }
            for (auto it = p.begin(); it != p.end(); ++it) {
                std::string ep = ptr + "/presence/" + escape(it.key());
                if (!it.value().is_array()) {
                    error(codes::kType, "presence entries must be lists of clades", ep);
                    continue;
                }
                for (const auto& c : it.value())
                    if (!c.is_string() || !clades.count(c.get<std::string>()))
                        error(codes::kInvariant, "presence of '" + it.key() + "' names an undeclared clade", ep);
            }
        }
    }

    void resource(ResourceClass cls, const json& obj, const std::string& ptr, bool nested) {
        if (!obj.is_object()) {
            error(codes::kType, std::string(class_name(cls)) + " definition must be an object", ptr);
            return;
        }
        std::optional<std::string> rid;
        if (!obj.contains("id")) {
            error(codes::kRequired, std::string(class_name(cls)) + " without id", ptr);
        } else if (!obj["id"].is_string()) {
            error(codes::kType, "id must be a string", ptr + "/id");
        } else {
            rid = obj["id"].get<std::string>();
            try {
                if (Identifier::parse(*rid).has_prefix())
                    error(codes::kIdentifier, "declared id '" + *rid + "' must not carry a namespace prefix",
                          ptr + "/id", rid);
            } catch (const IdentifierError& e) {
                error(codes::kIdentifier,
                      "malformed id '" + *rid + "' at position " + std::to_string(e.position()) + ": " + e.what(),
                      ptr + "/id", rid);
            }
        }

        for (auto it = obj.begin(); it != obj.end(); ++it) {
            const std::string& key = it.key();
            std::string p = ptr + "/" + escape(key);
            if (key == "id") continue;
            if (key == "namespace") {
                if (!it->is_string() || !Identifier::valid_namespace(it->get<std::string>()))
                    error(codes::kIdentifier, "namespace must match [A-Za-z0-9_-]+", p, rid);
                continue;
            }
            if (key == "imported") {
                if (!it->is_boolean()) error(codes::kType, "imported must be a boolean", p, rid);
                continue;
            }
            if (key == "class" && nested) {
                if (!it->is_string() || !class_from_name(it->get<std::string>()))
                    error(codes::kEnum, "unknown resource class", p, rid);
                continue;
            }
            const PropertyDef* def = find_property(cls, key);
            if (!def) {
                warn(codes::kUnknownProperty,
                     "unknown " + std::string(class_name(cls)) + " property '" + key + "' (kept as is)", p, rid);
                continue;
            }
            value(*def, it.value(), p, rid);
        }
        class_rules(cls, obj, ptr, rid);
    }

    void reference(const PropertyDef& def, const json& v, const std::string& p,
                   const std::optional<std::string>& rid) {
        if (v.is_object()) {
            ResourceClass c = def.targets.front();
            if (v.contains("class") && v["class"].is_string())
                if (auto named = class_from_name(v["class"].get<std::string>())) c = *named;
            resource(c, v, p, true);
            return;
        }
        if (!v.is_string()) {
            error(codes::kType, "'" + std::string(def.name) + "' expects a reference", p, rid);
            return;
        }
        try {
            Identifier::parse(v.get<std::string>());
        } catch (const IdentifierError& e) {
            error(codes::kIdentifier,
                  "malformed reference '" + v.get<std::string>() + "' at position " + std::to_string(e.position()),
                  p, rid);
        }
    }

    void value(const PropertyDef& def, const json& v, const std::string& p, const std::optional<std::string>& rid) {
        std::string name(def.name);
        switch (def.kind) {
        case PropKind::String:
            if (!v.is_string()) error(codes::kType, "'" + name + "' must be a string", p, rid);
            break;
        case PropKind::Bool:
            if (!v.is_boolean()) error(codes::kType, "'" + name + "' must be a boolean", p, rid);
            break;
        case PropKind::Number:
            if (!v.is_number()) error(codes::kType, "'" + name + "' must be a number", p, rid);
            break;
        case PropKind::PositiveInteger:
            if (!v.is_number_integer() || v.get<long long>() <= 0)
                error(codes::kType, "'" + name + "' must be a positive integer", p, rid);
            break;
        case PropKind::Fraction:
            if (!v.is_number() || v.get<double>() < 0.0 || v.get<double>() > 1.0)
                error(codes::kType, "'" + name + "' must be a number in [0, 1]", p, rid);
            break;
        case PropKind::Enum: {
            bool ok = false;
            if (v.is_string())
                for (auto allowed : def.values) ok = ok || v.get<std::string>() == allowed;
            if (!ok) {
                std::string list;
                for (auto allowed : def.values) list += (list.empty() ? "" : ", ") + std::string(allowed);
                error(codes::kEnum, "'" + name + "' must be one of " + list, p, rid);
            }
            break;
        }
        case PropKind::Ref:
            reference(def, v, p, rid);
            break;
        case PropKind::RefList:
            if (!v.is_array()) {
                error(codes::kType, "'" + name + "' must be a list of references", p, rid);
                break;
            }
            for (std::size_t i = 0; i < v.size(); ++i) reference(def, v[i], p + "/" + std::to_string(i), rid);
            break;
        case PropKind::Vector:
        case PropKind::Vector2: {
            bool ok = v.is_array() && (v.size() == 2 || (def.kind == PropKind::Vector && v.size() == 3));
            if (ok)
                for (const auto& x : v) ok = ok && x.is_number();
            if (!ok)
                error(codes::kType,
                      "'" + name + "' must be " + (def.kind == PropKind::Vector ? "2 or 3" : "2") + " numbers", p,
                      rid);
            break;
        }
        case PropKind::CurieList:
            if (!v.is_array()) {
                error(codes::kType, "'" + name + "' must be a list of CURIEs", p, rid);
                break;
            }
            for (std::size_t i = 0; i < v.size(); ++i)
                if (!v[i].is_string() || !is_curie(v[i].get<std::string>()))
                    error(codes::kCurie, "ontology term must look like 'source:identifier'",
                          p + "/" + std::to_string(i), rid);
            break;
        }
    }

    void class_rules(ResourceClass cls, const json& obj, const std::string& ptr,
                     const std::optional<std::string>& rid) {
        auto has = [&](const char* k) { return obj.contains(k); };
        switch (cls) {
        case ResourceClass::Link:
        case ResourceClass::Wire:
            for (const char* end : {"source", "target"})
                if (!has(end))
                    error(codes::kRequired, std::string(class_name(cls)) + " requires '" + end + "'", ptr, rid);
            if (has("source") && has("target") && obj["source"].is_string() && obj["source"] == obj["target"])
                error(codes::kInvariant, "source and target must differ", ptr + "/target", rid);
            break;
        case ResourceClass::Chain: {
            int methods = int(has("numLevels")) + int(has("lyphs")) + int(has("housingLyphs"));
            if (methods > 1)
                error(codes::kAmbiguousChain,
                      "ambiguous chain definition: use exactly one of numLevels, lyphs, housingLyphs", ptr, rid);
            else if (methods == 0 && !has("levels"))
                error(codes::kRequired, "chain needs numLevels, lyphs, housingLyphs or levels", ptr, rid);
            break;
        }
        case ResourceClass::Lyph:
            if (obj.value("isTemplate", false) == true && has("conveys"))
                error(codes::kInvariant, "a lyph template cannot convey a link", ptr + "/conveys", rid);
            break;
        case ResourceClass::Node:
            if (has("offset") && !has("hostedBy"))
                error(codes::kInvariant, "offset requires hostedBy", ptr + "/offset", rid);
            break;
        case ResourceClass::Coalescence:
            if (!has("lyphs") || !obj["lyphs"].is_array() || obj["lyphs"].size() < 2)
                error(codes::kRequired, "coalescence needs at least two lyphs", ptr, rid);
            if (!has("kind")) error(codes::kRequired, "coalescence requires 'kind'", ptr, rid);
            break;
        default:
            break;
        }
    }

    std::string_view source_;
    ValidationReport& report_;
};

// Region border: all anchors (>= 3), or a cyclic sequence where adjacent
// wires share an endpoint; anchors between wires count as points.
bool border_closed(const Model& m, const Resource& region) {
    std::vector<std::pair<std::string, std::string>> wires;
    std::set<std::string> points;
    bool any_anchor = false;
    for (const auto& ref : region.refs("border")) {
        auto i = m.lookup(ref, region.ns);
        if (!i) return true;  // unresolved entries are reported elsewhere
        const Resource& e = m.at(*i);
        if (e.cls == ResourceClass::Anchor) {
            any_anchor = true;
            points.insert(e.key());
        } else if (e.cls == ResourceClass::Wire) {
            auto s = e.ref("source"), t = e.ref("target");
            auto si = s ? m.lookup(*s, e.ns) : std::nullopt;
            auto ti = t ? m.lookup(*t, e.ns) : std::nullopt;
            if (!si || !ti) return true;
            wires.emplace_back(m.at(*si).key(), m.at(*ti).key());
            points.insert(m.at(*si).key());
            points.insert(m.at(*ti).key());
        }
    }
    if (wires.empty() || any_anchor) return points.size() >= 3;
    if (wires.size() < 2) return false;
    for (std::size_t k = 0; k < wires.size(); ++k) {
        const auto& a = wires[k];
        const auto& b = wires[(k + 1) % wires.size()];
        bool touch = a.first == b.first || a.first == b.second || a.second == b.first || a.second == b.second;
        if (!touch) return false;
    }
    return true;
}

}  // namespace

ValidationReport validate_syntax(std::string_view text, std::string_view source) {
    ValidationReport report;
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        report.error(std::string(codes::kUnreadable), "document is not readable JSON: " + std::string(e.what()), {},
                     std::string(source) + "#");
        return report;
    }
    SyntaxChecker(source, report).document(doc);
    return report;
}

ValidationReport validate_document(const json& doc, std::string_view source) {
    ValidationReport report;
    SyntaxChecker(source, report).document(doc);
    return report;
}

ValidationReport validate_references(const Model& model, const std::set<std::string>& linked) {
    ValidationReport report;
    std::set<std::string> known = model.namespaces();
    known.insert(linked.begin(), linked.end());

    std::map<std::string, std::vector<std::size_t>> seen;
    for (std::size_t i = 0; i < model.size(); ++i) seen[model.at(i).key()].push_back(i);
    for (const auto& [key, where] : seen) {
        if (where.size() < 2) continue;
        const Resource& dup = model.at(where[1]);
        report.warn(std::string(codes::kDuplicate),
                    "duplicate definition of '" + key + "' (" + std::to_string(where.size()) +
                        " definitions, the first one is used)",
                    key, dup.origin);
    }

    for (const auto& r : model.resources()) {
        for (auto it = r.props.begin(); it != r.props.end(); ++it) {
            const PropertyDef* def = find_property(r.cls, it.key());
            if (!def || !def->is_reference()) continue;
            const bool list = def->kind == PropKind::RefList;
            auto values = r.refs(it.key());
            for (std::size_t j = 0; j < values.size(); ++j) {
                const std::string& v = values[j];
                std::string loc = r.origin + "/" + it.key() + (list ? "/" + std::to_string(j) : "");
                Resolution res;
                try {
                    res = model.resolve(v, r.ns);
                } catch (const IdentifierError& e) {
                    report.error(std::string(codes::kIdentifier), "malformed reference '" + v + "': " + e.what(),
                                 r.key(), loc);
                    continue;
                }
                switch (res.kind) {
                case Resolution::Kind::Found: {
                    const Resource& t = model.at(res.index);
                    bool ok = false;
                    for (auto c : def->targets) ok = ok || c == t.cls;
                    if (!ok)
                        report.error(std::string(codes::kClassMismatch),
                                     r.key() + "." + it.key() + " refers to " + std::string(class_name(t.cls)) +
                                         " '" + t.key() + "'",
                                     r.key(), loc);
                    break;
                }
                case Resolution::Kind::UnresolvedForeign:
                    report.error(std::string(codes::kUnresolvedForeign),
                                 known.count(res.ns)
                                     ? "'" + v + "' is not defined in namespace '" + res.ns + "'"
                                     : "'" + v + "' refers to namespace '" + res.ns + "', which is not linked",
                                 r.key(), loc);
                    break;
                case Resolution::Kind::UnresolvedLocal:
                    report.warn(std::string(codes::kUnresolvedLocal),
                                "'" + v + "' is not defined; a stub will be generated", r.key(), loc);
                    break;
                }
            }
        }
        if (r.cls == ResourceClass::Region && !border_closed(model, r))
            report.error(std::string(codes::kInvariant), "region border does not form a closed loop", r.key(),
                         r.origin + "/border");
    }

    for (const auto& [ref, clades] : model.variance.presence) {
        if (!model.lookup(ref, model.ns))
            report.warn("unresolved-variance", "variance entry '" + ref + "' matches no resource", ref,
                        "#/variance/presence");
        for (const auto& c : clades)
            if (std::find(model.variance.clades.begin(), model.variance.clades.end(), c) ==
                model.variance.clades.end())
                report.error(std::string(codes::kInvariant), "presence of '" + ref + "' names undeclared clade '" + c + "'",
                             ref, "#/variance/presence/" + ref);
    }
    return report;
}

ValidationReport validate_generated(const Model& model) {
    ValidationReport report;
    for (const auto& r : model.resources()) {
        if (r.cls == ResourceClass::Coalescence) {
            for (const auto& v : r.refs("lyphs")) {
                auto i = model.lookup(v, r.ns);
                if (i && model.at(*i).flag("isTemplate"))
                    report.error(std::string(codes::kInvariant),
                                 "coalescence member '" + v + "' is a template after generation", r.key(),
                                 r.origin + "/lyphs");
            }
        }
        if (r.cls == ResourceClass::Link) {
            auto s = r.ref("source"), t = r.ref("target");
            if (s && t) {
                auto si = model.lookup(*s, r.ns), ti = model.lookup(*t, r.ns);
                if (si && si == ti)
                    report.error(std::string(codes::kInvariant), "link source and target coincide", r.key(),
                                 r.origin);
            }
        }
    }
    return report;
}

}  // namespace lyphc
