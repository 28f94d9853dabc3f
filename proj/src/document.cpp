#include "lyphc/document.hpp"

namespace lyphc {

namespace {

const char* kReservedKeys[] = {"id", "namespace", "imported"};

bool reserved(std::string_view key) {
    for (const char* k : kReservedKeys)
        if (key == k) return true;
    return false;
}

std::string escape_pointer(std::string_view token) {
    std::string out;
    for (char c : token) {
        if (c == '~') out += "~0";
        else if (c == '/') out += "~1";
        else out += c;
    }
    return out;
}

ResourceClass nested_class(const json& obj, const PropertyDef& def) {
    if (auto it = obj.find("class"); it != obj.end() && it->is_string())
        if (auto c = class_from_name(it->get<std::string>())) return *c;
    return def.targets.front();
}

class Builder {
public:
    explicit Builder(Model& m) : model_(m) {}

    // Adds the resource at `obj` and every inline definition nested in it.
    void add(const json& obj, ResourceClass cls, const std::string& pointer, const std::string& home) {
        if (!obj.is_object()) return;
        auto id = obj.find("id");
        if (id == obj.end() || !id->is_string()) return;

        Resource r;
        r.cls = cls;
        r.id = id->get<std::string>();
        r.ns = home;
        if (auto it = obj.find("namespace"); it != obj.end() && it->is_string())
            r.ns = it->get<std::string>();
        if (auto it = obj.find("imported"); it != obj.end() && it->is_boolean())
            r.imported = it->get<bool>();
        r.origin = pointer;

        std::vector<std::tuple<json, ResourceClass, std::string>> nested;
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            const std::string& key = it.key();
            if (reserved(key)) continue;
            const PropertyDef* def = find_property(cls, key);
            json value = it.value();
            if (def && def->is_reference()) {
                std::string base = pointer + "/" + escape_pointer(key);
                if (value.is_object() && def->kind == PropKind::Ref) {
                    nested.emplace_back(value, nested_class(value, *def), base);
                    value = value.value("id", json());
                } else if (value.is_array()) {
                    for (std::size_t i = 0; i < value.size(); ++i) {
                        if (!value[i].is_object()) continue;
                        nested.emplace_back(value[i], nested_class(value[i], *def),
                                            base + "/" + std::to_string(i));
                        value[i] = value[i].value("id", json());
                    }
                }
            }
            r.props[key] = std::move(value);
        }
        std::string ns = r.ns;
        model_.add(std::move(r));
        for (auto& [child, c, ptr] : nested) {
            json copy = child;
            copy.erase("class");
            add(copy, c, ptr, ns);
        }
    }

private:
    Model& model_;
};

}  // namespace

Model parse_model(const json& doc) {
    if (!doc.is_object()) throw DocumentError("model document must be a JSON object");
    Model m;
    if (auto it = doc.find("id"); it != doc.end() && it->is_string()) m.id = it->get<std::string>();
    m.ns = m.id;
    if (auto it = doc.find("namespace"); it != doc.end() && it->is_string()) m.ns = it->get<std::string>();
    if (auto it = doc.find("name"); it != doc.end() && it->is_string()) m.name = it->get<std::string>();
    if (auto it = doc.find("description"); it != doc.end() && it->is_string())
        m.description = it->get<std::string>();
    if (auto it = doc.find("schemaVersion"); it != doc.end() && it->is_string())
        m.schema_version = it->get<std::string>();
    if (auto it = doc.find("generated"); it != doc.end() && it->is_boolean()) m.generated = it->get<bool>();
    if (auto it = doc.find("imports"); it != doc.end() && it->is_array()) {
        for (const auto& v : *it) {
            if (v.is_string()) m.imports.push_back({v.get<std::string>(), {}});
            else if (v.is_object() && v.contains("url") && v["url"].is_string())
                m.imports.push_back({v["url"].get<std::string>(), v.value("namespace", std::string())});
        }
    }
    if (auto it = doc.find("variance"); it != doc.end() && it->is_object()) {
        if (auto c = it->find("clades"); c != it->end() && c->is_array())
            for (const auto& v : *c)
                if (v.is_string()) m.variance.clades.push_back(v.get<std::string>());
        if (auto p = it->find("presence"); p != it->end() && p->is_object())
            for (auto e = p->begin(); e != p->end(); ++e) {
                std::vector<std::string> clades;
                if (e.value().is_array())
                    for (const auto& v : e.value())
                        if (v.is_string()) clades.push_back(v.get<std::string>());
                m.variance.presence[e.key()] = std::move(clades);
            }
    }

    static const std::set<std::string> known = {"id", "namespace", "name", "description", "schemaVersion",
                                                "generated", "imports", "variance"};
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (known.count(it.key()) || class_from_collection(it.key())) continue;
        m.extra[it.key()] = it.value();
    }

    Builder builder(m);
    for (ResourceClass c : kAllClasses) {
        auto it = doc.find(collection_name(c));
        if (it == doc.end() || !it->is_array()) continue;
        std::string base = "/" + std::string(collection_name(c));
        for (std::size_t i = 0; i < it->size(); ++i)
            builder.add((*it)[i], c, base + "/" + std::to_string(i), m.ns);
    }
    return m;
}

Model parse_model_text(std::string_view text) {
    json doc = json::parse(text.begin(), text.end(), nullptr, false);
    if (doc.is_discarded()) throw DocumentError("document is not valid JSON");
    return parse_model(doc);
}

json resource_to_json(const Resource& r, std::string_view model_ns) {
    json obj = r.props;
    obj["id"] = r.id;
    if (r.ns != model_ns) obj["namespace"] = r.ns;
    if (r.imported) obj["imported"] = true;
    return obj;
}

Resource resource_from_json(const json& obj, ResourceClass cls, std::string_view model_ns) {
    Resource r;
    r.cls = cls;
    r.id = obj.at("id").get<std::string>();
    r.ns = obj.contains("namespace") ? obj["namespace"].get<std::string>() : std::string(model_ns);
    r.imported = obj.value("imported", false);
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!reserved(it.key())) r.props[it.key()] = it.value();
    return r;
}

json to_json(const Model& model, DocumentKind kind) {
    json doc = json::object();
    for (auto it = model.extra.begin(); it != model.extra.end(); ++it) doc[it.key()] = it.value();
    doc["id"] = model.id;
    doc["namespace"] = model.ns;
    doc["schemaVersion"] = model.schema_version;
    if (model.generated) doc["generated"] = true;
    if (!model.name.empty()) doc["name"] = model.name;
    if (!model.description.empty()) doc["description"] = model.description;
    if (!model.imports.empty()) {
        json imports = json::array();
        for (const auto& imp : model.imports) {
            if (imp.ns.empty()) imports.push_back(imp.url);
            else imports.push_back({{"url", imp.url}, {"namespace", imp.ns}});
        }
        doc["imports"] = std::move(imports);
    }
    if (!model.variance.empty()) {
        json presence = json::object();
        for (const auto& [k, v] : model.variance.presence) presence[k] = v;
        doc["variance"] = {{"clades", model.variance.clades}, {"presence", presence}};
    }
    for (ResourceClass c : kAllClasses) {
        json arr = json::array();
        for (const auto& r : model.resources()) {
            if (r.cls != c) continue;
            if (kind == DocumentKind::Input && r.imported) continue;
            arr.push_back(resource_to_json(r, model.ns));
        }
        if (!arr.empty()) doc[std::string(collection_name(c))] = std::move(arr);
    }
    return doc;
}

std::string canonical_text(const json& doc) {
    return doc.dump(2) + "\n";
}

std::string serialize(const Model& model, DocumentKind kind) {
    return canonical_text(to_json(model, kind));
}

bool structurally_equal(const Model& a, const Model& b) {
    return to_json(a, DocumentKind::Generated) == to_json(b, DocumentKind::Generated);
}

}  // namespace lyphc
