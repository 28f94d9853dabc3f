#include "lyphc/composer.hpp"

#include <algorithm>
#include <map>

#include "lyphc/document.hpp"
#include "lyphc/relations.hpp"

namespace lyphc {

namespace {

std::optional<std::string> strip_prefix(const std::string& ref, const std::string& ns) {
    try {
        Identifier id = Identifier::parse(ref);
        if (id.has_prefix() && id.prefix() == ns) return id.local();
    } catch (const IdentifierError&) {
    }
    return std::nullopt;
}

void merge_meta(Model& base, const Model& other) {
    for (const auto& imp : other.imports)
        if (std::find(base.imports.begin(), base.imports.end(), imp) == base.imports.end())
            base.imports.push_back(imp);
    for (const auto& c : other.variance.clades)
        if (std::find(base.variance.clades.begin(), base.variance.clades.end(), c) == base.variance.clades.end())
            base.variance.clades.push_back(c);
}

bool has_scheme(const std::string& s) {
    auto p = s.find("://");
    return p != std::string::npos && p > 0 &&
           std::all_of(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(p),
                       [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '+'; });
}

}  // namespace

ComposeResult merge(const Model& base, const Model& other) {
    ComposeResult res;
    res.model = base;
    Model& m = res.model;
    std::set<std::string> seen;
    for (const auto& r : base.resources()) seen.insert(r.key());
    std::set<std::string> warned;

    for (Resource r : other.resources()) {
        if (r.ns == other.ns) r.ns = m.ns;
        rewrite_refs(r, [&](const std::string& v) { return strip_prefix(v, other.ns); });
        if (!seen.insert(r.key()).second && warned.insert(r.key()).second)
            res.report.warn("duplicate", "duplicate definition of '" + r.key() + "' after merge (first one is used)",
                            r.key(), r.origin);
        m.add(std::move(r));
    }
    merge_meta(m, other);
    for (const auto& [ref, clades] : other.variance.presence) {
        std::string key = strip_prefix(ref, other.ns).value_or(ref);
        m.variance.presence.try_emplace(key, clades);
    }
    return res;
}

ComposeResult join(const Model& base, const Model& other) {
    ComposeResult res;
    res.model = base;
    Model& m = res.model;
    std::set<std::string> seen;
    for (const auto& r : base.resources()) seen.insert(r.key());

    Resource group;
    group.cls = ResourceClass::Group;
    group.id = other.ns;
    group.ns = m.ns;
    group.props["name"] = other.name.empty() ? other.ns : other.name;
    group.props["description"] = "joined";
    for (const char* p : {"nodes", "links", "lyphs", "groups"}) group.props[p] = json::array();

    for (const auto& r : other.resources()) {
        if (!seen.insert(r.key()).second)
            res.report.warn("duplicate", "duplicate definition of '" + r.key() + "' after join (first one is used)",
                            r.key(), r.origin);
        std::string list;
        switch (r.cls) {
        case ResourceClass::Node: list = "nodes"; break;
        case ResourceClass::Link: list = "links"; break;
        case ResourceClass::Lyph: list = "lyphs"; break;
        case ResourceClass::Group: list = "groups"; break;
        default: break;
        }
        if (!list.empty()) group.props[list].push_back(Model::ref_text(m.ns, r));
        m.add(r);
    }
    for (const char* p : {"nodes", "links", "lyphs", "groups"})
        if (group.props[p].empty()) group.props.erase(p);

    if (m.find(m.ns, group.id)) {
        res.report.warn("duplicate", "a resource named '" + group.id + "' exists; join group renamed",
                        m.ns + ":" + group.id);
        std::string id = group.id + "_joined";
        for (int k = 2; m.find(m.ns, id); ++k) id = group.id + "_joined" + std::to_string(k);
        group.id = id;
    }
    m.add(std::move(group));
    merge_meta(m, other);
    for (const auto& [ref, clades] : other.variance.presence) {
        std::string key = ref.find(':') == std::string::npos ? other.ns + ":" + ref : ref;
        m.variance.presence.try_emplace(key, clades);
    }
    return res;
}

std::string resolve_location(const std::string& base, const std::string& ref) {
    if (has_scheme(ref) || base.empty()) return ref;
    if (has_scheme(base)) {
        if (!ref.empty() && ref[0] == '/') {
            auto p = base.find("://");
            auto slash = base.find('/', p + 3);
            return base.substr(0, slash) + ref;
        }
        return base.substr(0, base.rfind('/') + 1) + ref;
    }
    std::filesystem::path r(ref);
    if (r.is_absolute()) return ref;
    return (std::filesystem::path(base).parent_path() / r).lexically_normal().string();
}

LinkResult resolve_imports(const Model& spec, const Fetcher& fetcher, const std::string& base_url,
                           CachePolicy policy) {
    LinkResult res;
    res.model = spec;
    std::map<std::string, Model> loaded;  // url -> model
    std::vector<std::pair<std::string, std::string>> stack{{base_url, spec.ns}};

    std::function<void(const Model&, const std::string&)> visit = [&](const Model& from, const std::string& from_url) {
        for (const auto& imp : from.imports) {
            std::string url = resolve_location(from_url, imp.url);
            auto on_stack = std::find_if(stack.begin(), stack.end(),
                                         [&](const auto& e) { return !e.first.empty() && e.first == url; });
            if (on_stack != stack.end()) {
                std::string cycle;
                for (auto it = on_stack; it != stack.end(); ++it) cycle += it->first + " -> ";
                res.report.error("import-cycle", "import cycle: " + cycle + url, {}, url);
                continue;
            }
            if (loaded.count(url)) continue;

            FetchResult f = fetcher({url, imp.ns, policy});
            if (!f.ok) {
                res.report.error("fetch", "cannot fetch import '" + url + "': " + f.error, {}, url);
                continue;
            }
            Model m;
            try {
                m = parse_model_text(f.body);
            } catch (const std::exception& e) {
                res.report.error("fetch", "import '" + url + "' is not a model document: " + e.what(), {}, url);
                continue;
            }
            if (!imp.ns.empty() && imp.ns != m.ns) {
                res.report.error("import-namespace",
                                 "import '" + url + "' declares namespace '" + m.ns + "', expected '" + imp.ns + "'",
                                 {}, url);
                continue;
            }
            auto ns_cycle = std::find_if(stack.begin(), stack.end(), [&](const auto& e) { return e.second == m.ns; });
            if (ns_cycle != stack.end()) {
                std::string cycle;
                for (auto it = ns_cycle; it != stack.end(); ++it) cycle += it->second + " -> ";
                res.report.error("import-cycle", "import cycle: " + cycle + m.ns, {}, url);
                continue;
            }
            loaded.emplace(url, m);
            stack.emplace_back(url, m.ns);
            visit(m, url);
            stack.pop_back();
        }
    };
    visit(spec, base_url);

    std::set<std::string> present{spec.ns};
    for (const auto& r : spec.resources()) present.insert(r.ns);
    for (auto& [url, m] : loaded) {
        res.order.push_back(url);
        if (present.count(m.ns)) {
            res.report.warn("import-skipped", "namespace '" + m.ns + "' from '" + url + "' is already present", {},
                            url);
            continue;
        }
        present.insert(m.ns);
        res.linked.insert(m.ns);
        for (Resource r : m.resources()) {
            r.imported = true;
            res.model.add(std::move(r));
        }
    }
    return res;
}

}  // namespace lyphc
