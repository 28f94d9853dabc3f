#include "lyphc/generator.hpp"

#include <algorithm>

#include "lyphc/analysis.hpp"
#include "lyphc/relations.hpp"
#include "lyphc/schema.hpp"

namespace lyphc {

namespace {

// Properties a copy does not inherit from its original.
const std::set<std::string> kNotCopied = {"isTemplate", "supertype",  "subtypes",      "layers",
                                          "layerIn",    "internalIn", "conveys",       "internalLyphs",
                                          "internalNodes", "materialIn", "generated",  "hostedBy"};

Resource fresh(ResourceClass cls, std::string id, std::string ns, bool imported) {
    Resource r;
    r.cls = cls;
    r.id = std::move(id);
    r.ns = std::move(ns);
    r.imported = imported;
    r.props["generated"] = true;
    return r;
}

void require_free(const Model& m, const std::string& ns, const std::string& id) {
    if (m.find(ns, id)) throw GenerationError("generated id '" + ns + ":" + id + "' collides with an existing resource");
}

std::size_t copy_lyph(Model& m, std::size_t src_index, const std::string& id, const std::string& ns, bool imported,
                      GenerationTrace* trace) {
    require_free(m, ns, id);
    const Resource src = m.at(src_index);
    Resource r = fresh(ResourceClass::Lyph, id, ns, imported);
    for (auto it = src.props.begin(); it != src.props.end(); ++it)
        if (!kNotCopied.count(it.key())) r.props[it.key()] = it.value();
    r.props["supertype"] = Model::ref_text(ns, src);
    std::size_t idx = m.add(std::move(r));
    if (trace) {
        trace->record(m.at(idx), Cause::TemplateInstance);
        trace->source_template[m.at(idx).key()] = src.key();
    }
    m.at(src_index).add_ref("subtypes", Model::ref_text(src.ns, m.at(idx)));

    auto layers = src.refs("layers");
    for (std::size_t j = 0; j < layers.size(); ++j) {
        auto li = m.lookup(layers[j], src.ns);
        if (!li) throw GenerationError("layer '" + layers[j] + "' of '" + src.key() + "' does not resolve");
        std::string child = id + "_" + std::to_string(j + 1);
        if (m.at(*li).cls == ResourceClass::Lyph) {
            copy_lyph(m, *li, child, ns, imported, trace);
        } else {
            require_free(m, ns, child);
            const Resource mat = m.at(*li);
            Resource r2 = fresh(ResourceClass::Lyph, child, ns, imported);
            if (auto n = mat.text("name")) r2.props["name"] = *n;
            r2.props["materials"] = json::array({Model::ref_text(ns, mat)});
            std::size_t k = m.add(std::move(r2));
            if (trace) {
                trace->record(m.at(k), Cause::TemplateInstance);
                trace->source_template[m.at(k).key()] = mat.key();
            }
        }
        m.at(idx).add_ref("layers", child);
    }
    return idx;
}

}  // namespace

std::string_view cause_name(Cause c) noexcept {
    switch (c) {
    case Cause::Stub: return "stub";
    case Cause::TemplateInstance: return "template-instance";
    case Cause::ChainLevel: return "chain-level";
    case Cause::ChainNode: return "chain-node";
    case Cause::ChainGroup: return "chain-group";
    case Cause::Neurulated: return "neurulated";
    }
    return "?";
}

bool GenerationTrace::contains(std::string_view key) const {
    return std::any_of(created.begin(), created.end(), [&](const TraceEntry& e) { return e.key == key; });
}

ValidationReport autogenerate_stubs(Model& model, GenerationTrace* trace) {
    ValidationReport report;
    struct Need {
        std::string ns, local;
        std::vector<ResourceClass> classes;
        std::vector<std::string> users;
        bool imported = true;
    };
    std::vector<Need> needs;
    std::map<std::string, std::size_t> by_key;

    for (const auto& r : model.resources()) {
        for (auto it = r.props.begin(); it != r.props.end(); ++it) {
            const PropertyDef* def = find_property(r.cls, it.key());
            if (!def || !def->is_reference()) continue;
            for (const auto& v : r.refs(it.key())) {
                Resolution res;
                try {
                    res = model.resolve(v, r.ns);
                } catch (const IdentifierError&) {
                    continue;
                }
                if (res.kind != Resolution::Kind::UnresolvedLocal) continue;
                auto [pos, inserted] = by_key.try_emplace(res.key(), needs.size());
                if (inserted) needs.push_back({res.ns, res.local, def->targets, {}, true});
                Need& n = needs[pos->second];
                std::vector<ResourceClass> keep;
                for (auto c : n.classes)
                    if (std::find(def->targets.begin(), def->targets.end(), c) != def->targets.end())
                        keep.push_back(c);
                n.classes = std::move(keep);
                n.users.push_back(r.key() + "." + it.key());
                n.imported = n.imported && r.imported;
            }
        }
    }

    for (const auto& n : needs) {
        std::string key = n.ns + ":" + n.local;
        if (n.classes.empty()) {
            std::string users;
            for (const auto& u : n.users) users += (users.empty() ? "" : ", ") + u;
            report.error("stub-class", "cannot infer a class for '" + key + "': referenced as incompatible kinds by " +
                                           users,
                         key);
            continue;
        }
        std::size_t i = model.add(fresh(n.classes.front(), n.local, n.ns, n.imported));
        if (trace) trace->record(model.at(i), Cause::Stub);
    }
    return report;
}

std::size_t instantiate_lyph_template(Model& model, std::size_t template_index, const std::string& context,
                                      const std::string& context_ns, GenerationTrace* trace) {
    const Resource& t = model.at(template_index);
    if (t.cls != ResourceClass::Lyph || !t.flag("isTemplate"))
        throw GenerationError("'" + t.key() + "' is not a lyph template");
    bool imported = context_ns != model.ns;
    return copy_lyph(model, template_index, t.id + "_" + context, context_ns, imported, trace);
}

ChainExpansion expand_chain(Model& m, std::size_t ci, ValidationReport& report, GenerationTrace* trace) {
    ChainExpansion out;
    const Resource chain = m.at(ci);
    if (!chain.refs("levels").empty()) return out;
    const std::string home = chain.ns;
    const std::string loc = chain.origin;
    auto fail = [&](const std::string& msg) {
        report.error("chain", "chain '" + chain.key() + "': " + msg, chain.key(), loc);
        return out;
    };

    int method = chain.has("numLevels") ? 1 : chain.has("lyphs") ? 2 : chain.has("housingLyphs") ? 3 : 0;
    if (method == 0) return fail("no definition method (numLevels, lyphs or housingLyphs)");

    std::vector<std::size_t> given;  // lyphs (method 2) or housing lyphs (method 3)
    std::size_t n = 0;
    if (method == 1) {
        auto v = chain.props["numLevels"];
        if (!v.is_number_integer() || v.get<long long>() <= 0) return fail("numLevels must be a positive integer");
        n = static_cast<std::size_t>(v.get<long long>());
    } else {
        const char* prop = method == 2 ? "lyphs" : "housingLyphs";
        for (const auto& ref : chain.refs(prop)) {
            auto i = m.lookup(ref, home);
            if (!i || m.at(*i).cls != ResourceClass::Lyph)
                return fail(std::string(method == 2 ? "lyph" : "housing lyph") + " '" + ref + "' does not resolve");
            given.push_back(*i);
        }
        n = given.size();
    }
    if (n == 0) return fail("chain has no levels");

    std::optional<std::size_t> templ;
    if (auto t = chain.ref("lyphTemplate")) {
        templ = m.lookup(*t, home);
        if (!templ) return fail("lyph template '" + *t + "' does not resolve");
        if (!m.at(*templ).flag("isTemplate")) return fail("'" + *t + "' is not a lyph template");
    }

    std::optional<std::size_t> root, leaf;
    for (auto [prop, slot] : {std::pair{"root", &root}, std::pair{"leaf", &leaf}}) {
        if (auto r = chain.ref(prop)) {
            *slot = m.lookup(*r, home);
            if (!*slot || m.at(**slot).cls != ResourceClass::Node)
                return fail(std::string(prop) + " '" + *r + "' does not resolve to a node");
        }
    }
    if (root && leaf && *root == *leaf && n == 1) return fail("root and leaf coincide");

    std::vector<std::string> new_ids;
    if (!root) new_ids.push_back(chain.id + "_root");
    for (std::size_t i = 1; i < n; ++i) new_ids.push_back(chain.id + "_node" + std::to_string(i));
    if (!leaf) new_ids.push_back(chain.id + "_leaf");
    for (std::size_t i = 1; i <= n; ++i) new_ids.push_back(chain.id + "_lnk" + std::to_string(i));
    new_ids.push_back(chain.id + "_group");
    for (const auto& id : new_ids)
        if (m.find(home, id)) return fail("generated id '" + id + "' collides with an existing resource");

    try {
        std::vector<std::string> node_refs;
        auto make_node = [&](const std::string& id) {
            std::size_t k = m.add(fresh(ResourceClass::Node, id, home, chain.imported));
            if (trace) trace->record(m.at(k), Cause::ChainNode);
            out.nodes.push_back(m.at(k).key());
            node_refs.push_back(id);
            return k;
        };
        if (root) {
            out.nodes.push_back(m.at(*root).key());
            node_refs.push_back(Model::ref_text(home, m.at(*root)));
        } else {
            make_node(chain.id + "_root");
        }
        std::vector<std::size_t> interior;
        for (std::size_t i = 1; i < n; ++i) interior.push_back(make_node(chain.id + "_node" + std::to_string(i)));
        if (leaf) {
            out.nodes.push_back(m.at(*leaf).key());
            node_refs.push_back(Model::ref_text(home, m.at(*leaf)));
        } else {
            make_node(chain.id + "_leaf");
        }

        std::vector<std::string> link_ids, lyph_refs;
        for (std::size_t i = 0; i < n; ++i) {
            std::string lid = chain.id + "_lnk" + std::to_string(i + 1);
            Resource link = fresh(ResourceClass::Link, lid, home, chain.imported);
            link.props["source"] = node_refs[i];
            link.props["target"] = node_refs[i + 1];
            link.props["levelIn"] = chain.id;
            std::size_t li = m.add(std::move(link));
            if (trace) trace->record(m.at(li), Cause::ChainLevel);
            out.links.push_back(m.at(li).key());
            link_ids.push_back(lid);

            std::optional<std::size_t> conveyed;
            if (method == 2) {
                conveyed = given[i];
                if (m.at(given[i]).flag("isTemplate"))
                    conveyed = instantiate_lyph_template(m, given[i], lid, home, trace);
            } else if (templ) {
                conveyed = instantiate_lyph_template(m, *templ, lid, home, trace);
                if (method == 3) m.at(*conveyed).props["internalIn"] = Model::ref_text(home, m.at(given[i]));
            }
            if (conveyed) {
                std::string text = Model::ref_text(home, m.at(*conveyed));
                m.at(m.lookup(lid, home).value()).props["conveyingLyph"] = text;
                out.lyphs.push_back(m.at(*conveyed).key());
                lyph_refs.push_back(text);
            }
        }

        if (method == 3)
            for (std::size_t i = 1; i < n; ++i)
                m.at(interior[i - 1]).props["borderOf"] =
                    json::array({Model::ref_text(home, m.at(given[i - 1])), Model::ref_text(home, m.at(given[i]))});

        Resource& c = m.at(ci);
        c.props["levels"] = link_ids;
        if (!root) c.props["root"] = node_refs.front();
        if (!leaf) c.props["leaf"] = node_refs.back();

        Resource group = fresh(ResourceClass::Group, chain.id + "_group", home, chain.imported);
        if (auto name = chain.text("name")) group.props["name"] = *name;
        group.props["description"] = "chain";
        group.props["nodes"] = node_refs;
        group.props["links"] = link_ids;
        if (!lyph_refs.empty()) group.props["lyphs"] = lyph_refs;
        std::size_t gi = m.add(std::move(group));
        if (trace) trace->record(m.at(gi), Cause::ChainGroup);
        out.group = m.at(gi).key();
    } catch (const GenerationError& e) {
        report.error("chain", "chain '" + chain.key() + "': " + e.what(), chain.key(), loc);
    }
    return out;
}

GenerateResult generate(const Model& spec, const GenerateOptions& options) {
    GenerateResult res;
    res.model = spec;
    Model& m = res.model;
    ValidationReport& report = res.report;

    report.merge(validate_references(m));
    if (report.has_errors()) return res;
    report.merge(autogenerate_stubs(m, &res.trace));
    if (report.has_errors()) return res;
    report.merge(sync_relations(m));
    if (report.has_errors()) return res;
    report.merge(composition_cycle_check(m));
    if (report.has_errors()) return res;

    for (std::size_t ci : m.of_class(ResourceClass::Chain)) expand_chain(m, ci, report, &res.trace);
    if (report.has_errors()) return res;
    report.merge(sync_relations(m));
    if (report.has_errors()) return res;

    if (options.neurulate) {
        auto nr = neurulate(m);
        report.merge(nr.report);
        for (const auto& g : nr.groups) res.trace.record(g, Cause::Neurulated);
        replace_neurulated(m, std::move(nr.groups));
    }
    report.merge(validate_generated(m));
    m.generated = true;
    return res;
}

}  // namespace lyphc
