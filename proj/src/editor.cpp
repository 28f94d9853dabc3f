#include "lyphc/editor.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "lyphc/document.hpp"
#include "lyphc/identifier.hpp"

namespace lyphc {

namespace {

constexpr std::pair<EditKind, std::string_view> kKinds[] = {
    {EditKind::Create, "CREATE"},
    {EditKind::Update, "UPDATE"},
    {EditKind::Delete, "DELETE"},
    {EditKind::Rename, "RENAME"},
    {EditKind::CloneSubgraph, "CLONE_SUBGRAPH"},
    {EditKind::SplitChain, "SPLIT_CHAIN"},
    {EditKind::MergeChains, "MERGE_CHAINS"},
    {EditKind::Annotate, "ANNOTATE"},
};

// --- snapshots and restore patches -------------------------------------------

struct Snap {
    std::size_t index;
    ResourceClass cls;
    json value;
};

std::map<std::string, Snap> snapshot(const Model& m) {
    std::map<std::string, Snap> out;
    for (std::size_t i = 0; i < m.size(); ++i)
        out.try_emplace(m.at(i).key(), Snap{i, m.at(i).cls, resource_to_json(m.at(i), m.ns)});
    return out;
}

json variance_json(const Variance& v) {
    json presence = json::object();
    for (const auto& [k, c] : v.presence) presence[k] = c;
    return {{"clades", v.clades}, {"presence", presence}};
}

Variance variance_from(const json& j) {
    Variance v;
    v.clades = j.at("clades").get<std::vector<std::string>>();
    for (const auto& [k, c] : j.at("presence").items()) v.presence[k] = c.get<std::vector<std::string>>();
    return v;
}

// Patch taking `after` back to `before`; fills `diff` with the forward changes.
json make_restore(const Model& before, const Model& after, EditDiff& diff) {
    auto b = snapshot(before), a = snapshot(after);
    json entries = json::array();
    for (const auto& [key, s] : b) {
        auto it = a.find(key);
        if (it == a.end()) {
            diff.deleted.push_back(key);
        } else if (it->second.cls != s.cls || it->second.value != s.value) {
            diff.updated.push_back(key);
        } else {
            continue;
        }
        entries.push_back({{"key", key}, {"class", class_name(s.cls)}, {"index", s.index}, {"value", s.value}});
    }
    for (const auto& [key, s] : a)
        if (!b.count(key)) {
            diff.created.push_back(key);
            entries.push_back({{"key", key}, {"class", class_name(s.cls)}, {"index", s.index}, {"value", nullptr}});
        }
    return {{"resources", entries}, {"variance", variance_json(before.variance)}, {"generated", before.generated}};
}

void apply_restore(Model& m, const json& patch) {
    const json& entries = patch.at("resources");
    for (const auto& e : entries)
        if (e.at("value").is_null())
            if (auto i = m.find_key(e.at("key").get<std::string>())) m.erase(*i);
    std::vector<const json*> inserts;
    for (const auto& e : entries) {
        if (e.at("value").is_null()) continue;
        auto cls = class_from_name(e.at("class").get<std::string>());
        if (!cls) throw EditError("restore: unknown class");
        if (auto i = m.find_key(e.at("key").get<std::string>())) m.replace(*i, resource_from_json(e["value"], *cls, m.ns));
        else inserts.push_back(&e);
    }
    std::sort(inserts.begin(), inserts.end(),
              [](const json* x, const json* y) { return x->at("index").get<std::size_t>() < y->at("index").get<std::size_t>(); });
    for (const json* e : inserts) {
        auto cls = class_from_name(e->at("class").get<std::string>());
        std::size_t pos = std::min(e->at("index").get<std::size_t>(), m.size());
        m.insert(pos, resource_from_json(e->at("value"), *cls, m.ns));
    }
    m.variance = variance_from(patch.at("variance"));
    m.generated = patch.at("generated").get<bool>();
}

// --- reference helpers --------------------------------------------------------

enum class RefAction { Keep, Drop };

// Visits every reference value; `f` may rewrite the value in place or drop it.
std::size_t edit_refs(Resource& r, const std::function<RefAction(std::string_view prop, std::string& value)>& f) {
    std::size_t changed = 0;
    std::vector<std::string> emptied;
    for (auto it = r.props.begin(); it != r.props.end(); ++it) {
        const PropertyDef* def = find_property(r.cls, it.key());
        if (!def || !def->is_reference()) continue;
        json& v = it.value();
        if (v.is_string()) {
            std::string s = v.get<std::string>();
            if (f(it.key(), s) == RefAction::Drop) {
                emptied.push_back(it.key());
                ++changed;
            } else if (s != v.get<std::string>()) {
                v = s;
                ++changed;
            }
        } else if (v.is_array()) {
            json out = json::array();
            for (const auto& e : v) {
                if (!e.is_string()) {
                    out.push_back(e);
                    continue;
                }
                std::string s = e.get<std::string>();
                if (f(it.key(), s) == RefAction::Drop) {
                    ++changed;
                    continue;
                }
                if (s != e.get<std::string>()) ++changed;
                if (std::find(out.begin(), out.end(), json(s)) == out.end()) out.push_back(s);
            }
            if (out.empty()) emptied.push_back(it.key());
            else v = std::move(out);
        }
    }
    for (const auto& p : emptied) r.props.erase(p);
    return changed;
}

std::vector<std::size_t> resolved(const Model& m, const Resource& r, std::string_view p) {
    std::vector<std::size_t> out;
    for (const auto& v : r.refs(p))
        if (auto i = m.lookup(v, r.ns)) out.push_back(*i);
    return out;
}

void remove_refs_to(Model& m, std::size_t holder, std::string_view prop, std::size_t target) {
    Resource& r = m.at(holder);
    auto it = r.props.find(prop);
    if (it == r.props.end()) return;
    auto points = [&](const json& v) { return v.is_string() && m.lookup(v.get<std::string>(), r.ns) == target; };
    if (it->is_string()) {
        if (points(*it)) r.props.erase(it);
    } else if (it->is_array()) {
        it->erase(std::remove_if(it->begin(), it->end(), points), it->end());
        if (it->empty()) r.props.erase(it);
    }
}

// Keeps inverse sides in step after `p` of resource i changed from `old`.
void relink(Model& m, std::size_t i, std::string_view p, const std::vector<std::size_t>& old, ValidationReport& report) {
    const Resource& r = m.at(i);
    auto now = resolved(m, r, p);
    for (std::size_t t : old) {
        if (std::find(now.begin(), now.end(), t) != now.end()) continue;
        if (const RelationEnd* rel = find_relation(r.cls, p, m.at(t).cls)) remove_refs_to(m, t, rel->inverse, i);
    }
    for (std::size_t t : now) {
        const RelationEnd* rel = find_relation(m.at(i).cls, p, m.at(t).cls);
        if (!rel) continue;
        Resource& target = m.at(t);
        const PropertyDef* inv = find_property(target.cls, rel->inverse);
        if (!inv) continue;
        std::string text = Model::ref_text(target, m.at(i));
        if (inv->kind == PropKind::RefList) {
            bool present = false;
            for (const auto& v : target.refs(rel->inverse)) present = present || m.lookup(v, target.ns) == i;
            if (!present) target.add_ref(rel->inverse, text);
        } else if (auto cur = target.ref(rel->inverse)) {
            if (m.lookup(*cur, target.ns) != i)
                report.error("relation-conflict",
                             "'" + target.key() + "." + std::string(rel->inverse) + "' already points to '" + *cur +
                                 "', not '" + m.at(i).key() + "'",
                             target.key());
        } else {
            target.set(rel->inverse, text);
        }
    }
}

void relink_all(Model& m, std::size_t i, ValidationReport& report) {
    std::vector<std::string> props;
    for (const auto& [p, v] : m.at(i).props.items())
        if (is_relational(m.at(i).cls, p)) props.push_back(p);
    for (const auto& p : props) relink(m, i, p, {}, report);
}

// --- operations ---------------------------------------------------------------

struct Ctx {
    Model& m;
    ValidationReport& report;
    EditDiff& diff;
};

// "namespace prop value" for every reference value that does not resolve.
std::multiset<std::string> unresolved_refs(const Model& m) {
    std::multiset<std::string> out;
    for (const auto& r : m.resources()) {
        Resource copy = r;
        edit_refs(copy, [&](std::string_view prop, std::string& v) {
            if (!m.lookup(v, r.ns)) out.insert(r.ns + " " + std::string(prop) + " '" + v + "'");
            return RefAction::Keep;
        });
    }
    return out;
}

std::optional<std::size_t> target_of(Ctx& c, const std::string& target, std::optional<ResourceClass> cls = {}) {
    auto i = c.m.lookup(target, c.m.ns);
    if (!i) {
        c.report.error("dangling-target", "no resource '" + target + "'", target);
        return std::nullopt;
    }
    if (cls && c.m.at(*i).cls != *cls) {
        c.report.error("target-class",
                       "'" + target + "' is a " + std::string(class_name(c.m.at(*i).cls)) + ", expected " +
                           std::string(class_name(*cls)),
                       target);
        return std::nullopt;
    }
    return i;
}

std::string payload_text(Ctx& c, const json& payload, const char* key) {
    auto it = payload.find(key);
    if (it == payload.end() || !it->is_string() || it->get<std::string>().empty()) {
        c.report.error("payload", std::string("payload needs a non-empty string '") + key + "'");
        return {};
    }
    return it->get<std::string>();
}

void op_create(Ctx& c, const EditOp& op) {
    Identifier id;
    try {
        id = Identifier::parse(op.target);
    } catch (const IdentifierError& e) {
        c.report.error("identifier", e.what(), op.target);
        return;
    }
    std::string ns = id.has_prefix() ? id.prefix() : c.m.ns;
    if (c.m.find(ns, id.local())) {
        c.report.error("create-collision", "'" + ns + ":" + id.local() + "' already exists", op.target);
        return;
    }
    std::string cname = op.payload.value("class", "");
    auto cls = class_from_name(cname);
    if (!cls) {
        c.report.error("payload", "CREATE needs a known 'class', got '" + cname + "'", op.target);
        return;
    }
    Resource r;
    r.cls = *cls;
    r.id = id.local();
    r.ns = ns;
    for (const auto& [k, v] : op.payload.items())
        if (k != "class" && k != "id" && k != "namespace") r.props[k] = v;
    std::size_t i = c.m.add(std::move(r));
    relink_all(c.m, i, c.report);
}

void op_update(Ctx& c, const EditOp& op) {
    if (op.target.empty() && op.payload.contains("restore")) {
        apply_restore(c.m, op.payload["restore"]);
        return;
    }
    auto i = target_of(c, op.target);
    if (!i) return;
    for (const auto& [k, v] : op.payload.items()) {
        if (k == "id" || k == "class" || k == "namespace") {
            c.report.error("payload", "UPDATE cannot change '" + k + "'", op.target);
            return;
        }
        bool relational = is_relational(c.m.at(*i).cls, k);
        auto old = relational ? resolved(c.m, c.m.at(*i), k) : std::vector<std::size_t>{};
        if (v.is_null()) c.m.at(*i).props.erase(k);
        else c.m.at(*i).props[k] = v;
        if (relational) relink(c.m, *i, k, old, c.report);
    }
}

// Generated chains that lose a piece are stripped back to their definition.
void generated_layers(const Model& m, std::size_t y, std::set<std::size_t>& out) {
    for (std::size_t k : resolved(m, m.at(y), "layers"))
        if (m.at(k).generated() && out.insert(k).second) generated_layers(m, k, out);
}

// Chains touched by removing `gone` lose their levels; their generated parts
// are returned for removal so the chain can be generated again.
std::set<std::size_t> invalidate_chains(Ctx& c, std::size_t gone) {
    std::set<std::size_t> parts;
    for (std::size_t ci : c.m.of_class(ResourceClass::Chain)) {
        Resource& chain = c.m.at(ci);
        auto levels = resolved(c.m, chain, "levels");
        if (levels.empty()) continue;
        bool hit = ci == gone;
        for (std::size_t l : levels) {
            if (l == gone) hit = true;
            const Resource& link = c.m.at(l);
            for (const char* p : {"source", "target", "conveyingLyph"})
                if (auto v = link.ref(p); v && c.m.lookup(*v, link.ns) == gone) hit = true;
        }
        if (!hit) continue;
        for (std::size_t l : levels) {
            const Resource& link = c.m.at(l);
            if (!link.generated()) continue;
            parts.insert(l);
            for (const char* p : {"source", "target", "conveyingLyph"})
                if (auto v = link.ref(p))
                    if (auto t = c.m.lookup(*v, link.ns); t && c.m.at(*t).generated()) {
                        parts.insert(*t);
                        if (c.m.at(*t).cls == ResourceClass::Lyph) generated_layers(c.m, *t, parts);
                    }
        }
        if (auto g = c.m.find(chain.ns, chain.id + "_group"); g && c.m.at(*g).generated()) parts.insert(*g);
        if (ci == gone) continue;
        for (std::size_t l : levels) remove_refs_to(c.m, l, "levelIn", ci);
        chain.props.erase("levels");
        c.m.generated = false;
        c.diff.notes.push_back("chain '" + chain.key() + "' invalidated; regenerate the model");
    }
    parts.erase(gone);
    return parts;
}

void op_delete(Ctx& c, const EditOp& op) {
    auto i = target_of(c, op.target);
    if (!i) return;
    std::set<std::size_t> doomed = invalidate_chains(c, *i);
    doomed.insert(*i);
    auto is_doomed = [&](const std::string& v, const std::string& home) {
        auto t = c.m.lookup(v, home);
        return t && doomed.count(*t);
    };
    for (std::size_t j = 0; j < c.m.size(); ++j) {
        if (doomed.count(j)) continue;
        Resource& r = c.m.at(j);
        c.diff.rewritten_refs += edit_refs(r, [&](std::string_view, std::string& v) {
            return is_doomed(v, r.ns) ? RefAction::Drop : RefAction::Keep;
        });
    }
    for (auto it = c.m.variance.presence.begin(); it != c.m.variance.presence.end();)
        it = is_doomed(it->first, c.m.ns) ? c.m.variance.presence.erase(it) : std::next(it);
    for (auto it = doomed.rbegin(); it != doomed.rend(); ++it) c.m.erase(*it);
}

void op_rename(Ctx& c, const EditOp& op) {
    auto i = target_of(c, op.target);
    if (!i) return;
    std::string text = payload_text(c, op.payload, "id");
    if (text.empty()) return;
    Identifier id;
    try {
        id = Identifier::parse(text);
    } catch (const IdentifierError& e) {
        c.report.error("identifier", e.what(), op.target);
        return;
    }
    Resource renamed = c.m.at(*i);
    if (id.has_prefix() && id.prefix() != renamed.ns) {
        c.report.error("rename-namespace", "RENAME keeps the namespace '" + renamed.ns + "'", op.target);
        return;
    }
    if (c.m.find(renamed.ns, id.local())) {
        c.report.error("rename-collision", "'" + renamed.ns + ":" + id.local() + "' already exists", op.target);
        return;
    }
    renamed.id = id.local();
    for (std::size_t j = 0; j < c.m.size(); ++j) {
        Resource& r = c.m.at(j);
        c.diff.rewritten_refs += edit_refs(r, [&](std::string_view, std::string& v) {
            if (c.m.lookup(v, r.ns) == *i) v = Model::ref_text(r.ns, renamed);
            return RefAction::Keep;
        });
    }
    std::map<std::string, std::vector<std::string>> presence;
    for (auto& [k, v] : c.m.variance.presence)
        presence[c.m.lookup(k, c.m.ns) == *i ? Model::ref_text(c.m.ns, renamed) : k] = v;
    c.m.variance.presence = std::move(presence);
    c.m.at(*i).id = renamed.id;
    c.m.reindex();
}

void op_annotate(Ctx& c, const EditOp& op) {
    auto i = target_of(c, op.target);
    if (!i) return;
    Resource& r = c.m.at(*i);
    auto list = [&](const char* key) {
        std::vector<std::string> out;
        if (auto it = op.payload.find(key); it != op.payload.end()) {
            for (const auto& v : *it) {
                std::string s = v.is_string() ? v.get<std::string>() : v.dump();
                if (!is_curie(s)) c.report.error("curie", "'" + s + "' is not a CURIE", op.target);
                out.push_back(s);
            }
        }
        return out;
    };
    auto add = list("add"), remove = list("remove");
    if (c.report.has_errors()) return;
    for (const auto& t : remove) r.remove_ref("ontologyTerms", t);
    for (const auto& t : add) r.add_ref("ontologyTerms", t);
}

void collect_group(const Model& m, std::size_t g, std::set<std::size_t>& out) {
    if (!out.insert(g).second) return;
    const Resource& grp = m.at(g);
    for (const char* p : {"nodes", "links", "lyphs", "groups"})
        for (std::size_t k : resolved(m, grp, p)) {
            if (m.at(k).cls == ResourceClass::Group) collect_group(m, k, out);
            else out.insert(k);
        }
}

void collect_layers(const Model& m, std::size_t y, std::set<std::size_t>& out) {
    for (std::size_t k : resolved(m, m.at(y), "layers"))
        if (m.at(k).cls == ResourceClass::Lyph && out.insert(k).second) collect_layers(m, k, out);
}

void op_clone(Ctx& c, const EditOp& op) {
    auto g = target_of(c, op.target, ResourceClass::Group);
    if (!g) return;
    std::string suffix = payload_text(c, op.payload, "suffix");
    if (suffix.empty()) return;
    std::set<std::size_t> members;
    collect_group(c.m, *g, members);
    for (std::size_t y : std::set<std::size_t>(members))
        if (c.m.at(y).cls == ResourceClass::Lyph) collect_layers(c.m, y, members);

    std::map<std::size_t, Resource> copies;
    for (std::size_t k : members) {
        Resource r = c.m.at(k);
        r.id += suffix;
        r.imported = false;
        if (!Identifier::valid(r.id)) {
            c.report.error("identifier", "'" + r.id + "' is not a valid identifier", op.target);
            return;
        }
        if (c.m.find(r.ns, r.id)) {
            c.report.error("clone-collision", "'" + r.key() + "' already exists", op.target);
            return;
        }
        copies.emplace(k, std::move(r));
    }
    for (auto& [k, r] : copies) {
        const std::string home = c.m.at(k).ns;
        edit_refs(r, [&](std::string_view prop, std::string& v) {
            auto t = c.m.lookup(v, home);
            if (!t) return RefAction::Keep;
            if (auto it = copies.find(*t); it != copies.end()) {
                v = Model::ref_text(r.ns, it->second);
                return RefAction::Keep;
            }
            // External targets whose inverse side holds a single value stay with the original,
            // and copies never join a chain that was not cloned.
            if (const RelationEnd* rel = find_relation(r.cls, prop, c.m.at(*t).cls)) {
                if (c.m.at(*t).cls == ResourceClass::Chain) return RefAction::Drop;
                if (const PropertyDef* inv = find_property(c.m.at(*t).cls, rel->inverse); inv && inv->kind == PropKind::Ref)
                    return RefAction::Drop;
            }
            return RefAction::Keep;
        });
    }
    std::vector<std::size_t> added;
    for (auto& [k, r] : copies) added.push_back(c.m.add(std::move(r)));
    for (std::size_t i : added) relink_all(c.m, i, c.report);
}

std::size_t chain_length(const Resource& chain) {
    if (auto l = chain.refs("levels"); !l.empty()) return l.size();
    if (auto l = chain.refs("lyphs"); !l.empty()) return l.size();
    if (auto l = chain.refs("housingLyphs"); !l.empty()) return l.size();
    if (auto n = chain.number("numLevels")) return static_cast<std::size_t>(*n);
    return 0;
}

void op_split(Ctx& c, const EditOp& op) {
    auto ci = target_of(c, op.target, ResourceClass::Chain);
    if (!ci) return;
    std::string new_id = payload_text(c, op.payload, "id");
    if (new_id.empty()) return;
    auto at = op.payload.find("at");
    if (at == op.payload.end() || !at->is_number_integer()) {
        c.report.error("payload", "SPLIT_CHAIN needs an integer 'at'", op.target);
        return;
    }
    const std::size_t n = chain_length(c.m.at(*ci));
    const long k = at->get<long>();
    if (k < 1 || static_cast<std::size_t>(k) >= n) {
        c.report.error("split-position", "split position " + std::to_string(k) + " outside 1.." +
                                             std::to_string(n == 0 ? 0 : n - 1),
                       op.target);
        return;
    }
    const std::string ns = c.m.at(*ci).ns;
    if (!Identifier::valid(new_id) || c.m.find(ns, new_id)) {
        c.report.error("split-collision", "cannot create chain '" + ns + ":" + new_id + "'", op.target);
        return;
    }
    Resource& chain = c.m.at(*ci);
    Resource tail;
    tail.cls = ResourceClass::Chain;
    tail.id = new_id;
    tail.ns = ns;
    for (const char* p : {"lyphTemplate", "isVisible"})
        if (chain.has(p)) tail.props[p] = chain.props[p];
    auto split_list = [&](const char* p) {
        auto it = chain.props.find(p);
        if (it == chain.props.end() || !it->is_array()) return;
        json head(it->begin(), it->begin() + k), rest(it->begin() + k, it->end());
        *it = head;
        tail.props[p] = rest;
    };
    auto old_levels = resolved(c.m, chain, "levels");
    auto old_leaf = resolved(c.m, chain, "leaf");
    split_list("levels");
    split_list("lyphs");
    split_list("housingLyphs");
    if (chain.has("numLevels") && !chain.has("levels")) {
        chain.set("numLevels", k);
        tail.set("numLevels", static_cast<long>(n) - k);
    }
    if (chain.has("leaf")) {
        tail.props["leaf"] = chain.props["leaf"];
        chain.props.erase("leaf");
    }
    if (!old_levels.empty()) {
        const Resource& last = c.m.at(old_levels[static_cast<std::size_t>(k) - 1]);
        if (auto mid = last.ref("target"); mid) {
            if (auto mi = c.m.lookup(*mid, last.ns)) {
                chain.set("leaf", Model::ref_text(chain.ns, c.m.at(*mi)));
                tail.set("root", Model::ref_text(ns, c.m.at(*mi)));
            }
        }
    }
    relink(c.m, *ci, "levels", old_levels, c.report);
    relink(c.m, *ci, "leaf", old_leaf, c.report);
    std::size_t ti = c.m.add(std::move(tail));
    relink_all(c.m, ti, c.report);
}

void op_merge(Ctx& c, const EditOp& op) {
    auto ai = target_of(c, op.target, ResourceClass::Chain);
    if (!ai) return;
    std::string other = payload_text(c, op.payload, "with");
    if (other.empty()) return;
    auto bi = target_of(c, other, ResourceClass::Chain);
    if (!bi) return;
    if (*ai == *bi) {
        c.report.error("merge", "cannot merge a chain with itself", op.target);
        return;
    }
    Resource& a = c.m.at(*ai);
    const Resource b = c.m.at(*bi);
    auto method = [](const Resource& r) {
        if (r.has("levels")) return 0;
        if (r.has("lyphs")) return 2;
        if (r.has("housingLyphs")) return 3;
        return 1;
    };
    if (method(a) != method(b) || (method(a) == 1 && a.ref("lyphTemplate") != b.ref("lyphTemplate"))) {
        c.report.error("merge", "chains '" + a.key() + "' and '" + b.key() + "' are defined differently", op.target);
        return;
    }
    auto a_leaf = resolved(c.m, a, "leaf"), b_root = resolved(c.m, b, "root");
    if (method(a) == 0 && (a_leaf.empty() || a_leaf != b_root)) {
        c.report.error("merge", "leaf of '" + a.key() + "' is not the root of '" + b.key() + "'", op.target);
        return;
    }
    auto old_levels = resolved(c.m, a, "levels");
    auto rebase = [&](const std::string& v) {
        auto t = c.m.lookup(v, b.ns);
        return t ? Model::ref_text(a.ns, c.m.at(*t)) : v;
    };
    for (const char* p : {"levels", "lyphs", "housingLyphs"})
        for (const auto& v : b.refs(p)) a.props[p].push_back(rebase(v));
    if (method(a) == 1) a.set("numLevels", a.number("numLevels").value_or(0) + b.number("numLevels").value_or(0));
    if (auto leaf = b.ref("leaf")) a.set("leaf", rebase(*leaf));
    else a.props.erase("leaf");

    // Drop the inverse sides held for the absorbed chain, then point the rest at the survivor.
    for (const auto& [p, v] : b.props.items())
        if (is_relational(b.cls, p))
            for (std::size_t t : resolved(c.m, b, p))
                if (const RelationEnd* rel = find_relation(b.cls, p, c.m.at(t).cls)) remove_refs_to(c.m, t, rel->inverse, *bi);
    for (std::size_t j = 0; j < c.m.size(); ++j) {
        if (j == *bi) continue;
        Resource& r = c.m.at(j);
        c.diff.rewritten_refs += edit_refs(r, [&](std::string_view, std::string& v) {
            if (c.m.lookup(v, r.ns) == *bi) v = Model::ref_text(r.ns, c.m.at(*ai));
            return RefAction::Keep;
        });
    }
    relink(c.m, *ai, "levels", old_levels, c.report);
    relink(c.m, *ai, "leaf", a_leaf, c.report);
    for (auto it = c.m.variance.presence.begin(); it != c.m.variance.presence.end();)
        it = c.m.lookup(it->first, c.m.ns) == *bi ? c.m.variance.presence.erase(it) : std::next(it);
    c.m.erase(*bi);
}

}  // namespace

std::string_view edit_kind_name(EditKind k) noexcept {
    for (const auto& [kind, name] : kKinds)
        if (kind == k) return name;
    return "?";
}

std::optional<EditKind> edit_kind_from_name(std::string_view name) noexcept {
    for (const auto& [kind, n] : kKinds)
        if (n == name) return kind;
    return std::nullopt;
}

json EditOp::to_json() const {
    return {{"op", edit_kind_name(kind)}, {"target", target}, {"payload", payload}};
}

EditOp EditOp::from_json(const json& j) {
    if (!j.is_object()) throw EditError("edit op must be an object");
    auto op = j.find("op");
    if (op == j.end() || !op->is_string()) throw EditError("edit op needs a string 'op'");
    auto kind = edit_kind_from_name(op->get<std::string>());
    if (!kind) throw EditError("unknown edit op '" + op->get<std::string>() + "'");
    EditOp e;
    e.kind = *kind;
    if (auto t = j.find("target"); t != j.end()) {
        if (!t->is_string()) throw EditError("'target' must be a string");
        e.target = t->get<std::string>();
    }
    if (auto p = j.find("payload"); p != j.end()) {
        if (!p->is_object()) throw EditError("'payload' must be an object");
        e.payload = *p;
    }
    if (e.target.empty() && !(e.kind == EditKind::Update && e.payload.contains("restore")))
        throw EditError(std::string(edit_kind_name(e.kind)) + " needs a 'target'");
    return e;
}

std::vector<std::string> EditDiff::touched() const {
    std::vector<std::string> out = created;
    out.insert(out.end(), updated.begin(), updated.end());
    out.insert(out.end(), deleted.begin(), deleted.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::string EditDiff::render() const {
    std::ostringstream os;
    for (const auto& k : created) os << "+ " << k << "\n";
    for (const auto& k : updated) os << "~ " << k << "\n";
    for (const auto& k : deleted) os << "- " << k << "\n";
    for (const auto& n : notes) os << "! " << n << "\n";
    return os.str();
}

json EditDiff::to_json() const {
    return {{"created", created}, {"updated", updated}, {"deleted", deleted}, {"notes", notes},
            {"rewrittenReferences", rewritten_refs}};
}

EditResult apply_edit(const Model& model, const EditOp& op) {
    EditResult res;
    res.model = model;
    Ctx c{res.model, res.report, res.diff};
    try {
        switch (op.kind) {
        case EditKind::Create: op_create(c, op); break;
        case EditKind::Update: op_update(c, op); break;
        case EditKind::Delete: op_delete(c, op); break;
        case EditKind::Rename: op_rename(c, op); break;
        case EditKind::CloneSubgraph: op_clone(c, op); break;
        case EditKind::SplitChain: op_split(c, op); break;
        case EditKind::MergeChains: op_merge(c, op); break;
        case EditKind::Annotate: op_annotate(c, op); break;
        }
    } catch (const std::exception& e) {
        res.report.error("edit", std::string(edit_kind_name(op.kind)) + " failed: " + e.what(), op.target);
    }
    bool restore = op.kind == EditKind::Update && op.target.empty();
    if (!res.report.has_errors() && !restore) {
        auto before = unresolved_refs(model);
        for (const auto& ref : unresolved_refs(res.model))
            if (auto it = before.find(ref); it != before.end()) before.erase(it);
            else res.report.error("dangling-reference", "edit leaves reference " + ref + " unresolved", op.target);
    }
    if (res.report.has_errors()) {
        res.model = model;
        res.diff = {};
        return res;
    }
    auto notes = std::move(res.diff.notes);
    auto rewritten = res.diff.rewritten_refs;
    res.diff = {};
    res.inverse.kind = EditKind::Update;
    res.inverse.payload = {{"restore", make_restore(model, res.model, res.diff)}};
    res.diff.notes = std::move(notes);
    res.diff.rewritten_refs = rewritten;
    return res;
}

EditResult EditLog::apply(Model& model, const EditOp& op) {
    EditResult res = apply_edit(model, op);
    if (!res.ok()) return res;
    entries_.resize(cursor_);
    entries_.push_back({op, res.inverse});
    ++cursor_;
    model = res.model;
    return res;
}

ValidationReport EditLog::undo(Model& model) {
    ValidationReport report;
    if (!can_undo()) {
        report.warn("history", "nothing to undo");
        return report;
    }
    EditResult res = apply_edit(model, entries_[cursor_ - 1].inverse);
    if (!res.ok()) return res.report;
    model = res.model;
    --cursor_;
    return report;
}

ValidationReport EditLog::redo(Model& model) {
    ValidationReport report;
    if (!can_redo()) {
        report.warn("history", "nothing to redo");
        return report;
    }
    EditResult res = apply_edit(model, entries_[cursor_].op);
    if (!res.ok()) return res.report;
    entries_[cursor_].inverse = res.inverse;
    model = res.model;
    ++cursor_;
    return report;
}

json EditLog::to_json() const {
    json applied = json::array();
    for (const auto& e : entries_) applied.push_back({{"op", e.op.to_json()}, {"inverse", e.inverse.to_json()}});
    return {{"applied", applied}, {"cursor", cursor_}};
}

std::vector<EditOp> parse_script(const json& script) {
    const json* list = &script;
    if (script.is_object() && script.contains("ops")) list = &script["ops"];
    if (!list->is_array()) throw EditError("edit script must be a list of ops");
    std::vector<EditOp> ops;
    for (std::size_t i = 0; i < list->size(); ++i) {
        try {
            ops.push_back(EditOp::from_json((*list)[i]));
        } catch (const EditError& e) {
            throw EditError("op " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return ops;
}

ScriptResult run_script(const Model& model, const std::vector<EditOp>& ops) {
    ScriptResult out;
    out.model = model;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        EditResult res = out.log.apply(out.model, ops[i]);
        for (Issue issue : res.report.issues()) {
            issue.location = "op " + std::to_string(i + 1);
            out.report.add(issue);
        }
        if (!res.ok()) {
            out.ok = false;
            out.model = model;
            out.log = EditLog{};
            out.diffs.clear();
            return out;
        }
        out.diffs.push_back(res.diff);
    }
    return out;
}

}  // namespace lyphc
