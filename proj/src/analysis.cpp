#include "lyphc/analysis.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace lyphc {

namespace {

struct Ends {
    std::optional<std::size_t> source, target;
};

Ends link_ends(const Model& m, const Resource& link) {
    Ends e;
    if (auto s = link.ref("source")) e.source = m.lookup(*s, link.ns);
    if (auto t = link.ref("target")) e.target = m.lookup(*t, link.ns);
    return e;
}

// Lyph conveyed by each link, by link index.
std::map<std::size_t, std::size_t> conveyed_lyphs(const Model& m) {
    std::map<std::size_t, std::size_t> out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const Resource& r = m.at(i);
        if (r.cls == ResourceClass::Link) {
            if (auto c = r.ref("conveyingLyph"))
                if (auto li = m.lookup(*c, r.ns); li && m.at(*li).cls == ResourceClass::Lyph) out.emplace(i, *li);
        }
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
        const Resource& r = m.at(i);
        if (r.cls == ResourceClass::Lyph)
            if (auto c = r.ref("conveys"))
                if (auto li = m.lookup(*c, r.ns); li && m.at(*li).cls == ResourceClass::Link) out.emplace(*li, i);
    }
    return out;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

Resource dynamic_group(const Model& m, std::string id, std::string_view origin, std::string_view description,
                       const std::vector<std::size_t>& links) {
    const auto lyph_of = conveyed_lyphs(m);
    std::set<std::size_t> nodes, lyphs;
    for (std::size_t l : links) {
        Ends e = link_ends(m, m.at(l));
        if (e.source) nodes.insert(*e.source);
        if (e.target) nodes.insert(*e.target);
        if (auto it = lyph_of.find(l); it != lyph_of.end()) lyphs.insert(it->second);
    }
    Resource g;
    g.cls = ResourceClass::Group;
    g.id = std::move(id);
    g.ns = m.ns;
    g.props["generated"] = true;
    g.props["dynamic"] = true;
    g.props["origin"] = origin;
    g.props["description"] = description;
    auto refs = [&](const auto& idx) {
        json arr = json::array();
        for (std::size_t i : idx) arr.push_back(Model::ref_text(m.ns, m.at(i)));
        return arr;
    };
    std::vector<std::size_t> sorted_links(links.begin(), links.end());
    std::sort(sorted_links.begin(), sorted_links.end());
    if (!nodes.empty()) g.props["nodes"] = refs(nodes);
    if (!sorted_links.empty()) g.props["links"] = refs(sorted_links);
    if (!lyphs.empty()) g.props["lyphs"] = refs(lyphs);
    return g;
}

}  // namespace

bool seals(std::string_view topology, bool source_end) noexcept {
    if (topology == topology::kCyst) return true;
    if (topology == topology::kBagRight) return source_end;
    if (topology == topology::kBagLeft) return !source_end;
    return false;
}

std::vector<std::vector<std::size_t>> link_components(const Model& m) {
    auto links = m.of_class(ResourceClass::Link);
    std::vector<std::size_t> parent(links.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::map<std::size_t, std::size_t> first_at_node;
    for (std::size_t k = 0; k < links.size(); ++k) {
        Ends e = link_ends(m, m.at(links[k]));
        for (auto node : {e.source, e.target}) {
            if (!node) continue;
            auto [it, inserted] = first_at_node.emplace(*node, k);
            if (!inserted) parent[find_root(parent, k)] = find_root(parent, it->second);
        }
    }
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t k = 0; k < links.size(); ++k) groups[find_root(parent, k)].push_back(links[k]);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [root, members] : groups) out.push_back(std::move(members));
    std::sort(out.begin(), out.end());
    return out;
}

NeurulateResult neurulate(const Model& m) {
    NeurulateResult res;
    const auto lyph_of = conveyed_lyphs(m);
    std::map<std::size_t, int> degree;
    for (std::size_t l : m.of_class(ResourceClass::Link)) {
        Ends e = link_ends(m, m.at(l));
        if (e.source) ++degree[*e.source];
        if (e.target) ++degree[*e.target];
    }

    std::set<std::string> untyped;
    std::set<std::string> taken;
    for (const auto& r : m.resources())
        if (!(r.cls == ResourceClass::Group && r.text("origin") == "NEURULATED")) taken.insert(r.key());
    std::size_t counter = 0;

    for (const auto& comp : link_components(m)) {
        bool any_terminal = false, sealed = true;
        for (std::size_t l : comp) {
            Ends e = link_ends(m, m.at(l));
            for (bool source_end : {true, false}) {
                auto node = source_end ? e.source : e.target;
                if (node && degree[*node] != 1) continue;
                any_terminal = true;
                auto it = lyph_of.find(l);
                if (it == lyph_of.end()) {
                    sealed = false;
                    continue;
                }
                const Resource& lyph = m.at(it->second);
                auto topo = lyph.text("topology");
                if (!topo) untyped.insert(lyph.key());
                if (!seals(topo.value_or(std::string(topology::kTube)), source_end)) sealed = false;
            }
        }
        if (!any_terminal || !sealed) continue;
        std::string id;
        do id = "neurulated_" + std::to_string(++counter);
        while (taken.count(m.ns + ":" + id));
        res.groups.push_back(dynamic_group(m, id, "NEURULATED", "neurulated", comp));
        res.components.push_back(comp);
    }
    if (!untyped.empty()) {
        std::string list;
        for (const auto& k : untyped) list += (list.empty() ? "" : ", ") + k;
        res.report.warn("topology", std::to_string(untyped.size()) +
                                        " lyph(s) at component ends have no topology and are treated as TUBE: " +
                                        list);
    }
    return res;
}

void replace_neurulated(Model& m, std::vector<Resource> groups) {
    for (std::size_t i = m.size(); i-- > 0;) {
        const Resource& r = m.at(i);
        if (r.cls == ResourceClass::Group && r.text("origin") == "NEURULATED") m.erase(i);
    }
    for (auto& g : groups) m.add(std::move(g));
}

QueryResult soma_processes(const Model& m, std::string_view start) {
    QueryResult res;
    std::string id;
    try {
        id = Identifier::parse(start).local();
    } catch (const IdentifierError& e) {
        res.report.error("identifier", "malformed start '" + std::string(start) + "': " + e.what());
        return res;
    }
    res.group = dynamic_group(m, "query_" + id, "QUERY", "query", {});
    res.group.props["seed"] = std::string(start);

    auto si = m.lookup(start, m.ns);
    if (!si) {
        res.report.error("unresolved-start", "start '" + std::string(start) + "' does not resolve",
                         std::string(start));
        return res;
    }
    const Resource& s = m.at(*si);
    std::set<std::size_t> seeds;
    const auto lyph_of = conveyed_lyphs(m);
    auto housed_in = [&](const Resource& r) {
        auto h = r.ref("internalIn");
        return h && m.lookup(*h, r.ns) == si;
    };
    for (std::size_t l : m.of_class(ResourceClass::Link)) {
        Ends e = link_ends(m, m.at(l));
        switch (s.cls) {
        case ResourceClass::Node:
            if (e.source == si || e.target == si) seeds.insert(l);
            break;
        case ResourceClass::Link:
            if (l == *si) seeds.insert(l);
            break;
        case ResourceClass::Lyph: {
            auto it = lyph_of.find(l);
            if (it != lyph_of.end() && (it->second == *si || housed_in(m.at(it->second)))) seeds.insert(l);
            for (auto node : {e.source, e.target})
                if (node && housed_in(m.at(*node))) seeds.insert(l);
            break;
        }
        default:
            break;
        }
    }
    if (s.cls != ResourceClass::Node && s.cls != ResourceClass::Link && s.cls != ResourceClass::Lyph) {
        res.report.error("query-start", "start '" + s.key() + "' must be a node, link or lyph", s.key());
        return res;
    }

    std::vector<std::size_t> members;
    for (const auto& comp : neurulate(m).components)
        if (std::any_of(comp.begin(), comp.end(), [&](std::size_t l) { return seeds.count(l) > 0; }))
            members.insert(members.end(), comp.begin(), comp.end());
    auto seed = res.group.props["seed"];
    res.group = dynamic_group(m, "query_" + id, "QUERY", "query", members);
    res.group.props["seed"] = seed;
    if (members.empty())
        res.report.warn("open-component", "'" + s.key() + "' is not part of a closed (neurulated) component",
                        s.key());
    return res;
}

Visibility filter_by_clade(const Model& m, std::string_view clade) {
    Visibility v;
    if (m.variance.empty()) return v;
    const auto& clades = m.variance.clades;
    if (std::find(clades.begin(), clades.end(), clade) == clades.end()) {
        v.report.error("unknown-clade", "clade '" + std::string(clade) + "' is not declared");
        return v;
    }
    for (const auto& [ref, present] : m.variance.presence) {
        if (std::find(present.begin(), present.end(), clade) != present.end()) continue;
        if (auto i = m.lookup(ref, m.ns)) v.hidden.insert(m.at(*i).key());
    }
    const auto lyph_of = conveyed_lyphs(m);
    for (std::size_t l : m.of_class(ResourceClass::Link)) {
        Ends e = link_ends(m, m.at(l));
        bool hide = v.hidden.count(m.at(l).key()) > 0;
        for (auto node : {e.source, e.target})
            if (node && v.hidden.count(m.at(*node).key())) hide = true;
        if (!hide) continue;
        v.hidden.insert(m.at(l).key());
        if (auto it = lyph_of.find(l); it != lyph_of.end()) v.hidden.insert(m.at(it->second).key());
    }
    return v;
}

void apply_visibility(Model& m, const Visibility& v) {
    for (std::size_t i = 0; i < m.size(); ++i)
        if (v.hidden.count(m.at(i).key())) m.at(i).props["isVisible"] = false;
}

}  // namespace lyphc
