#include "lyphc/relations.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace lyphc {

namespace {

bool contains_resolved(const Model& m, const Resource& owner, std::string_view prop, std::size_t target) {
    for (const auto& v : owner.refs(prop))
        if (m.lookup(v, owner.ns) == target) return true;
    return false;
}

}  // namespace

ValidationReport sync_relations(Model& model) {
    ValidationReport report;
    std::set<std::vector<std::string>> reported;

    for (std::size_t i = 0; i < model.size(); ++i) {
        std::vector<std::pair<std::string, std::vector<std::string>>> outgoing;
        {
            const Resource& r = model.at(i);
            for (auto it = r.props.begin(); it != r.props.end(); ++it)
                if (is_relational(r.cls, it.key())) outgoing.emplace_back(it.key(), r.refs(it.key()));
        }
        for (const auto& [prop, values] : outgoing) {
            for (const auto& value : values) {
                auto t = model.lookup(value, model.at(i).ns);
                if (!t) continue;
                const Resource& owner = model.at(i);
                Resource& target = model.at(*t);
                const RelationEnd* rel = find_relation(owner.cls, prop, target.cls);
                if (!rel) continue;
                const PropertyDef* inverse = find_property(target.cls, rel->inverse);
                std::string back = Model::ref_text(target, owner);

                if (inverse->kind == PropKind::Ref) {
                    auto current = target.ref(rel->inverse);
                    if (!current) {
                        target.set(rel->inverse, back);
                        continue;
                    }
                    auto cur = model.lookup(*current, target.ns);
                    if (cur == i) continue;
                    std::string other = cur ? model.at(*cur).key() : target.ns + ":" + *current;
                    std::vector<std::string> names{owner.key(), other, target.key()};
                    std::vector<std::string> sorted = names;
                    std::sort(sorted.begin(), sorted.end());
                    sorted.push_back(std::string(rel->inverse));
                    if (!reported.insert(sorted).second) continue;
                    report.error("relation-conflict",
                                 owner.key() + "." + prop + " claims " + target.key() + " but " + target.key() +
                                     "." + std::string(rel->inverse) + " is " + other,
                                 target.key(), target.origin + "/" + std::string(rel->inverse));
                } else if (!contains_resolved(model, target, rel->inverse, i)) {
                    target.add_ref(rel->inverse, back);
                }
            }
        }
    }
    return report;
}

void rewrite_refs(Resource& r, const std::function<std::optional<std::string>(const std::string&)>& f) {
    for (auto it = r.props.begin(); it != r.props.end(); ++it) {
        const PropertyDef* def = find_property(r.cls, it.key());
        if (!def || !def->is_reference()) continue;
        json& v = it.value();
        if (v.is_string()) {
            if (auto n = f(v.get<std::string>())) v = *n;
        } else if (v.is_array()) {
            for (auto& e : v)
                if (e.is_string())
                    if (auto n = f(e.get<std::string>())) e = *n;
        }
    }
}

std::vector<CompositionCycle> composition_cycles(const Model& model) {
    const std::size_t n = model.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Resource& r = model.at(i);
        for (auto it = r.props.begin(); it != r.props.end(); ++it) {
            if (!is_composition_property(it.key())) continue;
            for (const auto& v : r.refs(it.key()))
                if (auto t = model.lookup(v, r.ns)) adj[i].push_back(*t);
        }
    }

    // Tarjan, iterative.
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> components;
    int counter = 0;
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] >= 0) continue;
        std::vector<std::pair<std::size_t, std::size_t>> frames{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            auto& [v, next] = frames.back();
            if (next < adj[v].size()) {
                std::size_t w = adj[v][next++];
                if (index[w] < 0) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::vector<std::size_t> comp;
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp.push_back(w);
                } while (w != v);
                components.push_back(std::move(comp));
            }
            std::size_t done = v;
            frames.pop_back();
            if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
        }
    }

    std::vector<CompositionCycle> out;
    for (auto& comp : components) {
        std::sort(comp.begin(), comp.end());
        bool self_loop = comp.size() == 1 &&
                         std::find(adj[comp[0]].begin(), adj[comp[0]].end(), comp[0]) != adj[comp[0]].end();
        if (comp.size() < 2 && !self_loop) continue;

        // Shortest closed walk from the smallest member, inside the component.
        std::set<std::size_t> in(comp.begin(), comp.end());
        std::size_t start = comp.front();
        std::vector<std::ptrdiff_t> parent(n, -1);
        std::deque<std::size_t> queue{start};
        std::vector<bool> seen(n, false);
        std::ptrdiff_t closing = -1;
        while (!queue.empty() && closing < 0) {
            std::size_t v = queue.front();
            queue.pop_front();
            for (std::size_t w : adj[v]) {
                if (!in.count(w)) continue;
                if (w == start) {
                    closing = static_cast<std::ptrdiff_t>(v);
                    break;
                }
                if (!seen[w]) {
                    seen[w] = true;
                    parent[w] = static_cast<std::ptrdiff_t>(v);
                    queue.push_back(w);
                }
            }
        }
        std::vector<std::size_t> path{start};
        for (std::ptrdiff_t v = closing; v >= 0 && static_cast<std::size_t>(v) != start; v = parent[v])
            path.push_back(static_cast<std::size_t>(v));
        std::reverse(path.begin() + 1, path.end());
        path.push_back(start);
        out.push_back({comp, path});
    }
    std::sort(out.begin(), out.end(),
              [](const CompositionCycle& a, const CompositionCycle& b) { return a.members < b.members; });
    return out;
}

ValidationReport composition_cycle_check(const Model& model) {
    ValidationReport report;
    for (const auto& cycle : composition_cycles(model)) {
        std::string text;
        for (std::size_t k = 0; k < cycle.path.size(); ++k) {
            if (k) text += " -> ";
            text += model.at(cycle.path[k]).key();
        }
        const Resource& first = model.at(cycle.members.front());
        report.error("composition-cycle", "composition cycle: " + text, first.key(), first.origin);
    }
    return report;
}

}  // namespace lyphc
