// Random model builders shared by the property tests and the acceptance run.
#pragma once

#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lyphc/model.hpp"

namespace randmodel {

using lyphc::json;
using lyphc::Model;
using lyphc::Resource;
using lyphc::ResourceClass;
using RC = ResourceClass;

inline Resource make(RC cls, std::string id, const std::string& ns = "model") {
    Resource r;
    r.cls = cls;
    r.id = std::move(id);
    r.ns = ns;
    return r;
}

// Relationship pairs written out independently of the library table.
// `single` marks properties holding one reference.
struct Pair {
    RC a;
    const char* pa;
    bool a_single;
    RC b;
    const char* pb;
    bool b_single;
};

inline const std::vector<Pair>& pairs() {
    static const std::vector<Pair> p{
        {RC::Lyph, "layers", false, RC::Lyph, "layerIn", true},
        {RC::Lyph, "layers", false, RC::Material, "layerIn", false},
        {RC::Link, "conveyingLyph", true, RC::Lyph, "conveys", true},
        {RC::Lyph, "internalNodes", false, RC::Node, "internalIn", true},
        {RC::Lyph, "internalLyphs", false, RC::Lyph, "internalIn", true},
        {RC::Region, "internalLyphs", false, RC::Lyph, "internalIn", true},
        {RC::Link, "hostedNodes", false, RC::Node, "hostedBy", true},
        {RC::Link, "source", true, RC::Node, "sourceOf", false},
        {RC::Link, "target", true, RC::Node, "targetOf", false},
        {RC::Chain, "root", true, RC::Node, "rootOf", false},
        {RC::Chain, "leaf", true, RC::Node, "leafOf", false},
        {RC::Lyph, "supertype", true, RC::Lyph, "subtypes", false},
        {RC::Lyph, "materials", false, RC::Material, "materialIn", false},
        {RC::Lyph, "materials", false, RC::Lyph, "materialIn", false},
        {RC::Material, "materials", false, RC::Material, "materialIn", false},
        {RC::Material, "materials", false, RC::Lyph, "materialIn", false},
        {RC::Chain, "levels", false, RC::Link, "levelIn", true},
    };
    return p;
}

inline void put(Resource& r, const std::string& prop, bool single, const std::string& value) {
    if (single) r.set(prop, value);
    else r.add_ref(prop, value);
}

// Up to `n` resources with conflict-free relationship references, each
// written on one randomly chosen side only.
inline Model relation_model(std::mt19937& rng, std::size_t n) {
    const std::vector<RC> classes{RC::Lyph, RC::Material, RC::Link, RC::Node, RC::Region, RC::Chain};
    Model m;
    std::uniform_int_distribution<std::size_t> cls(0, classes.size() - 1);
    for (std::size_t i = 0; i < n; ++i) m.add(make(classes[cls(rng)], "r" + std::to_string(i)));

    // (resource, property) -> partner for single-valued slots
    std::map<std::pair<std::size_t, std::string>, std::size_t> taken;
    std::uniform_int_distribution<std::size_t> pick(0, n ? n - 1 : 0);
    std::uniform_int_distribution<std::size_t> pair_pick(0, pairs().size() - 1);
    std::bernoulli_distribution side(0.5);
    std::size_t attempts = n * 3;
    for (std::size_t k = 0; k < attempts && n > 1; ++k) {
        const Pair& p = pairs()[pair_pick(rng)];
        std::size_t a = pick(rng), b = pick(rng);
        if (a == b || m.at(a).cls != p.a || m.at(b).cls != p.b) continue;
        auto free = [&](std::size_t who, const char* prop, bool single, std::size_t partner) {
            if (!single) return true;
            auto it = taken.find({who, prop});
            return it == taken.end() || it->second == partner;
        };
        if (!free(a, p.pa, p.a_single, b) || !free(b, p.pb, p.b_single, a)) continue;
        if (p.a_single) taken[{a, p.pa}] = b;
        if (p.b_single) taken[{b, p.pb}] = a;
        if (side(rng)) put(m.at(a), p.pa, p.a_single, m.at(b).id);
        else put(m.at(b), p.pb, p.b_single, m.at(a).id);
    }
    return m;
}

struct Seg {
    std::string source, target, topology;  // empty topology: no conveyed lyph
};

inline Model link_graph(const std::vector<Seg>& segs) {
    Model m;
    std::set<std::string> nodes;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        for (const auto& n : {segs[i].source, segs[i].target})
            if (nodes.insert(n).second) m.add(make(RC::Node, n));
        Resource l = make(RC::Link, "l" + std::to_string(i + 1));
        l.set("source", segs[i].source);
        l.set("target", segs[i].target);
        if (!segs[i].topology.empty()) {
            Resource y = make(RC::Lyph, "y" + std::to_string(i + 1));
            y.set("topology", segs[i].topology);
            y.set("conveys", l.id);
            l.set("conveyingLyph", y.id);
            m.add(y);
        }
        m.add(l);
    }
    return m;
}

// Sparse random graph of up to `max_links` links; paths are favoured so that
// closed components occur.
inline std::vector<Seg> random_segments(std::mt19937& rng, std::size_t max_links) {
    static const std::vector<std::string> topos{"", "TUBE", "CYST", "BAG-left", "BAG-right"};
    std::uniform_int_distribution<std::size_t> count(1, max_links);
    std::size_t links = count(rng);
    std::size_t nodes = links + 1;
    std::uniform_int_distribution<std::size_t> node(0, nodes - 1);
    std::uniform_int_distribution<std::size_t> topo(0, topos.size() - 1);
    std::bernoulli_distribution extend(0.7);
    std::vector<Seg> segs;
    std::size_t last = node(rng);
    for (std::size_t i = 0; i < links; ++i) {
        std::size_t s = extend(rng) ? last : node(rng);
        std::size_t t = node(rng);
        if (t == s) t = (s + 1) % nodes;
        segs.push_back({"n" + std::to_string(s), "n" + std::to_string(t), topos[topo(rng)]});
        last = t;
    }
    return segs;
}

// Lyphs and materials joined by random composition edges.
// Returns the model and the adjacency of those edges by resource index.
inline std::pair<Model, std::vector<std::vector<std::size_t>>> composition_graph(std::mt19937& rng, std::size_t n,
                                                                                 double density) {
    Model m;
    std::bernoulli_distribution lyph(0.7);
    for (std::size_t i = 0; i < n; ++i) m.add(make(lyph(rng) ? RC::Lyph : RC::Material, "c" + std::to_string(i)));
    std::vector<std::vector<std::size_t>> adj(n);
    std::bernoulli_distribution edge(density);
    std::uniform_int_distribution<int> prop(0, 2);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b || !edge(rng)) continue;
            Resource& r = m.at(a);
            const Resource& t = m.at(b);
            std::string p;
            if (r.cls == RC::Material) {
                p = "materials";
            } else {
                int k = prop(rng);
                if (k == 0) p = "layers";
                else if (k == 1 && t.cls == RC::Lyph) p = "internalLyphs";
                else p = "materials";
            }
            if (r.add_ref(p, t.id)) adj[a].push_back(b);
        }
    return {m, adj};
}

}  // namespace randmodel
