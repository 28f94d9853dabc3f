#include "lyphc/layout.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "lyphc/crossing.hpp"

namespace lyphc {

namespace {

std::optional<Vec3> vec(const json& v) {
    if (!v.is_array() || v.size() < 2 || v.size() > 3) return std::nullopt;
    for (const auto& x : v)
        if (!x.is_number()) return std::nullopt;
    return Vec3{v[0].get<double>(), v[1].get<double>(), v.size() == 3 ? v[2].get<double>() : 0.0};
}

std::optional<Vec3> prop_vec(const Resource& r, std::string_view p) {
    auto it = r.props.find(p);
    if (it == r.props.end()) return std::nullopt;
    return vec(*it);
}

std::optional<std::size_t> ref_of(const Model& m, const Resource& r, std::string_view p, ResourceClass cls) {
    auto v = r.ref(p);
    if (!v) return std::nullopt;
    auto i = m.lookup(*v, r.ns);
    if (!i || m.at(*i).cls != cls) return std::nullopt;
    return i;
}

Vec3 perpendicular(const Vec3& axis) {
    Vec3 n = cross({0, 0, 1}, axis);
    if (norm(n) < 1e-12) n = cross({0, 1, 0}, axis);
    return normalized(n, {0, 1, 0});
}

std::size_t layer_count(const Resource& lyph) {
    return std::max<std::size_t>(1, lyph.refs("layers").size());
}

double aspect_for(std::size_t layers) {
    return 1.5 + 0.5 * static_cast<double>(layers);
}

// Sequence of nodes along a generated chain: source of the first level, then
// every level's target.
std::vector<std::size_t> chain_nodes(const Model& m, const Resource& chain) {
    std::vector<std::size_t> seq;
    for (const auto& lref : chain.refs("levels")) {
        auto l = m.lookup(lref, chain.ns);
        if (!l) return {};
        const Resource& link = m.at(*l);
        auto s = ref_of(m, link, "source", ResourceClass::Node);
        auto t = ref_of(m, link, "target", ResourceClass::Node);
        if (!s || !t) return {};
        if (seq.empty()) seq.push_back(*s);
        seq.push_back(*t);
    }
    return seq;
}

struct Rect {
    Vec3 center, axis{1, 0, 0}, normal{0, 1, 0};
    double length = 0, width = 0;
};

std::optional<Rect> region_rect(const Model& m, std::size_t region) {
    const Resource& r = m.at(region);
    std::vector<Vec3> pts;
    for (const auto& ref : r.refs("border")) {
        auto i = m.lookup(ref, r.ns);
        if (!i) continue;
        if (m.at(*i).cls == ResourceClass::Anchor) {
            if (auto p = anchor_position(m, *i)) pts.push_back(*p);
        } else if (m.at(*i).cls == ResourceClass::Wire) {
            if (auto c = wire_curve(m, *i))
                for (int k = 0; k <= 16; ++k) pts.push_back(c->at(k / 16.0));
        }
    }
    if (pts.empty()) return std::nullopt;
    Vec3 lo = pts[0], hi = pts[0];
    for (const auto& p : pts) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), 0};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), 0};
    }
    Rect rect;
    rect.center = (lo + hi) * 0.5;
    rect.length = hi.x - lo.x;
    rect.width = hi.y - lo.y;
    return rect;
}

struct NodeInfo {
    std::size_t idx = 0;
    std::string key;
    std::optional<Vec3> layout;
    bool fixed = false;
    std::optional<Vec3> anchor;
    std::optional<Vec3> wire_target;
    std::optional<std::size_t> host_link;
    double offset = 0.5;
    std::vector<std::size_t> border_of;
    std::optional<std::size_t> internal_lyph;
    std::size_t internal_k = 0, internal_n = 0;
    std::optional<Vec3> region_target;
    std::vector<std::size_t> control;  // model indices
};

class Engine {
public:
    Engine(const Model& m, const VisibleGraph& g, const LayoutOptions& o, ValidationReport& report)
        : m_(m), g_(g), o_(o), report_(report) {
        build();
    }

    void step(LayoutState& s) {
        const std::size_t n = nodes_.size();
        std::vector<Vec3> pos(n), force(n);
        for (std::size_t i = 0; i < n; ++i) pos[i] = s.positions[nodes_[i].key];

        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                Vec3 d = pos[i] - pos[j];
                double d2 = dot(d, d);
                if (d2 < 1e-8) {
                    d = Vec3{0.01 * double(i + 1), 0.01 * double(j + 1), 0};
                    d2 = dot(d, d);
                }
                double dist = std::sqrt(d2);
                Vec3 f = d * (o_.repulsion / (d2 * dist));
                force[i] += f;
                force[j] += f * -1.0;
            }
        for (const auto& sp : springs_) {
            Vec3 d = pos[sp.target] - pos[sp.source];
            double dist = norm(d);
            if (dist < 1e-12) continue;
            Vec3 f = d * (o_.spring * (dist - sp.rest) / dist);
            force[sp.source] += f;
            force[sp.target] += f * -1.0;
        }
        for (std::size_t i = 0; i < n; ++i)
            if (nodes_[i].layout) force[i] += (*nodes_[i].layout - pos[i]) * o_.magnet;

        for (std::size_t i = 0; i < n; ++i) {
            Vec3& v = velocity_[i];
            v = (v + force[i] * o_.dt) * o_.damping;
            Vec3 stepv = v * o_.dt;
            double len = norm(stepv);
            if (len > o_.max_step) stepv = stepv * (o_.max_step / len);
            Vec3 p = pos[i] + stepv;
            if (!o_.three_d) p.z = 0;
            s.positions[nodes_[i].key] = p;
        }
    }

    void project(LayoutState& s) {
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const NodeInfo& n = nodes_[i];
            if (n.anchor) set(s, i, *n.anchor, Rank::Anchored);
            else if (n.wire_target) set(s, i, *n.wire_target, Rank::Anchored);
            else if (auto p = s.pinned.find(n.key); p != s.pinned.end()) set(s, i, p->second, Rank::Fixed);
            else if (n.fixed) set(s, i, n.layout.value_or(s.positions[n.key]), Rank::Fixed);
        }
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t i = 0; i < nodes_.size(); ++i) {
                const NodeInfo& n = nodes_[i];
                if (held(s, i) || !n.host_link) continue;
                if (auto c = link_curve(m_, *n.host_link, s)) set(s, i, c->at_fraction(n.offset), Rank::HostedByLink);
            }
        place_lyphs(s, nullptr);
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const NodeInfo& n = nodes_[i];
            if (held(s, i)) continue;
            if (n.host_link && s.ranks[n.key] == Rank::HostedByLink) continue;
            if (auto p = border_point(s, n)) set(s, i, *p, Rank::BorderHosted);
            else if (auto q = internal_point(s, n)) set(s, i, *q, Rank::InternalIn);
            else if (!n.control.empty()) {
                Vec3 c;
                for (std::size_t k : n.control) c += s.positions[m_.at(k).key()];
                set(s, i, c / double(n.control.size()), Rank::ControlCentroid);
            } else {
                s.ranks[n.key] = Rank::Free;
            }
        }
        place_lyphs(s, nullptr);
    }

    // Conveyed lyphs from their links; internal lyphs on a grid in their host.
    void place_lyphs(LayoutState& s, ValidationReport* report) {
        s.lyphs.clear();
        for (std::size_t l : g_.links) {
            auto it = conveyed_.find(l);
            if (it == conveyed_.end()) continue;
            auto curve = link_curve(m_, l, s);
            if (!curve) continue;
            const Resource& lyph = m_.at(it->second);
            Vec3 chord = curve->end() - curve->start();
            double len = norm(chord);
            if (len < 1e-9) {
                if (report)
                    report->warn("zero-length", "link '" + m_.at(l).key() + "' has zero length; lyph '" + lyph.key() +
                                                    "' gets a minimal size",
                                 m_.at(l).key());
                len = 1e-6;
            }
            LyphPlacement p;
            p.axis = normalized(chord);
            p.normal = perpendicular(p.axis);
            p.center = curve->at_fraction(0.5);
            size_placement(p, lyph, o_.link_fraction * len);
            s.lyphs[lyph.key()] = p;
        }

        // Hosts before their guests, a few levels deep.
        std::set<std::size_t> visible(g_.lyphs.begin(), g_.lyphs.end());
        for (int depth = 0; depth < 8; ++depth) {
            std::map<std::string, std::pair<Rect, std::vector<std::size_t>>> hosts;
            for (std::size_t y : g_.lyphs) {
                const Resource& lyph = m_.at(y);
                if (s.lyphs.count(lyph.key())) continue;
                std::optional<Rect> rect;
                std::string host_key;
                for (const char* p : {"internalIn", "hostedBy"}) {
                    auto h = lyph.ref(p);
                    if (!h) continue;
                    auto hi = m_.lookup(*h, lyph.ns);
                    if (!hi) continue;
                    const Resource& host = m_.at(*hi);
                    if (host.cls == ResourceClass::Lyph) {
                        auto hp = s.lyphs.find(host.key());
                        if (hp == s.lyphs.end()) continue;
                        rect = Rect{hp->second.center, hp->second.axis, hp->second.normal, hp->second.length,
                                    hp->second.width};
                    } else if (host.cls == ResourceClass::Region) {
                        rect = region_rect(m_, *hi);
                    }
                    if (rect) {
                        host_key = host.key();
                        break;
                    }
                }
                if (!rect) continue;
                auto& entry = hosts[host_key];
                entry.first = *rect;
                entry.second.push_back(y);
            }
            if (hosts.empty()) break;
            for (auto& [key, entry] : hosts) {
                const Rect& r = entry.first;
                auto& guests = entry.second;
                std::size_t n = guests.size();
                std::size_t cols = static_cast<std::size_t>(std::ceil(std::sqrt(double(n))));
                std::size_t rows = (n + cols - 1) / cols;
                double inner_len = r.length * (1 - 2 * o_.margin), inner_w = r.width * (1 - 2 * o_.margin);
                double cell_len = inner_len / double(cols), cell_w = inner_w / double(rows);
                for (std::size_t k = 0; k < n; ++k) {
                    const Resource& lyph = m_.at(guests[k]);
                    std::size_t row = k / cols, col = k % cols;
                    LyphPlacement p;
                    p.axis = r.axis;
                    p.normal = r.normal;
                    p.center = r.center + r.axis * (-inner_len / 2 + (double(col) + 0.5) * cell_len) +
                               r.normal * (-inner_w / 2 + (double(row) + 0.5) * cell_w);
                    double aspect = aspect_for(layer_count(lyph));
                    size_placement(p, lyph, std::min(cell_len, cell_w * aspect));
                    s.lyphs[lyph.key()] = p;
                }
            }
        }
    }

    void stretch(LayoutState& s) {
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            if (!nodes_[i].anchor && nodes_[i].wire_target) set(s, i, *nodes_[i].wire_target, Rank::Anchored);
    }

    void align(LayoutState& s) {
        place_lyphs(s, nullptr);
        std::set<std::size_t> used;
        for (std::size_t ci : m_.of_class(ResourceClass::Coalescence)) {
            const Resource& co = m_.at(ci);
            std::vector<std::size_t> members;
            for (const auto& ref : co.refs("lyphs"))
                if (auto y = m_.lookup(ref, co.ns); y && link_of_.count(*y) && s.lyphs.count(m_.at(*y).key()))
                    members.push_back(*y);
            if (members.size() < 2) continue;
            if (std::any_of(members.begin(), members.end(), [&](std::size_t y) { return used.count(y); })) {
                report_.warn("over-constrained",
                             "coalescence '" + co.key() + "' shares a lyph with an earlier coalescence; skipped",
                             co.key());
                continue;
            }
            bool embedding = co.text("kind") == "EMBEDDING";
            std::size_t host = members[0];
            for (std::size_t k = 1; k < members.size(); ++k) {
                if (!align_pair(s, host, members[k], embedding) && !align_pair(s, members[k], host, embedding))
                    report_.warn("alignment", "cannot move the links of '" + m_.at(host).key() + "' and '" +
                                                  m_.at(members[k]).key() + "' next to each other",
                                 co.key());
            }
            used.insert(members.begin(), members.end());
        }
        place_lyphs(s, nullptr);
    }

    const std::vector<NodeInfo>& nodes() const { return nodes_; }

private:
    struct Spring {
        std::size_t source, target;
        double rest;
    };

    void set(LayoutState& s, std::size_t i, Vec3 p, Rank r) {
        if (!o_.three_d) p.z = 0;
        s.positions[nodes_[i].key] = p;
        s.ranks[nodes_[i].key] = r;
        velocity_[i] = {};
    }

    // Anchored, fixed or pinned: nothing below overrides these.
    bool held(const LayoutState& s, std::size_t i) const {
        const NodeInfo& n = nodes_[i];
        return n.anchor || n.wire_target || n.fixed || s.pinned.count(n.key);
    }

    void size_placement(LyphPlacement& p, const Resource& lyph, double length) {
        std::size_t layers = layer_count(lyph);
        p.length = length;
        p.width = length / aspect_for(layers);
        p.layer_widths.assign(layers, p.width / double(layers));
        p.angle = lyph.number("angle").value_or(0.0);
        if (auto r = rotations_->find(lyph.key()); r != rotations_->end()) p.angle = r->second;
    }

    std::optional<Vec3> border_point(const LayoutState& s, const NodeInfo& n) const {
        std::vector<const LyphPlacement*> placed;
        for (std::size_t h : n.border_of)
            if (auto it = s.lyphs.find(m_.at(h).key()); it != s.lyphs.end()) placed.push_back(&it->second);
        if (placed.empty()) return std::nullopt;
        const LyphPlacement& a = *placed[0];
        Vec3 cur = s.positions.at(n.key);
        Vec3 toward = placed.size() > 1 ? placed[1]->center - a.center : cur - a.center;
        double side = dot(toward, a.axis) >= 0 ? 1.0 : -1.0;
        Vec3 cap = a.center + a.axis * (side * a.length / 2);
        double t = std::clamp(dot(cur - cap, a.normal), -a.width / 2, a.width / 2);
        return cap + a.normal * t;
    }

    std::optional<Vec3> internal_point(const LayoutState& s, const NodeInfo& n) const {
        if (n.region_target) return n.region_target;
        if (!n.internal_lyph) return std::nullopt;
        auto it = s.lyphs.find(m_.at(*n.internal_lyph).key());
        if (it == s.lyphs.end()) return std::nullopt;
        const LyphPlacement& p = it->second;
        if (n.internal_n == 1) return p.center;
        if (n.internal_n <= 6) {
            double r = 0.25 * std::min(p.length, p.width);
            double th = 2 * std::numbers::pi * double(n.internal_k) / double(n.internal_n);
            return p.center + p.axis * (r * std::cos(th)) + p.normal * (r * std::sin(th));
        }
        std::size_t cols = static_cast<std::size_t>(std::ceil(std::sqrt(double(n.internal_n))));
        std::size_t rows = (n.internal_n + cols - 1) / cols;
        double inner_len = p.length * (1 - 2 * o_.margin), inner_w = p.width * (1 - 2 * o_.margin);
        std::size_t row = n.internal_k / cols, col = n.internal_k % cols;
        return p.center + p.axis * (-inner_len / 2 + (double(col) + 0.5) * inner_len / double(cols)) +
               p.normal * (-inner_w / 2 + (double(row) + 0.5) * inner_w / double(rows));
    }

    bool movable(const LayoutState& s, std::size_t node) const {
        auto it = slot_.find(node);
        if (it == slot_.end()) return false;
        const NodeInfo& n = nodes_[it->second];
        if (n.anchor || n.wire_target || n.fixed || s.pinned.count(n.key) || n.host_link) return false;
        auto r = s.ranks.find(n.key);
        return r == s.ranks.end() || r->second == Rank::Free || r->second == Rank::ControlCentroid;
    }

    // Moves the link of `guest` parallel to the link of `host`.
    bool align_pair(LayoutState& s, std::size_t host, std::size_t guest, bool embedding) {
        std::size_t lh = link_of_.at(host), lg = link_of_.at(guest);
        auto hs = ref_of(m_, m_.at(lh), "source", ResourceClass::Node);
        auto ht = ref_of(m_, m_.at(lh), "target", ResourceClass::Node);
        auto gs = ref_of(m_, m_.at(lg), "source", ResourceClass::Node);
        auto gt = ref_of(m_, m_.at(lg), "target", ResourceClass::Node);
        if (!hs || !ht || !gs || !gt) return false;
        if (*gs == *hs || *gs == *ht || *gt == *hs || *gt == *ht) return false;
        if (!movable(s, *gs) || !movable(s, *gt)) return false;

        const LyphPlacement& a = s.lyphs.at(m_.at(host).key());
        const LyphPlacement& b = s.lyphs.at(m_.at(guest).key());
        double shared = a.layer_widths.back();
        // the guest link takes the host link's length, and its width with it
        double guest_width = a.length / aspect_for(layer_count(m_.at(guest)));
        double gap = embedding ? a.width / 2 - shared / 2 : (a.width + guest_width) / 2 - shared;
        Vec3 side = dot(b.center - a.center, a.normal) >= 0 ? a.normal : a.normal * -1.0;
        Vec3 ps = s.positions.at(m_.at(*hs).key()) + side * gap;
        Vec3 pt = s.positions.at(m_.at(*ht).key()) + side * gap;
        s.pinned[m_.at(*gs).key()] = ps;
        s.pinned[m_.at(*gt).key()] = pt;
        s.positions[m_.at(*gs).key()] = ps;
        s.positions[m_.at(*gt).key()] = pt;
        if (!embedding) {
            (*rotations_)[m_.at(host).key()] = facing(a, side);
            (*rotations_)[m_.at(guest).key()] = facing(a, side * -1.0);
        }
        return true;
    }

    // Angle (degrees) turning the normal of `p` toward `dir` around its axis.
    static double facing(const LyphPlacement& p, const Vec3& dir) {
        Vec3 binormal = cross(p.axis, p.normal);
        return std::atan2(dot(dir, binormal), dot(dir, p.normal)) * 180.0 / std::numbers::pi;
    }

    void build() {
        std::set<std::size_t> visible_links(g_.links.begin(), g_.links.end());
        std::set<std::size_t> visible_lyphs(g_.lyphs.begin(), g_.lyphs.end());
        for (std::size_t y : g_.lyphs) {
            const Resource& lyph = m_.at(y);
            if (auto l = ref_of(m_, lyph, "conveys", ResourceClass::Link); l && visible_links.count(*l)) {
                conveyed_.emplace(*l, y);
                link_of_.emplace(y, *l);
            }
        }
        for (std::size_t l : g_.links) {
            if (conveyed_.count(l)) continue;
            if (auto y = ref_of(m_, m_.at(l), "conveyingLyph", ResourceClass::Lyph); y && visible_lyphs.count(*y)) {
                conveyed_.emplace(l, *y);
                link_of_.emplace(*y, l);
            }
        }

        for (std::size_t idx : g_.nodes) {
            const Resource& r = m_.at(idx);
            NodeInfo n;
            n.idx = idx;
            n.key = r.key();
            n.layout = prop_vec(r, "layout");
            if (n.layout && !o_.three_d) n.layout->z = 0;
            n.fixed = r.flag("fixed");
            if (auto a = ref_of(m_, r, "anchoredTo", ResourceClass::Anchor)) n.anchor = anchor_position(m_, *a);
            if (auto h = ref_of(m_, r, "hostedBy", ResourceClass::Link); h && visible_links.count(*h))
                n.host_link = h;
            for (const auto& b : r.refs("borderOf"))
                if (auto h = m_.lookup(b, r.ns); h && m_.at(*h).cls == ResourceClass::Lyph) n.border_of.push_back(*h);
            n.internal_lyph = ref_of(m_, r, "internalIn", ResourceClass::Lyph);
            for (const auto& c : r.refs("controlNodes"))
                if (auto k = m_.lookup(c, r.ns); k && std::binary_search(g_.nodes.begin(), g_.nodes.end(), *k))
                    n.control.push_back(*k);
            slot_[idx] = nodes_.size();
            nodes_.push_back(std::move(n));
        }
        velocity_.assign(nodes_.size(), Vec3{});

        // Default offsets k/(n+1) among hosted nodes without an explicit offset.
        std::map<std::size_t, std::vector<std::size_t>> hosted;
        for (std::size_t l : g_.links) {
            for (const auto& h : m_.at(l).refs("hostedNodes"))
                if (auto k = m_.lookup(h, m_.at(l).ns); k && slot_.count(*k) && nodes_[slot_[*k]].host_link == l)
                    if (std::find(hosted[l].begin(), hosted[l].end(), slot_[*k]) == hosted[l].end())
                        hosted[l].push_back(slot_[*k]);
        }
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            if (nodes_[i].host_link) {
                auto& v = hosted[*nodes_[i].host_link];
                if (std::find(v.begin(), v.end(), i) == v.end()) v.push_back(i);
            }
        for (auto& [l, list] : hosted) {
            std::vector<std::size_t> unset;
            for (std::size_t i : list) {
                if (auto off = m_.at(nodes_[i].idx).number("offset")) nodes_[i].offset = *off;
                else unset.push_back(i);
            }
            for (std::size_t k = 0; k < unset.size(); ++k)
                nodes_[unset[k]].offset = double(k + 1) / double(unset.size() + 1);
        }

        std::map<std::size_t, std::vector<std::size_t>> internal;
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            if (nodes_[i].internal_lyph) internal[*nodes_[i].internal_lyph].push_back(i);
        for (auto& [y, list] : internal)
            for (std::size_t k = 0; k < list.size(); ++k) {
                nodes_[list[k]].internal_k = k;
                nodes_[list[k]].internal_n = list.size();
            }

        for (std::size_t l : g_.links) {
            const Resource& link = m_.at(l);
            auto s = ref_of(m_, link, "source", ResourceClass::Node);
            auto t = ref_of(m_, link, "target", ResourceClass::Node);
            if (!s || !t || !slot_.count(*s) || !slot_.count(*t)) continue;
            springs_.push_back({slot_[*s], slot_[*t], link.number("length").value_or(o_.rest_length)});
        }

        for (std::size_t ci : m_.of_class(ResourceClass::Chain)) {
            const Resource& chain = m_.at(ci);
            auto seq = chain_nodes(m_, chain);
            if (seq.size() < 2) continue;
            const double levels = double(seq.size() - 1);
            if (auto w = ref_of(m_, chain, "wiredTo", ResourceClass::Wire)) {
                auto curve = wire_curve(m_, *w);
                if (!curve) continue;
                bool degenerate = curve->length() < 1e-12;
                if (degenerate)
                    report_.warn("degenerate-wire",
                                 "wire '" + m_.at(*w).key() + "' has coincident ends; chain '" + chain.key() +
                                     "' collapses onto its anchor",
                                 m_.at(*w).key());
                bool reverse = chain.flag("startFromLeaf");
                for (std::size_t k = 0; k < seq.size(); ++k) {
                    auto it = slot_.find(seq[k]);
                    if (it == slot_.end()) continue;
                    double f = double(k) / levels;
                    if (reverse) f = 1 - f;
                    nodes_[it->second].wire_target = degenerate ? curve->start() : curve->at_fraction(f);
                }
                continue;
            }
            if (auto rg = ref_of(m_, chain, "hostedBy", ResourceClass::Region)) {
                auto rect = region_rect(m_, *rg);
                if (!rect) continue;
                std::vector<std::size_t> initial(seq.size() - 1);
                for (std::size_t k = 0; k < initial.size(); ++k) initial[k] = k;
                chain_orders_[chain.key()] = order_chain_in_host(chain_problem(initial.size()), initial);
                for (std::size_t k = 0; k < seq.size(); ++k) {
                    auto it = slot_.find(seq[k]);
                    if (it == slot_.end()) continue;
                    double x = rect->center.x - rect->length / 2 + rect->length * double(k) / levels;
                    nodes_[it->second].region_target = Vec3{x, rect->center.y, 0};
                }
            }
        }
    }

public:
    std::map<std::string, double>* rotations_ = nullptr;
    std::map<std::string, std::vector<std::size_t>> chain_orders_;

private:
    const Model& m_;
    const VisibleGraph& g_;
    const LayoutOptions& o_;
    ValidationReport& report_;
    std::vector<NodeInfo> nodes_;
    std::map<std::size_t, std::size_t> slot_;  // model index -> nodes_ index
    std::vector<Vec3> velocity_;
    std::vector<Spring> springs_;
    std::map<std::size_t, std::size_t> conveyed_;  // link -> lyph
    std::map<std::size_t, std::size_t> link_of_;   // lyph -> link
};

double uniform01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << std::fixed << v;
    return os.str();
}

}  // namespace

std::string_view rank_name(Rank r) noexcept {
    switch (r) {
    case Rank::Anchored: return "ANCHORED";
    case Rank::Fixed: return "FIXED";
    case Rank::HostedByLink: return "HOSTED_BY_LINK";
    case Rank::BorderHosted: return "BORDER_HOSTED";
    case Rank::InternalIn: return "INTERNAL_IN";
    case Rank::ControlCentroid: return "CONTROL_CENTROID";
    case Rank::Free: return "FREE";
    }
    return "?";
}

std::optional<Vec3> anchor_position(const Model& m, std::size_t anchor) {
    const Resource& a = m.at(anchor);
    if (auto w = ref_of(m, a, "hostedBy", ResourceClass::Wire)) {
        auto s = ref_of(m, m.at(*w), "source", ResourceClass::Anchor);
        auto t = ref_of(m, m.at(*w), "target", ResourceClass::Anchor);
        if (s != anchor && t != anchor)
            if (auto c = wire_curve(m, *w)) return c->at_fraction(a.number("offset").value_or(0.5));
    }
    if (auto p = prop_vec(a, "layout")) return Vec3{p->x, p->y, 0};
    return std::nullopt;
}

std::optional<Curve> wire_curve(const Model& m, std::size_t wire) {
    const Resource& w = m.at(wire);
    auto s = ref_of(m, w, "source", ResourceClass::Anchor);
    auto t = ref_of(m, w, "target", ResourceClass::Anchor);
    if (!s || !t) return std::nullopt;
    auto ps = prop_vec(m.at(*s), "layout");
    auto pt = prop_vec(m.at(*t), "layout");
    if (!ps || !pt) return std::nullopt;
    Vec3 a{ps->x, ps->y, 0}, b{pt->x, pt->y, 0};
    std::string geometry = w.text("geometry").value_or("LINE");
    if (geometry == "ARC") {
        if (auto c = prop_vec(w, "arcCenter")) return Curve::arc(a, b, {c->x, c->y, 0});
        return Curve::default_arc(a, b);
    }
    if (geometry == "SPLINE") {
        if (auto c = prop_vec(w, "controlPoint")) return Curve::bezier(a, {c->x, c->y, 0}, b);
        return Curve::default_spline(a, b);
    }
    return Curve::line(a, b);
}

std::optional<Curve> link_curve(const Model& m, std::size_t link, const LayoutState& state) {
    const Resource& l = m.at(link);
    auto s = ref_of(m, l, "source", ResourceClass::Node);
    auto t = ref_of(m, l, "target", ResourceClass::Node);
    if (!s || !t) return std::nullopt;
    auto ps = state.positions.find(m.at(*s).key());
    auto pt = state.positions.find(m.at(*t).key());
    if (ps == state.positions.end() || pt == state.positions.end()) return std::nullopt;
    if (l.text("geometry") == "SPLINE") return Curve::default_spline(ps->second, pt->second);
    return Curve::line(ps->second, pt->second);
}

VisibleGraph visible_subgraph(const Model& m, const std::optional<std::set<std::string>>& active) {
    auto shown = [&](std::size_t i) { return m.at(i).flag("isVisible", true); };
    std::set<std::size_t> nodes, member_links, lyphs;

    if (!active) {
        for (std::size_t i : m.of_class(ResourceClass::Node))
            if (shown(i)) nodes.insert(i);
    } else {
        std::vector<std::size_t> queue;
        std::set<std::size_t> seen;
        for (const auto& ref : *active)
            if (auto g = m.lookup(ref, m.ns); g && m.at(*g).cls == ResourceClass::Group) queue.push_back(*g);
        while (!queue.empty()) {
            std::size_t g = queue.back();
            queue.pop_back();
            if (!seen.insert(g).second) continue;
            const Resource& grp = m.at(g);
            auto members = [&](const char* p, ResourceClass cls, std::set<std::size_t>& into) {
                for (const auto& v : grp.refs(p))
                    if (auto i = m.lookup(v, grp.ns); i && m.at(*i).cls == cls) into.insert(*i);
            };
            members("nodes", ResourceClass::Node, nodes);
            members("links", ResourceClass::Link, member_links);
            members("lyphs", ResourceClass::Lyph, lyphs);
            std::set<std::size_t> nested;
            members("groups", ResourceClass::Group, nested);
            queue.insert(queue.end(), nested.begin(), nested.end());
        }
        for (std::size_t l : member_links) {
            if (!shown(l)) continue;
            for (const char* end : {"source", "target"})
                if (auto n = ref_of(m, m.at(l), end, ResourceClass::Node)) nodes.insert(*n);
        }
        std::erase_if(nodes, [&](std::size_t i) { return !shown(i); });
    }

    VisibleGraph g;
    g.nodes.assign(nodes.begin(), nodes.end());
    for (std::size_t l : m.of_class(ResourceClass::Link)) {
        if (!shown(l)) continue;
        auto s = ref_of(m, m.at(l), "source", ResourceClass::Node);
        auto t = ref_of(m, m.at(l), "target", ResourceClass::Node);
        if (s && t && nodes.count(*s) && nodes.count(*t)) g.links.push_back(l);
    }

    std::set<std::size_t> out_lyphs;
    auto renderable = [&](std::size_t y) {
        const Resource& r = m.at(y);
        return shown(y) && !r.flag("isTemplate") && !r.has("layerIn");
    };
    if (!active) {
        for (std::size_t y : m.of_class(ResourceClass::Lyph))
            if (renderable(y)) out_lyphs.insert(y);
    } else {
        for (std::size_t y : lyphs)
            if (renderable(y)) out_lyphs.insert(y);
        for (std::size_t l : g.links)
            if (auto y = ref_of(m, m.at(l), "conveyingLyph", ResourceClass::Lyph); y && renderable(*y))
                out_lyphs.insert(*y);
        for (bool grew = true; grew;) {
            grew = false;
            for (std::size_t y : m.of_class(ResourceClass::Lyph)) {
                if (out_lyphs.count(y) || !renderable(y)) continue;
                auto host = ref_of(m, m.at(y), "internalIn", ResourceClass::Lyph);
                if (host && out_lyphs.count(*host)) {
                    out_lyphs.insert(y);
                    grew = true;
                }
            }
        }
    }
    g.lyphs.assign(out_lyphs.begin(), out_lyphs.end());
    return g;
}

LayoutState initial_state(const Model& m, const VisibleGraph& g, const LayoutOptions& o) {
    LayoutState s;
    s.seed = o.seed;
    s.three_d = o.three_d;
    std::mt19937_64 rng(o.seed);
    for (std::size_t idx : g.nodes) {
        Vec3 p{(2 * uniform01(rng) - 1) * o.init_extent, (2 * uniform01(rng) - 1) * o.init_extent,
               (2 * uniform01(rng) - 1) * o.init_extent};
        if (auto l = prop_vec(m.at(idx), "layout")) p = *l;
        if (!o.three_d) p.z = 0;
        s.positions[m.at(idx).key()] = p;
        s.ranks[m.at(idx).key()] = Rank::Free;
    }
    return s;
}

ValidationReport solve(const Model& m, const VisibleGraph& g, LayoutState& s, int iterations,
                       const LayoutOptions& o) {
    ValidationReport report;
    if (iterations <= 0) return report;
    Engine e(m, g, o, report);
    e.rotations_ = &s.rotations;
    for (int k = 0; k < iterations; ++k) {
        e.step(s);
        e.project(s);
        ++s.iteration;
    }
    for (auto& [k, v] : e.chain_orders_) s.chain_orders[k] = v;
    return report;
}

ValidationReport stretch_along_wires(const Model& m, const VisibleGraph& g, LayoutState& s) {
    ValidationReport report;
    LayoutOptions o;
    o.three_d = s.three_d;
    Engine e(m, g, o, report);
    e.rotations_ = &s.rotations;
    e.stretch(s);
    return report;
}

ValidationReport compute_scaling(const Model& m, const VisibleGraph& g, LayoutState& s, const LayoutOptions& o) {
    ValidationReport report, scratch;
    Engine e(m, g, o, scratch);
    e.rotations_ = &s.rotations;
    e.place_lyphs(s, &report);
    return report;
}

ValidationReport align_coalescences(const Model& m, const VisibleGraph& g, LayoutState& s,
                                    const LayoutOptions& o) {
    ValidationReport report, scratch;
    Engine e(m, g, o, report);
    e.rotations_ = &s.rotations;
    e.align(s);
    return report;
}

LayoutResult run_layout(const Model& m, const LayoutOptions& o) {
    LayoutResult res;
    res.graph = visible_subgraph(m, o.active_groups);
    res.state = initial_state(m, res.graph, o);
    LayoutState& s = res.state;

    Engine e(m, res.graph, o, res.report);
    e.rotations_ = &s.rotations;
    for (int k = 0; k < o.iterations; ++k) {
        e.step(s);
        e.project(s);
        ++s.iteration;
    }
    e.project(s);
    e.stretch(s);
    e.place_lyphs(s, &res.report);
    e.align(s);
    e.project(s);
    e.project(s);
    s.chain_orders = e.chain_orders_;
    return res;
}

json layout_to_json(const LayoutState& s) {
    auto v = [](const Vec3& p) { return json::array({p.x, p.y, p.z}); };
    json nodes = json::object();
    for (const auto& [k, p] : s.positions) {
        auto r = s.ranks.find(k);
        nodes[k] = {{"position", v(p)}, {"rank", r == s.ranks.end() ? "FREE" : std::string(rank_name(r->second))}};
    }
    json lyphs = json::object();
    for (const auto& [k, p] : s.lyphs)
        lyphs[k] = {{"center", v(p.center)}, {"axis", v(p.axis)},   {"normal", v(p.normal)},
                    {"length", p.length},    {"width", p.width},    {"angle", p.angle},
                    {"layers", p.layer_widths}};
    json chains = json::object();
    for (const auto& [k, o] : s.chain_orders) chains[k] = o;
    return {{"seed", s.seed},       {"iteration", s.iteration}, {"mode", s.three_d ? "3d" : "2d"},
            {"nodes", nodes},       {"lyphs", lyphs},          {"chains", chains}};
}

std::string layout_to_svg(const Model& m, const LayoutState& s) {
    double lo_x = 0, lo_y = 0, hi_x = 1, hi_y = 1;
    bool first = true;
    auto grow = [&](const Vec3& p) {
        if (first) {
            lo_x = hi_x = p.x;
            lo_y = hi_y = p.y;
            first = false;
        }
        lo_x = std::min(lo_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_x = std::max(hi_x, p.x);
        hi_y = std::max(hi_y, p.y);
    };
    for (const auto& [k, p] : s.positions) grow(p);
    double pad = 0.05 * std::max(hi_x - lo_x, hi_y - lo_y) + 1;

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt(lo_x - pad) << " " << fmt(-(hi_y + pad))
       << " " << fmt(hi_x - lo_x + 2 * pad) << " " << fmt(hi_y - lo_y + 2 * pad) << "\">\n";
    for (const auto& [k, p] : s.lyphs) {
        Vec3 a = p.axis * (p.length / 2), n = p.normal * (p.width / 2);
        Vec3 c[4] = {p.center - a - n, p.center + a - n, p.center + a + n, p.center - a + n};
        os << "  <polygon class=\"lyph\" data-id=\"" << k << "\" fill=\"#f3d9a4\" stroke=\"#8a6d3b\" "
           << "stroke-width=\"0.1\" points=\"";
        for (int i = 0; i < 4; ++i) os << (i ? " " : "") << fmt(c[i].x) << "," << fmt(-c[i].y);
        os << "\"/>\n";
    }
    for (std::size_t l : m.of_class(ResourceClass::Link)) {
        auto c = link_curve(m, l, s);
        if (!c) continue;
        os << "  <polyline class=\"link\" data-id=\"" << m.at(l).key()
           << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"0.15\" points=\"";
        for (int k = 0; k <= 16; ++k) {
            Vec3 p = c->at(k / 16.0);
            os << (k ? " " : "") << fmt(p.x) << "," << fmt(-p.y);
        }
        os << "\"/>\n";
    }
    for (const auto& [k, p] : s.positions)
        os << "  <circle class=\"node\" data-id=\"" << k << "\" cx=\"" << fmt(p.x) << "\" cy=\"" << fmt(-p.y)
           << "\" r=\"0.4\" fill=\"#1f5fa8\"/>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace lyphc
