#include "lyphc/model.hpp"

#include <algorithm>

namespace lyphc {

bool Resource::flag(std::string_view p, bool fallback) const {
    auto it = props.find(p);
    if (it == props.end() || !it->is_boolean()) return fallback;
    return it->get<bool>();
}

std::optional<double> Resource::number(std::string_view p) const {
    auto it = props.find(p);
    if (it == props.end() || !it->is_number()) return std::nullopt;
    return it->get<double>();
}

std::optional<std::string> Resource::text(std::string_view p) const {
    auto it = props.find(p);
    if (it == props.end() || !it->is_string()) return std::nullopt;
    return it->get<std::string>();
}

std::optional<std::string> Resource::ref(std::string_view p) const {
    return text(p);
}

std::vector<std::string> Resource::refs(std::string_view p) const {
    std::vector<std::string> out;
    auto it = props.find(p);
    if (it == props.end()) return out;
    if (it->is_string()) {
        out.push_back(it->get<std::string>());
    } else if (it->is_array()) {
        for (const auto& v : *it)
            if (v.is_string()) out.push_back(v.get<std::string>());
    }
    return out;
}

bool Resource::add_ref(std::string_view p, const std::string& value) {
    auto& slot = props[std::string(p)];
    if (slot.is_null()) slot = json::array();
    if (!slot.is_array()) return false;
    if (std::find(slot.begin(), slot.end(), value) != slot.end()) return false;
    slot.push_back(value);
    return true;
}

bool Resource::remove_ref(std::string_view p, const std::string& value) {
    auto it = props.find(p);
    if (it == props.end() || !it->is_array()) return false;
    auto before = it->size();
    it->erase(std::remove(it->begin(), it->end(), json(value)), it->end());
    bool removed = it->size() != before;
    if (it->empty()) props.erase(it);
    return removed;
}

std::size_t Model::add(Resource r) {
    resources_.push_back(std::move(r));
    index_.try_emplace(resources_.back().key(), resources_.size() - 1);
    return resources_.size() - 1;
}

void Model::insert(std::size_t pos, Resource r) {
    resources_.insert(resources_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(r));
    reindex();
}

void Model::erase(std::size_t pos) {
    resources_.erase(resources_.begin() + static_cast<std::ptrdiff_t>(pos));
    reindex();
}

void Model::replace(std::size_t pos, Resource r) {
    resources_.at(pos) = std::move(r);
    reindex();
}

void Model::reindex() {
    index_.clear();
    for (std::size_t i = 0; i < resources_.size(); ++i) index_.try_emplace(resources_[i].key(), i);
}

std::optional<std::size_t> Model::find(std::string_view ns, std::string_view local) const {
    std::string key(ns);
    key += ':';
    key += local;
    return find_key(key);
}

std::optional<std::size_t> Model::find_key(std::string_view key) const {
    auto it = index_.find(std::string(key));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const Resource* Model::get(std::string_view ns, std::string_view local) const {
    auto i = find(ns, local);
    return i ? &resources_[*i] : nullptr;
}

Resolution Model::resolve(std::string_view ref, std::string_view home) const {
    Identifier id = Identifier::parse(ref);
    Resolution r;
    r.local = id.local();
    r.ns = id.has_prefix() ? id.prefix() : std::string(home);
    if (auto i = find(r.ns, r.local)) {
        r.kind = Resolution::Kind::Found;
        r.index = *i;
    } else {
        r.kind = r.ns == home ? Resolution::Kind::UnresolvedLocal : Resolution::Kind::UnresolvedForeign;
    }
    return r;
}

std::optional<std::size_t> Model::lookup(std::string_view ref, std::string_view home) const {
    try {
        auto r = resolve(ref, home);
        if (r.found()) return r.index;
    } catch (const IdentifierError&) {
    }
    return std::nullopt;
}

std::string Model::ref_text(const Resource& from, const Resource& to) {
    return ref_text(from.ns, to);
}

std::string Model::ref_text(std::string_view home, const Resource& to) {
    return to.ns == home ? to.id : to.ns + ":" + to.id;
}

std::vector<std::size_t> Model::of_class(ResourceClass c) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < resources_.size(); ++i)
        if (resources_[i].cls == c) out.push_back(i);
    return out;
}

std::set<std::string> Model::namespaces() const {
    std::set<std::string> out{ns};
    for (const auto& r : resources_) out.insert(r.ns);
    return out;
}

}  // namespace lyphc
