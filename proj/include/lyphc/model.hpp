#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "lyphc/identifier.hpp"
#include "lyphc/vocabulary.hpp"

namespace lyphc {

using json = nlohmann::json;

/// A declared or generated resource. Everything except identity lives in
/// `props`, keyed by the property names of the vocabulary; properties the
/// vocabulary does not know are kept as-is.
struct Resource {
    ResourceClass cls = ResourceClass::Node;
    std::string id;   // local part
    std::string ns;   // owning namespace
    bool imported = false;
    json props = json::object();
    std::string origin;  // JSON pointer of the declaration in its source document

    std::string key() const { return ns + ":" + id; }

    bool has(std::string_view p) const { return props.contains(p); }
    bool flag(std::string_view p, bool fallback = false) const;
    std::optional<double> number(std::string_view p) const;
    std::optional<std::string> text(std::string_view p) const;
    std::optional<std::string> ref(std::string_view p) const;
    /// Reference values of a Ref (0 or 1 entries) or RefList property.
    std::vector<std::string> refs(std::string_view p) const;

    void set(std::string_view p, json value) { props[std::string(p)] = std::move(value); }
    void erase(std::string_view p) { props.erase(std::string(p)); }
    /// Appends to a list property unless already present. Returns true if added.
    bool add_ref(std::string_view p, const std::string& value);
    /// Removes `value` from a list property; drops the property when it empties.
    bool remove_ref(std::string_view p, const std::string& value);

    bool generated() const { return flag("generated"); }
};

struct ImportRef {
    std::string url;
    std::string ns;  // expected namespace, empty when taken from the fetched document

    friend bool operator==(const ImportRef&, const ImportRef&) = default;
};

/// Per-clade presence of resources. Resources missing from `presence`
/// exist in every clade.
struct Variance {
    std::vector<std::string> clades;
    std::map<std::string, std::vector<std::string>> presence;

    bool empty() const { return clades.empty() && presence.empty(); }
    friend bool operator==(const Variance&, const Variance&) = default;
};

struct Resolution {
    enum class Kind { Found, UnresolvedLocal, UnresolvedForeign };
    Kind kind = Kind::UnresolvedLocal;
    std::size_t index = 0;
    std::string ns;
    std::string local;

    bool found() const noexcept { return kind == Kind::Found; }
    std::string key() const { return ns + ":" + local; }
};

/// A model document in memory: metadata plus resources in declaration order.
/// Lookup is by (namespace, local id); on duplicates the first declaration wins.
class Model {
public:
    std::string id = "model";
    std::string ns = "model";
    std::string name;
    std::string description;
    std::string schema_version{kSchemaVersion};
    bool generated = false;
    std::vector<ImportRef> imports;
    Variance variance;
    json extra = json::object();

    const std::vector<Resource>& resources() const noexcept { return resources_; }
    Resource& at(std::size_t i) { return resources_.at(i); }
    const Resource& at(std::size_t i) const { return resources_.at(i); }
    std::size_t size() const noexcept { return resources_.size(); }

    std::size_t add(Resource r);
    void insert(std::size_t pos, Resource r);
    void erase(std::size_t pos);
    void replace(std::size_t pos, Resource r);
    /// Rebuilds the lookup index; needed after editing ids/namespaces through at().
    void reindex();

    std::optional<std::size_t> find(std::string_view ns, std::string_view local) const;
    std::optional<std::size_t> find_key(std::string_view key) const;
    const Resource* get(std::string_view ns, std::string_view local) const;

    /// Resolves a reference written inside a resource of namespace `home`.
    /// Throws IdentifierError for malformed references.
    Resolution resolve(std::string_view ref, std::string_view home) const;
    /// Resolves a reference, returning the index or nullopt.
    std::optional<std::size_t> lookup(std::string_view ref, std::string_view home) const;

    /// Text for a reference from `from` to `to` (prefixed only across namespaces).
    static std::string ref_text(const Resource& from, const Resource& to);
    static std::string ref_text(std::string_view home, const Resource& to);

    std::vector<std::size_t> of_class(ResourceClass c) const;
    std::set<std::string> namespaces() const;
    /// Number of distinct (namespace, id) keys.
    std::size_t unique_count() const noexcept { return index_.size(); }

private:
    std::vector<Resource> resources_;
    std::unordered_map<std::string, std::size_t> index_;
};

using ModelSpec = Model;
using GeneratedModel = Model;

}  // namespace lyphc
