#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace lyphc {

enum class ResourceClass {
    Node,
    Link,
    Lyph,
    Material,
    Chain,
    Group,
    Coalescence,
    Scaffold,
    Anchor,
    Wire,
    Region,
};

inline constexpr std::array<ResourceClass, 11> kAllClasses = {
    ResourceClass::Node,     ResourceClass::Link,  ResourceClass::Lyph,
    ResourceClass::Material, ResourceClass::Chain, ResourceClass::Group,
    ResourceClass::Coalescence, ResourceClass::Scaffold, ResourceClass::Anchor,
    ResourceClass::Wire,     ResourceClass::Region,
};

std::string_view class_name(ResourceClass c) noexcept;
std::optional<ResourceClass> class_from_name(std::string_view name) noexcept;

/// Top-level document array holding resources of a class ("nodes", "lyphs", ...).
std::string_view collection_name(ResourceClass c) noexcept;
std::optional<ResourceClass> class_from_collection(std::string_view name) noexcept;

enum class PropKind {
    String,
    Bool,
    Number,
    PositiveInteger,
    Fraction,   // number in [0, 1]
    Enum,
    Ref,
    RefList,
    Vector,     // 2 or 3 numbers
    Vector2,
    CurieList,
};

struct PropertyDef {
    std::string_view name;
    PropKind kind;
    std::vector<ResourceClass> targets;       // for Ref / RefList
    std::vector<std::string_view> values;     // for Enum

    bool is_reference() const noexcept { return kind == PropKind::Ref || kind == PropKind::RefList; }
};

/// Properties accepted on a class, common ones (name, ontologyTerms, ...) included.
std::span<const PropertyDef> properties(ResourceClass c);
const PropertyDef* find_property(ResourceClass c, std::string_view name);

/// Bidirectional relation: `owner.property` referencing a `target` has the
/// mirror entry `target.inverse`.
struct RelationEnd {
    ResourceClass owner;
    std::string_view property;
    ResourceClass target;
    std::string_view inverse;
};

/// Both directions of every synchronized relationship pair.
std::span<const RelationEnd> relation_ends();
const RelationEnd* find_relation(ResourceClass owner, std::string_view property, ResourceClass target);
bool is_relational(ResourceClass owner, std::string_view property);

/// Forward composition edges checked for cycles (layers, internalLyphs, materials).
bool is_composition_property(std::string_view property) noexcept;

inline constexpr std::string_view kSchemaVersion = "1.0";

namespace topology {
inline constexpr std::string_view kTube = "TUBE";
inline constexpr std::string_view kBagLeft = "BAG-left";
inline constexpr std::string_view kBagRight = "BAG-right";
inline constexpr std::string_view kCyst = "CYST";
}  // namespace topology

}  // namespace lyphc
