#pragma once

#include <set>
#include <string>
#include <string_view>

#include "lyphc/model.hpp"
#include "lyphc/report.hpp"

namespace lyphc {

/// Well-formedness and schema conformance of a raw model document: JSON
/// syntax, value types, required fields, enum values, identifier and CURIE
/// formats, and the one-definition-method rule for chains. Unknown properties
/// are reported as warnings. `source` prefixes issue locations.
ValidationReport validate_syntax(std::string_view text, std::string_view source = {});
ValidationReport validate_document(const json& doc, std::string_view source = {});

/// Reference-level checks over a parsed model:
///  - foreign-prefixed references that do not resolve: ERROR (the message says
///    whether the namespace is linked at all)
///  - local references that do not resolve: WARNING, eligible for stubs
///  - duplicate identifiers: one WARNING per duplicated id
///  - references to a resource of the wrong class: ERROR
///  - region borders that do not close, variance clades that are not declared: ERROR
/// `linked` lists namespaces available besides those present in the model.
ValidationReport validate_references(const Model& model, const std::set<std::string>& linked = {});

/// Extra checks that only apply to generated output (e.g. coalescence
/// members must be concrete lyphs).
ValidationReport validate_generated(const Model& model);

namespace codes {
inline constexpr std::string_view kUnreadable = "unreadable";
inline constexpr std::string_view kType = "type";
inline constexpr std::string_view kRequired = "required";
inline constexpr std::string_view kEnum = "enum";
inline constexpr std::string_view kIdentifier = "identifier";
inline constexpr std::string_view kCurie = "curie";
inline constexpr std::string_view kAmbiguousChain = "ambiguous-chain";
inline constexpr std::string_view kUnknownProperty = "unknown-property";
inline constexpr std::string_view kSchemaVersion = "schema-version";
inline constexpr std::string_view kInvariant = "invariant";
inline constexpr std::string_view kUnresolvedForeign = "unresolved-foreign";
inline constexpr std::string_view kUnresolvedLocal = "unresolved-local";
inline constexpr std::string_view kDuplicate = "duplicate";
inline constexpr std::string_view kClassMismatch = "class-mismatch";
}  // namespace codes

}  // namespace lyphc
