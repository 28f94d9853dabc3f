#pragma once

#include <string>
#include <string_view>

#include "lyphc/model.hpp"
#include "lyphc/report.hpp"

namespace lyphc {

/// Thrown for documents that cannot be turned into a model at all.
class DocumentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Builds a model from a parsed document. Inline (nested) resource
/// definitions inside reference-valued properties are hoisted into their own
/// resources and replaced by their id. Structural problems that validate_syntax
/// reports are skipped here rather than diagnosed.
Model parse_model(const json& doc);

/// Parses UTF-8 JSON text. Throws DocumentError when the text is not JSON.
Model parse_model_text(std::string_view text);

enum class DocumentKind {
    Input,      // imported resources are left out
    Generated,  // everything, including imported resources
};

json to_json(const Model& model, DocumentKind kind);

/// Canonical text: sorted keys, two-space indent, LF, trailing newline.
std::string canonical_text(const json& doc);

/// canonical_text(to_json(model, kind)).
std::string serialize(const Model& model, DocumentKind kind);

/// Structural equality of two models (same canonical generated document).
bool structurally_equal(const Model& a, const Model& b);

/// Text for one resource as it appears in a document (used by editor patches).
json resource_to_json(const Resource& r, std::string_view model_ns);
Resource resource_from_json(const json& obj, ResourceClass cls, std::string_view model_ns);

}  // namespace lyphc
