#pragma once

#include <map>
#include <string>

#include "lyphc/model.hpp"
#include "lyphc/report.hpp"

namespace lyphc {

inline constexpr std::string_view kDefaultVocab = "https://apinatomy.example/schema#";
inline constexpr std::string_view kDefaultBase = "https://apinatomy.example/models/";

/// Term mapping for JSON-LD output. Resource IRIs are base + namespace + "#" + local id.
struct JsonLdContext {
    std::string vocab = std::string(kDefaultVocab);
    std::string base = std::string(kDefaultBase);
    std::map<std::string, json> terms;  // property -> context definition

    std::string resource_iri(std::string_view ns, std::string_view local) const;
    std::string type_iri(ResourceClass c) const;
    json to_json() const;
};

/// Context with a term for every vocabulary property: references and
/// ontology terms coerced to @id, vectors to @json.
JsonLdContext default_context(std::string base = std::string(kDefaultBase));

/// Canonical generated document (sorted keys, declaration order lists).
std::string serialize_generated(const Model& model);

struct JsonLdResult {
    json document;  // {"@context": ..., "@graph": [...]}
    ValidationReport report;
};

/// One node per resource with its IRI, its class type and its properties.
/// Properties without a context term are left out and reported as one ERROR.
JsonLdResult to_json_ld(const Model& model, const JsonLdContext& ctx = default_context());

/// key -> {class, ontologyTerms, provenance, namespace, imported}, sorted by key.
json resource_map(const Model& model);

}  // namespace lyphc
