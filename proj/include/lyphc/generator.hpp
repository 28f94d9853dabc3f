#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "lyphc/model.hpp"
#include "lyphc/report.hpp"

namespace lyphc {

class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Cause { Stub, TemplateInstance, ChainLevel, ChainNode, ChainGroup, Neurulated };

std::string_view cause_name(Cause c) noexcept;

struct TraceEntry {
    std::string key;  // "ns:local"
    Cause cause;

    friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

/// Provenance of everything the generator created.
struct GenerationTrace {
    std::vector<TraceEntry> created;
    std::map<std::string, std::string> source_template;  // instance key -> template key

    void record(const Resource& r, Cause c) { created.push_back({r.key(), c}); }
    bool contains(std::string_view key) const;
};

/// Adds a stub for every local dangling reference. The stub class is the
/// class every referencing property agrees on; no agreement is an ERROR.
ValidationReport autogenerate_stubs(Model& model, GenerationTrace* trace = nullptr);

/// Instantiates the template at `template_index` as "<template>_<context>"
/// in `context_ns`, deep-copying layers ("<instance>_<k>", k from 1).
/// Throws GenerationError for non-templates and id collisions.
std::size_t instantiate_lyph_template(Model& model, std::size_t template_index, const std::string& context,
                                      const std::string& context_ns, GenerationTrace* trace = nullptr);

struct ChainExpansion {
    std::vector<std::string> links, nodes, lyphs;  // keys
    std::string group;
};

/// Expands one chain (any of the three definition methods) into links,
/// nodes, conveyed lyphs and a "chain" group. Chains that already have
/// levels are left alone. Problems are reported, not thrown.
ChainExpansion expand_chain(Model& model, std::size_t chain_index, ValidationReport& report,
                            GenerationTrace* trace = nullptr);

struct GenerateOptions {
    bool neurulate = true;
};

struct GenerateResult {
    Model model;
    GenerationTrace trace;
    ValidationReport report;

    bool ok() const { return !report.has_errors(); }
};

/// Full pipeline: reference check, stubs, composition check, chain expansion
/// (declaration order), relation closure, Neurulator. Any ERROR stops the
/// pipeline; the partial model is returned with the report.
GenerateResult generate(const Model& spec, const GenerateOptions& options = {});

}  // namespace lyphc
