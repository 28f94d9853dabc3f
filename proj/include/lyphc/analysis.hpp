#pragma once

#include <set>
#include <string>
#include <vector>

#include "lyphc/model.hpp"
#include "lyphc/report.hpp"

namespace lyphc {

/// A link end: `source` true for the link's source end.
struct LinkEnd {
    std::size_t link;
    bool source;
};

/// True when a lyph of `topology` closes the given end of the link it conveys.
/// CYST closes both, BAG-right the source end, BAG-left the target end.
bool seals(std::string_view topology, bool source_end) noexcept;

/// Connected components of links (joined at shared end nodes), each a sorted
/// list of link indices; components are ordered by their smallest link.
std::vector<std::vector<std::size_t>> link_components(const Model& model);

struct NeurulateResult {
    std::vector<Resource> groups;                    // dynamic NEURULATED groups
    std::vector<std::vector<std::size_t>> components;  // link indices of each group
    ValidationReport report;
};

/// Closed components: every terminal attachment (link end at a degree-1
/// node) is sealed by the conveyed lyph. Components without terminal ends
/// are not reported.
NeurulateResult neurulate(const Model& model);

/// Drops previous NEURULATED groups and appends `groups`.
void replace_neurulated(Model& model, std::vector<Resource> groups);

struct QueryResult {
    Resource group;  // dynamic QUERY group, possibly empty
    ValidationReport report;
};

/// Links, nodes and lyphs of the neurulated components that contain the
/// start node, link or lyph (for a lyph: links it conveys, plus links whose
/// lyphs or nodes it houses).
QueryResult soma_processes(const Model& model, std::string_view start);

struct Visibility {
    std::set<std::string> hidden;  // resource keys
    ValidationReport report;
};

/// Resources absent from `clade` become hidden; a hidden node hides its
/// links and a hidden link hides its conveyed lyph.
Visibility filter_by_clade(const Model& model, std::string_view clade);

/// Sets isVisible=false on hidden resources.
void apply_visibility(Model& model, const Visibility& v);

}  // namespace lyphc
