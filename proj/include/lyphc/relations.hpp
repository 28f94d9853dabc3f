#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lyphc/model.hpp"
#include "lyphc/report.hpp"

namespace lyphc {

/// Completes every bidirectional relationship pair in place (layers/layerIn,
/// conveyingLyph/conveys, source/sourceOf, ...). A single-valued side that
/// already points elsewhere is a conflict and is reported as an ERROR naming
/// all three resources; the conflicting assignment is left untouched.
/// References that do not resolve are skipped.
ValidationReport sync_relations(Model& model);

/// Calls `f` on every reference value of `r` (vocabulary reference properties
/// only); a returned string replaces the value, nullopt keeps it.
void rewrite_refs(Resource& r, const std::function<std::optional<std::string>(const std::string&)>& f);

/// A cycle in the composition graph (layers, internalLyphs, materials), one per
/// strongly connected component that contains a cycle.
struct CompositionCycle {
    std::vector<std::size_t> members;  // every resource of the component, ascending
    std::vector<std::size_t> path;     // one closed walk, first element repeated at the end
};

std::vector<CompositionCycle> composition_cycles(const Model& model);

/// ERROR issue per composition cycle.
ValidationReport composition_cycle_check(const Model& model);

}  // namespace lyphc
