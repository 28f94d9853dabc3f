#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lyphc/geometry.hpp"
#include "lyphc/model.hpp"
#include "lyphc/report.hpp"

namespace lyphc {

/// Placement rule that decides a node's position, strongest first.
enum class Rank { Anchored, Fixed, HostedByLink, BorderHosted, InternalIn, ControlCentroid, Free };

std::string_view rank_name(Rank r) noexcept;

struct LyphPlacement {
    Vec3 center;
    Vec3 axis{1, 0, 0};    // unit, along the conveying link
    Vec3 normal{0, 1, 0};  // unit, across the layers
    double length = 0;
    double width = 0;
    double angle = 0;      // degrees around the axis
    std::vector<double> layer_widths;
};

struct LayoutState {
    std::map<std::string, Vec3> positions;  // node key -> position
    std::map<std::string, Rank> ranks;
    std::map<std::string, LyphPlacement> lyphs;
    std::map<std::string, double> rotations;                     // lyph key -> angle set by alignment
    std::map<std::string, Vec3> pinned;                          // nodes placed by alignment
    std::map<std::string, std::vector<std::size_t>> chain_orders;  // chain key -> slot order
    int iteration = 0;
    std::uint64_t seed = 0;
    bool three_d = false;
};

struct LayoutOptions {
    std::uint64_t seed = 0;
    int iterations = 300;
    bool three_d = false;
    std::optional<std::set<std::string>> active_groups;  // refs; nullopt = everything

    double repulsion = 30.0;
    double spring = 4.0;
    double magnet = 1.0;
    double rest_length = 5.0;
    double damping = 0.9;
    double dt = 0.1;
    double max_step = 10.0;
    double init_extent = 50.0;
    double link_fraction = 0.8;  // conveyed lyph length / link length
    double margin = 0.1;         // internal lyph grid margin, fraction of host size
};

/// Visible nodes, links and lyphs (model indices, ascending).
struct VisibleGraph {
    std::vector<std::size_t> nodes, links, lyphs;
};

/// Visibility from group toggles: members of active groups (nested groups
/// included) plus the end nodes of their links, plus every link whose two
/// ends are visible. Resources with isVisible=false never show.
VisibleGraph visible_subgraph(const Model& model, const std::optional<std::set<std::string>>& active_groups);

struct LayoutResult {
    LayoutState state;
    VisibleGraph graph;
    ValidationReport report;
};

/// Full pipeline: initial positions, `iterations` force steps each followed
/// by constraint projection, then wire stretching, scaling, coalescence
/// alignment and a final projection.
LayoutResult run_layout(const Model& model, const LayoutOptions& options = {});

/// Starting positions: declared layout coordinates, otherwise seeded
/// uniform draws in the initial cube.
LayoutState initial_state(const Model& model, const VisibleGraph& graph, const LayoutOptions& options);

/// Force iterations, each followed by constraint projection in rank order.
/// A non-positive budget leaves the state untouched.
ValidationReport solve(const Model& model, const VisibleGraph& graph, LayoutState& state, int iterations,
                       const LayoutOptions& options);

/// Pins wired chains: root and leaf on the wire ends (swapped with
/// startFromLeaf), interior node k of N at arc-length fraction k/N.
ValidationReport stretch_along_wires(const Model& model, const VisibleGraph& graph, LayoutState& state);

/// Conveyed lyph sizes from link lengths and layer counts; internal lyphs
/// on a grid inside their host.
ValidationReport compute_scaling(const Model& model, const VisibleGraph& graph, LayoutState& state,
                                 const LayoutOptions& options);

/// Moves the links of coalescing lyphs next to each other (CONNECTING) or
/// onto the host's outer layer (EMBEDDING) and turns their layers to face
/// each other.
ValidationReport align_coalescences(const Model& model, const VisibleGraph& graph, LayoutState& state,
                                    const LayoutOptions& options);

/// Trajectory of a link from the current node positions.
std::optional<Curve> link_curve(const Model& model, std::size_t link, const LayoutState& state);
/// Trajectory of a wire from its anchors.
std::optional<Curve> wire_curve(const Model& model, std::size_t wire);
/// Anchor position (z = 0).
std::optional<Vec3> anchor_position(const Model& model, std::size_t anchor);

json layout_to_json(const LayoutState& state);
std::string layout_to_svg(const Model& model, const LayoutState& state);

}  // namespace lyphc
