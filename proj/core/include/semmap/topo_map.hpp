#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace semmap {

/// 2-D agent position, meters.
struct PositionSample {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const PositionSample&) const = default;
};

/// Per-object recognition certainties, each in [0,1].
using ObjectEvidence = std::vector<double>;

struct SemmapConfig {
    double activation_threshold = 0.5539; // a_t, in (0,1]
    double learning_rate = 0.0139;        // e, in (0,1)
    double summation_limit = 5.0;         // s_t, > 0
    int n_objects = 18;

    void validate() const; // throws ValidationError
};

/// A place node. `objects` is always the log-compressed view of `phi`:
/// objects[i] = log(1+phi[i]) / log(1+s_t), phi[i] in [0, s_t].
struct MapNode {
    int id = 0;
    PositionSample center;
    std::vector<double> phi;
    std::vector<double> objects;

    bool operator==(const MapNode&) const = default;
};

/// Snapshot of the departed node's object vector, produced on each
/// winner transition and consumed by the categorizer for training.
struct TrainingEmission {
    int source_node = 0;
    std::vector<double> vector;

    bool operator==(const TrainingEmission&) const = default;
};

/// Topological map: nodes are places, undirected edges are traversals.
/// Plain value type; copying it is the supported snapshot mechanism.
struct TopoMap {
    std::vector<MapNode> nodes;                // ordered by ascending id
    std::set<std::pair<int, int>> edges;       // normalized (a < b), no self-loops
    std::optional<int> last_winner;            // u
    int n_objects = 0;                         // fixed by the first sample

    const MapNode* find(int id) const;
    MapNode* find(int id);

    bool operator==(const TopoMap&) const = default;
};

/// Radial-basis activation of a node center for a position: 1 / (1 + D).
double node_activation(const PositionSample& p, const PositionSample& center);

/// Highest-activation node, ties broken by lowest id. Empty map -> nullopt.
std::optional<std::pair<int, double>> find_winner(const TopoMap& map, const PositionSample& p);

/// phi[i] := min(s_t, phi[i] + r[i]), then the objects view is recomputed.
void accumulate_evidence(MapNode& node, const ObjectEvidence& r, double summation_limit);

/// objects[i] = log(1+phi[i]) / log(1+s_t).
void recompute_objects(MapNode& node, double summation_limit);

/// center := center + e * (p - center).
void update_center(MapNode& node, const PositionSample& p, double learning_rate);

/// One competition/adaptation/cooperation step. Creates a node when the
/// winner activation falls below the threshold (or the map is empty),
/// otherwise adapts the winner. Returns the emission fired on a winner
/// transition, if any.
std::optional<TrainingEmission> process_sample(TopoMap& map,
                                               const PositionSample& p,
                                               const ObjectEvidence& r,
                                               const SemmapConfig& cfg);

/// Line-oriented export: `node <id> <x> <y> <o_1> ... <o_n> [cluster <cid>]`
/// records first, then `edge <a> <b>` records; floats at 6 decimals.
void write_map_document(std::ostream& out, const TopoMap& map,
                        const std::map<int, int>* clusters = nullptr);

/// Same content as Graphviz DOT for visualization tools.
void write_map_dot(std::ostream& out, const TopoMap& map,
                   const std::map<int, int>* clusters = nullptr);

} // namespace semmap
