#include "semmap/topo_map.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "semmap/errors.hpp"

namespace semmap {

void SemmapConfig::validate() const {
    if (!(activation_threshold > 0.0 && activation_threshold <= 1.0))
        throw ValidationError("semmap activation_threshold must be in (0,1]");
    if (!(learning_rate > 0.0 && learning_rate < 1.0))
        throw ValidationError("semmap learning_rate must be in (0,1)");
    if (!(summation_limit > 0.0))
        throw ValidationError("semmap summation_limit must be > 0");
    if (n_objects <= 0)
        throw ValidationError("semmap n_objects must be > 0");
}

const MapNode* TopoMap::find(int id) const {
    for (const auto& n : nodes)
        if (n.id == id) return &n;
    return nullptr;
}

MapNode* TopoMap::find(int id) {
    return const_cast<MapNode*>(static_cast<const TopoMap*>(this)->find(id));
}

double node_activation(const PositionSample& p, const PositionSample& center) {
    const double dx = p.x - center.x;
    const double dy = p.y - center.y;
    return 1.0 / (1.0 + std::sqrt(dx * dx + dy * dy));
}

std::optional<std::pair<int, double>> find_winner(const TopoMap& map, const PositionSample& p) {
    if (map.nodes.empty()) return std::nullopt;
    int best_id = map.nodes.front().id;
    double best_act = node_activation(p, map.nodes.front().center);
    for (std::size_t i = 1; i < map.nodes.size(); ++i) {
        const double act = node_activation(p, map.nodes[i].center);
        if (act > best_act) { // strict: ties keep the lowest id
            best_act = act;
            best_id = map.nodes[i].id;
        }
    }
    return std::make_pair(best_id, best_act);
}

void recompute_objects(MapNode& node, double summation_limit) {
    const double denom = std::log1p(summation_limit);
    node.objects.resize(node.phi.size());
    for (std::size_t i = 0; i < node.phi.size(); ++i)
        node.objects[i] = std::log1p(node.phi[i]) / denom;
}

void accumulate_evidence(MapNode& node, const ObjectEvidence& r, double summation_limit) {
    if (r.size() != node.phi.size())
        throw ValidationError("object evidence length does not match map dimensionality");
    for (std::size_t i = 0; i < r.size(); ++i)
        node.phi[i] = std::min(summation_limit, node.phi[i] + r[i]);
    recompute_objects(node, summation_limit);
}

void update_center(MapNode& node, const PositionSample& p, double learning_rate) {
    node.center.x += learning_rate * (p.x - node.center.x);
    node.center.y += learning_rate * (p.y - node.center.y);
}

namespace {

void connect(TopoMap& map, int a, int b) {
    if (a == b) return;
    map.edges.insert(std::minmax(a, b));
}

int insert_node(TopoMap& map, const PositionSample& p, const ObjectEvidence& r,
                const SemmapConfig& cfg) {
    MapNode node;
    node.id = map.nodes.empty() ? 0 : map.nodes.back().id + 1;
    node.center = p;
    node.phi.resize(r.size());
    for (std::size_t i = 0; i < r.size(); ++i)
        node.phi[i] = std::clamp(r[i], 0.0, cfg.summation_limit);
    recompute_objects(node, cfg.summation_limit);
    map.nodes.push_back(std::move(node));
    return map.nodes.back().id;
}

} // namespace

std::optional<TrainingEmission> process_sample(TopoMap& map,
                                               const PositionSample& p,
                                               const ObjectEvidence& r,
                                               const SemmapConfig& cfg) {
    if (static_cast<int>(r.size()) != cfg.n_objects)
        throw ValidationError("object evidence length does not match configured n_objects");
    if (map.n_objects == 0)
        map.n_objects = cfg.n_objects;
    else if (map.n_objects != cfg.n_objects)
        throw ValidationError("map was built with a different n_objects");
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw ValidationError("position sample must be finite");

    const auto winner = find_winner(map, p);

    if (!winner || winner->second < cfg.activation_threshold) {
        const int created = insert_node(map, p, r, cfg);
        std::optional<TrainingEmission> emission;
        if (map.last_winner) {
            connect(map, created, *map.last_winner);
            emission = TrainingEmission{*map.last_winner,
                                        map.find(*map.last_winner)->objects};
        }
        map.last_winner = created;
        return emission;
    }

    MapNode& s = *map.find(winner->first);
    accumulate_evidence(s, r, cfg.summation_limit);
    update_center(s, p, cfg.learning_rate);

    std::optional<TrainingEmission> emission;
    if (map.last_winner && *map.last_winner != s.id) {
        connect(map, s.id, *map.last_winner);
        emission = TrainingEmission{*map.last_winner,
                                    map.find(*map.last_winner)->objects};
    }
    map.last_winner = s.id;
    return emission;
}

void write_map_document(std::ostream& out, const TopoMap& map,
                        const std::map<int, int>* clusters) {
    char buf[64];
    for (const auto& n : map.nodes) {
        out << "node " << n.id;
        std::snprintf(buf, sizeof buf, " %.6f %.6f", n.center.x, n.center.y);
        out << buf;
        for (double o : n.objects) {
            std::snprintf(buf, sizeof buf, " %.6f", o);
            out << buf;
        }
        if (clusters) {
            auto it = clusters->find(n.id);
            if (it != clusters->end()) out << " cluster " << it->second;
        }
        out << '\n';
    }
    for (const auto& [a, b] : map.edges)
        out << "edge " << a << ' ' << b << '\n';
}

void write_map_dot(std::ostream& out, const TopoMap& map,
                   const std::map<int, int>* clusters) {
    char buf[64];
    out << "graph topomap {\n  node [shape=circle];\n";
    for (const auto& n : map.nodes) {
        std::snprintf(buf, sizeof buf, "%.6f,%.6f!", n.center.x, n.center.y);
        out << "  n" << n.id << " [pos=\"" << buf << "\"";
        if (clusters) {
            auto it = clusters->find(n.id);
            if (it != clusters->end())
                out << " label=\"" << n.id << ":" << it->second << "\""
                    << " colorscheme=\"set312\" style=\"filled\" fillcolor=\""
                    << (it->second % 12) + 1 << "\"";
        }
        out << "];\n";
    }
    for (const auto& [a, b] : map.edges)
        out << "  n" << a << " -- n" << b << ";\n";
    out << "}\n";
}

} // namespace semmap
