#include "semmap/olarfdssom.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "semmap/errors.hpp"

namespace semmap {

void OlarfdssomConfig::validate() const {
    if (!(activation_threshold > 0.0 && activation_threshold < 1.0))
        throw ValidationError("activation_threshold must be in (0,1)");
    if (!(lowest_win_fraction > 0.0 && lowest_win_fraction < 1.0))
        throw ValidationError("lowest_win_fraction must be in (0,1)");
    if (!(relevance_rate > 0.0 && relevance_rate < 1.0))
        throw ValidationError("relevance_rate must be in (0,1)");
    if (max_competitions < 1)
        throw ValidationError("max_competitions must be >= 1");
    if (!(winner_rate > 0.0 && winner_rate < 1.0))
        throw ValidationError("winner_rate must be in (0,1)");
    if (!(neighbor_rate > 0.0 && neighbor_rate <= winner_rate))
        throw ValidationError("neighbor_rate must be in (0, winner_rate]");
    if (!(relevance_smoothness > 0.0))
        throw ValidationError("relevance_smoothness must be > 0");
    if (!(connection_threshold >= 0.0))
        throw ValidationError("connection_threshold must be >= 0");
    if (max_nodes < 1)
        throw ValidationError("max_nodes must be >= 1");
    if (!(epsilon > 0.0))
        throw ValidationError("epsilon must be > 0");
}

OlarfdssomConfig OlarfdssomConfig::preset_b() {
    OlarfdssomConfig cfg;
    cfg.activation_threshold = 0.9668;
    cfg.lowest_win_fraction = 0.1414;
    cfg.relevance_rate = 0.0532;
    cfg.max_competitions = 89;
    cfg.winner_rate = 0.0436;
    cfg.neighbor_rate = 0.0109;
    cfg.relevance_smoothness = 0.0453;
    cfg.connection_threshold = 0.1108;
    return cfg;
}

const SomNode* SomMap::find(int id) const {
    for (const auto& n : nodes)
        if (n.id == id) return &n;
    return nullptr;
}

SomNode* SomMap::find(int id) {
    return const_cast<SomNode*>(static_cast<const SomMap*>(this)->find(id));
}

std::vector<int> SomMap::neighbors(int id) const {
    std::vector<int> out;
    for (const auto& [a, b] : connections) {
        if (a == id) out.push_back(b);
        else if (b == id) out.push_back(a);
    }
    return out;
}

double weighted_distance(const std::vector<double>& x, const SomNode& node) {
    if (x.size() != node.center.size())
        throw ValidationError("pattern length does not match map dimensionality");
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - node.center[i];
        acc += node.relevance[i] * d * d;
    }
    return std::sqrt(acc);
}

double som_activation(const std::vector<double>& x, const SomNode& node, double epsilon) {
    const double rel_sum = std::accumulate(node.relevance.begin(), node.relevance.end(), 0.0);
    return rel_sum / (rel_sum + weighted_distance(x, node) + epsilon);
}

std::pair<int, double> som_find_winner(const SomMap& map, const std::vector<double>& x,
                                       double epsilon) {
    if (map.nodes.empty())
        throw std::runtime_error("competition on an empty map");
    int best_id = map.nodes.front().id;
    double best_act = som_activation(x, map.nodes.front(), epsilon);
    for (std::size_t i = 1; i < map.nodes.size(); ++i) {
        const double act = som_activation(x, map.nodes[i], epsilon);
        if (act > best_act) { // strict: ties keep the lowest id
            best_act = act;
            best_id = map.nodes[i].id;
        }
    }
    return {best_id, best_act};
}

std::vector<double> relevance_from_delta(const std::vector<double>& delta, double smoothness) {
    std::vector<double> omega(delta.size(), 1.0);
    if (delta.empty()) return omega;
    const auto [mn, mx] = std::minmax_element(delta.begin(), delta.end());
    if (*mx == *mn) return omega; // no spread, every dimension fully relevant
    const double mean =
        std::accumulate(delta.begin(), delta.end(), 0.0) / static_cast<double>(delta.size());
    const double scale = smoothness * (*mx - *mn);
    for (std::size_t i = 0; i < delta.size(); ++i)
        omega[i] = 1.0 / (1.0 + std::exp((delta[i] - mean) / scale));
    return omega;
}

namespace {

void adapt_node(SomNode& node, const std::vector<double>& x, double rate,
                const OlarfdssomConfig& cfg) {
    const double ma_rate = cfg.relevance_rate * rate; // beta * e
    for (std::size_t i = 0; i < node.delta.size(); ++i)
        node.delta[i] =
            (1.0 - ma_rate) * node.delta[i] + ma_rate * std::abs(x[i] - node.center[i]);
    node.relevance = relevance_from_delta(node.delta, cfg.relevance_smoothness);
    for (std::size_t i = 0; i < node.center.size(); ++i)
        node.center[i] += rate * (x[i] - node.center[i]);
}

int insert_node(SomMap& map, const std::vector<double>& x, double wins,
                const OlarfdssomConfig& cfg) {
    SomNode node;
    node.id = map.next_id++;
    node.center = x;
    node.delta.assign(x.size(), 0.0);
    node.relevance.assign(x.size(), 1.0);
    node.wins = wins;
    map.nodes.push_back(std::move(node));
    update_connections(map, cfg);
    return map.nodes.back().id;
}

} // namespace

void adapt(SomMap& map, int winner_id, const std::vector<double>& x,
           const OlarfdssomConfig& cfg) {
    SomNode* winner = map.find(winner_id);
    if (!winner)
        throw std::runtime_error("adapt: no such node");
    adapt_node(*winner, x, cfg.winner_rate, cfg);
    for (int nb : map.neighbors(winner_id))
        adapt_node(*map.find(nb), x, cfg.neighbor_rate, cfg);
    winner->wins += 1.0;
}

void update_connections(SomMap& map, const OlarfdssomConfig& cfg) {
    map.connections.clear();
    const double limit = cfg.connection_threshold * static_cast<double>(map.dim);
    for (std::size_t i = 0; i < map.nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < map.nodes.size(); ++j) {
            double diff = 0.0;
            for (std::size_t k = 0; k < map.nodes[i].relevance.size(); ++k)
                diff += std::abs(map.nodes[i].relevance[k] - map.nodes[j].relevance[k]);
            if (diff < limit)
                map.connections.insert(std::minmax(map.nodes[i].id, map.nodes[j].id));
        }
    }
}

std::vector<int> maybe_prune(SomMap& map, const OlarfdssomConfig& cfg) {
    std::vector<int> removed;
    if (map.nwins < cfg.max_competitions) return removed;
    const double threshold =
        cfg.lowest_win_fraction * static_cast<double>(cfg.max_competitions);
    for (auto it = map.nodes.begin(); it != map.nodes.end();) {
        if (it->wins < threshold) {
            removed.push_back(it->id);
            it = map.nodes.erase(it);
        } else {
            ++it; // survivors keep their accumulated wins
        }
    }
    update_connections(map, cfg);
    map.nwins = 0;
    return removed;
}

TrainResult train(SomMap& map, const std::vector<double>& x, const OlarfdssomConfig& cfg) {
    if (map.dim == 0)
        map.dim = static_cast<int>(x.size());
    else if (map.dim != static_cast<int>(x.size()))
        throw ValidationError("pattern length does not match map dimensionality");

    TrainResult res;

    if (map.nodes.empty()) {
        // First pattern ever bootstraps the map outside the competition
        // loop; a map emptied by pruning re-seeds like a regular insertion.
        const bool first_ever = map.next_id == 0 && map.nwins == 0;
        const double wins0 =
            first_ever ? 0.0 : cfg.lowest_win_fraction * static_cast<double>(map.nwins);
        res.winner = insert_node(map, x, wins0, cfg);
        res.created = true;
        if (first_ever) {
            map.nwins = 1;
            return res;
        }
    } else {
        const auto [winner_id, act] = som_find_winner(map, x, cfg.epsilon);
        res.winner = winner_id;
        res.activation = act;
        if (act < cfg.activation_threshold &&
            static_cast<int>(map.nodes.size()) < cfg.max_nodes) {
            res.winner = insert_node(
                map, x, cfg.lowest_win_fraction * static_cast<double>(map.nwins), cfg);
            res.created = true;
        } else {
            adapt(map, winner_id, x, cfg);
        }
    }

    res.reset = map.nwins >= cfg.max_competitions;
    res.removed = maybe_prune(map, cfg);
    map.nwins += 1;
    return res;
}

int cluster(const SomMap& map, const std::vector<double>& x, double epsilon) {
    if (map.nodes.empty())
        throw std::runtime_error("no categories learned yet");
    return som_find_winner(map, x, epsilon).first;
}

} // namespace semmap
