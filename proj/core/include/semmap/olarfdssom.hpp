#pragma once

#include <set>
#include <utility>
#include <vector>

namespace semmap {

struct OlarfdssomConfig {
    double activation_threshold = 0.9879; // a_t, in (0,1)
    double lowest_win_fraction = 0.1914;  // lp, in (0,1)
    double relevance_rate = 0.0163;       // beta, in (0,1)
    int max_competitions = 34;            // maxcomp, >= 1
    double winner_rate = 0.0118;          // e_b, in (0,1)
    double neighbor_rate = 0.0076;        // e_n, in (0, e_b]
    double relevance_smoothness = 0.0781; // s, > 0
    double connection_threshold = 0.0301; // c, >= 0
    int max_nodes = 40;                   // N_max, >= 1
    double epsilon = 1e-9;                // division safety in the activation

    void validate() const; // throws ValidationError

    // Alternative published tuning (pairs with summation_limit = 7).
    static OlarfdssomConfig preset_b();

    bool operator==(const OlarfdssomConfig&) const = default;
};

/// Prototype node of the categorizer. `id` is the stable cluster id;
/// ids are never reused after removal.
struct SomNode {
    int id = 0;
    std::vector<double> center;    // c_j, in [0,1]^n
    std::vector<double> delta;     // moving average of |x - c|, >= 0
    std::vector<double> relevance; // omega_j, in [0,1]^n
    double wins = 0.0;

    bool operator==(const SomNode&) const = default;
};

/// Value type; copying is the supported snapshot mechanism.
struct SomMap {
    std::vector<SomNode> nodes;               // ordered by ascending id
    std::set<std::pair<int, int>> connections; // normalized (a < b)
    long nwins = 0;                           // competitions since last reset
    int next_id = 0;
    int dim = 0;

    const SomNode* find(int id) const;
    SomNode* find(int id);
    std::vector<int> neighbors(int id) const;

    bool operator==(const SomMap&) const = default;
};

struct TrainResult {
    int winner = -1;          // node adapted, or the node just created
    double activation = 1.0;  // winner activation at competition time
    bool created = false;
    bool reset = false;       // a prune/reset cycle fired during this call
    std::vector<int> removed; // ids pruned by this call
};

/// sqrt( sum_i omega_i * (x_i - c_i)^2 )
double weighted_distance(const std::vector<double>& x, const SomNode& node);

/// (sum omega) / (sum omega + weighted_distance + eps); 1 at zero distance
/// with nonzero relevance, strictly decreasing in the distance.
double som_activation(const std::vector<double>& x, const SomNode& node, double epsilon);

/// Highest-activation node, ties broken by lowest id. Throws on empty map.
std::pair<int, double> som_find_winner(const SomMap& map, const std::vector<double>& x,
                                       double epsilon);

/// Relevance from the distance moving average: dimensions with below-mean
/// delta approach 1, above-mean approach 0; `smoothness` controls how soft
/// the transition is. All-equal deltas give uniform relevance 1.
std::vector<double> relevance_from_delta(const std::vector<double>& delta, double smoothness);

/// Moving-average / relevance / center update for the winner (rate e_b)
/// and its connected neighbors (rate e_n); increments the winner's wins.
void adapt(SomMap& map, int winner_id, const std::vector<double>& x,
           const OlarfdssomConfig& cfg);

/// Recomputes the whole connection set: a,b connected iff
/// sum_i |omega_ai - omega_bi| < c * n. Applied on insertion and after pruning.
void update_connections(SomMap& map, const OlarfdssomConfig& cfg);

/// When nwins >= maxcomp: removes nodes with wins < lp * maxcomp, refreshes
/// connections, resets nwins. Surviving nodes keep their win counts.
/// Returns the removed ids (empty when no reset was due).
std::vector<int> maybe_prune(SomMap& map, const OlarfdssomConfig& cfg);

/// One self-organization step: bootstrap / create / adapt, then the prune
/// check; nwins advances once per call.
TrainResult train(SomMap& map, const std::vector<double>& x, const OlarfdssomConfig& cfg);

/// Cluster id for a pattern: the activation winner. Pure read; throws
/// "no categories learned yet" on an empty map.
int cluster(const SomMap& map, const std::vector<double>& x, double epsilon = 1e-9);

} // namespace semmap
