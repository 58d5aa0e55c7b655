#include "semmap/pipeline.hpp"

#include <stdexcept>

namespace semmap {

void LabelTally::add(const std::string& label, long record_index) {
    auto [it, inserted] = counts.try_emplace(label, 0L, record_index);
    ++it->second.first;
}

std::string LabelTally::majority() const {
    std::string best;
    long best_count = 0;
    long best_first = -1;
    for (const auto& [label, cf] : counts) {
        const auto [count, first] = cf;
        if (count > best_count || (count == best_count && first < best_first)) {
            best = label;
            best_count = count;
            best_first = first;
        }
    }
    return best;
}

std::optional<TrainingEmission> step(RunState& state, const DatasetRecord& record,
                                     const PipelineConfig& cfg) {
    auto emission = process_sample(state.topo, record.position, record.evidence, cfg.semmap);
    const int winner = *state.topo.last_winner;
    const long index = static_cast<long>(state.winner_log.size());
    state.winner_log.push_back(winner);
    if (!record.label.empty())
        state.node_truth[winner].add(record.label, index);
    if (emission) {
        train(state.som, emission->vector, cfg.som);
        ++state.emissions;
    }
    return emission;
}

std::map<int, int> categorize_nodes(const RunState& state, double epsilon) {
    std::map<int, int> out;
    for (const auto& node : state.topo.nodes)
        out[node.id] = cluster(state.som, node.objects, epsilon);
    return out;
}

SequenceReplay replay_sequence(const Sequence& seq, SomMap& som, const PipelineConfig& cfg) {
    RunState state;
    state.som = std::move(som); // fresh map per sequence, shared categorizer
    for (const auto& record : seq.records)
        step(state, record, cfg);
    // hand the trained categorizer back, keep the mapper side
    SequenceReplay replay;
    replay.name = seq.name;
    replay.topo = std::move(state.topo);
    replay.emissions = state.emissions;
    replay.winner_log = std::move(state.winner_log);
    replay.node_truth = std::move(state.node_truth);
    replay.record_labels.reserve(seq.records.size());
    for (const auto& record : seq.records)
        replay.record_labels.push_back(record.label);
    som = std::move(state.som);
    return replay;
}

std::vector<std::pair<int, std::string>> node_pairs(const SequenceReplay& replay,
                                                    const SomMap& som, double epsilon) {
    std::vector<std::pair<int, std::string>> pairs;
    for (const auto& node : replay.topo.nodes) {
        const auto it = replay.node_truth.find(node.id);
        if (it == replay.node_truth.end()) continue;
        const std::string truth = it->second.majority();
        if (truth.empty()) continue;
        pairs.emplace_back(cluster(som, node.objects, epsilon), truth);
    }
    return pairs;
}

std::vector<std::pair<int, std::string>> frame_pairs(const SequenceReplay& replay,
                                                     const SomMap& som, double epsilon) {
    std::map<int, int> node_cluster;
    for (const auto& node : replay.topo.nodes)
        node_cluster[node.id] = cluster(som, node.objects, epsilon);

    std::vector<std::pair<int, std::string>> pairs;
    for (std::size_t i = 0; i < replay.winner_log.size(); ++i) {
        if (replay.record_labels[i].empty()) continue;
        pairs.emplace_back(node_cluster.at(replay.winner_log[i]), replay.record_labels[i]);
    }
    return pairs;
}

EvalReport evaluate_pairs(const std::vector<std::pair<int, std::string>>& pairs) {
    std::vector<int> clusters;
    std::vector<std::string> truths;
    clusters.reserve(pairs.size());
    truths.reserve(pairs.size());
    for (const auto& [c, t] : pairs) {
        clusters.push_back(c);
        truths.push_back(t);
    }
    return evaluate(clusters, truths);
}

namespace {

CheckpointEval checkpoint(const SequenceReplay& replay, const SomMap& som, double epsilon) {
    CheckpointEval out;
    const auto np = node_pairs(replay, som, epsilon);
    if (!np.empty()) out.node_level = evaluate_pairs(np);
    const auto fp = frame_pairs(replay, som, epsilon);
    if (!fp.empty()) out.frame_level = evaluate_pairs(fp);
    return out;
}

} // namespace

OverTimeReport run_sequences(const std::vector<Sequence>& corpus, const PipelineConfig& cfg,
                             const std::vector<int>& order) {
    if (corpus.empty())
        throw std::runtime_error("run_sequences: empty corpus");
    cfg.validate();

    OverTimeReport report;
    report.order = order;

    SomMap som;
    std::vector<SequenceReplay> replays;
    replays.reserve(order.size());
    for (int idx : order) {
        replays.push_back(replay_sequence(corpus.at(static_cast<std::size_t>(idx)), som, cfg));
        SequenceOutcome outcome;
        outcome.name = replays.back().name;
        outcome.after_own = checkpoint(replays.back(), som, cfg.som.epsilon);
        report.sequences.push_back(std::move(outcome));
    }
    for (std::size_t k = 0; k < replays.size(); ++k)
        report.sequences[k].after_all = checkpoint(replays[k], som, cfg.som.epsilon);
    return report;
}

Runner::Runner(PipelineConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
}

std::optional<TrainingEmission> Runner::step(const DatasetRecord& record) {
    std::lock_guard lock(mu_);
    return semmap::step(state_, record, cfg_);
}

RunState Runner::snapshot() const {
    std::lock_guard lock(mu_);
    return state_;
}

std::map<int, int> Runner::categorize_nodes() const {
    std::lock_guard lock(mu_);
    return semmap::categorize_nodes(state_, cfg_.som.epsilon);
}

} // namespace semmap
