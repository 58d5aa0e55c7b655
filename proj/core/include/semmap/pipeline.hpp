#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "semmap/dataset.hpp"
#include "semmap/metrics.hpp"
#include "semmap/olarfdssom.hpp"
#include "semmap/topo_map.hpp"

namespace semmap {

struct PipelineConfig {
    SemmapConfig semmap;
    OlarfdssomConfig som;

    void validate() const {
        semmap.validate();
        som.validate();
    }
};

/// Ground-truth bookkeeping for one topological node: which labels its
/// records carried. Majority wins; ties go to the label seen earliest.
struct LabelTally {
    std::map<std::string, std::pair<long, long>> counts; // label -> (count, first index)

    void add(const std::string& label, long record_index);
    std::string majority() const; // empty when no labeled record hit the node
};

struct RunState {
    TopoMap topo;
    SomMap som;
    long emissions = 0;
    std::vector<int> winner_log;          // per consumed record
    std::map<int, LabelTally> node_truth; // topo node id -> label tallies
};

/// One record through the mapper; a winner transition trains the
/// categorizer exactly once.
std::optional<TrainingEmission> step(RunState& state, const DatasetRecord& record,
                                     const PipelineConfig& cfg);

/// Current category of every topological node. Pure; throws when the
/// categorizer has not learned anything yet.
std::map<int, int> categorize_nodes(const RunState& state, double epsilon = 1e-9);

/// The mapper side of a finished sequence, kept around so checkpoints can
/// be re-evaluated against a later categorizer state.
struct SequenceReplay {
    std::string name;
    TopoMap topo;
    long emissions = 0;
    std::vector<int> winner_log;
    std::map<int, LabelTally> node_truth;
    std::vector<std::string> record_labels;
};

/// Replays every record of `seq` against a fresh topological map while
/// training the shared categorizer on each emission.
SequenceReplay replay_sequence(const Sequence& seq, SomMap& som, const PipelineConfig& cfg);

/// (cluster id, truth label) pairs for the labeled nodes of a replay.
std::vector<std::pair<int, std::string>> node_pairs(const SequenceReplay& replay,
                                                    const SomMap& som, double epsilon);

/// Frame-level pairs: each labeled record inherits its winner node's cluster.
std::vector<std::pair<int, std::string>> frame_pairs(const SequenceReplay& replay,
                                                     const SomMap& som, double epsilon);

EvalReport evaluate_pairs(const std::vector<std::pair<int, std::string>>& pairs);

struct CheckpointEval {
    EvalReport node_level;
    EvalReport frame_level;
};

struct SequenceOutcome {
    std::string name;
    CheckpointEval after_own; // right after this sequence's training
    CheckpointEval after_all; // once every sequence has been trained
};

struct OverTimeReport {
    std::vector<SequenceOutcome> sequences; // in training order
    std::vector<int> order;                 // indexes into the input corpus
};

/// Trains the corpus sequence by sequence (shared categorizer, fresh
/// topological map per sequence) and evaluates each sequence at the two
/// protocol checkpoints.
OverTimeReport run_sequences(const std::vector<Sequence>& corpus, const PipelineConfig& cfg,
                             const std::vector<int>& order);

/// Single-writer wrapper whose snapshot/categorize calls are safe to run
/// from other threads while ingestion continues.
class Runner {
public:
    explicit Runner(PipelineConfig cfg);

    std::optional<TrainingEmission> step(const DatasetRecord& record);
    RunState snapshot() const;
    std::map<int, int> categorize_nodes() const;

private:
    PipelineConfig cfg_;
    mutable std::mutex mu_;
    RunState state_;
};

} // namespace semmap
