#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semmap/dataset.hpp"
#include "semmap/errors.hpp"
#include "semmap/lhs.hpp"
#include "semmap/metrics.hpp"
#include "semmap/pipeline.hpp"
#include "semmap/rng.hpp"
#include "semmap/som_state_io.hpp"
#include "semmap/topo_map.hpp"

namespace fs = std::filesystem;
using namespace semmap;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

std::string fmt6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

struct ParamFlags {
    std::string preset = "a";
    std::optional<double> at, lp, beta, eb, en, s, c;
    std::optional<int> maxcomp, nmax;
    std::optional<double> st, semmap_at, semmap_e;

    PipelineConfig build() const {
        PipelineConfig cfg; // defaults are preset a
        if (preset == "b" || preset == "B") {
            cfg.som = OlarfdssomConfig::preset_b();
            cfg.semmap.summation_limit = 7.0;
        } else if (preset != "a" && preset != "A") {
            throw ValidationError("unknown preset: " + preset);
        }
        if (at) cfg.som.activation_threshold = *at;
        if (lp) cfg.som.lowest_win_fraction = *lp;
        if (beta) cfg.som.relevance_rate = *beta;
        if (maxcomp) cfg.som.max_competitions = *maxcomp;
        if (eb) cfg.som.winner_rate = *eb;
        if (en) cfg.som.neighbor_rate = *en;
        if (s) cfg.som.relevance_smoothness = *s;
        if (c) cfg.som.connection_threshold = *c;
        if (nmax) cfg.som.max_nodes = *nmax;
        if (st) cfg.semmap.summation_limit = *st;
        if (semmap_at) cfg.semmap.activation_threshold = *semmap_at;
        if (semmap_e) cfg.semmap.learning_rate = *semmap_e;
        cfg.validate();
        return cfg;
    }
};

void add_param_flags(CLI::App* cmd, ParamFlags& p) {
    cmd->add_option("--preset", p.preset, "Parameter preset: a (default) or b");
    cmd->add_option("--at", p.at, "Categorizer activation threshold");
    cmd->add_option("--lp", p.lp, "Lowest win fraction");
    cmd->add_option("--beta", p.beta, "Relevance rate");
    cmd->add_option("--maxcomp", p.maxcomp, "Competitions between prune checks");
    cmd->add_option("--eb", p.eb, "Winner learning rate");
    cmd->add_option("--en", p.en, "Neighbor learning rate");
    cmd->add_option("--s", p.s, "Relevance smoothness");
    cmd->add_option("--c", p.c, "Connection threshold");
    cmd->add_option("--nmax", p.nmax, "Maximum categorizer nodes");
    cmd->add_option("--st", p.st, "Mapper evidence summation limit");
    cmd->add_option("--semmap-at", p.semmap_at, "Mapper activation threshold");
    cmd->add_option("--semmap-e", p.semmap_e, "Mapper center learning rate");
}

std::vector<Sequence> load_corpus(const std::vector<std::string>& paths) {
    std::vector<Sequence> corpus;
    corpus.reserve(paths.size());
    for (const auto& path : paths)
        corpus.push_back(parse_sequence_file(path));
    for (std::size_t i = 1; i < corpus.size(); ++i)
        if (corpus[i].n_objects() != corpus[0].n_objects())
            throw ValidationError("sequence " + paths[i] + " has " +
                                  std::to_string(corpus[i].n_objects()) +
                                  " objects, expected " +
                                  std::to_string(corpus[0].n_objects()));
    return corpus;
}

std::vector<int> make_order(std::size_t count, bool shuffle, std::uint64_t seed) {
    std::vector<int> order(count);
    std::iota(order.begin(), order.end(), 0);
    if (shuffle) {
        std::mt19937_64 gen(seed);
        shuffle_in_place(order, gen);
    }
    return order;
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary); // LF endings everywhere
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    return out;
}

void print_config(std::ostream& out, const PipelineConfig& cfg) {
    out << "semmap: at=" << fmt6(cfg.semmap.activation_threshold)
        << " e=" << fmt6(cfg.semmap.learning_rate)
        << " st=" << fmt6(cfg.semmap.summation_limit)
        << " n_objects=" << cfg.semmap.n_objects << '\n';
    out << "olarfdssom: at=" << fmt6(cfg.som.activation_threshold)
        << " lp=" << fmt6(cfg.som.lowest_win_fraction)
        << " beta=" << fmt6(cfg.som.relevance_rate)
        << " maxcomp=" << cfg.som.max_competitions
        << " eb=" << fmt6(cfg.som.winner_rate)
        << " en=" << fmt6(cfg.som.neighbor_rate)
        << " s=" << fmt6(cfg.som.relevance_smoothness)
        << " c=" << fmt6(cfg.som.connection_threshold)
        << " nmax=" << cfg.som.max_nodes << '\n';
}

void print_eval(std::ostream& out, const char* tag, const EvalReport& r) {
    out << tag << ": ce=" << fmt6(r.clustering_error) << " accuracy=" << fmt6(r.accuracy)
        << " clusters=" << r.n_clusters << " categories=" << r.n_categories
        << " n=" << r.n_samples << '\n';
}

// ---------------------------------------------------------------- run

int cmd_run(const std::vector<std::string>& inputs, const std::string& out_dir,
            const ParamFlags& flags, std::uint64_t seed, bool shuffle, bool hex_state) {
    PipelineConfig cfg = flags.build();
    auto corpus = load_corpus(inputs);
    cfg.semmap.n_objects = corpus.front().n_objects();

    const auto order = make_order(corpus.size(), shuffle, seed);

    SomMap som;
    std::vector<SequenceReplay> replays;
    for (int idx : order)
        replays.push_back(replay_sequence(corpus[static_cast<std::size_t>(idx)], som, cfg));

    const fs::path dir(out_dir);
    fs::create_directories(dir);

    // per-sequence map exports, annotated with the final categorization
    for (std::size_t k = 0; k < replays.size(); ++k) {
        std::map<int, int> clusters;
        if (!som.nodes.empty())
            for (const auto& node : replays[k].topo.nodes)
                clusters[node.id] = cluster(som, node.objects, cfg.som.epsilon);
        auto map_out = open_out(dir / ("map_" + std::to_string(k) + ".txt"));
        write_map_document(map_out, replays[k].topo, som.nodes.empty() ? nullptr : &clusters);
        auto dot_out = open_out(dir / ("map_" + std::to_string(k) + ".dot"));
        write_map_dot(dot_out, replays[k].topo, som.nodes.empty() ? nullptr : &clusters);
    }

    {
        auto som_out = open_out(dir / "som_state.txt");
        save_som_state(som_out, som, cfg.som,
                       hex_state ? FloatFormat::Hex : FloatFormat::Decimal6);
    }

    {
        auto assign_out = open_out(dir / "assignments.tsv");
        assign_out << "seq\trecord\twinner_node\tcluster\n";
        for (std::size_t k = 0; k < replays.size(); ++k) {
            std::map<int, int> clusters;
            if (!som.nodes.empty())
                for (const auto& node : replays[k].topo.nodes)
                    clusters[node.id] = cluster(som, node.objects, cfg.som.epsilon);
            for (std::size_t i = 0; i < replays[k].winner_log.size(); ++i) {
                assign_out << k << '\t' << i << '\t' << replays[k].winner_log[i] << '\t';
                if (som.nodes.empty())
                    assign_out << '-';
                else
                    assign_out << clusters.at(replays[k].winner_log[i]);
                assign_out << '\n';
            }
        }
    }

    // evaluation report only when ground truth is available
    bool any_labels = false;
    for (const auto& replay : replays)
        if (!replay.node_truth.empty()) any_labels = true;

    if (any_labels && !som.nodes.empty()) {
        auto report = open_out(dir / "report.txt");
        report << "semmap run report\n";
        report << "inputs:";
        for (const auto& p : inputs) report << ' ' << p;
        report << "\norder:";
        for (int idx : order) report << ' ' << idx;
        report << "\nseed: " << seed << "\n";
        print_config(report, cfg);

        std::vector<std::pair<int, std::string>> pooled_nodes, pooled_frames;
        for (std::size_t k = 0; k < replays.size(); ++k) {
            const auto np = node_pairs(replays[k], som, cfg.som.epsilon);
            const auto fp = frame_pairs(replays[k], som, cfg.som.epsilon);
            pooled_nodes.insert(pooled_nodes.end(), np.begin(), np.end());
            pooled_frames.insert(pooled_frames.end(), fp.begin(), fp.end());
            report << "sequence " << k << " name=" << replays[k].name
                   << " records=" << replays[k].winner_log.size()
                   << " nodes=" << replays[k].topo.nodes.size()
                   << " edges=" << replays[k].topo.edges.size()
                   << " emissions=" << replays[k].emissions << '\n';
            if (!np.empty()) print_eval(report, "  node-level", evaluate_pairs(np));
            if (!fp.empty()) print_eval(report, "  frame-level", evaluate_pairs(fp));
        }
        report << "som nodes: " << som.nodes.size() << '\n';
        if (!pooled_nodes.empty()) print_eval(report, "pooled node-level", evaluate_pairs(pooled_nodes));
        if (!pooled_frames.empty()) print_eval(report, "pooled frame-level", evaluate_pairs(pooled_frames));
    }
    return kExitOk;
}

// ---------------------------------------------------------------- overtime

int cmd_overtime(const std::vector<std::string>& inputs, const std::string& out_file,
                 const ParamFlags& flags, std::uint64_t seed, bool shuffle, double tol) {
    if (inputs.size() < 2)
        throw ValidationError("overtime needs at least two sequences");
    PipelineConfig cfg = flags.build();
    auto corpus = load_corpus(inputs);
    cfg.semmap.n_objects = corpus.front().n_objects();
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const bool labeled = std::any_of(corpus[i].records.begin(), corpus[i].records.end(),
                                         [](const DatasetRecord& r) { return !r.label.empty(); });
        if (!labeled)
            throw ValidationError("overtime requires labels; " + inputs[i] + " has none");
    }

    const auto order = make_order(corpus.size(), shuffle, seed);
    const auto report = run_sequences(corpus, cfg, order);

    auto out = open_out(out_file);
    out << "# overtime seed=" << seed << " tol=" << fmt6(tol) << "\n";
    out << "idx\tname\town_node_ce\tall_node_ce\town_node_acc\tall_node_acc"
           "\town_frame_ce\tall_frame_ce\town_frame_acc\tall_frame_acc\n";
    int ce_ok = 0, acc_ok = 0;
    for (std::size_t k = 0; k < report.sequences.size(); ++k) {
        const auto& seq = report.sequences[k];
        out << k << '\t' << seq.name << '\t'
            << fmt6(seq.after_own.node_level.clustering_error) << '\t'
            << fmt6(seq.after_all.node_level.clustering_error) << '\t'
            << fmt6(seq.after_own.node_level.accuracy) << '\t'
            << fmt6(seq.after_all.node_level.accuracy) << '\t'
            << fmt6(seq.after_own.frame_level.clustering_error) << '\t'
            << fmt6(seq.after_all.frame_level.clustering_error) << '\t'
            << fmt6(seq.after_own.frame_level.accuracy) << '\t'
            << fmt6(seq.after_all.frame_level.accuracy) << '\n';
        if (seq.after_all.node_level.clustering_error <=
            seq.after_own.node_level.clustering_error + tol)
            ++ce_ok;
        if (seq.after_all.node_level.accuracy >= seq.after_own.node_level.accuracy - tol)
            ++acc_ok;
    }
    const double n = static_cast<double>(report.sequences.size());
    out << "# fraction_node_ce_similar_or_better " << fmt6(ce_ok / n) << '\n';
    out << "# fraction_node_acc_similar_or_better " << fmt6(acc_ok / n) << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- lhs

int cmd_lhs(int k, std::uint64_t seed, const std::string& plan_out,
            const std::vector<std::string>& corpus_paths, const std::string& results_out,
            const std::string& sensitivity_out, const ParamFlags& flags, int threads) {
    const auto plan = lhs_sample(search_ranges(), k, seed);
    if (!plan_out.empty()) {
        auto out = open_out(plan_out);
        write_plan(out, plan);
    }
    if (corpus_paths.empty()) return kExitOk;

    PipelineConfig base = flags.build();
    auto corpus = load_corpus(corpus_paths);
    base.semmap.n_objects = corpus.front().n_objects();
    const auto results = lhs_search(plan, corpus, base, threads);
    if (!results_out.empty()) {
        auto out = open_out(results_out);
        write_results(out, results);
    }
    if (!sensitivity_out.empty()) {
        auto out = open_out(sensitivity_out);
        write_sensitivity(out, sensitivity(plan, results));
    }
    return kExitOk;
}

// ---------------------------------------------------------------- synth / export

int cmd_synth(const std::string& spec_path, bool demo, const std::string& out_file,
              const std::string& emit_demo_spec) {
    if (!emit_demo_spec.empty()) {
        auto out = open_out(emit_demo_spec);
        out << demo_spec_json() << '\n';
    }
    if (out_file.empty()) return kExitOk;

    SynthSpec spec;
    if (demo) {
        spec = demo_spec();
    } else if (!spec_path.empty()) {
        std::ifstream in(spec_path);
        if (!in)
            throw ValidationError("cannot open spec file: " + spec_path);
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        spec = synth_spec_from_json(text);
    } else {
        throw ValidationError("synth needs --spec FILE or --demo");
    }
    const auto seq = generate_synthetic(spec);
    auto out = open_out(out_file);
    write_sequence(out, seq);
    return kExitOk;
}

int cmd_export(const std::string& input, const std::string& out_file, const std::string& dot_file,
               const ParamFlags& flags) {
    PipelineConfig cfg = flags.build();
    auto seq = parse_sequence_file(input);
    cfg.semmap.n_objects = seq.n_objects() > 0 ? seq.n_objects() : cfg.semmap.n_objects;

    TopoMap map;
    for (const auto& record : seq.records)
        process_sample(map, record.position, record.evidence, cfg.semmap);

    if (!out_file.empty()) {
        auto out = open_out(out_file);
        write_map_document(out, map);
    }
    if (!dot_file.empty()) {
        auto out = open_out(dot_file);
        write_map_dot(out, map);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Incremental semantic mapping: topological mapper + online place categorizer"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Replay sequences, train, export maps and report");
    std::vector<std::string> run_inputs;
    std::string run_out;
    ParamFlags run_flags;
    std::uint64_t run_seed = 0;
    bool run_shuffle = false, run_hex = false;
    run->add_option("--input", run_inputs, "Sequence files")->required()->expected(-1);
    run->add_option("--out", run_out, "Output directory")->required();
    run->add_option("--seed", run_seed, "Seed for --shuffle");
    run->add_flag("--shuffle", run_shuffle, "Shuffle sequence order (seeded)");
    run->add_flag("--hex-state", run_hex, "Write the categorizer state with lossless hex floats");
    add_param_flags(run, run_flags);

    // overtime
    auto* overtime = app.add_subcommand("overtime", "Dual-checkpoint evaluation per sequence");
    std::vector<std::string> ot_inputs;
    std::string ot_out;
    ParamFlags ot_flags;
    std::uint64_t ot_seed = 0;
    bool ot_shuffle = false;
    double ot_tol = 0.01;
    overtime->add_option("--input", ot_inputs, "Sequence files (>= 2)")->required()->expected(-1);
    overtime->add_option("--out", ot_out, "Output table file")->required();
    overtime->add_option("--seed", ot_seed, "Seed for --shuffle");
    overtime->add_flag("--shuffle", ot_shuffle, "Shuffle training order (seeded)");
    overtime->add_option("--tol", ot_tol, "Similar-or-better tolerance");
    add_param_flags(overtime, ot_flags);

    // lhs
    auto* lhs = app.add_subcommand("lhs", "Latin hypercube plan and parameter search");
    int lhs_k = 100;
    std::uint64_t lhs_seed = 0;
    std::string lhs_plan_out, lhs_results_out, lhs_sens_out;
    std::vector<std::string> lhs_corpus;
    ParamFlags lhs_flags;
    int lhs_threads = 0;
    lhs->add_option("--k", lhs_k, "Number of samples");
    lhs->add_option("--seed", lhs_seed, "Plan seed");
    lhs->add_option("--plan-out", lhs_plan_out, "Plan table file");
    lhs->add_option("--corpus", lhs_corpus, "Sequences to search against")->expected(-1);
    lhs->add_option("--results-out", lhs_results_out, "Ranked results file");
    lhs->add_option("--sensitivity-out", lhs_sens_out, "Per-parameter spread file");
    lhs->add_option("--threads", lhs_threads, "Worker threads (0 = auto)");
    add_param_flags(lhs, lhs_flags);

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic sequence");
    std::string synth_spec, synth_out, synth_demo_spec_out;
    bool synth_demo = false;
    synth->add_option("--spec", synth_spec, "Room/path spec (JSON)");
    synth->add_flag("--demo", synth_demo, "Use the built-in five-room demo spec");
    synth->add_option("--out", synth_out, "Output sequence file");
    synth->add_option("--emit-demo-spec", synth_demo_spec_out, "Write the demo spec JSON");

    // export
    auto* exp = app.add_subcommand("export", "Replay the mapper only and export the graph");
    std::string exp_input, exp_out, exp_dot;
    ParamFlags exp_flags;
    exp->add_option("--input", exp_input, "Sequence file")->required();
    exp->add_option("--out", exp_out, "Graph document file");
    exp->add_option("--dot", exp_dot, "Graphviz DOT file");
    add_param_flags(exp, exp_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (run->parsed())
            return cmd_run(run_inputs, run_out, run_flags, run_seed, run_shuffle, run_hex);
        if (overtime->parsed())
            return cmd_overtime(ot_inputs, ot_out, ot_flags, ot_seed, ot_shuffle, ot_tol);
        if (lhs->parsed())
            return cmd_lhs(lhs_k, lhs_seed, lhs_plan_out, lhs_corpus, lhs_results_out,
                           lhs_sens_out, lhs_flags, lhs_threads);
        if (synth->parsed())
            return cmd_synth(synth_spec, synth_demo, synth_out, synth_demo_spec_out);
        if (exp->parsed())
            return cmd_export(exp_input, exp_out, exp_dot, exp_flags);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}
