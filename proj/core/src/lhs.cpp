#include "semmap/lhs.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numeric>
#include <ostream>
#include <string>
#include <thread>

#include "semmap/errors.hpp"
#include "semmap/rng.hpp"

namespace semmap {

LhsPlan lhs_sample(const std::vector<ParamRange>& ranges, int k, std::uint64_t seed) {
    if (k < 1)
        throw ValidationError("lhs: k must be >= 1");
    for (const auto& r : ranges)
        if (!(r.min < r.max))
            throw ValidationError("lhs: empty range for " + r.name);

    LhsPlan plan;
    plan.ranges = ranges;
    plan.seed = seed;
    plan.samples.assign(static_cast<std::size_t>(k),
                        std::vector<double>(ranges.size(), 0.0));

    std::mt19937_64 gen(seed);
    std::vector<int> strata(static_cast<std::size_t>(k));
    for (std::size_t d = 0; d < ranges.size(); ++d) {
        const double width = (ranges[d].max - ranges[d].min) / k;
        std::iota(strata.begin(), strata.end(), 0);
        shuffle_in_place(strata, gen);
        for (int i = 0; i < k; ++i) {
            const int stratum = strata[static_cast<std::size_t>(i)];
            const double lo = ranges[d].min + stratum * width;
            const double hi = ranges[d].min + (stratum + 1) * width;
            double v = lo + uniform01(gen) * (hi - lo);
            // keep the draw strictly inside its stratum despite rounding
            if (v >= hi) v = std::nextafter(hi, lo);
            if (v < lo) v = lo;
            plan.samples[static_cast<std::size_t>(i)][d] = v;
        }
    }
    return plan;
}

std::vector<ParamRange> search_ranges() {
    return {
        {"at", 0.8, 0.999, false},   {"lp", 0.01, 0.2, false},
        {"beta", 0.001, 0.1, false}, {"maxcomp", 5.0, 150.0, true},
        {"eb", 0.001, 0.2, false},   {"en", 0.0001, 0.2, false},
        {"s", 0.01, 0.1, false},     {"c", 0.0, 0.5, false},
        {"st", 2.0, 15.0, true},
    };
}

PipelineConfig config_from_row(const LhsPlan& plan, int row, const PipelineConfig& base) {
    PipelineConfig cfg = base;
    const auto& values = plan.samples.at(static_cast<std::size_t>(row));
    for (std::size_t d = 0; d < plan.ranges.size(); ++d) {
        const auto& range = plan.ranges[d];
        const double v = range.integer_valued ? std::round(values[d]) : values[d];
        if (range.name == "at") cfg.som.activation_threshold = v;
        else if (range.name == "lp") cfg.som.lowest_win_fraction = v;
        else if (range.name == "beta") cfg.som.relevance_rate = v;
        else if (range.name == "maxcomp") cfg.som.max_competitions = static_cast<int>(v);
        else if (range.name == "eb") cfg.som.winner_rate = v;
        else if (range.name == "en") cfg.som.neighbor_rate = v;
        else if (range.name == "s") cfg.som.relevance_smoothness = v;
        else if (range.name == "c") cfg.som.connection_threshold = v;
        else if (range.name == "nmax") cfg.som.max_nodes = static_cast<int>(v);
        else if (range.name == "st") cfg.semmap.summation_limit = v;
        else if (range.name == "semmap_at") cfg.semmap.activation_threshold = v;
        else if (range.name == "semmap_e") cfg.semmap.learning_rate = v;
        else throw ValidationError("lhs: unknown parameter name: " + range.name);
    }
    // the neighbor rate's upper bound is the (sampled) winner rate
    cfg.som.neighbor_rate = std::min(cfg.som.neighbor_rate, cfg.som.winner_rate);
    cfg.validate();
    return cfg;
}

namespace {

EvalReport run_one_config(const PipelineConfig& cfg, const std::vector<Sequence>& corpus) {
    SomMap som;
    std::vector<SequenceReplay> replays;
    replays.reserve(corpus.size());
    for (const auto& seq : corpus)
        replays.push_back(replay_sequence(seq, som, cfg));

    std::vector<std::pair<int, std::string>> pooled;
    for (const auto& replay : replays) {
        auto pairs = node_pairs(replay, som, cfg.som.epsilon);
        pooled.insert(pooled.end(), pairs.begin(), pairs.end());
    }
    if (pooled.empty())
        throw ValidationError("lhs search: corpus has no labeled records");
    return evaluate_pairs(pooled);
}

} // namespace

std::vector<SearchResult> lhs_search(const LhsPlan& plan, const std::vector<Sequence>& corpus,
                                     const PipelineConfig& base, int n_threads) {
    if (plan.k() < 1)
        throw ValidationError("lhs search: empty plan");
    if (corpus.empty())
        throw ValidationError("lhs search: empty corpus");

    std::vector<SearchResult> results(static_cast<std::size_t>(plan.k()));
    if (n_threads <= 0)
        n_threads = static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::clamp(n_threads, 1, plan.k());

    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::string error_message;
    std::mutex error_mu;

    auto worker = [&] {
        for (;;) {
            const int row = next.fetch_add(1);
            if (row >= plan.k() || failed.load()) return;
            try {
                SearchResult res;
                res.row = row;
                res.cfg = config_from_row(plan, row, base);
                res.node_eval = run_one_config(res.cfg, corpus);
                results[static_cast<std::size_t>(row)] = std::move(res);
            } catch (const std::exception& e) {
                std::lock_guard lock(error_mu);
                error_message = e.what();
                failed.store(true);
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failed.load())
        throw std::runtime_error("lhs search: " + error_message);

    std::sort(results.begin(), results.end(), [](const SearchResult& a, const SearchResult& b) {
        if (a.node_eval.clustering_error != b.node_eval.clustering_error)
            return a.node_eval.clustering_error < b.node_eval.clustering_error;
        if (a.node_eval.accuracy != b.node_eval.accuracy)
            return a.node_eval.accuracy > b.node_eval.accuracy;
        return a.row < b.row;
    });
    return results;
}

std::vector<SensitivityRow> sensitivity(const LhsPlan& plan,
                                        const std::vector<SearchResult>& results) {
    std::vector<SensitivityRow> rows;
    if (results.empty()) return rows;

    const int bins = std::min(4, static_cast<int>(results.size()));
    for (std::size_t d = 0; d < plan.ranges.size(); ++d) {
        // order rows by this parameter's sampled value
        std::vector<std::pair<double, double>> value_ce; // (param value, ce)
        for (const auto& res : results)
            value_ce.emplace_back(plan.samples[static_cast<std::size_t>(res.row)][d],
                                  res.node_eval.clustering_error);
        std::sort(value_ce.begin(), value_ce.end());

        SensitivityRow row;
        row.param = plan.ranges[d].name;
        double lo = 0.0, hi = 0.0;
        for (int b = 0; b < bins; ++b) {
            const std::size_t begin = value_ce.size() * b / bins;
            const std::size_t end = value_ce.size() * (b + 1) / bins;
            double sum = 0.0;
            for (std::size_t i = begin; i < end; ++i) sum += value_ce[i].second;
            const double mean = sum / static_cast<double>(end - begin);
            row.bin_mean_ce[static_cast<std::size_t>(b)] = mean;
            if (b == 0) lo = hi = mean;
            lo = std::min(lo, mean);
            hi = std::max(hi, mean);
        }
        row.spread = hi - lo;
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(),
              [](const SensitivityRow& a, const SensitivityRow& b) { return a.spread > b.spread; });
    return rows;
}

namespace {

void print_float(std::ostream& out, double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    out << buf;
}

} // namespace

void write_plan(std::ostream& out, const LhsPlan& plan) {
    out << "# lhs plan seed=" << plan.seed << " k=" << plan.k() << '\n';
    out << "row";
    for (const auto& r : plan.ranges) out << '\t' << r.name;
    out << '\n';
    for (int i = 0; i < plan.k(); ++i) {
        out << i;
        for (std::size_t d = 0; d < plan.ranges.size(); ++d) {
            out << '\t';
            print_float(out, plan.samples[static_cast<std::size_t>(i)][d]);
        }
        out << '\n';
    }
}

void write_results(std::ostream& out, const std::vector<SearchResult>& results) {
    out << "rank\trow\tce\taccuracy\tclusters\tcategories\tat\tlp\tbeta\tmaxcomp\teb\ten\ts\tc\tst\n";
    int rank = 1;
    for (const auto& res : results) {
        out << rank++ << '\t' << res.row << '\t';
        print_float(out, res.node_eval.clustering_error);
        out << '\t';
        print_float(out, res.node_eval.accuracy);
        out << '\t' << res.node_eval.n_clusters << '\t' << res.node_eval.n_categories;
        const auto& s = res.cfg.som;
        for (double v : {s.activation_threshold, s.lowest_win_fraction, s.relevance_rate}) {
            out << '\t';
            print_float(out, v);
        }
        out << '\t' << s.max_competitions;
        for (double v : {s.winner_rate, s.neighbor_rate, s.relevance_smoothness,
                         s.connection_threshold}) {
            out << '\t';
            print_float(out, v);
        }
        out << '\t';
        print_float(out, res.cfg.semmap.summation_limit);
        out << '\n';
    }
}

void write_sensitivity(std::ostream& out, const std::vector<SensitivityRow>& rows) {
    out << "param\tq1_ce\tq2_ce\tq3_ce\tq4_ce\tspread\n";
    for (const auto& row : rows) {
        out << row.param;
        for (double v : row.bin_mean_ce) {
            out << '\t';
            print_float(out, v);
        }
        out << '\t';
        print_float(out, row.spread);
        out << '\n';
    }
}

} // namespace semmap
