#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "semmap/dataset.hpp"
#include "semmap/pipeline.hpp"

namespace semmap {

struct ParamRange {
    std::string name;
    double min = 0.0;
    double max = 1.0;
    bool integer_valued = false;
};

/// k stratified samples per dimension: exactly one draw inside each of the
/// k equal-width subintervals, assignments permuted independently per
/// dimension. Values are kept continuous; integer-valued dimensions are
/// rounded when a row is materialized into a configuration.
struct LhsPlan {
    std::vector<ParamRange> ranges;
    std::vector<std::vector<double>> samples; // k rows x d columns
    std::uint64_t seed = 0;

    int k() const { return static_cast<int>(samples.size()); }
    int dims() const { return static_cast<int>(ranges.size()); }
};

LhsPlan lhs_sample(const std::vector<ParamRange>& ranges, int k, std::uint64_t seed);

/// The searched dimensions: the eight categorizer parameters plus the
/// mapper's summation limit. The mapper's activation threshold and
/// learning rate stay fixed.
std::vector<ParamRange> search_ranges();

/// Builds a full configuration from one plan row on top of `base`,
/// rounding integer dimensions and capping the neighbor rate at the
/// sampled winner rate.
PipelineConfig config_from_row(const LhsPlan& plan, int row, const PipelineConfig& base);

struct SearchResult {
    int row = 0;
    PipelineConfig cfg;
    EvalReport node_eval; // pooled node-level evaluation across the corpus
};

/// Replays the corpus once per plan row and ranks results by clustering
/// error ascending, accuracy descending. Rows are evaluated concurrently.
std::vector<SearchResult> lhs_search(const LhsPlan& plan, const std::vector<Sequence>& corpus,
                                     const PipelineConfig& base, int n_threads = 0);

struct SensitivityRow {
    std::string param;
    std::array<double, 4> bin_mean_ce{}; // mean CE per value quartile
    double spread = 0.0;                 // max - min of the bin means
};

/// Per-parameter spread of clustering error across value quartiles; large
/// spread marks a parameter the search outcome is sensitive to.
std::vector<SensitivityRow> sensitivity(const LhsPlan& plan,
                                        const std::vector<SearchResult>& results);

void write_plan(std::ostream& out, const LhsPlan& plan);
void write_results(std::ostream& out, const std::vector<SearchResult>& results);
void write_sensitivity(std::ostream& out, const std::vector<SensitivityRow>& rows);

} // namespace semmap
