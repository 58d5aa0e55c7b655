#pragma once

#include <string>
#include <vector>

namespace semmap {

/// Cluster-by-category co-occurrence counts.
struct ContingencyTable {
    std::vector<int> cluster_ids;          // row labels
    std::vector<std::string> categories;   // column labels
    std::vector<std::vector<long>> counts; // counts[row][col]
    long total = 0;

    static ContingencyTable from_pairs(const std::vector<int>& clusters,
                                       const std::vector<std::string>& truths);
};

struct EvalReport {
    double accuracy = 0.0;
    double clustering_error = 0.0;
    int n_clusters = 0;
    int n_categories = 0;
    long n_samples = 0;
};

/// Majority-label purity: sum over clusters of the largest category count,
/// divided by N.
double accuracy(const ContingencyTable& table);

/// 1 - (weight of the maximum one-to-one cluster<->category matching) / N.
/// Splitting a category across clusters is penalized even when every
/// cluster is pure.
double clustering_error(const ContingencyTable& table);

/// Exact maximum-weight one-to-one matching on a rectangular count matrix.
long max_matching_weight(const std::vector<std::vector<long>>& counts);

/// Builds the table and computes both measures plus cluster/category counts.
EvalReport evaluate(const std::vector<int>& clusters, const std::vector<std::string>& truths);

} // namespace semmap
