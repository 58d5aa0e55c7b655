#include "semmap/metrics.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "semmap/errors.hpp"

namespace semmap {

ContingencyTable ContingencyTable::from_pairs(const std::vector<int>& clusters,
                                              const std::vector<std::string>& truths) {
    if (clusters.size() != truths.size())
        throw ValidationError("evaluate: cluster and truth streams differ in length");
    if (clusters.empty())
        throw ValidationError("evaluate: empty input");

    ContingencyTable t;
    std::map<int, int> row_of;
    std::map<std::string, int> col_of;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        auto [rit, rnew] = row_of.try_emplace(clusters[i], static_cast<int>(t.cluster_ids.size()));
        if (rnew) t.cluster_ids.push_back(clusters[i]);
        auto [cit, cnew] = col_of.try_emplace(truths[i], static_cast<int>(t.categories.size()));
        if (cnew) t.categories.push_back(truths[i]);
        const std::size_t r = static_cast<std::size_t>(rit->second);
        const std::size_t c = static_cast<std::size_t>(cit->second);
        if (t.counts.size() <= r) t.counts.resize(r + 1);
        if (t.counts[r].size() <= c) {
            for (auto& row : t.counts) row.resize(col_of.size(), 0);
        }
        ++t.counts[r][c];
        ++t.total;
    }
    for (auto& row : t.counts) row.resize(col_of.size(), 0);
    return t;
}

double accuracy(const ContingencyTable& table) {
    if (table.total <= 0)
        throw ValidationError("accuracy: empty table");
    long purity = 0;
    for (const auto& row : table.counts)
        purity += *std::max_element(row.begin(), row.end());
    return static_cast<double>(purity) / static_cast<double>(table.total);
}

// Kuhn-Munkres on a padded square cost matrix; costs are negated counts so
// the minimum-cost assignment carries the maximum overlap weight. Sizes here
// are tens at most.
long max_matching_weight(const std::vector<std::vector<long>>& counts) {
    const int rows = static_cast<int>(counts.size());
    if (rows == 0) return 0;
    const int cols = static_cast<int>(counts[0].size());
    const int n = std::max(rows, cols);

    std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            cost[i][j] = -static_cast<double>(counts[i][j]);

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = 0;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }

    // Recover the weight as an exact integer sum over the matched cells.
    long weight = 0;
    for (int j = 1; j <= n; ++j) {
        const int i = p[j];
        if (i >= 1 && i <= rows && j <= cols)
            weight += counts[i - 1][j - 1];
    }
    return weight;
}

double clustering_error(const ContingencyTable& table) {
    if (table.total <= 0)
        throw ValidationError("clustering_error: empty table");
    const long weight = max_matching_weight(table.counts);
    return 1.0 - static_cast<double>(weight) / static_cast<double>(table.total);
}

EvalReport evaluate(const std::vector<int>& clusters, const std::vector<std::string>& truths) {
    const auto table = ContingencyTable::from_pairs(clusters, truths);
    EvalReport report;
    report.accuracy = accuracy(table);
    report.clustering_error = clustering_error(table);
    report.n_clusters = static_cast<int>(table.cluster_ids.size());
    report.n_categories = static_cast<int>(table.categories.size());
    report.n_samples = table.total;
    return report;
}

} // namespace semmap
