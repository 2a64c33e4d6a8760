#ifndef RRLPI_ENUMERATION_HPP
#define RRLPI_ENUMERATION_HPP

#include "rrlpi/graph.hpp"
#include "rrlpi/partition.hpp"

#include <functional>
#include <vector>

namespace rrlpi {

// Newman modularity Q of a labeled partition of the affinity graph.
inline double modularity(const AffinityGraph& G, const LabelVector& labels) {
    if (labels.size() != G.size()) throw DimensionMismatch("modularity");
    if (G.g <= 0.0) throw EmptyGraph();
    const double two_g = 2.0 * G.g;
    double q = 0.0;
    for (int k = 1; k <= labels.K; ++k) {
        double w_in = 0.0;
        double deg = 0.0;
        for (Index i = 0; i < G.size(); ++i) {
            if (labels.labels[static_cast<size_t>(i)] != k) continue;
            deg += G.d[i];
            for (Index j = 0; j < G.size(); ++j) {
                if (labels.labels[static_cast<size_t>(j)] == k) w_in += G.W(i, j);
            }
        }
        q += w_in - deg * deg / two_g;
    }
    return q / two_g;
}

using Partitioner = std::function<LabelVector(const Vector&, int)>;

inline Partitioner kmeans_partitioner() {
    return [](const Vector& pts, int K) { return kmeans_1d(pts, K); };
}

inline Partitioner kmedoids_partitioner(double tukey_c = 3.0) {
    return [tukey_c](const Vector& pts, int K) { return kmedoids_1d(pts, K, tukey_c); };
}

struct EnumerationEntry {
    int K{};
    double Q{};
};

struct EnumerationResult {
    int k_hat{};
    std::vector<EnumerationEntry> table;
};

// Partitions the embedding for each candidate K and keeps the modularity
// argmax; ties break toward smaller K.
inline EnumerationResult enumerate_clusters(const AffinityGraph& G, const Vector& embedding,
                                            int k_min, int k_max,
                                            const Partitioner& partition = kmeans_partitioner()) {
    if (k_min < 1 || static_cast<Index>(k_max) > G.size() || k_min > k_max)
        throw DomainViolation("invalid K range");
    EnumerationResult out;
    out.k_hat = k_min;
    double best_q = -std::numeric_limits<double>::max();
    for (int k = k_min; k <= k_max; ++k) {
        const LabelVector labels = partition(embedding, k);
        const double q = modularity(G, labels);
        out.table.push_back({k, q});
        if (q > best_q) {
            best_q = q;
            out.k_hat = k;
        }
    }
    return out;
}

} // namespace rrlpi

#endif
