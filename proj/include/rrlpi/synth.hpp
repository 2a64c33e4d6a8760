#ifndef RRLPI_SYNTH_HPP
#define RRLPI_SYNTH_HPP

#include "rrlpi/enumeration.hpp"
#include "rrlpi/penalty.hpp"
#include "rrlpi/rng.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace rrlpi {

struct Type1Outliers {
    Index count{0};
    double theta{0.0};
};

struct Type2Outliers {
    Index count{0};
    Vector mu;
    double theta{1.5};
};

// The three-cluster uniform benchmark; defaults reproduce the reference
// parameter table.
struct SyntheticSpec {
    std::vector<Vector> centroids;
    std::vector<double> scales;
    std::vector<Index> counts;
    Type1Outliers outlier1;
    Type2Outliers outlier2;
    std::uint64_t seed{0};

    void validate() const {
        if (centroids.empty() || centroids.size() != scales.size() ||
            centroids.size() != counts.size())
            throw DimensionMismatch("synthetic spec cluster lists");
        const Index m = centroids.front().size();
        for (const auto& mu : centroids)
            if (mu.size() != m) throw DimensionMismatch("centroid dimensions");
        if (outlier2.count > 0 && outlier2.mu.size() != m)
            throw DimensionMismatch("type II centroid dimension");
        for (double s : scales)
            if (s < 0.0) throw DomainViolation("negative cluster scale");
    }
};

inline SyntheticSpec default_synthetic_spec(Index samples_per_cluster = 100) {
    SyntheticSpec spec;
    auto v = [](std::initializer_list<double> xs) {
        Vector out(static_cast<Index>(xs.size()));
        Index i = 0;
        for (double x : xs) out[i++] = x;
        return out;
    };
    spec.centroids = {v({5.50, 4.50, 2.00, 0.75, 2.50, 4.50}),
                      v({7.50, 1.00, 5.50, 2.50, 1.00, 1.50}),
                      v({8.50, 0.75, 6.00, 4.50, 1.50, 1.25})};
    spec.scales = {0.5, 0.5, 0.5};
    spec.counts = {samples_per_cluster, samples_per_cluster, samples_per_cluster};
    spec.outlier2.mu = v({7.00, 0.25, 5.00, 2.00, 0.50, 0.75});
    return spec;
}

struct SyntheticData {
    DataMatrix X;
    LabelVector labels;
    std::vector<bool> outlier_mask;
};

namespace detail {

// Seeded shuffle of 0..n-1 (Fisher-Yates driven by the counter generator).
inline std::vector<Index> seeded_order(const CounterRng& rng, Index n, std::uint64_t stream) {
    std::vector<Index> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    for (Index i = n - 1; i > 0; --i) {
        const auto j = static_cast<Index>(rng.bits(stream, 1, static_cast<std::uint64_t>(i)) %
                                          static_cast<std::uint64_t>(i + 1));
        std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(j)]);
    }
    return order;
}

} // namespace detail

// Cluster samples mu + theta*upsilon with upsilon uniform on [-0.5, 0.5].
// Type I outliers replace cluster samples (round-robin across clusters, in
// seeded-shuffle order within each cluster); Type II outliers are appended.
inline SyntheticData generate(const SyntheticSpec& spec, std::uint64_t run = 0) {
    spec.validate();
    const CounterRng rng(spec.seed);
    const Index m = spec.centroids.front().size();
    const Index k_clusters = static_cast<Index>(spec.centroids.size());

    Index n_cluster = 0;
    for (Index c : spec.counts) n_cluster += c;
    const Index n = n_cluster + spec.outlier2.count;

    SyntheticData data;
    data.X.values.resize(m, n);
    data.labels.K = static_cast<int>(k_clusters) + (spec.outlier2.count > 0 ? 1 : 0);
    data.labels.labels.resize(static_cast<size_t>(n));
    data.outlier_mask.assign(static_cast<size_t>(n), false);

    Index col = 0;
    std::vector<std::vector<Index>> cluster_cols(static_cast<size_t>(k_clusters));
    for (Index k = 0; k < k_clusters; ++k) {
        const Vector& mu = spec.centroids[static_cast<size_t>(k)];
        const double theta = spec.scales[static_cast<size_t>(k)];
        for (Index i = 0; i < spec.counts[static_cast<size_t>(k)]; ++i) {
            for (Index f = 0; f < m; ++f) {
                const double u = rng.uniform(run, 0, static_cast<std::uint64_t>(col),
                                             static_cast<std::uint64_t>(f));
                data.X.values(f, col) = mu[f] + theta * (u - 0.5);
            }
            data.labels.labels[static_cast<size_t>(col)] = static_cast<int>(k) + 1;
            cluster_cols[static_cast<size_t>(k)].push_back(col);
            ++col;
        }
    }

    // Type I replacement indices, round-robin across clusters.
    if (spec.outlier1.count > 0) {
        std::vector<std::vector<Index>> shuffled(static_cast<size_t>(k_clusters));
        for (Index k = 0; k < k_clusters; ++k) {
            const auto& cols = cluster_cols[static_cast<size_t>(k)];
            const auto order = detail::seeded_order(
                rng, static_cast<Index>(cols.size()),
                run * 1000003ULL + static_cast<std::uint64_t>(k));
            for (Index idx : order) shuffled[static_cast<size_t>(k)].push_back(cols[static_cast<size_t>(idx)]);
        }
        Index placed = 0;
        std::vector<size_t> next(static_cast<size_t>(k_clusters), 0);
        Index k = 0;
        while (placed < spec.outlier1.count) {
            auto& pos = next[static_cast<size_t>(k)];
            if (pos < shuffled[static_cast<size_t>(k)].size()) {
                const Index c = shuffled[static_cast<size_t>(k)][pos++];
                for (Index f = 0; f < m; ++f) {
                    const double u = rng.uniform(run, 1, static_cast<std::uint64_t>(placed),
                                                 static_cast<std::uint64_t>(f));
                    data.X.values(f, c) += spec.outlier1.theta * (u - 0.5);
                }
                data.outlier_mask[static_cast<size_t>(c)] = true;
                ++placed;
            }
            k = (k + 1) % k_clusters;
        }
    }

    // Type II outliers appended as an extra labeled group.
    for (Index i = 0; i < spec.outlier2.count; ++i) {
        for (Index f = 0; f < m; ++f) {
            const double u = rng.uniform(run, 2, static_cast<std::uint64_t>(i),
                                         static_cast<std::uint64_t>(f));
            data.X.values(f, col) = spec.outlier2.mu[f] + spec.outlier2.theta * (u - 0.5);
        }
        data.labels.labels[static_cast<size_t>(col)] = static_cast<int>(k_clusters) + 1;
        data.outlier_mask[static_cast<size_t>(col)] = true;
        ++col;
    }
    return data;
}

struct MethodSpec {
    EmbeddingKind kind{EmbeddingKind::RRLPI};
    bool auto_gamma{true}; // RLPI/RRLPI only; fixed gamma otherwise
    double gamma{1e-8};
};

inline std::string method_name(EmbeddingKind kind) {
    switch (kind) {
        case EmbeddingKind::LE: return "le";
        case EmbeddingKind::LPI: return "lpi";
        case EmbeddingKind::RLPI: return "rlpi";
        case EmbeddingKind::RRLPI: return "rrlpi";
    }
    return "?";
}

struct SweepCell {
    std::string name;
    SyntheticSpec spec;
};

struct SweepRow {
    std::string cell;
    std::string method;
    double mean{};
    double stddev{};
    Index n_runs{};
    Index n_failed{};
};

// Embedding for one method; auto-gamma runs the full penalty-selection driver.
inline Vector embed_with(const MethodSpec& method, const DataMatrix& X, const AffinityGraph& G,
                         const GammaSearchConfig& config) {
    if (method.kind == EmbeddingKind::RRLPI && method.auto_gamma) {
        return estimate_fiedler_rrlpi(X, G, config).embedding.y;
    }
    return estimate(method.kind, X, G, method.gamma, config.huber_c).embedding.y;
}

// Per cell and run: generate, build the graph, embed per method, K-means
// partition into the true cluster count, aligned accuracy. Failures are
// recorded per run without aborting the sweep.
inline std::vector<SweepRow> monte_carlo(const std::vector<SweepCell>& cells,
                                         const std::vector<MethodSpec>& methods, Index n_runs,
                                         std::uint64_t seed,
                                         const GammaSearchConfig& config = {}) {
    std::vector<SweepRow> rows;
    for (const auto& cell : cells) {
        std::vector<std::vector<double>> accs(methods.size());
        std::vector<Index> failed(methods.size(), 0);
        for (Index run = 0; run < n_runs; ++run) {
            SyntheticSpec spec = cell.spec;
            spec.seed = seed;
            const SyntheticData data = generate(spec, static_cast<std::uint64_t>(run));
            const int k_true = static_cast<int>(spec.centroids.size());
            AffinityGraph G;
            try {
                G = cosine_affinity(data.X);
            } catch (const Error&) {
                for (auto& f : failed) ++f;
                continue;
            }
            // accuracy is scored on the cluster samples' true labels; Type II
            // points keep their own group label
            for (size_t mi = 0; mi < methods.size(); ++mi) {
                try {
                    const Vector y = embed_with(methods[mi], data.X, G, config);
                    const LabelVector est = kmeans_1d(y, data.labels.K);
                    accs[mi].push_back(align_labels(est, data.labels).accuracy);
                } catch (const Error&) {
                    ++failed[mi];
                }
            }
            (void)k_true;
        }
        for (size_t mi = 0; mi < methods.size(); ++mi) {
            SweepRow row;
            row.cell = cell.name;
            row.method = method_name(methods[mi].kind);
            row.n_runs = static_cast<Index>(accs[mi].size());
            row.n_failed = failed[mi];
            if (!accs[mi].empty()) {
                double sum = 0.0;
                for (double a : accs[mi]) sum += a;
                row.mean = sum / static_cast<double>(accs[mi].size());
                double ss = 0.0;
                for (double a : accs[mi]) ss += (a - row.mean) * (a - row.mean);
                row.stddev = accs[mi].size() > 1
                                 ? std::sqrt(ss / static_cast<double>(accs[mi].size() - 1))
                                 : 0.0;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

} // namespace rrlpi

#endif
