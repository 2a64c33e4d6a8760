#ifndef RRLPI_PARTITION_HPP
#define RRLPI_PARTITION_HPP

#include "rrlpi/estimators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

namespace rrlpi {

// Labels are 1-based, in [1, K].
struct LabelVector {
    std::vector<int> labels;
    int K{1};

    Index size() const { return static_cast<Index>(labels.size()); }
};

namespace detail {

inline double quantile_sorted(const std::vector<double>& sorted, double q) {
    const double pos = q * (static_cast<double>(sorted.size()) - 1.0);
    const auto lo = static_cast<size_t>(std::floor(pos));
    const auto hi = static_cast<size_t>(std::ceil(pos));
    const double frac = pos - std::floor(pos);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

inline std::vector<int> assign_nearest(const Vector& pts, const std::vector<double>& centers) {
    std::vector<int> labels(static_cast<size_t>(pts.size()));
    for (Index i = 0; i < pts.size(); ++i) {
        int best = 0;
        double bd = std::abs(pts[i] - centers[0]);
        for (int k = 1; k < static_cast<int>(centers.size()); ++k) {
            const double d = std::abs(pts[i] - centers[static_cast<size_t>(k)]);
            if (d < bd) {
                bd = d;
                best = k;
            }
        }
        labels[static_cast<size_t>(i)] = best + 1;
    }
    return labels;
}

} // namespace detail

// Lloyd iterations with deterministic quantile initialization: centroid k
// starts at quantile (k - 1/2)/K. Empty clusters reseed at the farthest point.
inline LabelVector kmeans_1d(const Vector& pts, int K) {
    const Index n = pts.size();
    if (n < K) throw TooFewPoints(n, K);
    if (K < 1) throw DomainViolation("K must be >= 1");

    std::vector<double> sorted(pts.data(), pts.data() + n);
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> centers(static_cast<size_t>(K));
    for (int k = 0; k < K; ++k)
        centers[static_cast<size_t>(k)] = detail::quantile_sorted(sorted, (k + 0.5) / K);

    std::vector<int> labels;
    for (int iter = 0; iter < 300; ++iter) {
        labels = detail::assign_nearest(pts, centers);
        std::vector<double> sum(static_cast<size_t>(K), 0.0);
        std::vector<Index> cnt(static_cast<size_t>(K), 0);
        for (Index i = 0; i < n; ++i) {
            const auto k = static_cast<size_t>(labels[static_cast<size_t>(i)] - 1);
            sum[k] += pts[i];
            cnt[k] += 1;
        }
        std::vector<double> next = centers;
        for (int k = 0; k < K; ++k) {
            if (cnt[static_cast<size_t>(k)] > 0) {
                next[static_cast<size_t>(k)] =
                    sum[static_cast<size_t>(k)] / static_cast<double>(cnt[static_cast<size_t>(k)]);
            } else {
                // reseed at the point farthest from its nearest centroid
                Index far = 0;
                double fd = -1.0;
                for (Index i = 0; i < n; ++i) {
                    double nd = std::numeric_limits<double>::max();
                    for (double c : centers) nd = std::min(nd, std::abs(pts[i] - c));
                    if (nd > fd) {
                        fd = nd;
                        far = i;
                    }
                }
                next[static_cast<size_t>(k)] = pts[far];
            }
        }
        double shift = 0.0;
        for (int k = 0; k < K; ++k)
            shift = std::max(shift, std::abs(next[static_cast<size_t>(k)] - centers[static_cast<size_t>(k)]));
        centers = next;
        if (shift < 1e-10) break;
    }
    LabelVector out;
    out.labels = detail::assign_nearest(pts, centers);
    out.K = K;
    return out;
}

namespace detail {

// Tukey biweight rho truncated at c, on madn-standardized distances.
inline double tukey_rho(double u, double c) {
    const double a = std::abs(u);
    if (a >= c) return c * c / 6.0;
    const double t = 1.0 - (u / c) * (u / c);
    return c * c / 6.0 * (1.0 - t * t * t);
}

} // namespace detail

// PAM-style swap optimization of total absolute deviation. The first medoid
// minimizes the Tukey-rho aggregated distance to all points; later medoids are
// picked farthest-first under the same robust distance.
inline LabelVector kmedoids_1d(const Vector& pts, int K, double tukey_c = 3.0) {
    const Index n = pts.size();
    if (n < K) throw TooFewPoints(n, K);
    if (K < 1) throw DomainViolation("K must be >= 1");

    double scale = madn(pts);
    if (scale <= 0.0) scale = 1.0;

    auto rho = [&](double a, double b) { return detail::tukey_rho((a - b) / scale, tukey_c); };

    std::vector<Index> medoids;
    {
        Index best = 0;
        double bestCost = std::numeric_limits<double>::max();
        for (Index i = 0; i < n; ++i) {
            double cost = 0.0;
            for (Index j = 0; j < n; ++j) cost += rho(pts[i], pts[j]);
            if (cost < bestCost) {
                bestCost = cost;
                best = i;
            }
        }
        medoids.push_back(best);
    }
    while (static_cast<int>(medoids.size()) < K) {
        Index best = 0;
        double bestDist = -1.0;
        for (Index i = 0; i < n; ++i) {
            double nd = std::numeric_limits<double>::max();
            for (Index m : medoids) nd = std::min(nd, rho(pts[i], pts[m]));
            if (nd > bestDist) {
                bestDist = nd;
                best = i;
            }
        }
        medoids.push_back(best);
    }

    auto total_cost = [&](const std::vector<Index>& med) {
        double cost = 0.0;
        for (Index i = 0; i < n; ++i) {
            double nd = std::numeric_limits<double>::max();
            for (Index m : med) nd = std::min(nd, std::abs(pts[i] - pts[m]));
            cost += nd;
        }
        return cost;
    };

    double cost = total_cost(medoids);
    bool improved = true;
    while (improved) {
        improved = false;
        for (size_t mi = 0; mi < medoids.size(); ++mi) {
            for (Index cand = 0; cand < n; ++cand) {
                if (std::find(medoids.begin(), medoids.end(), cand) != medoids.end()) continue;
                std::vector<Index> trial = medoids;
                trial[mi] = cand;
                const double c2 = total_cost(trial);
                if (c2 + 1e-15 < cost) {
                    medoids = trial;
                    cost = c2;
                    improved = true;
                }
            }
        }
    }

    LabelVector out;
    out.K = K;
    out.labels.resize(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) {
        int best = 0;
        double bd = std::numeric_limits<double>::max();
        for (int k = 0; k < K; ++k) {
            const double d = std::abs(pts[i] - pts[medoids[static_cast<size_t>(k)]]);
            if (d < bd) {
                bd = d;
                best = k;
            }
        }
        out.labels[static_cast<size_t>(i)] = best + 1;
    }
    return out;
}

struct AlignResult {
    LabelVector mapped;
    double accuracy{};
};

namespace detail {

inline double accuracy_under(const std::vector<int>& est, const std::vector<int>& truth,
                             const std::vector<int>& perm) {
    Index hits = 0;
    for (size_t i = 0; i < est.size(); ++i) {
        if (perm[static_cast<size_t>(est[i] - 1)] == truth[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(est.size());
}

} // namespace detail

// Finds the label permutation maximizing matches: exhaustive for K <= 8,
// greedy confusion-matrix assignment above.
inline AlignResult align_labels(const LabelVector& est, const LabelVector& truth) {
    if (est.size() != truth.size()) throw DimensionMismatch("align_labels");
    if (est.size() == 0) throw NonEmptyRequired("align_labels");
    const int K = std::max(est.K, truth.K);
    if (K > 12) throw KTooLarge(K);

    std::vector<int> best_perm;
    if (K <= 8) {
        std::vector<int> perm(static_cast<size_t>(K));
        std::iota(perm.begin(), perm.end(), 1);
        double best = -1.0;
        do {
            const double acc = detail::accuracy_under(est.labels, truth.labels, perm);
            if (acc > best) {
                best = acc;
                best_perm = perm;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
        // greedy assignment on the confusion matrix
        std::vector<std::vector<Index>> conf(static_cast<size_t>(K),
                                             std::vector<Index>(static_cast<size_t>(K), 0));
        for (size_t i = 0; i < est.labels.size(); ++i)
            conf[static_cast<size_t>(est.labels[i] - 1)][static_cast<size_t>(truth.labels[i] - 1)] += 1;
        best_perm.assign(static_cast<size_t>(K), 0);
        std::vector<bool> used_row(static_cast<size_t>(K), false), used_col(static_cast<size_t>(K), false);
        for (int step = 0; step < K; ++step) {
            Index bestv = -1;
            int br = 0, bc = 0;
            for (int r = 0; r < K; ++r) {
                if (used_row[static_cast<size_t>(r)]) continue;
                for (int c = 0; c < K; ++c) {
                    if (used_col[static_cast<size_t>(c)]) continue;
                    if (conf[static_cast<size_t>(r)][static_cast<size_t>(c)] > bestv) {
                        bestv = conf[static_cast<size_t>(r)][static_cast<size_t>(c)];
                        br = r;
                        bc = c;
                    }
                }
            }
            best_perm[static_cast<size_t>(br)] = bc + 1;
            used_row[static_cast<size_t>(br)] = true;
            used_col[static_cast<size_t>(bc)] = true;
        }
    }

    AlignResult out;
    out.mapped.K = K;
    out.mapped.labels.resize(est.labels.size());
    for (size_t i = 0; i < est.labels.size(); ++i)
        out.mapped.labels[i] = best_perm[static_cast<size_t>(est.labels[i] - 1)];
    out.accuracy = detail::accuracy_under(est.labels, truth.labels, best_perm);
    return out;
}

} // namespace rrlpi

#endif
