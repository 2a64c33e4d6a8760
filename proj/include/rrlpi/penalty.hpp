#ifndef RRLPI_PENALTY_HPP
#define RRLPI_PENALTY_HPP

#include "rrlpi/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace rrlpi {

enum class KappaMode { Zero, Median };

struct GammaSearchConfig {
    double gamma_min{1e-8};
    double gamma_max{1000.0};
    int n_candidates{20};
    KappaMode kappa_mode{KappaMode::Zero};
    Index n_min{0}; // 0: derived as n / k_max by the driver
    double delta_scale{1.0};
    Index k_max{10}; // used only to derive n_min
    double huber_c{kDefaultHuberC};

    void validate() const {
        if (!(gamma_min < gamma_max)) throw DomainViolation("gamma_min must be < gamma_max");
        if (n_candidates < 2) throw DomainViolation("need at least 2 gamma candidates");
        if (gamma_min <= 0.0) throw DomainViolation("gamma_min must be positive");
    }
};

struct GammaCandidateResult {
    double gamma{};
    Index n_discarded{};
    bool separated{false};
    double gap{};
    bool sets_valid{false};
};

// Affine map of the embedding onto [0,1].
inline Vector rescale(const Vector& y) {
    const double lo = y.minCoeff();
    const double hi = y.maxCoeff();
    if (hi - lo <= 1e-14) throw ConstantEmbedding();
    return (y.array() - lo) / (hi - lo);
}

struct SplitSets {
    std::vector<double> s; // rescaled values where y_hat > kappa
    std::vector<double> t; // rescaled values where y_hat <= kappa
    std::vector<Index> s_index;
    std::vector<Index> t_index;
};

inline SplitSets split_sets(const Vector& y_hat, const Vector& y_bar, double kappa) {
    if (y_hat.size() != y_bar.size()) throw DimensionMismatch("split_sets");
    SplitSets out;
    for (Index j = 0; j < y_hat.size(); ++j) {
        if (y_hat[j] > kappa) {
            out.s.push_back(y_bar[j]);
            out.s_index.push_back(j);
        } else {
            out.t.push_back(y_bar[j]);
            out.t_index.push_back(j);
        }
    }
    return out;
}

// Delta = c * (ln n)^(-2/3)
inline double delta_threshold(Index n, double delta_scale) {
    if (n < 3) throw DomainViolation("delta_threshold needs n >= 3");
    return delta_scale * std::pow(std::log(static_cast<double>(n)), -2.0 / 3.0);
}

namespace detail {

// Minimum squared cross-set distance of 1-D sets: adjacent opposite-tag
// entries in the merged sorted order.
struct TaggedValue {
    double value;
    bool from_s;
};

inline bool min_cross_pair(const std::vector<TaggedValue>& merged, size_t& ai, size_t& bi,
                           double& dist2) {
    bool found = false;
    for (size_t i = 0; i + 1 < merged.size(); ++i) {
        if (merged[i].from_s == merged[i + 1].from_s) continue;
        const double diff = merged[i + 1].value - merged[i].value;
        const double d2 = diff * diff;
        if (!found || d2 < dist2) {
            found = true;
            dist2 = d2;
            ai = i;
            bi = i + 1;
        }
    }
    return found;
}

} // namespace detail

// Iteratively removes the closest cross-set pair until the sets are
// Delta-separated or a removal would push a set below n_min. The reported gap
// is the squared distance between min(s) and max(t) of the initial sets.
inline GammaCandidateResult prune_to_separation(const SplitSets& sets, double delta,
                                                Index n_min) {
    GammaCandidateResult res;
    res.sets_valid = static_cast<Index>(sets.s.size()) >= n_min &&
                     static_cast<Index>(sets.t.size()) >= n_min;
    if (sets.s.empty() || sets.t.empty()) return res;

    const double s_min = *std::min_element(sets.s.begin(), sets.s.end());
    const double t_max = *std::max_element(sets.t.begin(), sets.t.end());
    res.gap = (s_min - t_max) * (s_min - t_max);

    std::vector<detail::TaggedValue> merged;
    merged.reserve(sets.s.size() + sets.t.size());
    for (double v : sets.s) merged.push_back({v, true});
    for (double v : sets.t) merged.push_back({v, false});
    std::stable_sort(merged.begin(), merged.end(),
                     [](const auto& a, const auto& b) { return a.value < b.value; });

    Index ns = static_cast<Index>(sets.s.size());
    Index nt = static_cast<Index>(sets.t.size());
    while (ns >= n_min && nt >= n_min) {
        size_t ai = 0, bi = 0;
        double d2 = 0.0;
        if (!detail::min_cross_pair(merged, ai, bi, d2)) break;
        if (d2 > delta) {
            res.separated = true;
            break;
        }
        if (ns - 1 < n_min || nt - 1 < n_min) break; // removal would violate n_min
        merged.erase(merged.begin() + static_cast<std::ptrdiff_t>(ai),
                     merged.begin() + static_cast<std::ptrdiff_t>(bi) + 1);
        --ns;
        --nt;
        res.n_discarded += 2;
    }
    return res;
}

// Eq. (15) over the separated candidates, falling back to the maximum-gap rule
// of Eq. (16). Ties break toward the smallest gamma.
inline double select_gamma(const std::vector<GammaCandidateResult>& results) {
    if (results.empty()) throw NonEmptyRequired("select_gamma");
    const GammaCandidateResult* best = nullptr;
    for (const auto& r : results) {
        if (!(r.separated && r.sets_valid)) continue;
        if (!best || r.n_discarded < best->n_discarded ||
            (r.n_discarded == best->n_discarded && r.gamma < best->gamma))
            best = &r;
    }
    if (best) return best->gamma;
    for (const auto& r : results) {
        if (!best || r.gap > best->gap || (r.gap == best->gap && r.gamma < best->gamma))
            best = &r;
    }
    return best->gamma;
}

inline std::vector<double> log_spaced_grid(double lo, double hi, int n) {
    std::vector<double> grid(static_cast<size_t>(n));
    const double llo = std::log10(lo);
    const double lhi = std::log10(hi);
    for (int i = 0; i < n; ++i)
        grid[static_cast<size_t>(i)] = std::pow(10.0, llo + (lhi - llo) * i / (n - 1));
    return grid;
}

struct AutoGammaResult {
    EmbeddingVector embedding;
    double gamma_hat{};
    std::vector<GammaCandidateResult> candidates;
};

// The end-to-end driver: LE initialization, one RRLPI fit per candidate gamma,
// Delta-separated-set scoring, gamma selection, final refit.
inline AutoGammaResult estimate_fiedler_rrlpi(const DataMatrix& X, const AffinityGraph& G,
                                              GammaSearchConfig config = {}) {
    config.validate();
    const Index n = G.size();
    const Index n_min = config.n_min > 0 ? config.n_min : n / config.k_max;
    const double delta = delta_threshold(n, config.delta_scale);

    const EmbeddingVector le = fiedler_le(G, EigMode::Generalized);
    const Vector eps = edge_weight_errors(G);
    const double sigma = madn(eps);
    const Vector omega = robust_weights(eps, sigma, config.huber_c, scale_floor(G.d_typ));

    AutoGammaResult out;
    const auto grid = log_spaced_grid(config.gamma_min, config.gamma_max, config.n_candidates);
    for (double gamma : grid) {
        GammaCandidateResult cand;
        cand.gamma = gamma;
        try {
            const Vector beta = fit_transform_vector(X.values, le.y, gamma, omega, sigma);
            const Vector y_hat = X.values.transpose() * beta;
            const Vector y_bar = rescale(y_hat);
            const double kappa =
                (config.kappa_mode == KappaMode::Median) ? median(y_hat) : 0.0;
            const SplitSets sets = split_sets(y_hat, y_bar, kappa);
            cand = prune_to_separation(sets, delta, n_min);
            cand.gamma = gamma;
        } catch (const ConstantEmbedding&) {
            // candidate invalid, keep defaults (not separated, gap 0)
        }
        out.candidates.push_back(cand);
    }

    out.gamma_hat = select_gamma(out.candidates);
    const Vector beta = fit_transform_vector(X.values, le.y, out.gamma_hat, omega, sigma);
    out.embedding.kind = EmbeddingKind::RRLPI;
    out.embedding.eigenvalue = le.eigenvalue;
    out.embedding.degenerate_spectrum = le.degenerate_spectrum;
    out.embedding.y = X.values.transpose() * beta;
    fix_sign(out.embedding.y);
    return out;
}

} // namespace rrlpi

#endif
