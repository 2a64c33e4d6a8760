#ifndef RRLPI_METRICS_HPP
#define RRLPI_METRICS_HPP

#include "rrlpi/partition.hpp"

#include <cmath>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace rrlpi {

// Mean aligned partition accuracy over runs.
inline double p_acc(const std::vector<std::pair<LabelVector, LabelVector>>& runs) {
    if (runs.empty()) throw NonEmptyRequired("p_acc");
    double sum = 0.0;
    for (const auto& [est, truth] : runs) sum += align_labels(est, truth).accuracy;
    return sum / static_cast<double>(runs.size());
}

// Fraction of runs detecting the true cluster count.
inline double p_det(const std::vector<int>& estimates, int K) {
    if (estimates.empty()) throw NonEmptyRequired("p_det");
    Index hits = 0;
    for (int k : estimates)
        if (k == K) ++hits;
    return static_cast<double>(hits) / static_cast<double>(estimates.size());
}

// Row-major H x W label map.
struct LabelMap {
    std::vector<int> labels;
    Index height{};
    Index width{};

    int at(Index r, Index c) const { return labels[static_cast<size_t>(r * width + c)]; }
};

// A pixel is boundary if any 4-neighbor has a different label.
inline std::vector<bool> boundary_mask(const LabelMap& seg) {
    std::vector<bool> mask(seg.labels.size(), false);
    for (Index r = 0; r < seg.height; ++r) {
        for (Index c = 0; c < seg.width; ++c) {
            const int v = seg.at(r, c);
            const bool b = (r > 0 && seg.at(r - 1, c) != v) ||
                           (r + 1 < seg.height && seg.at(r + 1, c) != v) ||
                           (c > 0 && seg.at(r, c - 1) != v) ||
                           (c + 1 < seg.width && seg.at(r, c + 1) != v);
            mask[static_cast<size_t>(r * seg.width + c)] = b;
        }
    }
    return mask;
}

namespace detail {

// Fraction of pixels in `a` with a `b` pixel within Chebyshev radius.
inline double match_fraction(const std::vector<bool>& a, const std::vector<bool>& b,
                             Index height, Index width, Index radius) {
    Index total = 0;
    Index matched = 0;
    for (Index r = 0; r < height; ++r) {
        for (Index c = 0; c < width; ++c) {
            if (!a[static_cast<size_t>(r * width + c)]) continue;
            ++total;
            bool hit = false;
            for (Index dr = -radius; dr <= radius && !hit; ++dr) {
                for (Index dc = -radius; dc <= radius && !hit; ++dc) {
                    const Index rr = r + dr;
                    const Index cc = c + dc;
                    if (rr < 0 || cc < 0 || rr >= height || cc >= width) continue;
                    if (b[static_cast<size_t>(rr * width + cc)]) hit = true;
                }
            }
            if (hit) ++matched;
        }
    }
    return total == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(total);
}

} // namespace detail

// Contour matching score: harmonic mean of boundary precision and recall at
// the given Chebyshev match radius.
inline double f_score(const LabelMap& est, const LabelMap& gt, Index match_radius = 1) {
    if (est.height != gt.height || est.width != gt.width)
        throw DimensionMismatch("f_score");
    const auto be = boundary_mask(est);
    const auto bg = boundary_mask(gt);
    const double p = detail::match_fraction(be, bg, est.height, est.width, match_radius);
    const double r = detail::match_fraction(bg, be, est.height, est.width, match_radius);
    if (p + r == 0.0) return 0.0;
    return 2.0 * p * r / (p + r);
}

// Mean per-segment TP/(TP+FP+FN) after best label alignment on the flattened
// maps.
inline double jaccard(const LabelMap& est, const LabelMap& gt) {
    if (est.height != gt.height || est.width != gt.width)
        throw DimensionMismatch("jaccard");
    std::set<int> est_labels(est.labels.begin(), est.labels.end());
    std::set<int> gt_labels(gt.labels.begin(), gt.labels.end());

    // compact to 1..K for alignment
    auto compact = [](const std::vector<int>& raw, const std::set<int>& labs) {
        LabelVector lv;
        lv.K = static_cast<int>(labs.size());
        std::map<int, int> remap;
        int next = 1;
        for (int l : labs) remap[l] = next++;
        lv.labels.reserve(raw.size());
        for (int l : raw) lv.labels.push_back(remap.at(l));
        return lv;
    };
    const LabelVector e = compact(est.labels, est_labels);
    const LabelVector g = compact(gt.labels, gt_labels);
    const LabelVector aligned = align_labels(e, g).mapped;

    double sum = 0.0;
    int segments = 0;
    for (int k = 1; k <= g.K; ++k) {
        Index tp = 0, fp = 0, fn = 0;
        for (size_t i = 0; i < aligned.labels.size(); ++i) {
            const bool in_est = aligned.labels[i] == k;
            const bool in_gt = g.labels[i] == k;
            if (in_est && in_gt) ++tp;
            else if (in_est) ++fp;
            else if (in_gt) ++fn;
        }
        if (tp + fp + fn == 0) continue;
        sum += static_cast<double>(tp) / static_cast<double>(tp + fp + fn);
        ++segments;
    }
    return segments == 0 ? 0.0 : sum / segments;
}

} // namespace rrlpi

#endif
