#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "rgbdt/types.hpp"

namespace rgbdt {

struct MaskMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
};

// Pixel-level precision, recall and F-measure. Two empty masks agree
// perfectly and score 1 across the board; when exactly one side is empty
// the undefined ratio counts as 0 and the F-measure is 0.
inline MaskMetrics mask_metrics(const ForegroundMask& pred, const ForegroundMask& gt) {
    if (pred.width != gt.width || pred.height != gt.height) {
        throw ValidationError("mask_metrics: dimension mismatch");
    }
    std::int64_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < pred.bits.size(); ++i) {
        const bool p = pred.bits[i] != 0;
        const bool g = gt.bits[i] != 0;
        tp += (p && g);
        fp += (p && !g);
        fn += (!p && g);
    }
    if (tp + fp == 0 && tp + fn == 0) {
        return {1.0, 1.0, 1.0};
    }
    MaskMetrics m;
    m.precision = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
    m.recall = (tp + fn) > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
    m.f_measure = (m.precision + m.recall) > 0.0
                      ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                      : 0.0;
    return m;
}

inline double iou(const BoundingBox& a, const BoundingBox& b) {
    const int ix_min = std::max(a.x_min, b.x_min);
    const int iy_min = std::max(a.y_min, b.y_min);
    const int ix_max = std::min(a.x_max, b.x_max);
    const int iy_max = std::min(a.y_max, b.y_max);
    if (ix_min > ix_max || iy_min > iy_max) {
        return 0.0;
    }
    const std::int64_t inter =
        static_cast<std::int64_t>(ix_max - ix_min + 1) * (iy_max - iy_min + 1);
    const std::int64_t uni = a.area() + b.area() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

// Greedy box matching in descending overlap order. Every predicted box is
// consumed by at most one ground-truth box; a ground-truth box counts as hit
// when its match reaches the overlap threshold.
inline std::vector<bool> roi_match(const std::vector<RegionOfInterest>& pred,
                                   const std::vector<BoundingBox>& gt, double iou_threshold) {
    if (!(iou_threshold > 0.0) || iou_threshold > 1.0) {
        throw ValidationError("iou_threshold must be in (0, 1]");
    }
    struct Pair {
        double overlap;
        std::size_t pred_index;
        std::size_t gt_index;
    };
    std::vector<Pair> pairs;
    pairs.reserve(pred.size() * gt.size());
    for (std::size_t p = 0; p < pred.size(); ++p) {
        for (std::size_t g = 0; g < gt.size(); ++g) {
            const double overlap = iou(pred[p].box(), gt[g]);
            if (overlap > 0.0) {
                pairs.push_back({overlap, p, g});
            }
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.overlap != b.overlap) return a.overlap > b.overlap;
        if (a.pred_index != b.pred_index) return a.pred_index < b.pred_index;
        return a.gt_index < b.gt_index;
    });
    std::vector<bool> hits(gt.size(), false);
    std::vector<bool> pred_used(pred.size(), false);
    std::vector<bool> gt_used(gt.size(), false);
    for (const Pair& pair : pairs) {
        if (pred_used[pair.pred_index] || gt_used[pair.gt_index]) continue;
        pred_used[pair.pred_index] = true;
        gt_used[pair.gt_index] = true;
        if (pair.overlap >= iou_threshold) {
            hits[pair.gt_index] = true;
        }
    }
    return hits;
}

}  // namespace rgbdt
