#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "rgbdt/types.hpp"

namespace rgbdt {

struct Blob {
    int id = 0;
    int area = 0;
    int x_min = 0;
    int y_min = 0;
    int x_max = 0;
    int y_max = 0;
};

// Labels are 1..k in raster order of first appearance; 0 marks background.
struct BlobLabeling {
    int width = 0;
    int height = 0;
    std::vector<std::int32_t> labels;
    std::vector<Blob> blobs;
};

namespace detail {

inline std::int32_t uf_find(std::vector<std::int32_t>& parent, std::int32_t a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
        parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
        a = parent[static_cast<std::size_t>(a)];
    }
    return a;
}

inline void uf_union(std::vector<std::int32_t>& parent, std::int32_t a, std::int32_t b) {
    a = uf_find(parent, a);
    b = uf_find(parent, b);
    if (a != b) {
        parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
}

}  // namespace detail

// Two-pass 8-connectivity labeling with a union-find over provisional labels.
inline BlobLabeling connected_components(const ForegroundMask& mask) {
    const int w = mask.width;
    const int h = mask.height;
    BlobLabeling out;
    out.width = w;
    out.height = h;
    out.labels.assign(static_cast<std::size_t>(w) * h, 0);

    std::vector<std::int32_t> provisional(out.labels.size(), 0);
    std::vector<std::int32_t> parent;
    parent.push_back(0);  // index 0 unused, background

    auto prov_at = [&](int x, int y) -> std::int32_t {
        if (x < 0 || x >= w || y < 0) return 0;
        return provisional[static_cast<std::size_t>(y) * w + x];
    };

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!mask.at(x, y)) continue;
            const std::int32_t neighbors[4] = {prov_at(x - 1, y), prov_at(x - 1, y - 1),
                                               prov_at(x, y - 1), prov_at(x + 1, y - 1)};
            std::int32_t assigned = 0;
            for (std::int32_t nb : neighbors) {
                if (nb == 0) continue;
                if (assigned == 0) {
                    assigned = nb;
                } else {
                    detail::uf_union(parent, assigned, nb);
                }
            }
            if (assigned == 0) {
                assigned = static_cast<std::int32_t>(parent.size());
                parent.push_back(assigned);
            }
            provisional[static_cast<std::size_t>(y) * w + x] = assigned;
        }
    }

    // Compact roots to 1..k in order of first appearance and gather stats.
    std::vector<std::int32_t> compact(parent.size(), 0);
    std::int32_t next_id = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            if (provisional[i] == 0) continue;
            const std::int32_t root = detail::uf_find(parent, provisional[i]);
            std::int32_t& id = compact[static_cast<std::size_t>(root)];
            if (id == 0) {
                id = ++next_id;
                out.blobs.push_back(Blob{id, 0, x, y, x, y});
            }
            out.labels[i] = id;
            Blob& blob = out.blobs[static_cast<std::size_t>(id - 1)];
            ++blob.area;
            blob.x_min = std::min(blob.x_min, x);
            blob.y_min = std::min(blob.y_min, y);
            blob.x_max = std::max(blob.x_max, x);
            blob.y_max = std::max(blob.y_max, y);
        }
    }
    return out;
}

// Keeps blobs at or above the area floor and orders the result by the top
// edge, then the left edge, then descending area.
inline std::vector<RegionOfInterest> extract_rois(const BlobLabeling& labeling,
                                                  int min_blob_area) {
    if (min_blob_area < 1) {
        throw ValidationError("min_blob_area must be >= 1");
    }
    std::vector<RegionOfInterest> rois;
    for (const Blob& blob : labeling.blobs) {
        if (blob.area < min_blob_area) continue;
        rois.push_back(RegionOfInterest{blob.id, blob.x_min, blob.y_min, blob.x_max,
                                        blob.y_max, blob.area});
    }
    std::sort(rois.begin(), rois.end(), [](const RegionOfInterest& a, const RegionOfInterest& b) {
        if (a.y_min != b.y_min) return a.y_min < b.y_min;
        if (a.x_min != b.x_min) return a.x_min < b.x_min;
        return a.area > b.area;
    });
    return rois;
}

}  // namespace rgbdt
