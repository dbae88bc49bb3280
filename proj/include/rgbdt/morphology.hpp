#pragma once

#include "rgbdt/types.hpp"

namespace rgbdt {

// Square structuring element of side 2 * radius + 1.
struct StructuringElement {
    int radius = 1;
};

namespace detail {

inline void check_se(const StructuringElement& se) {
    if (se.radius < 1) {
        throw ValidationError("structuring element radius must be >= 1");
    }
}

}  // namespace detail

// Erosion treats pixels outside the image as background, so foreground
// touching the border erodes like any other boundary. The square element
// separates into a horizontal and a vertical pass.
inline ForegroundMask erode(const ForegroundMask& mask, const StructuringElement& se) {
    detail::check_se(se);
    const int w = mask.width;
    const int h = mask.height;
    const int r = se.radius;
    ForegroundMask horizontal = ForegroundMask::zeros(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            bool all = (x - r >= 0) && (x + r < w);
            for (int dx = -r; all && dx <= r; ++dx) {
                all = mask.at(x + dx, y);
            }
            horizontal.set(x, y, all);
        }
    }
    ForegroundMask out = ForegroundMask::zeros(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            bool all = (y - r >= 0) && (y + r < h);
            for (int dy = -r; all && dy <= r; ++dy) {
                all = horizontal.at(x, y + dy);
            }
            out.set(x, y, all);
        }
    }
    return out;
}

inline ForegroundMask dilate(const ForegroundMask& mask, const StructuringElement& se) {
    detail::check_se(se);
    const int w = mask.width;
    const int h = mask.height;
    const int r = se.radius;
    ForegroundMask horizontal = ForegroundMask::zeros(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            bool any = false;
            for (int dx = -r; !any && dx <= r; ++dx) {
                const int xx = x + dx;
                any = xx >= 0 && xx < w && mask.at(xx, y);
            }
            horizontal.set(x, y, any);
        }
    }
    ForegroundMask out = ForegroundMask::zeros(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            bool any = false;
            for (int dy = -r; !any && dy <= r; ++dy) {
                const int yy = y + dy;
                any = yy >= 0 && yy < h && horizontal.at(x, yy);
            }
            out.set(x, y, any);
        }
    }
    return out;
}

// Opening removes foreground features smaller than the element and leaves
// larger shapes intact. Idempotent and anti-extensive.
inline ForegroundMask open(const ForegroundMask& mask, const StructuringElement& se) {
    return dilate(erode(mask, se), se);
}

}  // namespace rgbdt
