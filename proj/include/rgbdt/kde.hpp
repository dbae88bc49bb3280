#pragma once

#include <cmath>
#include <numbers>

#include "rgbdt/types.hpp"

namespace rgbdt {

enum class PixelClass : std::uint8_t { Background = 0, Foreground = 1 };

namespace detail {

// Compensated accumulation keeps the density invariant under sample
// reordering to within a couple of ulps.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double value) {
        const double y = value - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

struct ChannelKernel {
    double norm = 0.0;          // 1 / sqrt(2 pi sigma^2)
    double inv_two_var = 0.0;   // 1 / (2 sigma^2)

    explicit ChannelKernel(double sigma)
        : norm(1.0 / std::sqrt(2.0 * std::numbers::pi * sigma * sigma)),
          inv_two_var(1.0 / (2.0 * sigma * sigma)) {}

    double operator()(double delta) const {
        return norm * std::exp(-delta * delta * inv_two_var);
    }
};

}  // namespace detail

// Average of diagonal-covariance Gaussian kernels centered at the buffered
// samples. The window is split by depth availability: an observation with a
// valid depth is scored against the depth-valid samples over all four
// channels, an observation without one against the depth-absent samples
// over the remaining three. Both branches keep the shared 1/count weight,
// so the branch masses sum to one and the valid branch reduces to the plain
// four-channel estimate when no depth-absent samples exist.
inline double kde_density(const ObservationVector& obs, const PixelModel& model,
                          const BandwidthVector& bw) {
    if (model.empty()) {
        throw ValidationError("kde_density requires at least one buffered sample");
    }
    const detail::ChannelKernel kr(bw.sigma_r);
    const detail::ChannelKernel kg(bw.sigma_g);
    const detail::ChannelKernel kd(bw.sigma_depth);
    const detail::ChannelKernel kt(bw.sigma_thermal);

    detail::KahanSum acc;
    const int n = model.count();
    if (obs.ado()) {
        for (int i = 0; i < n; ++i) {
            const ObservationVector& s = model.sample(i);
            if (!s.ado()) continue;
            acc.add(kr(obs.r - s.r) * kg(obs.g - s.g) * kt(obs.thermal - s.thermal));
        }
    } else {
        const double d = *obs.depth;
        for (int i = 0; i < n; ++i) {
            const ObservationVector& s = model.sample(i);
            if (s.ado()) continue;
            acc.add(kr(obs.r - s.r) * kg(obs.g - s.g) * kd(d - *s.depth) *
                    kt(obs.thermal - s.thermal));
        }
    }
    return acc.sum / n;
}

// Foreground iff the density falls strictly below the threshold. A pixel
// with no history yet cannot be scored and defaults to background until its
// window holds at least one sample.
inline PixelClass classify(const ObservationVector& obs, const PixelModel& model,
                           const BandwidthVector& bw, double threshold) {
    if (model.empty()) {
        return PixelClass::Background;
    }
    return kde_density(obs, model, bw) < threshold ? PixelClass::Foreground
                                                   : PixelClass::Background;
}

}  // namespace rgbdt
