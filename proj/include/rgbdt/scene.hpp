#pragma once

#include <algorithm>
#include <cmath>
#include <thread>
#include <utility>
#include <vector>

#include "rgbdt/cues.hpp"
#include "rgbdt/kde.hpp"
#include "rgbdt/types.hpp"

namespace rgbdt {

namespace detail {

inline double median_of(std::vector<double>& values) {
    if (values.empty()) return 0.0;
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    double hi = values[mid];
    if (values.size() % 2 == 1) {
        return hi;
    }
    std::nth_element(values.begin(), values.begin() + (mid - 1), values.begin() + mid);
    return 0.5 * (values[mid - 1] + hi);
}

}  // namespace detail

// Derives per-channel bandwidths from the median absolute difference of
// consecutive frames. For a normally distributed frame-to-frame difference
// the median of |x(t) - x(t-1)| equals 0.68 * sqrt(2) * sigma, so dividing
// by that factor recovers the per-frame noise scale. Depth pairs where
// either reading is absent are skipped for the depth channel only. The
// thermal channel is widened afterwards by the configured factor.
class BandwidthEstimator {
public:
    explicit BandwidthEstimator(const PipelineConfig& config)
        : config_(validate_config(config)) {}

    void add_frame(const FrameStack& frame) {
        std::vector<ObservationVector> obs(frame.pixel_count());
        for (int y = 0; y < frame.height; ++y) {
            for (int x = 0; x < frame.width; ++x) {
                obs[frame.index(x, y)] = build_observation(frame, x, y, config_);
            }
        }
        if (frames_seen_ > 0) {
            if (obs.size() != prev_.size()) {
                throw ValidationError("frame dimensions changed mid-sequence");
            }
            for (std::size_t i = 0; i < obs.size(); ++i) {
                diff_r_.push_back(std::abs(obs[i].r - prev_[i].r));
                diff_g_.push_back(std::abs(obs[i].g - prev_[i].g));
                diff_thermal_.push_back(std::abs(obs[i].thermal - prev_[i].thermal));
                if (!obs[i].ado() && !prev_[i].ado()) {
                    diff_depth_.push_back(std::abs(*obs[i].depth - *prev_[i].depth));
                }
            }
        }
        prev_ = std::move(obs);
        ++frames_seen_;
    }

    int frames_seen() const { return frames_seen_; }

    BandwidthVector finalize() {
        if (frames_seen_ < 2) {
            throw ValidationError("bandwidth estimation needs at least 2 frames");
        }
        const double scale = 1.0 / (0.68 * std::sqrt(2.0));
        const double floor = config_.sigma_floor;
        BandwidthVector bw;
        bw.sigma_r = std::max(detail::median_of(diff_r_) * scale, floor);
        bw.sigma_g = std::max(detail::median_of(diff_g_) * scale, floor);
        bw.sigma_depth = std::max(detail::median_of(diff_depth_) * scale, floor);
        bw.sigma_thermal = std::max(detail::median_of(diff_thermal_) * scale, floor) *
                           config_.thermal_bandwidth_factor;
        return bw;
    }

private:
    PipelineConfig config_;
    std::vector<ObservationVector> prev_;
    std::vector<double> diff_r_;
    std::vector<double> diff_g_;
    std::vector<double> diff_depth_;
    std::vector<double> diff_thermal_;
    int frames_seen_ = 0;
};

inline BandwidthVector estimate_bandwidths(const std::vector<FrameStack>& history,
                                           const PipelineConfig& config) {
    BandwidthEstimator estimator(config);
    for (const FrameStack& frame : history) {
        estimator.add_frame(frame);
    }
    return estimator.finalize();
}

// Bandwidths to fall back on when a sequence is too short to estimate from.
inline BandwidthVector floor_bandwidths(const PipelineConfig& config) {
    return {config.sigma_floor, config.sigma_floor, config.sigma_floor,
            config.sigma_floor * config.thermal_bandwidth_factor};
}

// One sample window per pixel plus the shared bandwidths. Frames must be
// presented in order; within a frame the pixel grid is partitioned into row
// bands that independent workers may process, since each pixel's window is
// touched only by the worker owning its row.
class SceneModel {
public:
    SceneModel(int width, int height, const PipelineConfig& config,
               const BandwidthVector& bandwidths)
        : width_(width),
          height_(height),
          config_(validate_config(config)),
          bandwidths_(bandwidths) {
        if (width < 1 || height < 1) {
            throw ValidationError("scene dimensions must be positive");
        }
        const double floor = config_.sigma_floor;
        if (bandwidths.sigma_r < floor || bandwidths.sigma_g < floor ||
            bandwidths.sigma_depth < floor || bandwidths.sigma_thermal < floor) {
            throw ValidationError("bandwidths below sigma_floor");
        }
        grid_.assign(static_cast<std::size_t>(width) * height, PixelModel(config_.window_n));
    }

    int width() const { return width_; }
    int height() const { return height_; }
    const PipelineConfig& config() const { return config_; }
    const BandwidthVector& bandwidths() const { return bandwidths_; }
    const PixelModel& pixel_model(int x, int y) const {
        return grid_[static_cast<std::size_t>(y) * width_ + x];
    }

    // Classifies every pixel against its current window, then inserts the
    // observation. Classify-before-update keeps an observation from raising
    // its own density.
    ForegroundMask process_frame(const FrameStack& frame, int threads = 1) {
        if (frame.width != width_ || frame.height != height_) {
            throw ValidationError("frame dimensions do not match scene model");
        }
        ForegroundMask mask = ForegroundMask::zeros(width_, height_);
        const int workers = std::clamp(threads, 1, height_);
        if (workers == 1) {
            process_rows(frame, mask, 0, height_);
            return mask;
        }
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        const int rows_per_worker = (height_ + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const int y0 = w * rows_per_worker;
            const int y1 = std::min(height_, y0 + rows_per_worker);
            if (y0 >= y1) break;
            pool.emplace_back([this, &frame, &mask, y0, y1] {
                process_rows(frame, mask, y0, y1);
            });
        }
        for (std::thread& t : pool) t.join();
        return mask;
    }

private:
    void process_rows(const FrameStack& frame, ForegroundMask& mask, int y0, int y1) {
        const double threshold = config_.foreground_threshold;
        for (int y = y0; y < y1; ++y) {
            for (int x = 0; x < width_; ++x) {
                PixelModel& model = grid_[static_cast<std::size_t>(y) * width_ + x];
                const ObservationVector obs = build_observation(frame, x, y, config_);
                if (classify(obs, model, bandwidths_, threshold) == PixelClass::Foreground) {
                    mask.set(x, y, true);
                }
                model.insert(obs);
            }
        }
    }

    int width_;
    int height_;
    PipelineConfig config_;
    BandwidthVector bandwidths_;
    std::vector<PixelModel> grid_;
};

}  // namespace rgbdt
