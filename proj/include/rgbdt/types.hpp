#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rgbdt {

// Thrown when a configuration value, manifest field, or function argument
// violates a documented invariant. Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown on missing, unreadable, or malformed files. Maps to CLI exit code 2.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One synchronized RGB + depth + thermal frame. All three planes must be
// pixel aligned and share the same dimensions. Depth is kept in raw sensor
// units (millimeters for structured-light devices); a raw value of 0 marks
// a pixel where the sensor returned no reading.
struct FrameStack {
    int width = 0;
    int height = 0;
    std::int64_t frame_index = 0;
    int thermal_bit_depth = 8;  // 8 or 16
    std::vector<std::array<std::uint8_t, 3>> rgb;
    std::vector<std::uint16_t> depth;
    std::vector<std::uint16_t> thermal;

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }

    bool operator==(const FrameStack&) const = default;
};

// One pixel's fused measurement in normalized observation space.
// Depth is absent when the sensor had no reading at this pixel (ADO);
// exactly one of {depth value, absent} holds by construction.
struct ObservationVector {
    double r = 0.0;        // chromaticity, [0, 1]
    double g = 0.0;        // chromaticity, [0, 1]
    std::optional<double> depth;  // normalized, [0, 1]; nullopt when absent
    double thermal = 0.0;  // normalized, [0, 1]

    bool ado() const { return !depth.has_value(); }

    bool operator==(const ObservationVector&) const = default;
};

// Sliding window over the most recent observations of a single pixel.
// Inserting into a full window evicts the oldest sample. The count of
// depth-absent samples is maintained alongside so density evaluation can
// split the window without rescanning it.
class PixelModel {
public:
    PixelModel() = default;

    explicit PixelModel(int capacity) : capacity_(capacity) {
        if (capacity < 1) {
            throw ValidationError("PixelModel capacity must be >= 1");
        }
        buffer_.resize(static_cast<std::size_t>(capacity));
    }

    void insert(const ObservationVector& obs) {
        if (capacity_ == 0) {
            throw ValidationError("PixelModel used before construction");
        }
        if (count_ == capacity_) {
            if (buffer_[static_cast<std::size_t>(head_)].ado()) {
                --ado_count_;
            }
            buffer_[static_cast<std::size_t>(head_)] = obs;
            head_ = (head_ + 1) % capacity_;
        } else {
            buffer_[static_cast<std::size_t>((head_ + count_) % capacity_)] = obs;
            ++count_;
        }
        if (obs.ado()) {
            ++ado_count_;
        }
    }

    int capacity() const { return capacity_; }
    int count() const { return count_; }
    int ado_count() const { return ado_count_; }
    bool empty() const { return count_ == 0; }

    // i = 0 is the oldest buffered sample, i = count() - 1 the newest.
    const ObservationVector& sample(int i) const {
        return buffer_[static_cast<std::size_t>((head_ + i) % capacity_)];
    }

private:
    std::vector<ObservationVector> buffer_;
    int capacity_ = 0;
    int head_ = 0;
    int count_ = 0;
    int ado_count_ = 0;
};

// Per-channel kernel smoothing widths, in normalized-channel units.
// These form the diagonal of the kernel covariance.
struct BandwidthVector {
    double sigma_r = 0.0;
    double sigma_g = 0.0;
    double sigma_depth = 0.0;
    double sigma_thermal = 0.0;

    bool operator==(const BandwidthVector&) const = default;
};

// Binary per-pixel classification for one frame; 1 = foreground.
struct ForegroundMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    static ForegroundMask zeros(int width, int height) {
        ForegroundMask m;
        m.width = width;
        m.height = height;
        m.bits.assign(static_cast<std::size_t>(width) * height, 0);
        return m;
    }

    bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool fg) { bits[static_cast<std::size_t>(y) * width + x] = fg ? 1 : 0; }

    std::size_t foreground_count() const {
        std::size_t n = 0;
        for (std::uint8_t b : bits) n += (b != 0);
        return n;
    }

    bool operator==(const ForegroundMask&) const = default;
};

// Axis-aligned box with inclusive pixel coordinates.
struct BoundingBox {
    int x_min = 0;
    int y_min = 0;
    int x_max = 0;
    int y_max = 0;

    std::int64_t area() const {
        return static_cast<std::int64_t>(x_max - x_min + 1) * (y_max - y_min + 1);
    }

    bool operator==(const BoundingBox&) const = default;
};

// Bounding box of a surviving foreground blob, the per-frame unit handed
// to downstream consumers. Coordinates are inclusive; area counts the
// blob's foreground pixels, not the box pixels.
struct RegionOfInterest {
    int blob_id = 0;
    int x_min = 0;
    int y_min = 0;
    int x_max = 0;
    int y_max = 0;
    int area = 0;

    BoundingBox box() const { return {x_min, y_min, x_max, y_max}; }

    bool operator==(const RegionOfInterest&) const = default;
};

struct PipelineConfig {
    int window_n = 100;                     // samples kept per pixel
    double foreground_threshold = 1e-4;     // density below this is foreground
    double sigma_floor = 1e-3;              // minimum per-channel bandwidth
    double thermal_bandwidth_factor = 8.0;  // extra smoothing on the thermal channel
    int min_blob_area = 50;                 // pixels; smaller blobs are dropped
    int opening_radius = 1;                 // structuring element radius
    int depth_max = 8000;                   // raw depth mapped onto [0, 1]

    bool operator==(const PipelineConfig&) const = default;
};

// Returns the config unchanged when every invariant holds; otherwise throws
// naming the first violated field.
inline PipelineConfig validate_config(const PipelineConfig& config) {
    if (config.window_n < 2) {
        throw ValidationError("window_n >= 2 (got " + std::to_string(config.window_n) + ")");
    }
    if (!(config.foreground_threshold > 0.0)) {
        throw ValidationError("foreground_threshold must be > 0");
    }
    if (!(config.sigma_floor > 0.0)) {
        throw ValidationError("sigma_floor must be > 0");
    }
    if (!(config.thermal_bandwidth_factor >= 1.0)) {
        throw ValidationError("thermal_bandwidth_factor must be >= 1");
    }
    if (config.min_blob_area < 1) {
        throw ValidationError("min_blob_area must be >= 1");
    }
    if (config.opening_radius < 1) {
        throw ValidationError("opening_radius must be >= 1");
    }
    if (config.depth_max < 1) {
        throw ValidationError("depth_max must be >= 1");
    }
    return config;
}

}  // namespace rgbdt
