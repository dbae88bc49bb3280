#pragma once

#include <algorithm>
#include <cstdint>
#include <string>

#include "rgbdt/types.hpp"

namespace rgbdt {

struct Chromaticity {
    double r = 0.0;
    double g = 0.0;
};

// Intensity-normalized color coordinates r = R/(R+G+B), g = G/(R+G+B).
// A pure black input has no defined hue; it maps to the neutral point
// (1/3, 1/3) so the observation stays total.
inline Chromaticity to_chromaticity(std::uint8_t red, std::uint8_t green, std::uint8_t blue) {
    const int sum = int(red) + int(green) + int(blue);
    if (sum == 0) {
        return {1.0 / 3.0, 1.0 / 3.0};
    }
    const double inv = 1.0 / sum;
    return {red * inv, green * inv};
}

// Raw 0 is the sensor's no-reading sentinel and maps to an absent value;
// everything else lands in (0, 1], clamped at the far limit.
inline std::optional<double> normalize_depth(std::uint16_t raw, int depth_max) {
    if (raw == 0) {
        return std::nullopt;
    }
    return std::min(static_cast<double>(raw) / depth_max, 1.0);
}

inline double normalize_thermal(std::uint16_t raw, int bit_depth) {
    const std::uint32_t full_scale = (bit_depth == 16) ? 65535u : 255u;
    if (bit_depth != 8 && bit_depth != 16) {
        throw ValidationError("thermal bit depth must be 8 or 16");
    }
    if (raw > full_scale) {
        throw ValidationError("thermal value " + std::to_string(raw) + " exceeds " +
                              std::to_string(bit_depth) + "-bit range");
    }
    return static_cast<double>(raw) / full_scale;
}

inline ObservationVector build_observation(const FrameStack& frame, int x, int y,
                                            const PipelineConfig& config) {
    if (!frame.in_bounds(x, y)) {
        throw std::out_of_range("pixel (" + std::to_string(x) + ", " + std::to_string(y) +
                                ") outside " + std::to_string(frame.width) + "x" +
                                std::to_string(frame.height) + " frame");
    }
    const std::size_t i = frame.index(x, y);
    const auto& px = frame.rgb[i];
    const Chromaticity c = to_chromaticity(px[0], px[1], px[2]);
    ObservationVector obs;
    obs.r = c.r;
    obs.g = c.g;
    obs.depth = normalize_depth(frame.depth[i], config.depth_max);
    obs.thermal = normalize_thermal(frame.thermal[i], frame.thermal_bit_depth);
    return obs;
}

}  // namespace rgbdt
