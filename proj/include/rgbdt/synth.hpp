#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "rgbdt/image_io.hpp"
#include "rgbdt/manifest.hpp"
#include "rgbdt/types.hpp"

namespace rgbdt {

struct Waypoint {
    int frame = 0;
    int x = 0;  // top-left corner of the object square
    int y = 0;
};

// Recipe for a synthetic recording: a noisy constant background, an optional
// square object following an explicit per-frame trajectory, and a depth
// plane salted with absent readings at a fixed rate.
struct SynthParams {
    int width = 64;
    int height = 64;
    int frame_count = 0;
    std::array<std::uint8_t, 3> background_rgb = {120, 120, 120};
    std::uint16_t background_depth = 6000;
    std::uint16_t background_thermal = 80;
    double rgb_noise_std = 2.0;
    double depth_noise_std = 15.0;
    double thermal_noise_std = 2.0;
    int object_size = 12;
    std::array<std::uint8_t, 3> object_rgb = {200, 60, 60};
    std::uint16_t object_depth = 2500;
    std::uint16_t object_thermal = 220;
    std::vector<Waypoint> trajectory;  // frames strictly increasing; absent frames have no object
    double ado_speckle_rate = 0.0;     // per pixel per frame
    int thermal_bit_depth = 8;
};

struct SynthSequence {
    std::vector<FrameStack> frames;
    std::vector<ForegroundMask> gt_masks;
    std::vector<std::vector<BoundingBox>> gt_boxes;  // 0 or 1 box per frame
};

inline void validate_synth_params(const SynthParams& p) {
    if (p.width < 1 || p.height < 1) {
        throw ValidationError("synth: dimensions must be positive");
    }
    if (p.frame_count < 0) {
        throw ValidationError("synth: frame_count must be >= 0");
    }
    if (p.object_size < 1) {
        throw ValidationError("synth: object_size must be >= 1");
    }
    if (p.rgb_noise_std < 0 || p.depth_noise_std < 0 || p.thermal_noise_std < 0) {
        throw ValidationError("synth: noise std must be >= 0");
    }
    if (p.ado_speckle_rate < 0.0 || p.ado_speckle_rate > 1.0) {
        throw ValidationError("synth: ado_speckle_rate must be in [0, 1]");
    }
    if (p.thermal_bit_depth != 8 && p.thermal_bit_depth != 16) {
        throw ValidationError("synth: thermal_bit_depth must be 8 or 16");
    }
    int prev_frame = -1;
    for (const Waypoint& wp : p.trajectory) {
        if (wp.frame <= prev_frame) {
            throw ValidationError("synth: trajectory frames must be strictly increasing");
        }
        prev_frame = wp.frame;
        if (wp.frame < 0 || wp.frame >= p.frame_count) {
            throw ValidationError("synth: waypoint frame " + std::to_string(wp.frame) +
                                  " outside [0, " + std::to_string(p.frame_count) + ")");
        }
        if (wp.x < 0 || wp.y < 0 || wp.x + p.object_size > p.width ||
            wp.y + p.object_size > p.height) {
            throw ValidationError("synth: object does not fit at waypoint frame " +
                                  std::to_string(wp.frame));
        }
    }
}

namespace detail {

inline std::uint16_t noisy_value(double base, double std_dev, double draw, double lo, double hi) {
    const double v = std::round(base + std_dev * draw);
    return static_cast<std::uint16_t>(std::clamp(v, lo, hi));
}

}  // namespace detail

inline SynthSequence synth_sequence(const SynthParams& params, std::uint64_t seed) {
    validate_synth_params(params);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const double thermal_max = params.thermal_bit_depth == 16 ? 65535.0 : 255.0;

    std::vector<std::optional<Waypoint>> position(static_cast<std::size_t>(params.frame_count));
    for (const Waypoint& wp : params.trajectory) {
        position[static_cast<std::size_t>(wp.frame)] = wp;
    }

    SynthSequence seq;
    seq.frames.reserve(static_cast<std::size_t>(params.frame_count));
    seq.gt_masks.reserve(static_cast<std::size_t>(params.frame_count));
    seq.gt_boxes.resize(static_cast<std::size_t>(params.frame_count));
    for (int f = 0; f < params.frame_count; ++f) {
        FrameStack frame;
        frame.width = params.width;
        frame.height = params.height;
        frame.frame_index = f;
        frame.thermal_bit_depth = params.thermal_bit_depth;
        frame.rgb.resize(frame.pixel_count());
        frame.depth.resize(frame.pixel_count());
        frame.thermal.resize(frame.pixel_count());
        ForegroundMask gt = ForegroundMask::zeros(params.width, params.height);

        const std::optional<Waypoint>& wp = position[static_cast<std::size_t>(f)];
        for (int y = 0; y < params.height; ++y) {
            for (int x = 0; x < params.width; ++x) {
                const bool on_object = wp && x >= wp->x && x < wp->x + params.object_size &&
                                       y >= wp->y && y < wp->y + params.object_size;
                const auto& rgb = on_object ? params.object_rgb : params.background_rgb;
                const double depth_base = on_object ? params.object_depth : params.background_depth;
                const double thermal_base =
                    on_object ? params.object_thermal : params.background_thermal;
                const std::size_t i = frame.index(x, y);
                for (int c = 0; c < 3; ++c) {
                    frame.rgb[i][c] = static_cast<std::uint8_t>(detail::noisy_value(
                        rgb[static_cast<std::size_t>(c)], params.rgb_noise_std, normal(rng), 0.0, 255.0));
                }
                // Valid depth stays at least 1 so only the speckle pass can
                // produce the absent-reading sentinel.
                frame.depth[i] =
                    detail::noisy_value(depth_base, params.depth_noise_std, normal(rng), 1.0, 65535.0);
                frame.thermal[i] = detail::noisy_value(thermal_base, params.thermal_noise_std,
                                                       normal(rng), 0.0, thermal_max);
                if (uniform(rng) < params.ado_speckle_rate) {
                    frame.depth[i] = 0;
                }
                if (on_object) {
                    gt.set(x, y, true);
                }
            }
        }
        if (wp) {
            seq.gt_boxes[static_cast<std::size_t>(f)].push_back(BoundingBox{
                wp->x, wp->y, wp->x + params.object_size - 1, wp->y + params.object_size - 1});
        }
        seq.frames.push_back(std::move(frame));
        seq.gt_masks.push_back(std::move(gt));
    }
    return seq;
}

// ---- presets --------------------------------------------------------------

struct SynthPreset {
    std::string name;
    SynthParams params;
    PipelineConfig config;
};

namespace detail {

// Serpentine tour over a 5x5 grid of non-overlapping 12 px cells. The square
// advances one full cell per frame, so no pixel is covered on consecutive
// frames and any revisit happens a full 25-frame lap later, beyond the
// preset's 20-sample window.
inline Waypoint serpentine_cell(int step, int frame) {
    const int cell = step % 25;
    const int row = cell / 5;
    int col = cell % 5;
    if (row % 2 == 1) col = 4 - col;
    return Waypoint{frame, 2 + 12 * col, 2 + 12 * row};
}

inline PipelineConfig preset_config() {
    PipelineConfig config;
    config.window_n = 20;
    config.foreground_threshold = 1e-4;
    config.sigma_floor = 1e-3;
    config.thermal_bandwidth_factor = 8.0;
    config.min_blob_area = 50;
    config.opening_radius = 1;
    config.depth_max = 8000;
    return config;
}

}  // namespace detail

inline std::vector<std::string> preset_names() {
    return {"static", "moving-square", "square-halt"};
}

inline SynthPreset make_preset(const std::string& name) {
    SynthPreset preset;
    preset.name = name;
    preset.config = detail::preset_config();
    SynthParams& p = preset.params;
    p.ado_speckle_rate = 0.01;
    // Noise std of 2/255 in normalized units on every channel.
    p.rgb_noise_std = 2.0;
    p.thermal_noise_std = 2.0;
    p.depth_noise_std = 2.0 / 255.0 * 8000.0;
    if (name == "static") {
        p.frame_count = 200;
    } else if (name == "moving-square") {
        // 200 background frames to settle the models, then 100 frames of a
        // fast square touring the cell grid.
        p.frame_count = 300;
        for (int f = 200; f < 300; ++f) {
            p.trajectory.push_back(detail::serpentine_cell(f - 200, f));
        }
    } else if (name == "square-halt") {
        // 150 background frames, 30 moving, then the square parks for 70
        // frames so the model can swallow it.
        p.frame_count = 250;
        for (int f = 150; f < 180; ++f) {
            p.trajectory.push_back(detail::serpentine_cell(f - 150, f));
        }
        const Waypoint last = detail::serpentine_cell(29, 0);
        for (int f = 180; f < 250; ++f) {
            p.trajectory.push_back(Waypoint{f, last.x, last.y});
        }
    } else {
        throw ValidationError("unknown preset '" + name + "'");
    }
    return preset;
}

// ---- persistence ------------------------------------------------------------

// Writes the frames in the manifest layout plus ground truth: masks under
// gt/ and one box record per frame in gt_boxes.jsonl.
inline SequenceManifest write_sequence(const SynthSequence& seq,
                                       const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    SequenceManifest m;
    m.root = dir;
    m.frame_count = static_cast<int>(seq.frames.size());
    if (!seq.frames.empty()) {
        m.thermal_bit_depth = seq.frames.front().thermal_bit_depth;
    }
    fs::create_directories(dir / m.rgb_dir);
    fs::create_directories(dir / m.depth_dir);
    fs::create_directories(dir / m.thermal_dir);
    fs::create_directories(dir / "gt");
    save_manifest(m, dir);

    std::ofstream boxes(dir / "gt_boxes.jsonl", std::ios::trunc);
    if (!boxes) {
        throw IoError("cannot write gt_boxes.jsonl in " + dir.string());
    }
    for (std::size_t f = 0; f < seq.frames.size(); ++f) {
        const FrameStack& frame = seq.frames[f];
        RgbImage rgb{frame.width, frame.height, frame.rgb};
        write_rgb_image(rgb, rgb_path(m, static_cast<std::int64_t>(f)));
        GrayImage depth{frame.width, frame.height, 16, frame.depth};
        write_gray_image(depth, depth_path(m, static_cast<std::int64_t>(f)));
        GrayImage thermal{frame.width, frame.height, frame.thermal_bit_depth, frame.thermal};
        write_gray_image(thermal, thermal_path(m, static_cast<std::int64_t>(f)));

        char name[32];
        std::snprintf(name, sizeof(name), "mask_%06zu.png", f);
        write_mask(seq.gt_masks[f], dir / "gt" / name);

        nlohmann::ordered_json record;
        record["frame_index"] = f;
        record["boxes"] = nlohmann::ordered_json::array();
        for (const BoundingBox& b : seq.gt_boxes[f]) {
            record["boxes"].push_back({{"x_min", b.x_min},
                                       {"y_min", b.y_min},
                                       {"x_max", b.x_max},
                                       {"y_max", b.y_max}});
        }
        boxes << record.dump() << "\n";
    }
    return m;
}

inline std::vector<std::vector<BoundingBox>> read_gt_boxes(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::vector<std::vector<BoundingBox>> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json record;
        try {
            record = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw IoError("malformed record in " + path.string() + ": " + e.what());
        }
        std::vector<BoundingBox> boxes;
        for (const auto& jb : record.at("boxes")) {
            boxes.push_back(BoundingBox{jb.at("x_min").get<int>(), jb.at("y_min").get<int>(),
                                        jb.at("x_max").get<int>(), jb.at("y_max").get<int>()});
        }
        const std::size_t index = record.at("frame_index").get<std::size_t>();
        if (out.size() <= index) out.resize(index + 1);
        out[index] = std::move(boxes);
    }
    return out;
}

}  // namespace rgbdt
