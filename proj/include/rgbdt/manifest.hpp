#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "rgbdt/image_io.hpp"
#include "rgbdt/types.hpp"

namespace rgbdt {

// Describes how a recorded sequence lives on disk: one subdirectory per
// modality, one file per frame, names generated from a printf-style index
// pattern. Loaded from <root>/manifest.json.
struct SequenceManifest {
    std::filesystem::path root;
    std::string pattern = "frame_%06d";
    std::string rgb_dir = "rgb";
    std::string depth_dir = "depth";
    std::string thermal_dir = "thermal";
    std::string rgb_ext = ".ppm";
    std::string depth_ext = ".pgm";
    std::string thermal_ext = ".pgm";
    int frame_count = 0;
    int depth_bit_depth = 16;
    int thermal_bit_depth = 8;
};

namespace detail {

// The pattern must contain exactly one integer conversion such as %06d and
// no other substitutions.
inline void check_pattern(const std::string& pattern) {
    int conversions = 0;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        if (pattern[i] != '%') continue;
        std::size_t j = i + 1;
        if (j < pattern.size() && pattern[j] == '%') {  // literal percent
            i = j;
            continue;
        }
        while (j < pattern.size() && (pattern[j] == '0' || (pattern[j] >= '1' && pattern[j] <= '9'))) {
            ++j;
        }
        if (j >= pattern.size() || pattern[j] != 'd') {
            throw ValidationError("manifest: pattern must use a single %d-style index, got '" +
                                  pattern + "'");
        }
        ++conversions;
        i = j;
    }
    if (conversions != 1) {
        throw ValidationError("manifest: pattern must contain exactly one %d-style index, got '" +
                              pattern + "'");
    }
}

inline std::string format_index(const std::string& pattern, std::int64_t index) {
    char buffer[512];
    const int n = std::snprintf(buffer, sizeof(buffer), pattern.c_str(),
                                static_cast<long long>(index));
    if (n < 0 || n >= static_cast<int>(sizeof(buffer))) {
        throw ValidationError("manifest: pattern expands past the name length limit");
    }
    return std::string(buffer, static_cast<std::size_t>(n));
}

}  // namespace detail

inline void validate_manifest(const SequenceManifest& m) {
    detail::check_pattern(m.pattern);
    if (m.frame_count < 0) {
        throw ValidationError("manifest: frame_count must be >= 0");
    }
    if (m.rgb_dir.empty() || m.depth_dir.empty() || m.thermal_dir.empty()) {
        throw ValidationError("manifest: modality directory names must be nonempty");
    }
    for (const std::string* ext : {&m.rgb_ext, &m.depth_ext, &m.thermal_ext}) {
        if (ext->empty() || (*ext)[0] != '.') {
            throw ValidationError("manifest: extensions must start with '.', got '" + *ext + "'");
        }
    }
    if (m.depth_bit_depth != 8 && m.depth_bit_depth != 16) {
        throw ValidationError("manifest: depth_bit_depth must be 8 or 16");
    }
    if (m.thermal_bit_depth != 8 && m.thermal_bit_depth != 16) {
        throw ValidationError("manifest: thermal_bit_depth must be 8 or 16");
    }
}

inline std::filesystem::path rgb_path(const SequenceManifest& m, std::int64_t index) {
    return m.root / m.rgb_dir / (detail::format_index(m.pattern, index) + m.rgb_ext);
}
inline std::filesystem::path depth_path(const SequenceManifest& m, std::int64_t index) {
    return m.root / m.depth_dir / (detail::format_index(m.pattern, index) + m.depth_ext);
}
inline std::filesystem::path thermal_path(const SequenceManifest& m, std::int64_t index) {
    return m.root / m.thermal_dir / (detail::format_index(m.pattern, index) + m.thermal_ext);
}

inline SequenceManifest load_manifest(const std::filesystem::path& sequence_dir) {
    const std::filesystem::path file = sequence_dir / "manifest.json";
    std::ifstream in(file);
    if (!in) {
        throw IoError("cannot open manifest " + file.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("malformed manifest " + file.string() + ": " + e.what());
    }
    SequenceManifest m;
    m.root = sequence_dir;
    try {
        m.frame_count = j.at("frame_count").get<int>();
        if (j.contains("pattern")) m.pattern = j["pattern"].get<std::string>();
        if (j.contains("rgb_dir")) m.rgb_dir = j["rgb_dir"].get<std::string>();
        if (j.contains("depth_dir")) m.depth_dir = j["depth_dir"].get<std::string>();
        if (j.contains("thermal_dir")) m.thermal_dir = j["thermal_dir"].get<std::string>();
        if (j.contains("rgb_ext")) m.rgb_ext = j["rgb_ext"].get<std::string>();
        if (j.contains("depth_ext")) m.depth_ext = j["depth_ext"].get<std::string>();
        if (j.contains("thermal_ext")) m.thermal_ext = j["thermal_ext"].get<std::string>();
        if (j.contains("depth_bit_depth")) m.depth_bit_depth = j["depth_bit_depth"].get<int>();
        if (j.contains("thermal_bit_depth")) m.thermal_bit_depth = j["thermal_bit_depth"].get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("manifest " + file.string() + ": " + e.what());
    }
    validate_manifest(m);
    return m;
}

inline void save_manifest(const SequenceManifest& m, const std::filesystem::path& sequence_dir) {
    validate_manifest(m);
    nlohmann::ordered_json j;
    j["frame_count"] = m.frame_count;
    j["pattern"] = m.pattern;
    j["rgb_dir"] = m.rgb_dir;
    j["depth_dir"] = m.depth_dir;
    j["thermal_dir"] = m.thermal_dir;
    j["rgb_ext"] = m.rgb_ext;
    j["depth_ext"] = m.depth_ext;
    j["thermal_ext"] = m.thermal_ext;
    j["depth_bit_depth"] = m.depth_bit_depth;
    j["thermal_bit_depth"] = m.thermal_bit_depth;
    std::ofstream out(sequence_dir / "manifest.json", std::ios::trunc);
    if (!out) {
        throw IoError("cannot write manifest in " + sequence_dir.string());
    }
    out << j.dump(2) << "\n";
}

// Confirms every frame index resolves to a file in each modality before any
// decoding starts, so a hole in the recording surfaces with the frame number.
inline void validate_sequence_files(const SequenceManifest& m) {
    validate_manifest(m);
    for (std::int64_t i = 0; i < m.frame_count; ++i) {
        for (const auto& [name, path] :
             {std::pair{std::string("rgb"), rgb_path(m, i)},
              std::pair{std::string("depth"), depth_path(m, i)},
              std::pair{std::string("thermal"), thermal_path(m, i)}}) {
            if (!std::filesystem::exists(path)) {
                throw IoError("missing " + name + " frame " + std::to_string(i) + ": " +
                              path.string());
            }
        }
    }
}

inline FrameStack load_frame(const SequenceManifest& m, std::int64_t index) {
    if (index < 0 || index >= m.frame_count) {
        throw ValidationError("frame index " + std::to_string(index) + " outside [0, " +
                              std::to_string(m.frame_count) + ")");
    }
    const RgbImage rgb = read_rgb_image(rgb_path(m, index));
    const GrayImage depth = read_gray_image(depth_path(m, index));
    const GrayImage thermal = read_gray_image(thermal_path(m, index));
    if (depth.width != rgb.width || depth.height != rgb.height ||
        thermal.width != rgb.width || thermal.height != rgb.height) {
        throw IoError("frame " + std::to_string(index) + ": modality dimensions differ (rgb " +
                      std::to_string(rgb.width) + "x" + std::to_string(rgb.height) + ", depth " +
                      std::to_string(depth.width) + "x" + std::to_string(depth.height) +
                      ", thermal " + std::to_string(thermal.width) + "x" +
                      std::to_string(thermal.height) + ")");
    }
    if (depth.bit_depth != m.depth_bit_depth) {
        throw IoError("frame " + std::to_string(index) + ": depth file is " +
                      std::to_string(depth.bit_depth) + "-bit, manifest says " +
                      std::to_string(m.depth_bit_depth));
    }
    if (thermal.bit_depth != m.thermal_bit_depth) {
        throw IoError("frame " + std::to_string(index) + ": thermal file is " +
                      std::to_string(thermal.bit_depth) + "-bit, manifest says " +
                      std::to_string(m.thermal_bit_depth));
    }
    FrameStack frame;
    frame.width = rgb.width;
    frame.height = rgb.height;
    frame.frame_index = index;
    frame.thermal_bit_depth = m.thermal_bit_depth;
    frame.rgb = rgb.pixels;
    frame.depth = depth.pixels;
    frame.thermal = thermal.pixels;
    return frame;
}

// Streams frames in index order; at most one decoded frame lives at a time.
class SequenceReader {
public:
    explicit SequenceReader(SequenceManifest manifest) : manifest_(std::move(manifest)) {
        validate_sequence_files(manifest_);
    }

    const SequenceManifest& manifest() const { return manifest_; }
    int frame_count() const { return manifest_.frame_count; }

    std::optional<FrameStack> next() {
        if (next_index_ >= manifest_.frame_count) {
            return std::nullopt;
        }
        return load_frame(manifest_, next_index_++);
    }

    void reset() { next_index_ = 0; }

private:
    SequenceManifest manifest_;
    std::int64_t next_index_ = 0;
};

inline SequenceReader load_sequence(const SequenceManifest& manifest) {
    return SequenceReader(manifest);
}

}  // namespace rgbdt
