#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rgbdt/blobs.hpp"
#include "rgbdt/image_io.hpp"
#include "rgbdt/manifest.hpp"
#include "rgbdt/metrics.hpp"
#include "rgbdt/morphology.hpp"
#include "rgbdt/scene.hpp"
#include "rgbdt/types.hpp"

namespace rgbdt {

struct RunOptions {
    std::string mask_format = "png";  // "png" or "pgm"
    int threads = 1;
};

struct RunReport {
    int frames_processed = 0;
    double mean_foreground_fraction = 0.0;
    double total_ms = 0.0;
    std::vector<double> per_frame_ms;
    bool partial = false;
    std::string error;
};

// One line-delimited record per frame, empty frames included so downstream
// consumers can align records with frames by position as well as by index.
inline void write_rois(const std::vector<RegionOfInterest>& rois, std::int64_t frame_index,
                       std::ostream& out) {
    nlohmann::ordered_json record;
    record["frame_index"] = frame_index;
    record["rois"] = nlohmann::ordered_json::array();
    for (const RegionOfInterest& roi : rois) {
        record["rois"].push_back({{"blob_id", roi.blob_id},
                                  {"x_min", roi.x_min},
                                  {"y_min", roi.y_min},
                                  {"x_max", roi.x_max},
                                  {"y_max", roi.y_max},
                                  {"area", roi.area}});
    }
    out << record.dump() << "\n";
}

struct RoiRecord {
    std::int64_t frame_index = 0;
    std::vector<RegionOfInterest> rois;
};

inline std::vector<RoiRecord> read_roi_records(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::vector<RoiRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw IoError("malformed ROI record in " + path.string() + ": " + e.what());
        }
        RoiRecord record;
        record.frame_index = j.at("frame_index").get<std::int64_t>();
        for (const auto& jr : j.at("rois")) {
            record.rois.push_back(RegionOfInterest{
                jr.at("blob_id").get<int>(), jr.at("x_min").get<int>(), jr.at("y_min").get<int>(),
                jr.at("x_max").get<int>(), jr.at("y_max").get<int>(), jr.at("area").get<int>()});
        }
        records.push_back(std::move(record));
    }
    return records;
}

inline void save_report(const RunReport& report, const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    j["frames_processed"] = report.frames_processed;
    j["mean_foreground_fraction"] = report.mean_foreground_fraction;
    j["total_ms"] = report.total_ms;
    j["per_frame_ms"] = report.per_frame_ms;
    j["partial"] = report.partial;
    j["error"] = report.error;
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw IoError("cannot write report " + path.string());
    }
    out << j.dump(2) << "\n";
}

namespace detail {

inline std::filesystem::path mask_path(const std::filesystem::path& dir, std::int64_t index,
                                       const std::string& format) {
    char name[64];
    std::snprintf(name, sizeof(name), "mask_%06lld.%s", static_cast<long long>(index),
                  format.c_str());
    return dir / name;
}

}  // namespace detail

// Streams a recorded sequence through the scene model and writes one cleaned
// mask image plus one ROI record per frame, then a run report.
//
// Phase 1 estimates bandwidths from a prefix of the sequence (there is no
// separate calibration recording); phase 2 replays the sequence from the
// start through classification, update, opening and blob extraction.
// Sequences too short to difference fall back to the floor bandwidths.
inline RunReport run(const PipelineConfig& config, const SequenceManifest& manifest,
                     const std::filesystem::path& output_dir, const RunOptions& options = {}) {
    validate_config(config);
    if (options.mask_format != "png" && options.mask_format != "pgm") {
        throw ValidationError("mask format must be 'png' or 'pgm', got '" + options.mask_format +
                              "'");
    }
    if (options.threads < 1) {
        throw ValidationError("threads must be >= 1");
    }
    SequenceReader reader = load_sequence(manifest);
    std::filesystem::create_directories(output_dir);

    RunReport report;
    if (reader.frame_count() == 0) {
        save_report(report, output_dir / "report.json");
        return report;
    }

    try {
        const auto t_start = std::chrono::steady_clock::now();

        const int prefix =
            std::min(config.window_n, reader.frame_count() / 4);
        BandwidthVector bandwidths;
        if (prefix >= 2) {
            BandwidthEstimator estimator(config);
            for (int i = 0; i < prefix; ++i) {
                estimator.add_frame(*reader.next());
            }
            bandwidths = estimator.finalize();
        } else {
            bandwidths = floor_bandwidths(config);
        }

        reader.reset();
        std::optional<SceneModel> scene;
        const StructuringElement se{config.opening_radius};
        std::ofstream roi_stream(output_dir / "rois.jsonl", std::ios::trunc);
        if (!roi_stream) {
            throw IoError("cannot write rois.jsonl in " + output_dir.string());
        }
        double fraction_sum = 0.0;
        while (std::optional<FrameStack> frame = reader.next()) {
            const auto t0 = std::chrono::steady_clock::now();
            if (!scene) {
                scene.emplace(frame->width, frame->height, config, bandwidths);
            }
            const ForegroundMask raw = scene->process_frame(*frame, options.threads);
            const ForegroundMask cleaned = open(raw, se);
            const BlobLabeling labeling = connected_components(cleaned);
            const std::vector<RegionOfInterest> rois =
                extract_rois(labeling, config.min_blob_area);

            write_mask(cleaned,
                       detail::mask_path(output_dir, frame->frame_index, options.mask_format));
            write_rois(rois, frame->frame_index, roi_stream);

            fraction_sum += static_cast<double>(cleaned.foreground_count()) /
                            static_cast<double>(cleaned.bits.size());
            const auto t1 = std::chrono::steady_clock::now();
            report.per_frame_ms.push_back(
                std::chrono::duration<double, std::milli>(t1 - t0).count());
            ++report.frames_processed;
        }
        report.mean_foreground_fraction = fraction_sum / report.frames_processed;
        report.total_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t_start)
                              .count();
        save_report(report, output_dir / "report.json");
    } catch (...) {
        report.partial = true;
        report.error = "run aborted before the last frame";
        try {
            save_report(report, output_dir / "report.json");
        } catch (...) {
            // the original error is the one worth reporting
        }
        throw;
    }
    return report;
}

// ---- prediction scoring -----------------------------------------------------

struct FrameEval {
    std::int64_t frame_index = 0;
    MaskMetrics metrics;
};

struct EvalResult {
    std::vector<FrameEval> frames;
    MaskMetrics mean;
};

namespace detail {

// Pairs mask files by the trailing integer in their stem, e.g. mask_000017.
inline std::map<std::int64_t, std::filesystem::path> index_masks(
    const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw IoError("not a directory: " + dir.string());
    }
    std::map<std::int64_t, std::filesystem::path> out;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string ext = entry.path().extension().string();
        if (ext != ".png" && ext != ".pgm") continue;
        const std::string stem = entry.path().stem().string();
        std::size_t digits = 0;
        while (digits < stem.size() && std::isdigit(static_cast<unsigned char>(
                                           stem[stem.size() - 1 - digits]))) {
            ++digits;
        }
        if (digits == 0) continue;
        const std::int64_t index = std::stoll(stem.substr(stem.size() - digits));
        if (!out.emplace(index, entry.path()).second) {
            throw ValidationError("duplicate frame index " + std::to_string(index) + " in " +
                                  dir.string());
        }
    }
    return out;
}

}  // namespace detail

inline EvalResult evaluate_mask_dirs(const std::filesystem::path& pred_dir,
                                     const std::filesystem::path& gt_dir) {
    const auto pred = detail::index_masks(pred_dir);
    const auto gt = detail::index_masks(gt_dir);
    if (pred.size() != gt.size()) {
        throw ValidationError("prediction and ground-truth mask counts differ (" +
                              std::to_string(pred.size()) + " vs " + std::to_string(gt.size()) +
                              ")");
    }
    EvalResult result;
    double p_sum = 0.0, r_sum = 0.0, f_sum = 0.0;
    for (const auto& [index, gt_path] : gt) {
        const auto it = pred.find(index);
        if (it == pred.end()) {
            throw ValidationError("no prediction for frame " + std::to_string(index));
        }
        const MaskMetrics m = mask_metrics(read_mask(it->second), read_mask(gt_path));
        result.frames.push_back({index, m});
        p_sum += m.precision;
        r_sum += m.recall;
        f_sum += m.f_measure;
    }
    if (!result.frames.empty()) {
        const double n = static_cast<double>(result.frames.size());
        result.mean = {p_sum / n, r_sum / n, f_sum / n};
    }
    return result;
}

// Per-frame rows followed by a summary row holding the per-frame means.
inline void write_eval_csv(const EvalResult& result, std::ostream& out) {
    out << "frame_index,precision,recall,f_measure\n";
    char buffer[160];
    for (const FrameEval& fe : result.frames) {
        std::snprintf(buffer, sizeof(buffer), "%lld,%.6f,%.6f,%.6f\n",
                      static_cast<long long>(fe.frame_index), fe.metrics.precision,
                      fe.metrics.recall, fe.metrics.f_measure);
        out << buffer;
    }
    std::snprintf(buffer, sizeof(buffer), "mean,%.6f,%.6f,%.6f\n", result.mean.precision,
                  result.mean.recall, result.mean.f_measure);
    out << buffer;
}

}  // namespace rgbdt
