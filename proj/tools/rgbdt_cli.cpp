// Command-line front end: synthesize test sequences, run the segmentation
// pipeline over a recorded sequence, and score predicted masks.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rgbdt/rgbdt.hpp"

namespace {

struct RunArgs {
    std::string config_path;
    std::string input_dir;
    std::string output_dir;
    std::string mask_format = "png";
    int threads = 1;
    // Optional overrides on top of the config file.
    std::optional<int> window_n;
    std::optional<double> threshold;
    std::optional<double> sigma_floor;
    std::optional<double> thermal_factor;
    std::optional<int> min_blob_area;
    std::optional<int> opening_radius;
    std::optional<int> depth_max;
};

int do_run(const RunArgs& args) {
    rgbdt::PipelineConfig config;
    if (!args.config_path.empty()) {
        config = rgbdt::load_config_file(args.config_path);
    }
    if (args.window_n) config.window_n = *args.window_n;
    if (args.threshold) config.foreground_threshold = *args.threshold;
    if (args.sigma_floor) config.sigma_floor = *args.sigma_floor;
    if (args.thermal_factor) config.thermal_bandwidth_factor = *args.thermal_factor;
    if (args.min_blob_area) config.min_blob_area = *args.min_blob_area;
    if (args.opening_radius) config.opening_radius = *args.opening_radius;
    if (args.depth_max) config.depth_max = *args.depth_max;
    rgbdt::validate_config(config);

    const rgbdt::SequenceManifest manifest = rgbdt::load_manifest(args.input_dir);
    rgbdt::RunOptions options;
    options.mask_format = args.mask_format;
    options.threads = args.threads;
    const rgbdt::RunReport report = rgbdt::run(config, manifest, args.output_dir, options);
    std::printf("processed %d frames, mean foreground fraction %.4f%%, %.1f ms total\n",
                report.frames_processed, 100.0 * report.mean_foreground_fraction,
                report.total_ms);
    return 0;
}

int do_synth(const std::string& preset_name, const std::string& output_dir,
             std::uint64_t seed) {
    const rgbdt::SynthPreset preset = rgbdt::make_preset(preset_name);
    const rgbdt::SynthSequence seq = rgbdt::synth_sequence(preset.params, seed);
    std::filesystem::create_directories(output_dir);
    rgbdt::write_sequence(seq, output_dir);
    rgbdt::save_config_file(preset.config, std::filesystem::path(output_dir) / "config.txt");
    std::printf("wrote %zu frames to %s (preset %s, seed %llu)\n", seq.frames.size(),
                output_dir.c_str(), preset_name.c_str(),
                static_cast<unsigned long long>(seed));
    return 0;
}

int do_eval(const std::string& pred_dir, const std::string& gt_dir,
            const std::string& out_path) {
    const rgbdt::EvalResult result = rgbdt::evaluate_mask_dirs(pred_dir, gt_dir);
    if (out_path.empty()) {
        rgbdt::write_eval_csv(result, std::cout);
    } else {
        std::ofstream out(out_path, std::ios::trunc);
        if (!out) {
            throw rgbdt::IoError("cannot write " + out_path);
        }
        rgbdt::write_eval_csv(result, out);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Moving-object segmentation for RGB-depth-thermal sequences"};
    app.require_subcommand(1);

    RunArgs run_args;
    CLI::App* run = app.add_subcommand("run", "Segment a recorded sequence");
    run->add_option("--config", run_args.config_path, "Config file (key = value lines)")
        ->check(CLI::ExistingFile);
    run->add_option("--input", run_args.input_dir, "Sequence directory with manifest.json")
        ->required();
    run->add_option("--output", run_args.output_dir, "Output directory")->required();
    run->add_option("--mask-format", run_args.mask_format, "Mask image format")
        ->check(CLI::IsMember({"png", "pgm"}));
    run->add_option("--threads", run_args.threads, "Worker threads for the model stage");
    run->add_option("--window-n", run_args.window_n, "Override: samples per pixel");
    run->add_option("--threshold", run_args.threshold, "Override: foreground density threshold");
    run->add_option("--sigma-floor", run_args.sigma_floor, "Override: minimum bandwidth");
    run->add_option("--thermal-bandwidth-factor", run_args.thermal_factor,
                    "Override: thermal smoothing multiplier");
    run->add_option("--min-blob-area", run_args.min_blob_area, "Override: smallest kept blob");
    run->add_option("--opening-radius", run_args.opening_radius,
                    "Override: structuring element radius");
    run->add_option("--depth-max", run_args.depth_max, "Override: depth normalization limit");

    std::string preset_name;
    std::string synth_out;
    std::uint64_t seed = 42;
    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic sequence");
    synth->add_option("--preset", preset_name, "One of: static, moving-square, square-halt")
        ->required();
    synth->add_option("--output", synth_out, "Output directory")->required();
    synth->add_option("--seed", seed, "Random seed");

    std::string pred_dir;
    std::string gt_dir;
    std::string eval_out;
    CLI::App* eval = app.add_subcommand("eval", "Score predicted masks against ground truth");
    eval->add_option("--pred", pred_dir, "Directory of predicted masks")->required();
    eval->add_option("--gt", gt_dir, "Directory of ground-truth masks")->required();
    eval->add_option("--out", eval_out, "CSV output file (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return do_run(run_args);
        if (synth->parsed()) return do_synth(preset_name, synth_out, seed);
        if (eval->parsed()) return do_eval(pred_dir, gt_dir, eval_out);
    } catch (const rgbdt::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const rgbdt::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
