// Acceptance suite: one line of output per criterion, nonzero exit when any
// criterion fails. Each check pins its tolerance in the code next to it.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rgbdt/rgbdt.hpp"

namespace {

namespace fs = std::filesystem;

int g_failures = 0;

void report(bool ok, const char* name, const std::string& detail) {
    std::printf("[%s] %s (%s)\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    if (!ok) ++g_failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double relative_error(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

rgbdt::ObservationVector random_obs(std::mt19937_64& rng, double ado_probability) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const bool ado = u(rng) < ado_probability;
    rgbdt::ObservationVector obs;
    obs.r = u(rng);
    obs.g = u(rng);
    obs.thermal = u(rng);
    if (!ado) obs.depth = u(rng);
    return obs;
}

std::vector<std::uint8_t> file_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw rgbdt::IoError("cannot open " + path.string());
    return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
}

// ---- criterion 1: density equals the double-loop reference -----------------

void check_kde_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1001);
    std::uniform_real_distribution<double> sigma_dist(0.01, 1.0);
    std::uniform_int_distribution<int> count_dist(1, 32);
    double worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const int n = count_dist(rng);
        rgbdt::PixelModel model(n);
        for (int i = 0; i < n; ++i) model.insert(random_obs(rng, 0.3));
        const rgbdt::BandwidthVector bw{sigma_dist(rng), sigma_dist(rng), sigma_dist(rng),
                                        sigma_dist(rng)};
        const rgbdt::ObservationVector obs = random_obs(rng, 0.3);
        worst = std::max(worst,
                         relative_error(rgbdt::kde_density(obs, model, bw),
                                        oracle::kde_density(obs, model, bw)));
    }
    const double elapsed = seconds_since(t0);
    char detail[160];
    std::snprintf(detail, sizeof(detail), "500 instances, max rel err %.2e, %.2f s", worst,
                  elapsed);
    report(worst <= 1e-12 && elapsed < 2.0, "kde-matches-double-loop-reference", detail);
}

// ---- criterion 2: kernel mass is conserved ---------------------------------

void check_mass_conservation() {
    const double unit_sigma = 1.0 / std::sqrt(2.0 * std::numbers::pi);  // peak value 1

    // One-dimensional collapse: every channel except r pinned at distance
    // zero with a unit-peak kernel, so integrating over r alone must give 1.
    double mass_1d = 0.0;
    {
        const std::vector<double> centers = {0.32, 0.41, 0.50, 0.55, 0.60, 0.66, 0.70};
        const double sigma = 0.07;
        rgbdt::PixelModel model(static_cast<int>(centers.size()));
        for (const double c : centers) {
            rgbdt::ObservationVector s;
            s.r = c;
            s.g = 0.5;
            s.depth = 0.5;
            s.thermal = 0.5;
            model.insert(s);
        }
        const rgbdt::BandwidthVector bw{sigma, unit_sigma, unit_sigma, unit_sigma};
        const double lo = 0.32 - 8.0 * sigma;
        const double hi = 0.70 + 8.0 * sigma;
        const double step = sigma / 16.0;
        const int points = static_cast<int>(std::ceil((hi - lo) / step)) + 1;
        for (int i = 0; i < points; ++i) {
            rgbdt::ObservationVector obs;
            obs.r = lo + i * step;
            obs.g = 0.5;
            obs.depth = 0.5;
            obs.thermal = 0.5;
            const double weight = (i == 0 || i == points - 1) ? 0.5 : 1.0;
            mass_1d += weight * step * rgbdt::kde_density(obs, model, bw);
        }
    }

    // Mixed window: 3 depth-absent samples and 5 depth-valid samples. The
    // branch masses must split as 3/8 and 5/8.
    const int n_ado = 3, n_valid = 5, n = n_ado + n_valid;
    rgbdt::PixelModel model(n);
    std::mt19937_64 rng(1002);
    std::uniform_real_distribution<double> u(0.4, 0.6);
    for (int i = 0; i < n_ado; ++i) {
        rgbdt::ObservationVector s;
        s.r = u(rng);
        s.g = u(rng);
        s.thermal = u(rng);
        model.insert(s);
    }
    for (int i = 0; i < n_valid; ++i) {
        rgbdt::ObservationVector s;
        s.r = u(rng);
        s.g = u(rng);
        s.depth = u(rng);
        s.thermal = u(rng);
        model.insert(s);
    }
    const double sigma = 0.1;
    const rgbdt::BandwidthVector bw{sigma, sigma, sigma, sigma};
    const double lo = 0.4 - 6.0 * sigma;
    const double hi = 0.6 + 6.0 * sigma;
    const double step = sigma / 2.0;
    const int points = static_cast<int>(std::round((hi - lo) / step)) + 1;
    auto trap = [&](int i) { return (i == 0 || i == points - 1) ? 0.5 : 1.0; };

    double mass_ado = 0.0;
    for (int ir = 0; ir < points; ++ir) {
        for (int ig = 0; ig < points; ++ig) {
            for (int it = 0; it < points; ++it) {
                rgbdt::ObservationVector obs;
                obs.r = lo + ir * step;
                obs.g = lo + ig * step;
                obs.thermal = lo + it * step;
                mass_ado += trap(ir) * trap(ig) * trap(it) * rgbdt::kde_density(obs, model, bw);
            }
        }
    }
    mass_ado *= step * step * step;

    double mass_valid = 0.0;
    for (int ir = 0; ir < points; ++ir) {
        for (int ig = 0; ig < points; ++ig) {
            double inner = 0.0;
            for (int id = 0; id < points; ++id) {
                for (int it = 0; it < points; ++it) {
                    rgbdt::ObservationVector obs;
                    obs.r = lo + ir * step;
                    obs.g = lo + ig * step;
                    obs.depth = lo + id * step;
                    obs.thermal = lo + it * step;
                    inner += trap(id) * trap(it) * rgbdt::kde_density(obs, model, bw);
                }
            }
            mass_valid += trap(ir) * trap(ig) * inner;
        }
    }
    mass_valid *= step * step * step * step;

    const bool ok = std::abs(mass_1d - 1.0) <= 1e-3 &&
                    std::abs(mass_ado - 3.0 / 8.0) <= 1e-3 &&
                    std::abs(mass_valid - 5.0 / 8.0) <= 1e-3;
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "1-D mass %.6f, depth-absent branch %.6f (want 0.375), valid branch %.6f "
                  "(want 0.625)",
                  mass_1d, mass_ado, mass_valid);
    report(ok, "kernel-mass-conservation", detail);
}

// ---- criterion 3: chromaticity ignores intensity scale ----------------------

void check_chromaticity_invariance() {
    std::mt19937_64 rng(1003);
    std::uniform_int_distribution<int> half(0, 42);
    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        // Even values up to 84 survive x0.5, x2 and x3 exactly within 8 bits.
        const int r = 2 * half(rng);
        const int g = 2 * half(rng);
        const int b = 2 * half(rng);
        const auto base = rgbdt::to_chromaticity(static_cast<std::uint8_t>(r),
                                                 static_cast<std::uint8_t>(g),
                                                 static_cast<std::uint8_t>(b));
        for (const int num : {1, 4, 6}) {  // numerators of 0.5, 2, 3 over 2
            const auto scaled = rgbdt::to_chromaticity(static_cast<std::uint8_t>(r * num / 2),
                                                       static_cast<std::uint8_t>(g * num / 2),
                                                       static_cast<std::uint8_t>(b * num / 2));
            worst = std::max({worst, std::abs(scaled.r - base.r), std::abs(scaled.g - base.g)});
        }
    }
    bool simplex_ok = true;
    std::uniform_int_distribution<int> byte(0, 255);
    for (int trial = 0; trial < 10000; ++trial) {
        const auto c = rgbdt::to_chromaticity(static_cast<std::uint8_t>(byte(rng)),
                                              static_cast<std::uint8_t>(byte(rng)),
                                              static_cast<std::uint8_t>(byte(rng)));
        simplex_ok = simplex_ok && c.r + c.g <= 1.0 + 1e-9 && c.r >= 0.0 && c.g >= 0.0;
    }
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "10000 triples x 3 scales, max deviation %.2e, simplex bound %s", worst,
                  simplex_ok ? "held" : "violated");
    report(worst <= 1e-12 && simplex_ok, "chromaticity-scale-invariance", detail);
}

// ---- criterion 4: morphology and labeling properties ------------------------

void check_morphology_properties() {
    std::mt19937_64 rng(1004);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    bool idempotent = true, anti_extensive = true, labeling_ok = true;
    for (int trial = 0; trial < 1000; ++trial) {
        const double density = 0.10 + 0.04 * (trial % 11);
        rgbdt::ForegroundMask mask = rgbdt::ForegroundMask::zeros(64, 64);
        for (auto& bit : mask.bits) bit = u(rng) < density ? 1 : 0;
        const rgbdt::StructuringElement se{1 + trial % 2};

        const rgbdt::ForegroundMask once = rgbdt::open(mask, se);
        idempotent = idempotent && rgbdt::open(once, se) == once;
        for (std::size_t i = 0; i < mask.bits.size(); ++i) {
            if (once.bits[i] && !mask.bits[i]) anti_extensive = false;
        }
        labeling_ok = labeling_ok &&
                      rgbdt::connected_components(mask).labels == oracle::flood_fill_labels(mask) &&
                      rgbdt::connected_components(once).labels == oracle::flood_fill_labels(once);
    }
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "1000 masks: idempotence %s, anti-extensivity %s, labels-vs-flood-fill %s",
                  idempotent ? "exact" : "BROKEN", anti_extensive ? "exact" : "BROKEN",
                  labeling_ok ? "exact" : "BROKEN");
    report(idempotent && anti_extensive && labeling_ok, "morphology-and-labeling-properties",
           detail);
}

// ---- criteria 5 and 7: synthetic end to end, then determinism ---------------

void check_end_to_end_and_determinism(const fs::path& workdir) {
    const auto t0 = std::chrono::steady_clock::now();
    const rgbdt::SynthPreset preset = rgbdt::make_preset("moving-square");
    const rgbdt::SynthSequence seq = rgbdt::synth_sequence(preset.params, 42);
    const rgbdt::SequenceManifest manifest = rgbdt::write_sequence(seq, workdir / "seq");

    rgbdt::RunOptions options;
    options.threads = 1;
    rgbdt::run(preset.config, manifest, workdir / "out_a", options);

    double min_f = 1.0;
    int iou_hits = 0;
    int moving_frames = 0;
    const auto records = rgbdt::read_roi_records(workdir / "out_a" / "rois.jsonl");
    for (int f = 0; f < preset.params.frame_count; ++f) {
        const auto& gt_boxes = seq.gt_boxes[static_cast<std::size_t>(f)];
        if (gt_boxes.empty()) continue;
        ++moving_frames;
        char name[32];
        std::snprintf(name, sizeof(name), "mask_%06d.png", f);
        const rgbdt::ForegroundMask pred = rgbdt::read_mask(workdir / "out_a" / name);
        const rgbdt::MaskMetrics m =
            rgbdt::mask_metrics(pred, seq.gt_masks[static_cast<std::size_t>(f)]);
        min_f = std::min(min_f, m.f_measure);
        const auto hits = rgbdt::roi_match(records[static_cast<std::size_t>(f)].rois, gt_boxes, 0.8);
        iou_hits += hits[0] ? 1 : 0;
    }
    const double elapsed = seconds_since(t0);
    const double hit_fraction = static_cast<double>(iou_hits) / moving_frames;
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "%d moving frames, min F %.4f (need >= 0.90), box hit rate %.3f "
                  "(need >= 0.95 at IoU 0.8), %.1f s (limit 30)",
                  moving_frames, min_f, hit_fraction, elapsed);
    report(moving_frames == 100 && min_f >= 0.90 && hit_fraction >= 0.95 && elapsed < 30.0,
           "synthetic-end-to-end-quality", detail);

    // Same config, same input, fresh output directory: every artifact byte
    // must match.
    rgbdt::run(preset.config, manifest, workdir / "out_b", options);
    bool identical =
        file_bytes(workdir / "out_a" / "rois.jsonl") == file_bytes(workdir / "out_b" / "rois.jsonl");
    for (int f = 0; identical && f < preset.params.frame_count; ++f) {
        char name[32];
        std::snprintf(name, sizeof(name), "mask_%06d.png", f);
        identical = file_bytes(workdir / "out_a" / name) == file_bytes(workdir / "out_b" / name);
    }
    report(identical, "repeated-run-determinism",
           identical ? "masks and roi records bit-identical across two runs"
                     : "outputs differ between runs");
}

// ---- criterion 6: a parked object is absorbed --------------------------------

void check_absorption() {
    const rgbdt::SynthPreset preset = rgbdt::make_preset("square-halt");
    const rgbdt::SynthSequence seq = rgbdt::synth_sequence(preset.params, 43);
    const rgbdt::PipelineConfig& config = preset.config;

    const int prefix = std::min(config.window_n, preset.params.frame_count / 4);
    rgbdt::BandwidthEstimator estimator(config);
    for (int i = 0; i < prefix; ++i) {
        estimator.add_frame(seq.frames[static_cast<std::size_t>(i)]);
    }
    rgbdt::SceneModel scene(preset.params.width, preset.params.height, config,
                            estimator.finalize());

    const rgbdt::Waypoint halt = preset.params.trajectory.back();
    const int halt_frame = 180;  // first parked frame of the preset
    const int object_area = preset.params.object_size * preset.params.object_size;
    int at_arrival = 0;
    int absorbed_after = -1;
    const rgbdt::StructuringElement se{config.opening_radius};
    for (const rgbdt::FrameStack& frame : seq.frames) {
        const rgbdt::ForegroundMask cleaned = rgbdt::open(scene.process_frame(frame), se);
        if (frame.frame_index < halt_frame - 1) continue;
        int in_region = 0;
        for (int y = halt.y; y < halt.y + preset.params.object_size; ++y) {
            for (int x = halt.x; x < halt.x + preset.params.object_size; ++x) {
                in_region += cleaned.at(x, y);
            }
        }
        if (frame.frame_index == halt_frame - 1) {
            // The square arrives at the halt cell on the last moving frame;
            // it must be fully detected before the window absorbs it.
            at_arrival = in_region;
            continue;
        }
        if (absorbed_after < 0 && in_region < 0.1 * object_area) {
            absorbed_after = static_cast<int>(frame.frame_index) - halt_frame;
        }
    }
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "detected %d/%d pixels on arrival; foreground fell under 10%% after "
                  "%d parked frames (limit %d)",
                  at_arrival, object_area, absorbed_after, config.window_n);
    report(at_arrival >= static_cast<int>(0.9 * object_area) && absorbed_after >= 0 &&
               absorbed_after <= config.window_n,
           "parked-object-absorption", detail);
}

// ---- criterion 8: threshold monotonicity -------------------------------------

void check_threshold_monotonicity() {
    std::mt19937_64 rng(1008);
    std::uniform_real_distribution<double> log_theta(-8.0, 2.0);
    bool ok = true;
    for (int trial = 0; trial < 100; ++trial) {
        rgbdt::PixelModel model(8);
        for (int i = 0; i < 8; ++i) model.insert(random_obs(rng, 0.2));
        const rgbdt::ObservationVector obs = random_obs(rng, 0.2);
        const rgbdt::BandwidthVector bw{0.1, 0.1, 0.1, 0.3};
        double theta1 = std::pow(10.0, log_theta(rng));
        double theta2 = std::pow(10.0, log_theta(rng));
        if (theta1 > theta2) std::swap(theta1, theta2);
        const bool fg1 =
            rgbdt::classify(obs, model, bw, theta1) == rgbdt::PixelClass::Foreground;
        const bool fg2 =
            rgbdt::classify(obs, model, bw, theta2) == rgbdt::PixelClass::Foreground;
        if (fg1 && !fg2) ok = false;
    }
    report(ok, "threshold-monotonicity",
           ok ? "100 random pairs: foreground set grows with the threshold"
              : "found a pair where raising the threshold shrank the foreground set");
}

}  // namespace

int main() {
    const fs::path workdir =
        fs::temp_directory_path() / ("rgbdt_acceptance_" + std::to_string(std::random_device{}()));
    fs::create_directories(workdir);

    int rc = 0;
    try {
        check_kde_oracle();
        check_mass_conservation();
        check_chromaticity_invariance();
        check_morphology_properties();
        check_end_to_end_and_determinism(workdir);
        check_absorption();
        check_threshold_monotonicity();
        rc = g_failures == 0 ? 0 : 1;
        std::printf("%d criterion(s) failed\n", g_failures);
    } catch (const std::exception& e) {
        std::printf("[FAIL] suite aborted: %s\n", e.what());
        rc = 1;
    }
    std::error_code ec;
    fs::remove_all(workdir, ec);
    return rc;
}
