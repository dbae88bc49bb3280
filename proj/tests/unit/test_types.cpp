#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "rgbdt/types.hpp"

using rgbdt::ObservationVector;
using rgbdt::PipelineConfig;
using rgbdt::PixelModel;
using rgbdt::ValidationError;

namespace {

ObservationVector random_observation(std::mt19937_64& rng, double ado_probability = 0.3) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ObservationVector obs;
    const double a = u(rng);
    obs.r = u(rng);
    obs.g = u(rng);
    obs.thermal = u(rng);
    if (a >= ado_probability) {
        obs.depth = u(rng);
    }
    return obs;
}

}  // namespace

TEST_CASE("validate_config accepts the defaults") {
    const PipelineConfig config;
    REQUIRE(config.window_n == 100);
    REQUIRE(config.foreground_threshold == 1e-4);
    REQUIRE(config.thermal_bandwidth_factor == 8.0);
    REQUIRE(config.min_blob_area == 50);
    REQUIRE(config.opening_radius == 1);
    REQUIRE(rgbdt::validate_config(config) == config);
}

TEST_CASE("validate_config rejects bad fields by name") {
    PipelineConfig config;
    config.window_n = 0;
    REQUIRE_THROWS_MATCHES(rgbdt::validate_config(config), ValidationError,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("window_n")));

    config = PipelineConfig{};
    config.sigma_floor = -0.1;
    REQUIRE_THROWS_MATCHES(rgbdt::validate_config(config), ValidationError,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("sigma_floor")));

    config = PipelineConfig{};
    config.foreground_threshold = 0.0;
    REQUIRE_THROWS_AS(rgbdt::validate_config(config), ValidationError);

    config = PipelineConfig{};
    config.thermal_bandwidth_factor = 0.5;
    REQUIRE_THROWS_AS(rgbdt::validate_config(config), ValidationError);

    config = PipelineConfig{};
    config.opening_radius = 0;
    REQUIRE_THROWS_AS(rgbdt::validate_config(config), ValidationError);
}

TEST_CASE("PixelModel rejects nonpositive capacity") {
    REQUIRE_THROWS_AS(PixelModel(0), ValidationError);
    REQUIRE_THROWS_AS(PixelModel(-3), ValidationError);
}

TEST_CASE("PixelModel keeps exactly the most recent samples in order") {
    std::mt19937_64 rng(7);
    for (const int capacity : {1, 2, 3, 5, 8}) {
        PixelModel model(capacity);
        oracle::ReferenceWindow reference(capacity);
        for (int step = 0; step < 5 * capacity + 3; ++step) {
            const ObservationVector obs = random_observation(rng);
            model.insert(obs);
            reference.insert(obs);
            REQUIRE(model.count() == reference.count());
            REQUIRE(model.ado_count() == reference.ado_count());
            for (int i = 0; i < model.count(); ++i) {
                REQUIRE(model.sample(i) == reference.sample(i));
            }
        }
    }
}

TEST_CASE("PixelModel ado bookkeeping survives full turnover") {
    const int n = 6;
    PixelModel model(n);
    ObservationVector without_depth;
    without_depth.depth = std::nullopt;
    ObservationVector with_depth;
    with_depth.depth = 0.5;

    for (int i = 0; i < n; ++i) model.insert(without_depth);
    REQUIRE(model.ado_count() == n);
    REQUIRE(model.count() == n);

    for (int i = 0; i < n; ++i) model.insert(with_depth);
    REQUIRE(model.ado_count() == 0);
    REQUIRE(model.count() == n);
}

TEST_CASE("observation ado flag mirrors depth availability") {
    ObservationVector obs;
    REQUIRE(obs.ado());
    obs.depth = 0.25;
    REQUIRE_FALSE(obs.ado());
}
