#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "jamcast/errors.hpp"
#include "jamcast/featureset.hpp"
#include "jamcast/timeutil.hpp"
#include "test_support.hpp"

using namespace jamcast;

namespace {

TrafficObservation base_obs() {
    TrafficObservation obs;
    obs.timestamp = 1555286400;  // 2019-04-15 00:00 UTC, a Monday
    obs.road_id = "road_01";
    obs.temperature_c = 0.0;
    obs.daylight = true;
    obs.humidity_pct = 0.0;
    obs.wind_speed_kmh = 0.0;
    obs.speed_ratio = 0.0;
    obs.jam_factor = 0.0;
    return obs;
}

}  // namespace

TEST_CASE("encode_time_of_day anchors and range checks") {
    auto [s0, c0] = encode_time_of_day(0);
    CHECK(s0 == 0.0);  // sin(0) is exact
    CHECK(c0 == 1.0);

    auto [s6, c6] = encode_time_of_day(21600);  // quarter period
    CHECK(s6 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(c6) < 1e-12);

    // Frozen from direct evaluation of sin/cos at phase 2*pi*10000/86400.
    auto [s, c] = encode_time_of_day(10000);
    CHECK(s == doctest::Approx(0.6647958656139378).epsilon(1e-12));
    CHECK(c == doctest::Approx(0.747025071240996).epsilon(1e-12));

    CHECK_THROWS_AS(encode_time_of_day(-1), DomainError);
    CHECK_THROWS_AS(encode_time_of_day(86400), DomainError);
}

TEST_CASE("encode_time_of_day stays on the unit circle") {
    auto r = testsupport::rng(11);
    for (int i = 0; i < 500; ++i) {
        const int t = static_cast<int>(r.next() % 86400);
        auto [s, c] = encode_time_of_day(t);
        CHECK(std::abs(s * s + c * c - 1.0) < 1e-9);
    }
}

TEST_CASE("encode_day_of_week anchors and range checks") {
    auto [s0, c0] = encode_day_of_week(0);
    CHECK(std::abs(s0) < 1e-15);
    CHECK(c0 == doctest::Approx(1.0));

    // Frozen from direct evaluation at phase 6*pi/7.
    auto [s3, c3] = encode_day_of_week(3);
    CHECK(s3 == doctest::Approx(0.43388373911755823).epsilon(1e-12));
    CHECK(c3 == doctest::Approx(-0.900968867902419).epsilon(1e-12));

    CHECK_THROWS_AS(encode_day_of_week(7), DomainError);
    CHECK_THROWS_AS(encode_day_of_week(-1), DomainError);
}

TEST_CASE("encode_observation layout and validation") {
    SUBCASE("zero/identity composition at Monday midnight") {
        const EncodedSample s = encode_observation(base_obs());
        REQUIRE(s.features.size() == static_cast<std::size_t>(kFeatureDim));
        const std::vector<double> expected = {0, 1, 0, 1, 0, 1, 0, 0, 0};
        for (int k = 0; k < kFeatureDim; ++k) {
            CHECK(s.features[static_cast<std::size_t>(k)] ==
                  doctest::Approx(expected[static_cast<std::size_t>(k)]).epsilon(1e-12));
        }
        CHECK(s.target == 0.0);
    }
    SUBCASE("target passthrough") {
        TrafficObservation obs = base_obs();
        obs.jam_factor = 10.0;
        const EncodedSample a = encode_observation(obs);
        CHECK(a.target == 10.0);
        obs.jam_factor = 2.5;
        const EncodedSample b = encode_observation(obs);
        CHECK(b.target == 2.5);
        CHECK(a.features == b.features);
    }
    SUBCASE("invariant breaches name the field") {
        TrafficObservation obs = base_obs();
        obs.humidity_pct = 120.0;
        CHECK_THROWS_WITH_AS(encode_observation(obs),
                             "humidity_pct must be in [0, 100]", ValidationError);
        obs = base_obs();
        obs.jam_factor = 10.5;
        CHECK_THROWS_WITH_AS(encode_observation(obs), "jam_factor must be in [0, 10]",
                             ValidationError);
        obs = base_obs();
        obs.wind_speed_kmh = -1.0;
        CHECK_THROWS_AS(encode_observation(obs), ValidationError);
        obs = base_obs();
        obs.timestamp = 0;
        CHECK_THROWS_AS(encode_observation(obs), ValidationError);
    }
}

TEST_CASE("encode_observation is injective on distinct inputs") {
    auto r = testsupport::rng(12);
    std::set<std::vector<double>> seen;
    for (int i = 0; i < 200; ++i) {
        TrafficObservation obs = base_obs();
        obs.timestamp = 1555286400 + static_cast<std::int64_t>(r.next() % (14 * 86400));
        obs.temperature_c = 40.0 * r.uniform();
        obs.daylight = r.uniform() < 0.5;
        obs.humidity_pct = 100.0 * r.uniform();
        obs.wind_speed_kmh = 30.0 * r.uniform();
        obs.speed_ratio = r.uniform();
        obs.jam_factor = 10.0 * r.uniform();
        seen.insert(encode_observation(obs).features);
    }
    CHECK(seen.size() == 200);  // continuous draws collide with probability ~0
}

TEST_CASE("fit_scaler basics") {
    SUBCASE("degenerate variance falls back to scale 1") {
        EncodedSample s;
        s.features = {3.0, -1.0};
        const ScalerParams p = fit_scaler({s, s});
        CHECK(p.mean == std::vector<double>{3.0, -1.0});
        CHECK(p.scale == std::vector<double>{1.0, 1.0});
    }
    SUBCASE("mean and population stddev") {
        EncodedSample a, b;
        a.features = {0.0};
        b.features = {2.0};
        const ScalerParams p = fit_scaler({a, b});
        CHECK(p.mean[0] == doctest::Approx(1.0));
        CHECK(p.scale[0] == doctest::Approx(1.0));  // population stddev of {0,2}
    }
    SUBCASE("insufficient data") {
        CHECK_THROWS_AS(fit_scaler({}), InsufficientDataError);
        EncodedSample s;
        s.features = {1.0};
        CHECK_THROWS_AS(fit_scaler({s}), InsufficientDataError);
    }
}

TEST_CASE("apply_scaler basics") {
    ScalerParams p;
    p.mean = {1.0};
    p.scale = {2.0};
    EncodedSample s;
    s.features = {3.0};
    s.target = 7.0;
    const EncodedSample out = apply_scaler(p, s);
    CHECK(out.features[0] == doctest::Approx(1.0));
    CHECK(out.target == 7.0);

    const ScalerParams id = identity_scaler(1);
    const EncodedSample same = apply_scaler(id, s);
    CHECK(same.features == s.features);

    ScalerParams wrong;
    wrong.mean = {0.0, 0.0};
    wrong.scale = {1.0, 1.0};
    CHECK_THROWS_AS(apply_scaler(wrong, s), ShapeError);
}

TEST_CASE("scaling standardizes the fitting set and round-trips") {
    auto r = testsupport::rng(13);
    auto samples = testsupport::random_samples(r, 64, 5);
    // Make one feature constant to exercise the degenerate path.
    for (auto& s : samples) s.features[2] = 42.0;
    const ScalerParams p = fit_scaler(samples);

    std::vector<double> mean(5, 0.0), var(5, 0.0);
    for (const auto& s : samples) {
        const EncodedSample scaled = apply_scaler(p, s);
        for (int k = 0; k < 5; ++k) mean[static_cast<std::size_t>(k)] += scaled.features[static_cast<std::size_t>(k)];
        const EncodedSample back = invert_scaler(p, scaled);
        for (int k = 0; k < 5; ++k) {
            CHECK(std::abs(back.features[static_cast<std::size_t>(k)] -
                           s.features[static_cast<std::size_t>(k)]) < 1e-9);
        }
    }
    for (auto& m : mean) m /= static_cast<double>(samples.size());
    for (const auto& s : samples) {
        const EncodedSample scaled = apply_scaler(p, s);
        for (int k = 0; k < 5; ++k) {
            const double d = scaled.features[static_cast<std::size_t>(k)] - mean[static_cast<std::size_t>(k)];
            var[static_cast<std::size_t>(k)] += d * d;
        }
    }
    for (int k = 0; k < 5; ++k) {
        CHECK(std::abs(mean[static_cast<std::size_t>(k)]) < 1e-9);
        if (k != 2) {
            const double sd = std::sqrt(var[static_cast<std::size_t>(k)] /
                                        static_cast<double>(samples.size()));
            CHECK(sd == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("timeutil date round trips") {
    CHECK(parse_iso_date("2019-04-15") == 1555286400);
    CHECK(day_of_week(1555286400) == 0);  // Monday
    CHECK(day_of_week(1555286400 + 6 * kSecondsPerDay) == 6);
    CHECK(format_iso_date(1555286400) == "2019-04-15");
    CHECK(seconds_since_midnight(1555286400 + 3661) == 3661);
    CHECK_THROWS_AS(parse_iso_date("2019/04/15"), ParseError);
    CHECK_THROWS_AS(parse_iso_date("2019-13-01"), ParseError);
}
