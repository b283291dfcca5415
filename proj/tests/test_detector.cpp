#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "rainlink/detector.hpp"
#include "rainlink/link_budget.hpp"
#include "rainlink/units.hpp"

using namespace rainlink;

namespace {

RainPathGeometry reference_geometry() {
    RainPathGeometry g;
    g.elevation_angle_rad = deg_to_rad(40.0);
    g.isotherm_height_km = 3.0;
    g.melting_thickness_km = 0.5;
    return g;
}

struct Driver {
    DetectorConfig cfg;
    DetectorState state;
    TimePoint t = 0;
    std::vector<EventBoundary> boundaries;
    std::vector<RainEvent> closed;

    // Feeds one epsilon value (ST fixed at 0, FT at -eps).
    DetectorStepResult feed(double eps, bool suppress = false) {
        auto r = detector_step(state, t, 0.0, -eps, cfg, suppress);
        state = r.state;
        t += kSamplePeriodS;
        if (r.boundary) boundaries.push_back(*r.boundary);
        if (r.closed_event) closed.push_back(*r.closed_event);
        return r;
    }
};

}  // namespace

TEST_CASE("config validation") {
    DetectorConfig c;
    CHECK_NOTHROW(c.validate());
    c.end_threshold_db = 0.4;
    CHECK_THROWS(c.validate());
    c = DetectorConfig{};
    c.min_event_samples = 0;
    CHECK_THROWS(c.validate());
}

TEST_CASE("all-zero epsilon stream produces nothing") {
    Driver d;
    for (int i = 0; i < 1000; ++i) {
        auto r = d.feed(0.0);
        CHECK_FALSE(r.raining);
    }
    CHECK(d.boundaries.empty());
    CHECK(d.closed.empty());
}

TEST_CASE("threshold crossing opens and closes one event") {
    Driver d;
    for (int i = 0; i < 10; ++i) d.feed(0.0);
    d.feed(0.31);
    CHECK(d.boundaries.empty());  // debounce pending
    auto r = d.feed(0.31);
    REQUIRE(d.boundaries.size() == 1);
    CHECK(d.boundaries[0].kind == EventBoundary::Kind::kStart);
    // Event start is the first crossing instant, one sample earlier.
    CHECK(d.boundaries[0].time == d.t - 2 * kSamplePeriodS);
    CHECK(r.raining);
    d.feed(0.0);
    REQUIRE(d.boundaries.size() == 2);
    CHECK(d.boundaries[1].kind == EventBoundary::Kind::kEnd);
    CHECK(d.closed.size() == 1);
}

TEST_CASE("single-sample spike is debounced away") {
    Driver d;
    for (int i = 0; i < 5; ++i) d.feed(0.0);
    d.feed(0.9);
    d.feed(0.0);
    d.feed(0.9);
    d.feed(0.0);
    CHECK(d.boundaries.empty());
}

TEST_CASE("hysteresis band produces no events and no closures") {
    Driver d;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.15, 0.25);
    for (int i = 0; i < 2000; ++i) d.feed(u(rng));
    CHECK(d.boundaries.empty());

    // Already raining: the same band never closes the event.
    Driver r;
    r.feed(0.5);
    r.feed(0.5);
    REQUIRE(r.boundaries.size() == 1);
    for (int i = 0; i < 2000; ++i) r.feed(u(rng));
    CHECK(r.boundaries.size() == 1);
}

TEST_CASE("boundaries strictly alternate start/end") {
    Driver d;
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0.15, 0.25);
    for (int i = 0; i < 20000; ++i) d.feed(g(rng));
    REQUIRE(!d.boundaries.empty());
    for (size_t i = 0; i < d.boundaries.size(); ++i) {
        const auto expect = i % 2 == 0 ? EventBoundary::Kind::kStart
                                       : EventBoundary::Kind::kEnd;
        CHECK(d.boundaries[i].kind == expect);
    }
}

TEST_CASE("suppression blocks starts but not closures") {
    Driver d;
    for (int i = 0; i < 100; ++i) {
        auto r = d.feed(2.0, /*suppress=*/true);
        CHECK_FALSE(r.raining);
    }
    CHECK(d.boundaries.empty());
    // An open event still closes while suppressed.
    Driver r;
    r.feed(0.5);
    r.feed(0.5);
    REQUIRE(r.boundaries.size() == 1);
    r.feed(0.05, /*suppress=*/true);
    CHECK(r.boundaries.size() == 2);
}

TEST_CASE("rain rate sample: pinned regression chain") {
    // Frozen dry reference 10.43 dB, FT dipped to 9.43 dB (1 dB drop), with
    // the reference-station xi. Values frozen from an independent evaluation:
    // L = 1.052017 linear = 0.220229 dB -> 2.044171 mm/h at h0 = 3 km.
    const double xi = compute_xi(LinkNoiseParams{});
    DetectorState s;
    s.phase = DetectorPhase::kRaining;
    s.frozen_dry_ref_db = 10.43;
    RateSample rs = rain_rate_sample(s, 0, 9.43, reference_geometry(), xi);
    CHECK(rs.valid);
    CHECK(rs.epsilon_db == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rs.l_rain_linear == doctest::Approx(1.052017287).epsilon(1e-8));
    CHECK(rs.l_rain_db == doctest::Approx(0.220228765).epsilon(1e-7));
    CHECK(rs.rate_mm_per_h == doctest::Approx(2.044171445).epsilon(1e-7));
    CHECK(s.peak_rate == doctest::Approx(rs.rate_mm_per_h));
    CHECK(s.rate_samples == 1);
}

TEST_CASE("fast tracker above the frozen reference clamps to zero rate") {
    const double xi = 0.799103197;
    DetectorState s;
    s.phase = DetectorPhase::kRaining;
    s.frozen_dry_ref_db = 10.0;
    RateSample rs = rain_rate_sample(s, 0, 10.5, reference_geometry(), xi);
    CHECK(rs.valid);
    CHECK(rs.rate_mm_per_h == 0.0);
    CHECK(rs.l_rain_linear < 1.0);
}

TEST_CASE("inversion failure marks the sample invalid, never silently zero") {
    const double xi = 0.799103197;
    DetectorState s;
    s.phase = DetectorPhase::kRaining;
    s.frozen_dry_ref_db = 500.0;  // absurd drop, above the invertible range
    RateSample rs = rain_rate_sample(s, 0, 0.0, reference_geometry(), xi);
    CHECK_FALSE(rs.valid);
    CHECK(s.invalid_samples == 1);
    CHECK(s.rate_samples == 0);
}

TEST_CASE("event accumulators integrate the rate series trapezoidally") {
    const double xi = compute_xi(LinkNoiseParams{});
    const auto g = reference_geometry();
    DetectorState s;
    s.phase = DetectorPhase::kRaining;
    s.frozen_dry_ref_db = 10.43;
    std::vector<double> ft = {10.0, 9.8, 9.5, 9.6, 9.9, 10.1};
    std::vector<RateSample> samples;
    TimePoint t = 0;
    for (double v : ft) {
        samples.push_back(rain_rate_sample(s, t, v, g, xi));
        t += kSamplePeriodS;
    }
    double expect = 0.0;
    for (size_t i = 1; i < samples.size(); ++i) {
        expect += 0.5 *
                  (samples[i].rate_mm_per_h + samples[i - 1].rate_mm_per_h) *
                  (kSamplePeriodS / 3600.0);
    }
    CHECK(s.cumulative_mm == doctest::Approx(expect).epsilon(1e-12));
    double peak = 0.0;
    for (const auto& rs : samples) peak = std::max(peak, rs.rate_mm_per_h);
    CHECK(s.peak_rate == doctest::Approx(peak));
    for (const auto& rs : samples) {
        CHECK(rs.rate_mm_per_h >= 0.0);
        CHECK(std::isfinite(rs.rate_mm_per_h));
    }
}

TEST_CASE("false alarm probability: fixed points and the pinned tail") {
    CHECK(false_alarm_probability(0.3, 0.1, 0.3) == doctest::Approx(0.5));
    CHECK(false_alarm_probability(0.0049, 0.0852, 1e9) == doctest::Approx(0.0));
    // Dry-condition epsilon statistics give ~2.7e-4 at the 0.3 dB threshold
    // (pinned from an independent complementary-error-function evaluation).
    CHECK(false_alarm_probability(0.0049, 0.0852, 0.3) ==
          doctest::Approx(2.664843e-4).epsilon(1e-4));
    CHECK_THROWS(false_alarm_probability(0.0, 0.0, 0.3));
}
