#ifndef RAINLINK_DETECTOR_HPP
#define RAINLINK_DETECTOR_HPP

#include <cstdint>
#include <optional>

#include "rainlink/rain_model.hpp"
#include "rainlink/units.hpp"

namespace rainlink {

struct DetectorConfig {
    double start_threshold_db = 0.3;
    double end_threshold_db = 0.1;
    // Consecutive above-threshold samples required before an event is
    // declared; suppresses single-sample spikes at one sample of latency.
    int min_event_samples = 2;

    void validate() const;
};

enum class DetectorPhase : std::uint8_t { kDry = 0, kRaining = 1 };

// Detector + per-event accumulator state. A value type so the pipeline can
// checkpoint it verbatim.
struct DetectorState {
    DetectorPhase phase = DetectorPhase::kDry;
    std::int64_t last_k = -1;  // ordinal of the last processed sample
    int consecutive_above = 0;

    // Pending candidate while debouncing (first crossing instant t0).
    std::int64_t cand_k = -1;
    TimePoint cand_time = 0;
    double cand_ref_db = 0.0;

    // Valid only while raining.
    double frozen_dry_ref_db = 0.0;  // eta_ST at the crossing instant t0
    std::int64_t event_start_k = -1;
    TimePoint event_start_time = 0;

    // Running event accumulators.
    double peak_rate = 0.0;
    TimePoint peak_time = 0;
    double cumulative_mm = 0.0;
    double last_rate = 0.0;
    TimePoint last_rate_time = 0;
    bool have_last_rate = false;
    std::int64_t rate_samples = 0;
    std::int64_t invalid_samples = 0;
};

struct EventBoundary {
    enum class Kind : std::uint8_t { kStart, kEnd } kind;
    TimePoint time;  // start: crossing instant t0; end: closure sample time
};

// Closed-event summary written to the events output.
struct RainEvent {
    TimePoint start_time = 0;
    TimePoint end_time = 0;
    double peak_rate = 0.0;
    TimePoint peak_time = 0;
    double cumulative_mm = 0.0;  // trapezoidal integral of the rate series
    std::int64_t rate_samples = 0;
    std::int64_t invalid_samples = 0;
};

struct DetectorStepResult {
    DetectorState state;
    double epsilon_db = 0.0;
    bool raining = false;  // phase after this step
    std::optional<EventBoundary> boundary;
    std::optional<RainEvent> closed_event;
};

// One step of the rain start/stop state machine on the tracker outputs.
// Start: epsilon >= start threshold for min_event_samples consecutive samples
// (the frozen dry reference and the event start time are taken at the first
// crossing). End: epsilon <= end threshold, immediate. The caller freezes /
// unfreezes the slow tracker when the corresponding boundary is returned.
// suppress_starts blocks DRY->RAINING transitions (sun transit, global fade).
DetectorStepResult detector_step(const DetectorState& s, TimePoint now,
                                 double eta_st_db, double eta_ft_db,
                                 const DetectorConfig& cfg,
                                 bool suppress_starts = false);

struct RateSample {
    TimePoint time = 0;
    double epsilon_db = 0.0;
    double l_rain_linear = 1.0;
    double l_rain_db = 0.0;
    double rate_mm_per_h = 0.0;
    bool valid = true;
};

// Rain attenuation from the frozen dry reference and the live fast tracker
// (linear-domain ratio arithmetic), then rate via model inversion. Updates the
// event accumulators in place. Inversion failure marks the sample invalid,
// never silently zero. A fast tracker above the frozen reference clamps to
// zero rate (no negative attenuation).
RateSample rain_rate_sample(DetectorState& s, TimePoint now, double eta_ft_db,
                            const RainPathGeometry& event_geometry, double xi);

// Gaussian upper-tail probability that a dry-condition epsilon sample exceeds
// the detection threshold.
double false_alarm_probability(double eps_mean_db, double eps_std_db,
                               double threshold_db);

}  // namespace rainlink

#endif
