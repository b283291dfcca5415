#ifndef RAINLINK_SYNTH_HPP
#define RAINLINK_SYNTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rainlink/link_budget.hpp"
#include "rainlink/rain_model.hpp"
#include "rainlink/units.hpp"

namespace rainlink {

// One timestamped SNR measurement from one station (station identity is
// carried by the containing sequence / telemetry record).
struct SnrSample {
    TimePoint time = 0;
    double esn0_db = 0.0;
};

struct TruthSample {
    TimePoint time = 0;
    double rate_mm_per_h = 0.0;
    double l_rain_db = 0.0;
};

// Telemetry amplitude resolution.
inline constexpr double kQuantizationDb = 0.1;

// Dry-baseline signal model: diurnal orbit wander + white scintillation.
// Scintillation fades (1-10 s) are far above the 1-minute sampling rate, so
// the process is white at this grid.
struct DrySignalModel {
    double mean_snr_db = 10.428;
    double diurnal_amplitude_db = 0.3;
    double diurnal_phase_rad = 0.0;
    double scint_std_db = 0.139;
    double drift_db_per_day = 0.0;

    void validate() const;
};

struct SunTransit {
    TimePoint start = 0;
    std::int64_t duration_s = 0;
    double max_depth_db = 0.0;  // notch depth at window center
};

struct GainStep {
    TimePoint time = 0;
    double delta_db = 0.0;  // persistent from this time onward
};

struct ImpairmentSchedule {
    std::vector<SunTransit> sun_transits;
    std::vector<GainStep> gain_steps;

    // Windows must be non-overlapping per kind.
    void validate() const;
};

enum class EventShape : std::uint8_t { kTrapezoid, kDoublePeak };

struct RainEventSpec {
    TimePoint start = 0;
    std::int64_t duration_s = 0;
    EventShape shape = EventShape::kTrapezoid;
    double peak_rate_mm_per_h = 0.0;
    // Trapezoid ramp fractions of the duration (ignored for double-peak).
    double ramp_up_frac = 0.25;
    double ramp_down_frac = 0.35;

    double rate_at(TimePoint t) const;   // ground-truth rate, piecewise linear
    double analytic_total_mm() const;    // closed-form area of the shape
};

struct RainScenario {
    std::vector<RainEventSpec> events;

    void validate() const;  // non-negative rates, non-overlapping events
    double rate_at(TimePoint t) const;
    double analytic_total_mm() const;
};

// Unquantized generator internals: clean (pre-noise) SNR and the scintillation
// draw, kept separate so rain injection can replace the clean part.
struct DryParts {
    TimePoint start = 0;
    std::vector<double> clean_db;
    std::vector<double> noise_db;
};

DryParts make_dry_parts(const DrySignalModel& model, std::int64_t n_samples,
                        TimePoint start, std::uint64_t seed);

// Quantized dry stream (no rain, no impairments). Deterministic given seed.
std::vector<SnrSample> gen_dry(const DrySignalModel& model, std::int64_t n_samples,
                               TimePoint start, std::uint64_t seed);

// For every in-event sample: ground-truth rate -> attenuation via the layer
// model -> wet SNR via the forward link equations, replacing the clean SNR.
// Returns the per-sample truth series (rate and attenuation, zero when dry).
std::vector<TruthSample> inject_rain(DryParts& parts, const RainScenario& scenario,
                                     const RainPathGeometry& geometry,
                                     const LinkNoiseParams& link,
                                     const CarrierParams& carrier);

// Sun transits subtract a symmetric V-notch; gain steps add a persistent
// delta. Applied to unquantized values.
void apply_impairments(std::vector<double>& values_db, TimePoint start,
                       const ImpairmentSchedule& schedule);

// Quantized-sample convenience overload (re-quantizes after applying).
std::vector<SnrSample> apply_impairments(const std::vector<SnrSample>& samples,
                                         const ImpairmentSchedule& schedule);

double quantize_db(double v);

// Full composition: dry parts -> rain injection -> impairments -> noise ->
// quantization. The per-station seed should come from station_seed().
struct StationSynthesis {
    std::vector<SnrSample> samples;
    std::vector<TruthSample> truth;
};

StationSynthesis simulate_station(const DrySignalModel& model,
                                  const RainScenario& scenario,
                                  const ImpairmentSchedule& schedule,
                                  const RainPathGeometry& geometry,
                                  const LinkNoiseParams& link,
                                  const CarrierParams& carrier,
                                  std::int64_t n_samples, TimePoint start,
                                  std::uint64_t seed);

// Stable per-station sub-seed (FNV-1a of the id mixed into the run seed).
std::uint64_t station_seed(std::uint64_t run_seed, const std::string& station_id);

}  // namespace rainlink

#endif
