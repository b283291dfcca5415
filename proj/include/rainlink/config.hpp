#ifndef RAINLINK_CONFIG_HPP
#define RAINLINK_CONFIG_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rainlink/detector.hpp"
#include "rainlink/link_budget.hpp"
#include "rainlink/rain_model.hpp"
#include "rainlink/synth.hpp"
#include "rainlink/tracker.hpp"
#include "rainlink/units.hpp"

namespace rainlink {

// Thrown for malformed or inconsistent configuration input (CLI exit code 1).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown for unusable data files (CLI exit code 2).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StationRecord {
    std::string station_id;
    double latitude_deg = 0.0;
    double longitude_deg = 0.0;
    double elevation_deg = 0.0;        // theta_e
    double melting_thickness_km = 0.5; // delta_ML default

    void validate() const;  // elevation in (5, 90)
};

struct StationRegistry {
    std::vector<StationRecord> stations;

    void validate() const;  // unique ids, per-record checks
    const StationRecord* find(const std::string& id) const;
};

struct ForecastEntry {
    TimePoint valid_time = 0;
    double h0_km = 0.0;
};

struct H0Lookup {
    double h0_km = 0.0;
    bool stale = false;  // most recent entry older than the staleness bound
};

struct IsothermForecast {
    std::vector<ForecastEntry> entries;

    void validate() const;  // strictly increasing times, h0 in [0.5, 6] km

    // Step-hold: value of the most recent forecast at or before t. Returns
    // nullopt when t precedes the first entry (callers degrade to a default).
    std::optional<H0Lookup> lookup_h0(TimePoint t, std::int64_t staleness_s) const;
};

// Cross-station transponder-step discrimination policy.
struct GlobalFadePolicy {
    int window_samples = 3;
    double station_fraction = 0.8;
    double step_depth_db = 0.3;

    void validate() const;  // fraction in (0.5, 1], depth > 0, window >= 1
};

// Synthetic-run settings carried in the engine config.
struct SynthSettings {
    DrySignalModel dry;
    RainScenario scenario;
    ImpairmentSchedule impairments;  // filled from the transit schedule file
    TimePoint start_time = 0;
    std::int64_t n_samples = 0;
};

struct EngineConfig {
    LinkNoiseParams link;
    CarrierParams carrier;
    PowerLawCoeffs ml = default_melting_layer_coeffs();
    PowerLawCoeffs ll = default_liquid_layer_coeffs();
    TrackerConfig st = TrackerConfig::slow_default();
    TrackerConfig ft = TrackerConfig::fast_default();
    DetectorConfig detector;
    GlobalFadePolicy fade;
    double default_h0_km = 3.0;              // fallback when no forecast covers t
    std::int64_t forecast_staleness_s = 12 * 3600;

    SynthSettings synth;

    void validate() const;
};

// Plain-text key = value config ('#' comments). dB-valued keys are suffixed
// _db and converted at load. Unknown keys are rejected. The full key list is
// documented in the repository config reference.
EngineConfig load_engine_config(const std::string& path);
EngineConfig parse_engine_config(std::istream& is);

// Station registry: whitespace-separated columns
//   station_id latitude longitude elevation_deg melting_thickness_km
StationRegistry load_stations(const std::string& path);
StationRegistry parse_stations(std::istream& is);

// Forecast CSV: valid_time,h0_km (header optional).
IsothermForecast load_forecast(const std::string& path);
IsothermForecast parse_forecast(std::istream& is);

// Sun-transit schedule CSV: station_id,start,duration_s,depth_db.
using TransitSchedule = std::map<std::string, std::vector<SunTransit>>;
TransitSchedule load_transit_schedule(const std::string& path);
TransitSchedule parse_transit_schedule(std::istream& is);

}  // namespace rainlink

#endif
