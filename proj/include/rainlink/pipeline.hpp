#ifndef RAINLINK_PIPELINE_HPP
#define RAINLINK_PIPELINE_HPP

#include <deque>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rainlink/config.hpp"
#include "rainlink/detector.hpp"
#include "rainlink/io.hpp"
#include "rainlink/tracker.hpp"

namespace rainlink {

struct IngestDiagnostics {
    std::int64_t accepted = 0;
    std::int64_t malformed = 0;
    std::int64_t unknown_station = 0;
    std::int64_t out_of_order = 0;
    std::int64_t duplicate_timestamp = 0;

    std::int64_t rejected() const {
        return malformed + unknown_station + out_of_order + duplicate_timestamp;
    }
};

struct IngestResult {
    std::map<std::string, std::vector<SnrSample>> per_station;
    IngestDiagnostics diagnostics;
};

// Parses newline-delimited telemetry into per-station ordered sequences.
// Malformed lines, unknown stations, out-of-order and duplicate timestamps
// are skipped with counted diagnostics; gaps are preserved.
IngestResult ingest(std::istream& telemetry, const StationRegistry& registry);

enum class FadeClass : std::uint8_t { kLocal = 0, kGlobal = 1 };

struct EngineDiagnostics {
    std::int64_t samples_processed = 0;
    std::int64_t masked_samples = 0;
    std::int64_t fade_suppressed_samples = 0;
    std::int64_t degraded_events = 0;
    std::int64_t invalid_samples = 0;
    std::int64_t global_fade_edges = 0;
};

struct EngineOutputs {
    std::vector<EstimateRecord> estimates;  // timeline order (time, station)
    std::vector<EventRecord> events;        // closure order
};

// Multi-station streaming engine: per station sun-transit mask -> ST step
// (unless frozen) -> FT step -> detector step, with a cross-station global
// fade check ahead of event-start confirmation. Deterministic; state is
// checkpointable for restart.
class Engine {
  public:
    Engine(EngineConfig config, StationRegistry registry, IsothermForecast forecast,
           TransitSchedule transits);

    // Processes every input sample with time > the last processed time and
    // (when given) time <= stop_after. May be called repeatedly.
    void process(const std::map<std::string, std::vector<SnrSample>>& input,
                 std::optional<TimePoint> stop_after, EngineOutputs& out);

    // Closes still-open events as truncated. Call once, after the last
    // process() of a run.
    void finalize(EngineOutputs& out);

    void save_checkpoint(std::ostream& os) const;
    void load_checkpoint(std::istream& is);

    const EngineDiagnostics& diagnostics() const { return diag_; }
    double xi() const { return xi_; }

  private:
    struct StationState {
        bool initialized = false;
        TrackerState st;
        TrackerState ft;
        DetectorState det;
        // Sun-transit hold.
        bool have_held = false;
        double held_value_db = 0.0;
        // Recent post-mask samples for the fade window (window+1 entries).
        std::deque<std::pair<TimePoint, double>> recent;
        // Geometry pinned at event start.
        bool event_geom_valid = false;
        RainPathGeometry event_geom;
        bool event_degraded = false;
        // Gap bookkeeping.
        bool have_last_time = false;
        TimePoint last_time = 0;
    };

    bool in_transit(const std::string& id, TimePoint t) const;
    RainPathGeometry base_geometry(const StationRecord& rec, double h0_km) const;
    void handle_event_start(const std::string& id, StationState& st,
                            TimePoint t0);
    FadeClass classify_fade(const std::vector<std::string>& reporting,
                            std::vector<double>& drops_out);
    void apply_rebaseline(double common_step_db);

    EngineConfig cfg_;
    StationRegistry registry_;
    IsothermForecast forecast_;
    TransitSchedule transits_;
    double xi_ = 0.0;

    std::map<std::string, StationState> stations_;
    bool fade_active_ = false;
    bool have_processed_ = false;
    TimePoint last_processed_ = 0;
    EngineDiagnostics diag_;
    // Stations exhibiting the current fade edge (set during classify).
    std::vector<std::string> fade_exhibiting_;
};

}  // namespace rainlink

#endif
