#ifndef RAINLINK_IO_HPP
#define RAINLINK_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rainlink/detector.hpp"
#include "rainlink/synth.hpp"
#include "rainlink/units.hpp"
#include "rainlink/validation.hpp"

namespace rainlink {

// Telemetry line format: station_id,iso8601_utc,esn0_db (one decimal digit).
struct TelemetryRecord {
    std::string station_id;
    SnrSample sample;
};

enum class QualityFlag : std::uint8_t {
    kOk = 0,
    kDegraded,   // isotherm forecast stale or missing at event start
    kFade,       // global fade classification active
    kMasked,     // scheduled sun transit window
    kInvalid,    // unusable sample (inversion failure, bad measurement)
};

const char* quality_flag_name(QualityFlag q);

struct EstimateRecord {
    std::string station_id;
    TimePoint time = 0;
    double epsilon_db = 0.0;
    bool rain_flag = false;
    double l_rain_db = 0.0;
    double rate_mm_per_h = 0.0;
    QualityFlag quality = QualityFlag::kOk;
};

struct EventRecord {
    std::string station_id;
    RainEvent event;
    double h0_km = 0.0;
    bool degraded = false;
    bool truncated = false;  // stream ended while the event was open
};

void write_telemetry(std::ostream& os, const std::string& station_id,
                     const std::vector<SnrSample>& samples);
void write_truth(std::ostream& os, const std::string& station_id,
                 const std::vector<TruthSample>& truth, bool header);

struct TruthRecord {
    std::string station_id;
    TruthSample sample;
};
std::vector<TruthRecord> read_truth(std::istream& is);

void write_estimates_header(std::ostream& os);
void write_estimate(std::ostream& os, const EstimateRecord& r);
std::vector<EstimateRecord> read_estimates(std::istream& is);

void write_events_header(std::ostream& os);
void write_event(std::ostream& os, const EventRecord& r);

// TBRG log file: "tip_mm=<resolution>" on the first non-comment line, then
// one ISO-8601 tip instant per line.
TbrgLog read_tbrg(std::istream& is);

}  // namespace rainlink

#endif
