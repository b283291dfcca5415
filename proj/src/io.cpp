#include "rainlink/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rainlink {

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

// Rates carry 4 significant digits, dB values 3 decimals; fixed formatting
// keeps golden-file comparisons byte-stable.
std::string fmt_rate(double v) { return fmt("%.4g", v); }
std::string fmt_db(double v) { return fmt("%.3f", v); }

bool split_csv(const std::string& line, std::vector<std::string>& out) {
    out.clear();
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return !out.empty();
}

}  // namespace

const char* quality_flag_name(QualityFlag q) {
    switch (q) {
        case QualityFlag::kOk: return "ok";
        case QualityFlag::kDegraded: return "degraded";
        case QualityFlag::kFade: return "fade";
        case QualityFlag::kMasked: return "masked";
        case QualityFlag::kInvalid: return "invalid";
    }
    return "unknown";
}

void write_telemetry(std::ostream& os, const std::string& station_id,
                     const std::vector<SnrSample>& samples) {
    for (const auto& s : samples) {
        os << station_id << ',' << format_iso8601(s.time) << ','
           << fmt("%.1f", s.esn0_db) << '\n';
    }
}

void write_truth(std::ostream& os, const std::string& station_id,
                 const std::vector<TruthSample>& truth, bool header) {
    if (header) {
        os << "station_id,time,true_rate_mm_per_h,true_l_rain_db\n";
    }
    for (const auto& t : truth) {
        os << station_id << ',' << format_iso8601(t.time) << ','
           << fmt_rate(t.rate_mm_per_h) << ',' << fmt_db(t.l_rain_db) << '\n';
    }
}

std::vector<TruthRecord> read_truth(std::istream& is) {
    std::vector<TruthRecord> out;
    std::string line;
    std::vector<std::string> f;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (first && line.rfind("station_id,", 0) == 0) {
            first = false;
            continue;
        }
        first = false;
        if (!split_csv(line, f) || f.size() != 4) {
            throw std::runtime_error("truth file: malformed line: " + line);
        }
        auto t = parse_iso8601(f[1]);
        if (!t) throw std::runtime_error("truth file: bad timestamp: " + f[1]);
        TruthRecord r;
        r.station_id = f[0];
        r.sample.time = *t;
        r.sample.rate_mm_per_h = std::stod(f[2]);
        r.sample.l_rain_db = std::stod(f[3]);
        out.push_back(std::move(r));
    }
    return out;
}

void write_estimates_header(std::ostream& os) {
    os << "station_id,time,epsilon_db,rain_flag,l_rain_db,rate_mm_per_h,quality\n";
}

void write_estimate(std::ostream& os, const EstimateRecord& r) {
    os << r.station_id << ',' << format_iso8601(r.time) << ','
       << fmt_db(r.epsilon_db) << ',' << (r.rain_flag ? 1 : 0) << ','
       << fmt_db(r.l_rain_db) << ',' << fmt_rate(r.rate_mm_per_h) << ','
       << quality_flag_name(r.quality) << '\n';
}

std::vector<EstimateRecord> read_estimates(std::istream& is) {
    std::vector<EstimateRecord> out;
    std::string line;
    std::vector<std::string> f;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (first && line.rfind("station_id,", 0) == 0) {
            first = false;
            continue;
        }
        first = false;
        if (!split_csv(line, f) || f.size() != 7) {
            throw std::runtime_error("estimates file: malformed line: " + line);
        }
        auto t = parse_iso8601(f[1]);
        if (!t) throw std::runtime_error("estimates file: bad timestamp: " + f[1]);
        EstimateRecord r;
        r.station_id = f[0];
        r.time = *t;
        r.epsilon_db = std::stod(f[2]);
        r.rain_flag = f[3] == "1";
        r.l_rain_db = std::stod(f[4]);
        r.rate_mm_per_h = std::stod(f[5]);
        for (int q = 0; q <= static_cast<int>(QualityFlag::kInvalid); ++q) {
            if (f[6] == quality_flag_name(static_cast<QualityFlag>(q))) {
                r.quality = static_cast<QualityFlag>(q);
            }
        }
        out.push_back(std::move(r));
    }
    return out;
}

void write_events_header(std::ostream& os) {
    os << "station_id,start,end,duration_min,rate_samples,invalid_samples,"
          "peak_rate_mm_per_h,peak_time,cumulative_mm,h0_km,quality\n";
}

void write_event(std::ostream& os, const EventRecord& r) {
    const auto& e = r.event;
    os << r.station_id << ',' << format_iso8601(e.start_time) << ','
       << format_iso8601(e.end_time) << ','
       << (e.end_time - e.start_time) / 60 << ',' << e.rate_samples << ','
       << e.invalid_samples << ',' << fmt_rate(e.peak_rate) << ','
       << format_iso8601(e.peak_time) << ',' << fmt_rate(e.cumulative_mm) << ','
       << fmt("%.2f", r.h0_km) << ','
       << (r.truncated ? "truncated" : (r.degraded ? "degraded" : "ok")) << '\n';
}

TbrgLog read_tbrg(std::istream& is) {
    TbrgLog log;
    std::string line;
    bool have_resolution = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!have_resolution) {
            if (line.rfind("tip_mm=", 0) != 0) {
                throw std::runtime_error("tbrg file: expected tip_mm=<res> header");
            }
            log.tip_resolution_mm = std::stod(line.substr(7));
            have_resolution = true;
            continue;
        }
        auto t = parse_iso8601(line);
        if (!t) throw std::runtime_error("tbrg file: bad timestamp: " + line);
        log.tip_times.push_back(*t);
    }
    if (!have_resolution) {
        throw std::runtime_error("tbrg file: missing tip_mm header");
    }
    log.validate();
    return log;
}

}  // namespace rainlink
