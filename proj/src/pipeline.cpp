#include "rainlink/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace rainlink {

IngestResult ingest(std::istream& telemetry, const StationRegistry& registry) {
    IngestResult result;
    std::string line;
    while (std::getline(telemetry, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        // station_id,iso8601,esn0_db
        const size_t c1 = line.find(',');
        const size_t c2 = c1 == std::string::npos ? std::string::npos
                                                  : line.find(',', c1 + 1);
        if (c2 == std::string::npos) {
            ++result.diagnostics.malformed;
            continue;
        }
        const std::string id = line.substr(0, c1);
        const auto t = parse_iso8601(line.substr(c1 + 1, c2 - c1 - 1));
        double esn0 = 0.0;
        bool numeric_ok = true;
        try {
            size_t pos = 0;
            const std::string field = line.substr(c2 + 1);
            esn0 = std::stod(field, &pos);
            numeric_ok = pos == field.size() && std::isfinite(esn0);
        } catch (const std::exception&) {
            numeric_ok = false;
        }
        if (!t || !numeric_ok || id.empty()) {
            ++result.diagnostics.malformed;
            continue;
        }
        if (registry.find(id) == nullptr) {
            ++result.diagnostics.unknown_station;
            continue;
        }
        auto& seq = result.per_station[id];
        if (!seq.empty()) {
            if (*t == seq.back().time) {
                ++result.diagnostics.duplicate_timestamp;
                continue;
            }
            if (*t < seq.back().time) {
                ++result.diagnostics.out_of_order;
                continue;
            }
        }
        seq.push_back({*t, esn0});
        ++result.diagnostics.accepted;
    }
    return result;
}

Engine::Engine(EngineConfig config, StationRegistry registry,
               IsothermForecast forecast, TransitSchedule transits)
    : cfg_(std::move(config)),
      registry_(std::move(registry)),
      forecast_(std::move(forecast)),
      transits_(std::move(transits)) {
    cfg_.validate();
    registry_.validate();
    forecast_.validate();
    xi_ = compute_xi(cfg_.link);
    for (const auto& rec : registry_.stations) {
        if (!(rec.melting_thickness_km < cfg_.default_h0_km)) {
            throw ConfigError("station " + rec.station_id +
                              ": melting thickness must be below h0_default_km");
        }
        stations_.emplace(rec.station_id, StationState{});
    }
}

bool Engine::in_transit(const std::string& id, TimePoint t) const {
    auto it = transits_.find(id);
    if (it == transits_.end()) return false;
    for (const auto& w : it->second) {
        if (t >= w.start && t < w.start + w.duration_s) return true;
    }
    return false;
}

RainPathGeometry Engine::base_geometry(const StationRecord& rec, double h0_km) const {
    RainPathGeometry g;
    g.elevation_angle_rad = deg_to_rad(rec.elevation_deg);
    g.isotherm_height_km = h0_km;
    g.melting_thickness_km = rec.melting_thickness_km;
    g.ml = cfg_.ml;
    g.ll = cfg_.ll;
    return g;
}

void Engine::handle_event_start(const std::string& id, StationState& st,
                                TimePoint t0) {
    const StationRecord* rec = registry_.find(id);
    double h0 = cfg_.default_h0_km;
    bool degraded = false;
    const auto look = forecast_.lookup_h0(t0, cfg_.forecast_staleness_s);
    if (!look) {
        degraded = true;  // no forecast coverage at event start
    } else {
        h0 = look->h0_km;
        degraded = look->stale;
    }
    if (h0 <= rec->melting_thickness_km) {
        // Forecast placed the isotherm inside the melting layer; fall back.
        h0 = cfg_.default_h0_km;
        degraded = true;
    }
    st.event_geom = base_geometry(*rec, h0);
    st.event_geom_valid = true;
    st.event_degraded = degraded;
    if (degraded) ++diag_.degraded_events;
}

FadeClass Engine::classify_fade(const std::vector<std::string>& reporting,
                                std::vector<double>& drops_out) {
    drops_out.clear();
    fade_exhibiting_.clear();
    if (reporting.size() < 2) return FadeClass::kLocal;
    const std::int64_t span_s =
        static_cast<std::int64_t>(cfg_.fade.window_samples) * kSamplePeriodS;
    std::int64_t exhibiting = 0;
    for (const auto& id : reporting) {
        const StationState& st = stations_.at(id);
        if (st.recent.size() <
            static_cast<size_t>(cfg_.fade.window_samples) + 1) {
            continue;
        }
        const auto& oldest = st.recent.front();
        const auto& newest = st.recent.back();
        if (newest.first - oldest.first != span_s) continue;  // gap in window
        const double drop = oldest.second - newest.second;
        if (drop >= cfg_.fade.step_depth_db) {
            ++exhibiting;
            drops_out.push_back(drop);
            fade_exhibiting_.push_back(id);
        }
    }
    const double needed =
        cfg_.fade.station_fraction * static_cast<double>(reporting.size());
    if (static_cast<double>(exhibiting) + 1e-9 >= needed) {
        return FadeClass::kGlobal;
    }
    return FadeClass::kLocal;
}

void Engine::apply_rebaseline(double common_step_db) {
    // Shift the affected trackers onto the post-step baseline, preserving
    // drift and covariance. The FT partially tracked the step already, so it
    // is snapped to the shifted ST level (dry stations) or shifted by the
    // same amount (raining stations, where FT rides the rain signal).
    for (const auto& id : fade_exhibiting_) {
        StationState& st = stations_.at(id);
        if (!st.initialized) continue;
        st.st.level_db -= common_step_db;
        if (st.det.phase == DetectorPhase::kRaining) {
            st.ft.level_db -= common_step_db;
            st.det.frozen_dry_ref_db -= common_step_db;
        } else {
            st.ft.level_db = st.st.level_db;
            st.ft.drift_db_per_sample = st.st.drift_db_per_sample;
        }
    }
}

void Engine::process(const std::map<std::string, std::vector<SnrSample>>& input,
                     std::optional<TimePoint> stop_after, EngineOutputs& out) {
    // Merged strictly-increasing timeline across stations.
    std::set<TimePoint> timeline;
    for (const auto& [id, seq] : input) {
        if (stations_.find(id) == stations_.end()) {
            throw DataError("engine: station not registered: " + id);
        }
        for (const auto& s : seq) {
            if (have_processed_ && s.time <= last_processed_) continue;
            if (stop_after && s.time > *stop_after) continue;
            timeline.insert(s.time);
        }
    }
    std::map<std::string, size_t> cursor;

    for (const TimePoint t : timeline) {
        // Stage 1: gather reporting stations, apply the sun-transit mask and
        // update the fade window.
        std::vector<std::string> reporting;
        std::map<std::string, std::pair<double, bool>> masked_value;  // z, masked
        for (const auto& [id, seq] : input) {
            size_t& i = cursor[id];
            while (i < seq.size() &&
                   (seq[i].time < t ||
                    (have_processed_ && seq[i].time <= last_processed_))) {
                ++i;
            }
            if (i >= seq.size() || seq[i].time != t) continue;
            reporting.push_back(id);
            StationState& st = stations_.at(id);
            const double raw = seq[i].esn0_db;
            double z = raw;
            bool masked = false;
            if (in_transit(id, t)) {
                masked = true;
                // Hold the last pre-transit value for the whole window; a
                // transit opening the stream holds the first sample seen.
                z = st.have_held ? st.held_value_db : raw;
            } else {
                st.held_value_db = raw;
                st.have_held = true;
            }
            masked_value[id] = {z, masked};
            st.recent.emplace_back(t, z);
            while (st.recent.size() >
                   static_cast<size_t>(cfg_.fade.window_samples) + 1) {
                st.recent.pop_front();
            }
        }
        if (reporting.empty()) continue;

        // Stage 2: cross-station fade classification before event starts are
        // confirmed; re-baseline once per fade edge.
        std::vector<double> drops;
        const FadeClass klass = classify_fade(reporting, drops);
        if (klass == FadeClass::kGlobal && !fade_active_) {
            std::sort(drops.begin(), drops.end());
            const double median = drops[drops.size() / 2];
            apply_rebaseline(median);
            ++diag_.global_fade_edges;
        }
        fade_active_ = klass == FadeClass::kGlobal;

        // Stage 3: per-station trackers and detector, in station-id order.
        for (const auto& id : reporting) {
            StationState& st = stations_.at(id);
            const auto [z, masked] = masked_value.at(id);
            ++diag_.samples_processed;
            if (masked) ++diag_.masked_samples;
            if (fade_active_) ++diag_.fade_suppressed_samples;

            EstimateRecord rec;
            rec.station_id = id;
            rec.time = t;

            if (!st.initialized) {
                st.st = kf_init(z, cfg_.st);
                st.ft = kf_init(z, cfg_.ft);
                st.det = DetectorState{};
                st.initialized = true;
                st.have_last_time = true;
                st.last_time = t;
                rec.quality = masked ? QualityFlag::kMasked
                                     : (fade_active_ ? QualityFlag::kFade
                                                     : QualityFlag::kOk);
                out.estimates.push_back(std::move(rec));
                continue;
            }

            // Missing samples become predict-only steps, never interpolation.
            if (st.have_last_time) {
                const std::int64_t gap =
                    (t - st.last_time) / kSamplePeriodS - 1;
                for (std::int64_t g = 0; g < gap; ++g) {
                    st.st = kf_predict_only(st.st, cfg_.st);
                    st.ft = kf_predict_only(st.ft, cfg_.ft);
                }
            }
            st.last_time = t;

            st.st = kf_step(st.st, z, cfg_.st);
            st.ft = kf_step(st.ft, z, cfg_.ft);

            const bool suppress = masked || fade_active_;
            DetectorStepResult d = detector_step(st.det, t, st.st.level_db,
                                                 st.ft.level_db, cfg_.detector,
                                                 suppress);
            if (d.boundary &&
                d.boundary->kind == EventBoundary::Kind::kStart) {
                st.st = kf_freeze(st.st);
                handle_event_start(id, st, d.boundary->time);
            }
            if (d.boundary && d.boundary->kind == EventBoundary::Kind::kEnd) {
                st.st = kf_unfreeze(st.st);
                EventRecord ev;
                ev.station_id = id;
                ev.event = *d.closed_event;
                ev.h0_km = st.event_geom.isotherm_height_km;
                ev.degraded = st.event_degraded;
                out.events.push_back(std::move(ev));
                st.event_geom_valid = false;
                st.event_degraded = false;
            }

            rec.epsilon_db = d.epsilon_db;
            rec.rain_flag = d.raining;
            if (d.raining && st.event_geom_valid) {
                RateSample rs =
                    rain_rate_sample(d.state, t, st.ft.level_db, st.event_geom, xi_);
                rec.l_rain_db = rs.l_rain_db;
                rec.rate_mm_per_h = rs.rate_mm_per_h;
                if (!rs.valid) {
                    rec.quality = QualityFlag::kInvalid;
                    ++diag_.invalid_samples;
                } else if (masked) {
                    rec.quality = QualityFlag::kMasked;
                } else if (st.event_degraded) {
                    rec.quality = QualityFlag::kDegraded;
                }
            } else {
                if (masked) {
                    rec.quality = QualityFlag::kMasked;
                } else if (fade_active_) {
                    rec.quality = QualityFlag::kFade;
                }
            }
            st.det = d.state;
            out.estimates.push_back(std::move(rec));
        }
        last_processed_ = t;
        have_processed_ = true;
    }
}

void Engine::finalize(EngineOutputs& out) {
    for (auto& [id, st] : stations_) {
        if (!st.initialized || st.det.phase != DetectorPhase::kRaining) continue;
        RainEvent ev;
        ev.start_time = st.det.event_start_time;
        ev.end_time = st.last_time;
        ev.peak_rate = st.det.peak_rate;
        ev.peak_time = st.det.peak_time;
        ev.cumulative_mm = st.det.cumulative_mm;
        ev.rate_samples = st.det.rate_samples;
        ev.invalid_samples = st.det.invalid_samples;
        EventRecord rec;
        rec.station_id = id;
        rec.event = ev;
        rec.h0_km = st.event_geom.isotherm_height_km;
        rec.degraded = st.event_degraded;
        rec.truncated = true;
        out.events.push_back(std::move(rec));
        st.det = DetectorState{};
        st.st = kf_unfreeze(st.st);
        st.event_geom_valid = false;
    }
}

namespace {

std::string hexd(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%a", v);
    return buf;
}

double parse_hexd(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

void put_tracker(std::ostream& os, const TrackerState& t) {
    os << hexd(t.level_db) << ' ' << hexd(t.drift_db_per_sample) << ' '
       << hexd(t.p00) << ' ' << hexd(t.p01) << ' ' << hexd(t.p11) << ' '
       << t.last_k << ' ' << (t.frozen ? 1 : 0);
}

TrackerState get_tracker(std::istream& is) {
    TrackerState t;
    std::string a, b, c, d, e;
    int frozen = 0;
    is >> a >> b >> c >> d >> e >> t.last_k >> frozen;
    t.level_db = parse_hexd(a);
    t.drift_db_per_sample = parse_hexd(b);
    t.p00 = parse_hexd(c);
    t.p01 = parse_hexd(d);
    t.p11 = parse_hexd(e);
    t.frozen = frozen != 0;
    return t;
}

}  // namespace

void Engine::save_checkpoint(std::ostream& os) const {
    os << "rainlink-checkpoint v1\n";
    os << "clock " << (have_processed_ ? 1 : 0) << ' ' << last_processed_ << ' '
       << (fade_active_ ? 1 : 0) << '\n';
    os << "diag " << diag_.samples_processed << ' ' << diag_.masked_samples
       << ' ' << diag_.fade_suppressed_samples << ' ' << diag_.degraded_events
       << ' ' << diag_.invalid_samples << ' ' << diag_.global_fade_edges << '\n';
    for (const auto& [id, st] : stations_) {
        os << "station " << id << ' ' << (st.initialized ? 1 : 0) << '\n';
        if (!st.initialized) continue;
        os << "st ";
        put_tracker(os, st.st);
        os << "\nft ";
        put_tracker(os, st.ft);
        os << '\n';
        const DetectorState& d = st.det;
        os << "det " << static_cast<int>(d.phase) << ' ' << d.last_k << ' '
           << d.consecutive_above
           << ' ' << d.cand_k << ' ' << d.cand_time << ' ' << hexd(d.cand_ref_db)
           << ' ' << hexd(d.frozen_dry_ref_db) << ' ' << d.event_start_k << ' '
           << d.event_start_time << ' ' << hexd(d.peak_rate) << ' ' << d.peak_time
           << ' ' << hexd(d.cumulative_mm) << ' ' << hexd(d.last_rate) << ' '
           << d.last_rate_time << ' ' << (d.have_last_rate ? 1 : 0) << ' '
           << d.rate_samples << ' ' << d.invalid_samples << '\n';
        os << "mask " << (st.have_held ? 1 : 0) << ' ' << hexd(st.held_value_db)
           << '\n';
        os << "geom " << (st.event_geom_valid ? 1 : 0) << ' '
           << (st.event_degraded ? 1 : 0) << ' '
           << hexd(st.event_geom.isotherm_height_km) << '\n';
        os << "time " << (st.have_last_time ? 1 : 0) << ' ' << st.last_time << '\n';
        os << "ring " << st.recent.size();
        for (const auto& [rt, rv] : st.recent) {
            os << ' ' << rt << ' ' << hexd(rv);
        }
        os << '\n';
    }
    os << "end\n";
}

void Engine::load_checkpoint(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "rainlink-checkpoint v1") {
        throw DataError("checkpoint: bad header");
    }
    std::string tok;
    is >> tok;
    if (tok != "clock") throw DataError("checkpoint: expected clock");
    int have = 0, fade = 0;
    is >> have >> last_processed_ >> fade;
    have_processed_ = have != 0;
    fade_active_ = fade != 0;
    is >> tok;
    if (tok != "diag") throw DataError("checkpoint: expected diag");
    is >> diag_.samples_processed >> diag_.masked_samples >>
        diag_.fade_suppressed_samples >> diag_.degraded_events >>
        diag_.invalid_samples >> diag_.global_fade_edges;
    while (is >> tok && tok == "station") {
        std::string id;
        int init = 0;
        is >> id >> init;
        auto it = stations_.find(id);
        if (it == stations_.end()) {
            throw DataError("checkpoint: unknown station " + id);
        }
        StationState& st = it->second;
        st = StationState{};
        st.initialized = init != 0;
        if (!st.initialized) continue;
        is >> tok;
        if (tok != "st") throw DataError("checkpoint: expected st");
        st.st = get_tracker(is);
        is >> tok;
        if (tok != "ft") throw DataError("checkpoint: expected ft");
        st.ft = get_tracker(is);
        is >> tok;
        if (tok != "det") throw DataError("checkpoint: expected det");
        DetectorState& d = st.det;
        int phase = 0, have_last = 0;
        std::string cref, fref, peak, cum, lastr;
        is >> phase >> d.last_k >> d.consecutive_above >> d.cand_k >> d.cand_time >> cref >>
            fref >> d.event_start_k >> d.event_start_time >> peak >> d.peak_time >>
            cum >> lastr >> d.last_rate_time >> have_last >> d.rate_samples >>
            d.invalid_samples;
        d.phase = static_cast<DetectorPhase>(phase);
        d.cand_ref_db = parse_hexd(cref);
        d.frozen_dry_ref_db = parse_hexd(fref);
        d.peak_rate = parse_hexd(peak);
        d.cumulative_mm = parse_hexd(cum);
        d.last_rate = parse_hexd(lastr);
        d.have_last_rate = have_last != 0;
        is >> tok;
        if (tok != "mask") throw DataError("checkpoint: expected mask");
        int held = 0;
        std::string heldv;
        is >> held >> heldv;
        st.have_held = held != 0;
        st.held_value_db = parse_hexd(heldv);
        is >> tok;
        if (tok != "geom") throw DataError("checkpoint: expected geom");
        int gvalid = 0, gdeg = 0;
        std::string h0s;
        is >> gvalid >> gdeg >> h0s;
        st.event_geom_valid = gvalid != 0;
        st.event_degraded = gdeg != 0;
        if (st.event_geom_valid) {
            st.event_geom = base_geometry(*registry_.find(id), parse_hexd(h0s));
        }
        is >> tok;
        if (tok != "time") throw DataError("checkpoint: expected time");
        int have_time = 0;
        is >> have_time >> st.last_time;
        st.have_last_time = have_time != 0;
        is >> tok;
        if (tok != "ring") throw DataError("checkpoint: expected ring");
        size_t n = 0;
        is >> n;
        st.recent.clear();
        for (size_t i = 0; i < n; ++i) {
            TimePoint rt;
            std::string rv;
            is >> rt >> rv;
            st.recent.emplace_back(rt, parse_hexd(rv));
        }
    }
    if (tok != "end") throw DataError("checkpoint: missing end marker");
}

}  // namespace rainlink
