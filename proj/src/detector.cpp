#include "rainlink/detector.hpp"

#include <cmath>
#include <stdexcept>

#include "rainlink/link_budget.hpp"

namespace rainlink {

void DetectorConfig::validate() const {
    if (!(start_threshold_db > end_threshold_db) || !(end_threshold_db > 0.0)) {
        throw std::invalid_argument(
            "detector: need start_threshold > end_threshold > 0");
    }
    if (min_event_samples < 1) {
        throw std::invalid_argument("detector: min_event_samples must be >= 1");
    }
}

namespace {

void clear_candidate(DetectorState& s) {
    s.consecutive_above = 0;
    s.cand_k = -1;
    s.cand_time = 0;
    s.cand_ref_db = 0.0;
}

void reset_event_accumulators(DetectorState& s) {
    s.peak_rate = 0.0;
    s.peak_time = 0;
    s.cumulative_mm = 0.0;
    s.last_rate = 0.0;
    s.last_rate_time = 0;
    s.have_last_rate = false;
    s.rate_samples = 0;
    s.invalid_samples = 0;
}

}  // namespace

DetectorStepResult detector_step(const DetectorState& s, TimePoint now,
                                 double eta_st_db, double eta_ft_db,
                                 const DetectorConfig& cfg, bool suppress_starts) {
    if (!std::isfinite(eta_st_db) || !std::isfinite(eta_ft_db)) {
        throw std::domain_error("detector_step: non-finite tracker output");
    }
    DetectorStepResult r;
    r.state = s;
    r.epsilon_db = eta_st_db - eta_ft_db;
    DetectorState& n = r.state;
    n.last_k = s.last_k + 1;

    if (s.phase == DetectorPhase::kDry) {
        if (!suppress_starts && r.epsilon_db >= cfg.start_threshold_db) {
            if (n.consecutive_above == 0) {
                n.cand_k = n.last_k;
                n.cand_time = now;
                n.cand_ref_db = eta_st_db;  // last dry ST output, at t0
            }
            n.consecutive_above += 1;
            if (n.consecutive_above >= cfg.min_event_samples) {
                n.phase = DetectorPhase::kRaining;
                n.frozen_dry_ref_db = n.cand_ref_db;
                n.event_start_time = n.cand_time;
                n.event_start_k = n.cand_k;
                reset_event_accumulators(n);
                r.boundary = EventBoundary{EventBoundary::Kind::kStart, n.cand_time};
                clear_candidate(n);
            }
        } else {
            clear_candidate(n);
        }
    } else {
        if (r.epsilon_db <= cfg.end_threshold_db) {
            RainEvent ev;
            ev.start_time = s.event_start_time;
            ev.end_time = now;
            ev.peak_rate = s.peak_rate;
            ev.peak_time = s.peak_time;
            ev.cumulative_mm = s.cumulative_mm;
            ev.rate_samples = s.rate_samples;
            ev.invalid_samples = s.invalid_samples;
            r.closed_event = ev;
            r.boundary = EventBoundary{EventBoundary::Kind::kEnd, now};
            n.phase = DetectorPhase::kDry;
            clear_candidate(n);
            reset_event_accumulators(n);
            n.event_start_k = -1;
            n.event_start_time = 0;
            n.frozen_dry_ref_db = 0.0;
        }
    }
    r.raining = (n.phase == DetectorPhase::kRaining);
    return r;
}

RateSample rain_rate_sample(DetectorState& s, TimePoint now, double eta_ft_db,
                            const RainPathGeometry& event_geometry, double xi) {
    RateSample out;
    out.time = now;
    out.epsilon_db = s.frozen_dry_ref_db - eta_ft_db;
    out.l_rain_linear = extract_rain_attenuation(
        db_to_linear(s.frozen_dry_ref_db), db_to_linear(eta_ft_db), xi);
    out.l_rain_db = linear_to_db(out.l_rain_linear);
    if (out.l_rain_linear <= 1.0) {
        // FT at or above the frozen dry reference: no measurable attenuation.
        out.rate_mm_per_h = 0.0;
    } else {
        try {
            out.rate_mm_per_h = invert_to_rain_rate(out.l_rain_db, event_geometry);
        } catch (const std::exception&) {
            out.valid = false;
            out.rate_mm_per_h = 0.0;
            s.invalid_samples += 1;
            return out;
        }
    }
    s.rate_samples += 1;
    if (out.rate_mm_per_h > s.peak_rate) {
        s.peak_rate = out.rate_mm_per_h;
        s.peak_time = now;
    }
    if (s.have_last_rate) {
        const double dt_h = static_cast<double>(now - s.last_rate_time) / 3600.0;
        s.cumulative_mm += 0.5 * (s.last_rate + out.rate_mm_per_h) * dt_h;
    }
    s.last_rate = out.rate_mm_per_h;
    s.last_rate_time = now;
    s.have_last_rate = true;
    return out;
}

double false_alarm_probability(double eps_mean_db, double eps_std_db,
                               double threshold_db) {
    if (!(eps_std_db > 0.0)) {
        throw std::invalid_argument("false_alarm_probability: std must be > 0");
    }
    return gaussian_upper_tail((threshold_db - eps_mean_db) / eps_std_db);
}

}  // namespace rainlink
