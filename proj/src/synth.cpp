#include "rainlink/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace rainlink {

namespace {
constexpr double kDiurnalPeriodS = 86400.0;
}

void DrySignalModel::validate() const {
    if (!(scint_std_db >= 0.0) || !(diurnal_amplitude_db >= 0.0)) {
        throw std::invalid_argument(
            "dry model: scintillation std and diurnal amplitude must be >= 0");
    }
}

void ImpairmentSchedule::validate() const {
    for (const auto& t : sun_transits) {
        if (t.duration_s <= 0 || !(t.max_depth_db >= 0.0)) {
            throw std::invalid_argument("impairments: bad sun transit window");
        }
    }
    std::vector<SunTransit> sorted = sun_transits;
    std::sort(sorted.begin(), sorted.end(),
              [](const SunTransit& a, const SunTransit& b) { return a.start < b.start; });
    for (size_t i = 0; i + 1 < sorted.size(); ++i) {
        if (sorted[i + 1].start < sorted[i].start + sorted[i].duration_s) {
            throw std::invalid_argument("impairments: overlapping sun transits");
        }
    }
}

double RainEventSpec::rate_at(TimePoint t) const {
    if (t < start || t >= start + duration_s || duration_s <= 0) return 0.0;
    const double x = static_cast<double>(t - start) / static_cast<double>(duration_s);
    if (shape == EventShape::kTrapezoid) {
        if (x < ramp_up_frac) return peak_rate_mm_per_h * x / ramp_up_frac;
        if (x > 1.0 - ramp_down_frac) {
            return peak_rate_mm_per_h * (1.0 - x) / ramp_down_frac;
        }
        return peak_rate_mm_per_h;
    }
    // Double peak: piecewise-linear M shape, peaks at 20% and 80% of the
    // duration with a saddle at 40% of the peak rate.
    const double kSaddle = 0.4;
    if (x < 0.2) return peak_rate_mm_per_h * x / 0.2;
    if (x < 0.5) return peak_rate_mm_per_h * (1.0 - (1.0 - kSaddle) * (x - 0.2) / 0.3);
    if (x < 0.8) return peak_rate_mm_per_h * (kSaddle + (1.0 - kSaddle) * (x - 0.5) / 0.3);
    return peak_rate_mm_per_h * (1.0 - x) / 0.2;
}

double RainEventSpec::analytic_total_mm() const {
    const double dur_h = static_cast<double>(duration_s) / 3600.0;
    if (shape == EventShape::kTrapezoid) {
        return peak_rate_mm_per_h * dur_h *
               (1.0 - 0.5 * (ramp_up_frac + ramp_down_frac));
    }
    // Triangles at both ends plus two trapezoids joining the peaks to the
    // saddle: area fraction = 0.2 + 0.6*(1+0.4)/2 = 0.62 of peak*duration.
    const double kSaddle = 0.4;
    return peak_rate_mm_per_h * dur_h * (0.2 + 0.6 * (1.0 + kSaddle) / 2.0);
}

void RainScenario::validate() const {
    for (const auto& e : events) {
        if (!(e.peak_rate_mm_per_h >= 0.0)) {
            throw std::invalid_argument("scenario: rates must be >= 0");
        }
        if (e.duration_s < 0) {
            throw std::invalid_argument("scenario: negative duration");
        }
        if (e.shape == EventShape::kTrapezoid &&
            (!(e.ramp_up_frac > 0.0) || !(e.ramp_down_frac > 0.0) ||
             e.ramp_up_frac + e.ramp_down_frac > 1.0)) {
            throw std::invalid_argument("scenario: bad trapezoid ramp fractions");
        }
    }
    for (size_t i = 0; i + 1 < events.size(); ++i) {
        if (events[i + 1].start < events[i].start + events[i].duration_s) {
            throw std::invalid_argument("scenario: overlapping events");
        }
    }
}

double RainScenario::rate_at(TimePoint t) const {
    for (const auto& e : events) {
        if (t >= e.start && t < e.start + e.duration_s) return e.rate_at(t);
    }
    return 0.0;
}

double RainScenario::analytic_total_mm() const {
    double total = 0.0;
    for (const auto& e : events) total += e.analytic_total_mm();
    return total;
}

double quantize_db(double v) { return std::round(v / kQuantizationDb) * kQuantizationDb; }

DryParts make_dry_parts(const DrySignalModel& model, std::int64_t n_samples,
                        TimePoint start, std::uint64_t seed) {
    model.validate();
    if (n_samples < 0) {
        throw std::invalid_argument("make_dry_parts: negative sample count");
    }
    DryParts parts;
    parts.start = start;
    parts.clean_db.resize(static_cast<size_t>(n_samples));
    parts.noise_db.resize(static_cast<size_t>(n_samples));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::int64_t k = 0; k < n_samples; ++k) {
        const double t_s = static_cast<double>(k) * kSamplePeriodS;
        const double diurnal =
            model.diurnal_amplitude_db *
            std::sin(2.0 * M_PI * t_s / kDiurnalPeriodS + model.diurnal_phase_rad);
        const double drift = model.drift_db_per_day * t_s / 86400.0;
        parts.clean_db[static_cast<size_t>(k)] = model.mean_snr_db + diurnal + drift;
        parts.noise_db[static_cast<size_t>(k)] =
            model.scint_std_db > 0.0 ? model.scint_std_db * gauss(rng) : 0.0;
    }
    return parts;
}

std::vector<SnrSample> gen_dry(const DrySignalModel& model, std::int64_t n_samples,
                               TimePoint start, std::uint64_t seed) {
    DryParts parts = make_dry_parts(model, n_samples, start, seed);
    std::vector<SnrSample> out(parts.clean_db.size());
    for (size_t k = 0; k < out.size(); ++k) {
        out[k].time = start + static_cast<TimePoint>(k) * kSamplePeriodS;
        out[k].esn0_db = quantize_db(parts.clean_db[k] + parts.noise_db[k]);
    }
    return out;
}

std::vector<TruthSample> inject_rain(DryParts& parts, const RainScenario& scenario,
                                     const RainPathGeometry& geometry,
                                     const LinkNoiseParams& link,
                                     const CarrierParams& carrier) {
    scenario.validate();
    geometry.validate();
    const double dry_lin = snr_dry(carrier, link);
    std::vector<TruthSample> truth(parts.clean_db.size());
    for (size_t k = 0; k < parts.clean_db.size(); ++k) {
        const TimePoint t = parts.start + static_cast<TimePoint>(k) * kSamplePeriodS;
        truth[k].time = t;
        const double rate = scenario.rate_at(t);
        truth[k].rate_mm_per_h = rate;
        if (rate <= 0.0) continue;
        const double l_rain_db = total_attenuation_db(rate, geometry);
        truth[k].l_rain_db = l_rain_db;
        // The diurnal wander multiplies the received flux, so rain shifts the
        // clean SNR by the dry/wet ratio of the forward model.
        const double wet_lin = snr_wet(carrier, link, db_to_linear(l_rain_db));
        parts.clean_db[k] -= linear_to_db(dry_lin / wet_lin);
    }
    return truth;
}

namespace {

double transit_notch_db(const SunTransit& tr, TimePoint t) {
    if (t < tr.start || t >= tr.start + tr.duration_s) return 0.0;
    const double x =
        static_cast<double>(t - tr.start) / static_cast<double>(tr.duration_s);
    return tr.max_depth_db * (1.0 - std::fabs(2.0 * x - 1.0));
}

}  // namespace

void apply_impairments(std::vector<double>& values_db, TimePoint start,
                       const ImpairmentSchedule& schedule) {
    schedule.validate();
    for (size_t k = 0; k < values_db.size(); ++k) {
        const TimePoint t = start + static_cast<TimePoint>(k) * kSamplePeriodS;
        for (const auto& tr : schedule.sun_transits) {
            values_db[k] -= transit_notch_db(tr, t);
        }
        for (const auto& gs : schedule.gain_steps) {
            if (t >= gs.time) values_db[k] += gs.delta_db;
        }
    }
}

std::vector<SnrSample> apply_impairments(const std::vector<SnrSample>& samples,
                                         const ImpairmentSchedule& schedule) {
    schedule.validate();
    std::vector<SnrSample> out = samples;
    for (auto& s : out) {
        double v = s.esn0_db;
        for (const auto& tr : schedule.sun_transits) v -= transit_notch_db(tr, s.time);
        for (const auto& gs : schedule.gain_steps) {
            if (s.time >= gs.time) v += gs.delta_db;
        }
        s.esn0_db = quantize_db(v);
    }
    return out;
}

StationSynthesis simulate_station(const DrySignalModel& model,
                                  const RainScenario& scenario,
                                  const ImpairmentSchedule& schedule,
                                  const RainPathGeometry& geometry,
                                  const LinkNoiseParams& link,
                                  const CarrierParams& carrier,
                                  std::int64_t n_samples, TimePoint start,
                                  std::uint64_t seed) {
    StationSynthesis out;
    DryParts parts = make_dry_parts(model, n_samples, start, seed);
    out.truth = inject_rain(parts, scenario, geometry, link, carrier);
    apply_impairments(parts.clean_db, start, schedule);
    out.samples.resize(parts.clean_db.size());
    for (size_t k = 0; k < parts.clean_db.size(); ++k) {
        out.samples[k].time = start + static_cast<TimePoint>(k) * kSamplePeriodS;
        out.samples[k].esn0_db = quantize_db(parts.clean_db[k] + parts.noise_db[k]);
    }
    return out;
}

std::uint64_t station_seed(std::uint64_t run_seed, const std::string& station_id) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : station_id) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h ^ run_seed;
}

}  // namespace rainlink
