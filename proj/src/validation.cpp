#include "rainlink/validation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rainlink {

void TbrgLog::validate() const {
    if (!(tip_resolution_mm > 0.0)) {
        throw std::invalid_argument("tbrg: tip resolution must be > 0");
    }
    for (size_t i = 0; i + 1 < tip_times.size(); ++i) {
        if (tip_times[i + 1] == tip_times[i]) {
            throw std::invalid_argument("tbrg: coincident tips");
        }
        if (tip_times[i + 1] < tip_times[i]) {
            throw std::invalid_argument("tbrg: tips must be ascending");
        }
    }
}

RateSeries tbrg_rate(const TbrgLog& log, std::int64_t gap_timeout_s) {
    log.validate();
    RateSeries out;
    if (log.tip_times.size() < 2) return out;
    for (size_t i = 1; i < log.tip_times.size(); ++i) {
        const TimePoint t0 = log.tip_times[i - 1];
        const TimePoint t1 = log.tip_times[i];
        const std::int64_t gap = t1 - t0;
        if (gap > gap_timeout_s) {
            // Bucket sat dry through the gap; close the previous interval at
            // zero and restart at zero just before the lone tip.
            out.push_back({t0, 0.0});
            out.push_back({t1, 0.0});
            continue;
        }
        const double rate = log.tip_resolution_mm / (static_cast<double>(gap) / 3600.0);
        // Duplicated corners make the stepwise segment trapezoid-exact.
        out.push_back({t0, rate});
        out.push_back({t1, rate});
    }
    return out;
}

RateSeries cumulate(const RateSeries& rates) {
    RateSeries out;
    out.reserve(rates.size());
    double total = 0.0;
    for (size_t i = 0; i < rates.size(); ++i) {
        if (rates[i].rate_mm_per_h < 0.0) {
            throw std::invalid_argument("cumulate: negative rate");
        }
        if (i > 0) {
            if (rates[i].time < rates[i - 1].time) {
                throw std::invalid_argument("cumulate: times must be non-decreasing");
            }
            const double dt_h =
                static_cast<double>(rates[i].time - rates[i - 1].time) / 3600.0;
            total += 0.5 * (rates[i].rate_mm_per_h + rates[i - 1].rate_mm_per_h) * dt_h;
        }
        out.push_back({rates[i].time, total});
    }
    return out;
}

double ground_footprint_km(double h0_km, double elevation_angle_rad) {
    if (!(elevation_angle_rad > 0.0) || !(elevation_angle_rad < M_PI / 2.0)) {
        throw std::invalid_argument("footprint: elevation must be in (0, 90) deg");
    }
    return h0_km / std::tan(elevation_angle_rad);
}

namespace {

// Last value at or before t (step-hold); series non-empty, t >= front.time.
double step_hold(const RateSeries& s, TimePoint t) {
    auto it = std::upper_bound(
        s.begin(), s.end(), t,
        [](TimePoint v, const RatePoint& p) { return v < p.time; });
    return std::prev(it)->rate_mm_per_h;
}

}  // namespace

CompareMetrics compare(const RateSeries& estimate, const RateSeries& reference) {
    if (estimate.empty() || reference.empty()) {
        throw std::invalid_argument("compare: empty series");
    }
    const TimePoint start = std::max(estimate.front().time, reference.front().time);
    const TimePoint stop = std::min(estimate.back().time, reference.back().time);
    if (stop < start) {
        throw std::invalid_argument("compare: disjoint time coverage");
    }
    // 1-minute grid anchored on the first covered minute.
    const TimePoint grid0 = (start + kSamplePeriodS - 1) / kSamplePeriodS * kSamplePeriodS;

    CompareMetrics m;
    double est_peak = 0.0, ref_peak = 0.0;
    TimePoint est_peak_t = grid0, ref_peak_t = grid0;
    double est_sum = 0.0, ref_sum = 0.0, sq = 0.0;
    std::int64_t n = 0;
    for (TimePoint t = grid0; t <= stop; t += kSamplePeriodS) {
        const double e = step_hold(estimate, t);
        const double r = step_hold(reference, t);
        if (e > est_peak) { est_peak = e; est_peak_t = t; }
        if (r > ref_peak) { ref_peak = r; ref_peak_t = t; }
        est_sum += e;
        ref_sum += r;
        sq += (e - r) * (e - r);
        ++n;
    }
    if (n == 0) {
        throw std::invalid_argument("compare: no grid points in common support");
    }
    m.grid_points = n;
    m.peak_time_error_s = static_cast<double>(est_peak_t - ref_peak_t);
    m.peak_rate_ratio = ref_peak > 0.0 ? est_peak / ref_peak : (est_peak > 0.0 ? INFINITY : 1.0);
    m.cumulative_ratio = ref_sum > 0.0 ? est_sum / ref_sum : (est_sum > 0.0 ? INFINITY : 1.0);
    m.rmse_mm_per_h = std::sqrt(sq / static_cast<double>(n));
    return m;
}

}  // namespace rainlink
