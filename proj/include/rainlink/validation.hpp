#ifndef RAINLINK_VALIDATION_HPP
#define RAINLINK_VALIDATION_HPP

#include <vector>

#include "rainlink/units.hpp"

namespace rainlink {

struct RatePoint {
    TimePoint time = 0;
    double rate_mm_per_h = 0.0;
};

// Point series with non-decreasing times. Stepwise series carry duplicated
// corner points so that trapezoidal integration reproduces rectangles exactly.
using RateSeries = std::vector<RatePoint>;

// Tipping-bucket rain gauge log: tip resolution (mm per tip) and the
// ascending tip instants.
struct TbrgLog {
    double tip_resolution_mm = 0.2;
    std::vector<TimePoint> tip_times;

    void validate() const;  // strictly ascending, resolution > 0
};

// Stepwise punctual rate: on (t_{i-1}, t_i] the rate is resolution / gap.
// Gaps longer than the timeout are treated as dry (zero rate in between).
// Fewer than two tips yield an empty series. Coincident tips are an error.
RateSeries tbrg_rate(const TbrgLog& log, std::int64_t gap_timeout_s = 3600);

// Trapezoidal time integral; returns the running cumulative (mm) at each
// input point. Rejects negative rates.
RateSeries cumulate(const RateSeries& rates);

// Horizontal ground projection of the slanted wet path: h0 / tan(theta).
double ground_footprint_km(double h0_km, double elevation_angle_rad);

struct CompareMetrics {
    double peak_time_error_s = 0.0;  // t_peak(estimate) - t_peak(reference)
    double peak_rate_ratio = 1.0;    // max(estimate) / max(reference)
    double cumulative_ratio = 1.0;
    double rmse_mm_per_h = 0.0;
    std::int64_t grid_points = 0;
};

// Descriptive agreement metrics between an estimated rate series and a
// reference one, computed on the common time support after resampling both
// to the 1-minute grid (step-hold). Throws on disjoint coverage.
CompareMetrics compare(const RateSeries& estimate, const RateSeries& reference);

}  // namespace rainlink

#endif
