#ifndef RAINLINK_UNITS_HPP
#define RAINLINK_UNITS_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace rainlink {

// Boltzmann constant, J/K (exact SI value).
inline constexpr double kBoltzmann = 1.380649e-23;

// Sampling grid of the SNR telemetry: one sample per minute.
inline constexpr std::int64_t kSamplePeriodS = 60;

// dB convention used everywhere in this project: x_dB = 10*log10(x_lin).
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

inline double deg_to_rad(double deg) { return deg * M_PI / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / M_PI; }

// Gaussian upper-tail probability Q(x) = P(N(0,1) > x).
inline double gaussian_upper_tail(double x) {
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

// Timestamps are UTC seconds since the Unix epoch. All interchange formats
// carry them as ISO-8601 "YYYY-MM-DDThh:mm:ssZ".
using TimePoint = std::int64_t;

std::optional<TimePoint> parse_iso8601(std::string_view text);
std::string format_iso8601(TimePoint t);

}  // namespace rainlink

#endif
