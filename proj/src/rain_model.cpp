#include "rainlink/rain_model.hpp"

#include <cmath>
#include <stdexcept>

#include "rainlink/link_budget.hpp"
#include "rainlink/units.hpp"

namespace rainlink {

namespace {
constexpr double kMinElevationRad = 5.0 * M_PI / 180.0;
constexpr double kMaxRateMmPerH = 500.0;
constexpr double kInversionTolDb = 1e-9;
}  // namespace

void PowerLawCoeffs::validate() const {
    if (!(alpha > 0.0) || !(beta > 0.0)) {
        throw std::invalid_argument("power law: alpha and beta must be > 0");
    }
}

PowerLawCoeffs default_melting_layer_coeffs() { return {0.0914, 1.1068}; }
PowerLawCoeffs default_liquid_layer_coeffs() { return {0.0153, 1.2531}; }

void RainPathGeometry::validate() const {
    if (!(elevation_angle_rad >= kMinElevationRad) ||
        !(elevation_angle_rad < M_PI / 2.0)) {
        throw std::invalid_argument(
            "geometry: elevation angle must be in [5, 90) degrees");
    }
    if (!(isotherm_height_km > 0.0)) {
        throw std::invalid_argument("geometry: isotherm height must be > 0");
    }
    if (!(melting_thickness_km > 0.0) ||
        !(melting_thickness_km < isotherm_height_km)) {
        throw std::invalid_argument(
            "geometry: melting thickness must satisfy 0 < delta < h0");
    }
    ml.validate();
    ll.validate();
}

double rate_at_height(double h_km, double ground_rate, const RainPathGeometry& g) {
    if (!(h_km >= 0.0) || !(h_km <= g.isotherm_height_km)) {
        throw std::out_of_range("rate_at_height: h outside [0, h0]");
    }
    if (h_km <= g.melting_thickness_km) {
        return ground_rate * h_km / g.melting_thickness_km;
    }
    return ground_rate;
}

double ml_attenuation_db(double ground_rate, const RainPathGeometry& g) {
    if (ground_rate <= 0.0) return 0.0;
    return g.ml.alpha * std::pow(ground_rate, g.ml.beta) * g.melting_thickness_km /
           (std::sin(g.elevation_angle_rad) * (g.ml.beta + 1.0));
}

double ll_attenuation_db(double ground_rate, const RainPathGeometry& g) {
    if (ground_rate <= 0.0) return 0.0;
    return g.ll.alpha * std::pow(ground_rate, g.ll.beta) *
           (g.isotherm_height_km - g.melting_thickness_km) /
           std::sin(g.elevation_angle_rad);
}

double total_attenuation_db(double ground_rate, const RainPathGeometry& g) {
    // Ice-particle layer contribution above the isotherm is negligible and
    // carried as exactly zero.
    return ml_attenuation_db(ground_rate, g) + ll_attenuation_db(ground_rate, g);
}

double invert_to_rain_rate(double l_rain_db, const RainPathGeometry& g) {
    if (!std::isfinite(l_rain_db)) {
        throw std::domain_error("invert_to_rain_rate: non-finite attenuation");
    }
    if (l_rain_db < 0.0) {
        throw std::domain_error("invert_to_rain_rate: negative attenuation");
    }
    if (l_rain_db == 0.0) return 0.0;
    double lo = 0.0, hi = kMaxRateMmPerH;
    if (total_attenuation_db(hi, g) < l_rain_db) {
        throw std::domain_error(
            "invert_to_rain_rate: attenuation above model range (500 mm/h)");
    }
    double mid = 0.0;
    for (int i = 0; i < 200; ++i) {
        mid = 0.5 * (lo + hi);
        const double f = total_attenuation_db(mid, g);
        if (std::fabs(f - l_rain_db) <= kInversionTolDb * 1e-3) break;
        if (f < l_rain_db) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= mid * 1e-15) break;
    }
    return mid;
}

std::vector<CurvePoint> characteristic_curve(const RainPathGeometry& g, double xi,
                                             std::span<const double> snr_drop_grid_db) {
    g.validate();
    std::vector<CurvePoint> table;
    table.reserve(snr_drop_grid_db.size());
    for (double drop_db : snr_drop_grid_db) {
        if (!(drop_db >= 0.0)) {
            throw std::invalid_argument("characteristic_curve: drops must be >= 0");
        }
        const double ratio = db_to_linear(drop_db);
        const double l_rain = ratio * (1.0 - xi) + xi;
        const double l_rain_db = linear_to_db(l_rain);
        table.push_back({drop_db, invert_to_rain_rate(l_rain_db, g)});
    }
    return table;
}

}  // namespace rainlink
