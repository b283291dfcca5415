#ifndef RAINLINK_RAIN_MODEL_HPP
#define RAINLINK_RAIN_MODEL_HPP

#include <span>
#include <vector>

namespace rainlink {

// Specific-attenuation power law k = alpha * R^beta, in dB/km with R in mm/h.
struct PowerLawCoeffs {
    double alpha = 0.0;
    double beta = 0.0;

    void validate() const;
};

// Defaults for the 11.345 GHz forward link.
PowerLawCoeffs default_melting_layer_coeffs();  // alpha 0.0914, beta 1.1068
PowerLawCoeffs default_liquid_layer_coeffs();   // alpha 0.0153, beta 1.2531

// Slant-path geometry of the two-layer (melting + liquid) rain model.
// Vertical coordinate h runs downward from the 0 degC isotherm: h = 0 at the
// isotherm, h = isotherm_height_km at the station.
struct RainPathGeometry {
    double elevation_angle_rad = 0.0;
    double isotherm_height_km = 0.0;   // h0: isotherm height above the station
    double melting_thickness_km = 0.0; // vertical extent of the melting layer
    PowerLawCoeffs ml = default_melting_layer_coeffs();
    PowerLawCoeffs ll = default_liquid_layer_coeffs();

    // Enforces 5 deg <= elevation < 90 deg, h0 > 0, 0 < melting < h0.
    void validate() const;
};

// Liquid rain rate at height h: linear ramp through the melting layer,
// constant (ground rate) below it. Throws if h is outside [0, h0].
double rate_at_height(double h_km, double ground_rate, const RainPathGeometry& g);

// Closed-form slant-path attenuation of each layer, and their sum, in dB.
double ml_attenuation_db(double ground_rate, const RainPathGeometry& g);
double ll_attenuation_db(double ground_rate, const RainPathGeometry& g);
double total_attenuation_db(double ground_rate, const RainPathGeometry& g);

// Numeric inversion of total_attenuation_db: rain rate (mm/h) whose modeled
// attenuation matches l_rain_db to within 1e-9 dB. Bisection over
// [0, 500 mm/h]; the attenuation is strictly increasing in the rate.
double invert_to_rain_rate(double l_rain_db, const RainPathGeometry& g);

struct CurvePoint {
    double snr_drop_db;
    double rate_mm_per_h;
};

// Maps each SNR drop (dB, >= 0) to a rain rate: drop -> linear ratio ->
// rain attenuation via xi -> rate via inversion. Monotone increasing.
std::vector<CurvePoint> characteristic_curve(const RainPathGeometry& g, double xi,
                                             std::span<const double> snr_drop_grid_db);

}  // namespace rainlink

#endif
