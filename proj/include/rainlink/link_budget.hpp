#ifndef RAINLINK_LINK_BUDGET_HPP
#define RAINLINK_LINK_BUDGET_HPP

#include "rainlink/units.hpp"

namespace rainlink {

// Noise/loss budget of the downlink. Losses are stored in linear form
// (config files carry them in dB, keys suffixed _db); temperatures in kelvin.
struct LinkNoiseParams {
    double atm_loss = 1.0209394837;   // 0.09 dB gaseous absorption
    double cloud_loss = 1.0;          // default 0 dB, see note below
    double t_cosmos = 2.78;
    double t_meteo = 275.0;
    double t_ground = 45.0;
    double t_receiver = 13.67;

    // Throws std::invalid_argument on violation.
    void validate() const;
};

// Carrier-side quantities of the SNR forward model. All linear/SI.
struct CarrierParams {
    // Flux calibrated so that snr_dry() with the default LinkNoiseParams
    // lands on the 10.428 dB dry mean used by the synthetic generator.
    double flux_density = 1.0781610083e-12;  // W/m^2
    double rx_gain = 4786.300923;            // 36.8 dB, 75 cm dish at Ku
    double wavelength = 0.026425073424;      // m, 11.345 GHz
    double symbol_rate = 27.5e6;             // baud
    double boltzmann = kBoltzmann;

    void validate() const;
};

// Link constant coupling the dry/wet SNR ratio to rain attenuation.
// Pure, deterministic; output in (0, 1).
double compute_xi(const LinkNoiseParams& p);

// Dry-condition SNR (linear). Used by the synthetic generator and tests.
double snr_dry(const CarrierParams& c, const LinkNoiseParams& p);

// Wet-condition SNR (linear) under rain attenuation l_rain >= 1 (linear).
// snr_wet(c, p, 1) == snr_dry(c, p).
double snr_wet(const CarrierParams& c, const LinkNoiseParams& p, double l_rain);

// Recovers the rain attenuation (linear, >= xi) from the dry/wet SNR ratio.
// Inputs are linear ratios; dB conversion happens strictly at I/O boundaries.
// Exact inverse of snr_wet when cloud_loss == 1; approximate otherwise (xi
// deliberately omits cloud loss).
double extract_rain_attenuation(double snr_dry_lin, double snr_wet_lin, double xi);

}  // namespace rainlink

#endif
