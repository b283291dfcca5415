#include "rainlink/link_budget.hpp"

#include <cmath>
#include <stdexcept>

namespace rainlink {

void LinkNoiseParams::validate() const {
    if (!(atm_loss >= 1.0)) {
        throw std::invalid_argument("link: atm_loss must be >= 1 (>= 0 dB)");
    }
    if (!(cloud_loss >= 1.0)) {
        throw std::invalid_argument("link: cloud_loss must be >= 1 (>= 0 dB)");
    }
    if (!(t_cosmos >= 0.0) || !(t_meteo >= 0.0) || !(t_ground >= 0.0) ||
        !(t_receiver >= 0.0)) {
        throw std::invalid_argument("link: temperatures must be >= 0 K");
    }
    if (!(t_meteo > t_cosmos)) {
        throw std::invalid_argument("link: t_meteo must exceed t_cosmos");
    }
}

void CarrierParams::validate() const {
    if (!(flux_density > 0) || !(rx_gain > 0) || !(wavelength > 0) ||
        !(symbol_rate > 0) || !(boltzmann > 0)) {
        throw std::invalid_argument("carrier: all parameters must be > 0");
    }
}

double compute_xi(const LinkNoiseParams& p) {
    p.validate();
    return (p.t_meteo - p.t_cosmos) /
           (p.atm_loss * (p.t_meteo + p.t_ground + p.t_receiver));
}

namespace {

// Shared denominator of the dry/wet SNR expressions: the total loss L
// (atmosphere * cloud * rain) times the composite system noise temperature.
double noise_denominator(const LinkNoiseParams& p, double total_loss) {
    return total_loss * (p.t_cosmos / total_loss +
                         p.t_meteo * (1.0 - 1.0 / total_loss) +
                         p.t_ground + p.t_receiver);
}

double carrier_numerator(const CarrierParams& c) {
    return c.flux_density * c.rx_gain * c.wavelength * c.wavelength /
           (4.0 * M_PI * c.symbol_rate * c.boltzmann);
}

}  // namespace

double snr_dry(const CarrierParams& c, const LinkNoiseParams& p) {
    c.validate();
    p.validate();
    return carrier_numerator(c) / noise_denominator(p, p.atm_loss * p.cloud_loss);
}

double snr_wet(const CarrierParams& c, const LinkNoiseParams& p, double l_rain) {
    c.validate();
    p.validate();
    if (!(l_rain >= 1.0)) {
        throw std::invalid_argument("snr_wet: rain attenuation must be >= 1");
    }
    return carrier_numerator(c) /
           noise_denominator(p, p.atm_loss * p.cloud_loss * l_rain);
}

double extract_rain_attenuation(double snr_dry_lin, double snr_wet_lin, double xi) {
    if (!(snr_wet_lin > 0.0)) {
        throw std::domain_error("extract_rain_attenuation: wet SNR must be > 0");
    }
    if (!(snr_dry_lin > 0.0)) {
        throw std::domain_error("extract_rain_attenuation: dry SNR must be > 0");
    }
    if (!(xi > 0.0) || !(xi < 1.0)) {
        throw std::invalid_argument("extract_rain_attenuation: xi must be in (0,1)");
    }
    return (snr_dry_lin / snr_wet_lin) * (1.0 - xi) + xi;
}

}  // namespace rainlink
