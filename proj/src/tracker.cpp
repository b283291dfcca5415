#include "rainlink/tracker.hpp"

#include <cmath>
#include <stdexcept>

namespace rainlink {

void TrackerConfig::validate() const {
    if (!(process_noise_level > 0.0) || !(process_noise_drift > 0.0) ||
        !(measurement_noise > 0.0) || !(initial_cov_level > 0.0) ||
        !(initial_cov_drift > 0.0)) {
        throw std::invalid_argument("tracker: all variances must be > 0");
    }
}

TrackerConfig TrackerConfig::slow_default() {
    TrackerConfig cfg;
    cfg.process_noise_level = 1e-9;
    cfg.process_noise_drift = 1e-8;
    cfg.measurement_noise = 0.02;
    return cfg;
}

TrackerConfig TrackerConfig::fast_default() {
    TrackerConfig cfg;
    cfg.process_noise_level = 6e-4;
    cfg.process_noise_drift = 8e-7;
    cfg.measurement_noise = 0.02;
    return cfg;
}

TrackerState kf_init(double first_sample_db, const TrackerConfig& cfg) {
    cfg.validate();
    if (!std::isfinite(first_sample_db)) {
        throw std::domain_error("kf_init: non-finite sample");
    }
    TrackerState s;
    s.level_db = first_sample_db;
    s.drift_db_per_sample = 0.0;
    s.p00 = cfg.initial_cov_level;
    s.p01 = 0.0;
    s.p11 = cfg.initial_cov_drift;
    s.last_k = 0;
    s.frozen = false;
    return s;
}

namespace {

// In-place predict with F = [[1,1],[0,1]], Q = diag(q_l, q_d).
void predict(TrackerState& s, const TrackerConfig& cfg) {
    s.level_db += s.drift_db_per_sample;
    const double p00 = s.p00 + 2.0 * s.p01 + s.p11 + cfg.process_noise_level;
    const double p01 = s.p01 + s.p11;
    const double p11 = s.p11 + cfg.process_noise_drift;
    s.p00 = p00;
    s.p01 = p01;
    s.p11 = p11;
}

}  // namespace

TrackerState kf_step(const TrackerState& s, double z_db, const TrackerConfig& cfg) {
    if (!std::isfinite(z_db)) {
        return s;  // caller flags the sample as bad
    }
    TrackerState n = s;
    n.last_k = s.last_k + 1;
    if (s.frozen) {
        return n;
    }
    predict(n, cfg);
    const double innovation = z_db - n.level_db;
    const double gain_denom = n.p00 + cfg.measurement_noise;
    const double k0 = n.p00 / gain_denom;
    const double k1 = n.p01 / gain_denom;
    n.level_db += k0 * innovation;
    n.drift_db_per_sample += k1 * innovation;
    // Joseph-form covariance update keeps the matrix symmetric PSD:
    // P' = (I-KH) P (I-KH)^T + K R K^T with H = [1, 0].
    const double r = cfg.measurement_noise;
    const double a = 1.0 - k0;
    const double m00 = a * n.p00;
    const double m01 = a * n.p01;
    const double m10 = -k1 * n.p00 + n.p01;
    const double m11 = -k1 * n.p01 + n.p11;
    n.p00 = m00 * a + k0 * k0 * r;
    n.p01 = -m00 * k1 + m01 + k0 * k1 * r;
    n.p11 = -m10 * k1 + m11 + k1 * k1 * r;
    return n;
}

TrackerState kf_predict_only(const TrackerState& s, const TrackerConfig& cfg) {
    TrackerState n = s;
    n.last_k = s.last_k + 1;
    if (s.frozen) {
        return n;
    }
    predict(n, cfg);
    return n;
}

TrackerState kf_freeze(const TrackerState& s) {
    TrackerState n = s;
    n.frozen = true;
    return n;
}

TrackerState kf_unfreeze(const TrackerState& s) {
    TrackerState n = s;
    n.frozen = false;
    return n;
}

}  // namespace rainlink
