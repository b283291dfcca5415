#ifndef RAINLINK_TRACKER_HPP
#define RAINLINK_TRACKER_HPP

#include <cstdint>

namespace rainlink {

// Noise tuning of a two-state (level + drift) Kalman tracker operating on the
// 1-minute dB sample grid. Two instances run per station: a slow tracker (ST)
// following the diurnal dry baseline, and a fast tracker (FT) following rain
// dynamics while smoothing scintillation.
struct TrackerConfig {
    double process_noise_level = 0.0;  // dB^2 per sample
    double process_noise_drift = 0.0;  // (dB/sample)^2 per sample
    double measurement_noise = 0.0;    // dB^2
    double initial_cov_level = 1.0;    // dB^2
    double initial_cov_drift = 0.01;   // (dB/sample)^2

    void validate() const;

    // Pinned defaults from tuning bring-up (see docs/tracker_tuning.md).
    // Measurement noise 0.02 dB^2 covers scintillation (0.139 dB) plus
    // 0.1 dB quantization (0.1^2/12).
    static TrackerConfig slow_default();  // steady gains ~(0.037, 0.0007)
    static TrackerConfig fast_default();  // steady gains ~(0.186, 0.0057)
};

// Value-type filter state; steps are pure state -> state transitions.
struct TrackerState {
    double level_db = 0.0;
    double drift_db_per_sample = 0.0;
    // Symmetric 2x2 estimate covariance.
    double p00 = 0.0;
    double p01 = 0.0;
    double p11 = 0.0;
    std::int64_t last_k = 0;  // samples processed (including predict-only)
    bool frozen = false;
};

// level = first sample, drift = 0, covariance = configured initial matrix.
// Throws std::domain_error on non-finite input.
TrackerState kf_init(double first_sample_db, const TrackerConfig& cfg);

// Predict (constant-drift transition) then correct (scalar innovation on the
// level). A non-finite measurement leaves the state unchanged; callers flag
// the sample. Frozen states ignore measurements entirely.
TrackerState kf_step(const TrackerState& s, double z_db, const TrackerConfig& cfg);

// Covariance-growing predict without a measurement (used for sample gaps).
// Frozen states hold still.
TrackerState kf_predict_only(const TrackerState& s, const TrackerConfig& cfg);

// Freezing pins level, drift propagation and covariance until unfrozen.
TrackerState kf_freeze(const TrackerState& s);
TrackerState kf_unfreeze(const TrackerState& s);

}  // namespace rainlink

#endif
