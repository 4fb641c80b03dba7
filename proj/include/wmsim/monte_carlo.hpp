// monte_carlo.hpp
// Photon-counting emulation: per-photon Bernoulli sampling of post-selection
// and which-path detection, binomial estimators of P(b1)−P(b2), and the
// shot-noise validation that ties the estimator spread to the quantum
// fluctuation Δ.

#pragma once

#include <cstdint>

#include "wmsim/optics.hpp"

namespace wmsim {

struct ShotConfig {
    std::uint64_t n_photons = 0;
    std::uint64_t seed = 0;
    InterferometerConfig cfg{};
};

struct CountResult {
    std::uint64_t n_postselected = 0;
    std::uint64_t n_b1 = 0;
    std::uint64_t n_b2 = 0;
    double estimate = 0;  // (n_b1 − n_b2) / n_postselected
    double stderr_ = 0;   // √((1 − estimate²)/n_postselected), 0 at estimate ±1
    bool estimate_defined = false;
    std::uint64_t seed = 0;
};

// Samples n_photons events: accept with probability p_postselect, route
// accepted photons to b1 with probability p_b1 (both from run_pipeline).
// Bit-identical for any n_workers. A vanishing post-selection probability
// yields n_postselected = 0 with estimate_defined = false, not an error.
CountResult simulate_counts(const ShotConfig& sc, unsigned n_workers = 1);

struct ShotNoiseReport {
    double phi_deg = 0;
    double theta_deg = 0;
    Interpretation interpretation = Interpretation::SigmaY;
    std::uint64_t n_photons = 0;
    unsigned n_trials = 0;
    double true_diff = 0;                // pipeline value
    double predicted_fluctuation = 0;    // theory Δ
    double mean_estimate = 0;
    double mean_n_postselected = 0;
    double empirical_stddev = 0;         // of the per-trial estimates
    double predicted_stddev = 0;         // Δ / √(mean n_postselected)
    double empirical_fluctuation = 0;    // empirical_stddev · √(mean n_postselected)
    double stddev_ratio = 0;             // empirical / predicted (0 when degenerate)
    bool degenerate = false;             // predicted Δ ≈ 0: gate stddev ≤ 1e-6 instead
};

// Runs n_trials independent counting experiments on decorrelated seed streams
// and compares the estimator spread with Δ/√(mean n_postselected).
// Requires n_trials ≥ 30.
ShotNoiseReport shot_noise_validation(double phi_deg, double theta_deg, std::uint64_t n_photons,
                                      unsigned n_trials, std::uint64_t seed,
                                      Interpretation interpretation = Interpretation::SigmaY,
                                      unsigned n_workers = 1);

}  // namespace wmsim
