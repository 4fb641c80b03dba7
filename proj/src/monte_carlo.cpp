#include "wmsim/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <vector>

#include "wmsim/rng.hpp"
#include "wmsim/theory.hpp"

namespace wmsim {

namespace {

struct Tally {
    std::uint64_t accepted = 0;
    std::uint64_t b1 = 0;
};

// Draw slots per photon: 0 = post-selection, 1 = output port.
Tally count_range(std::uint64_t seed, std::uint64_t begin, std::uint64_t end, double p_accept,
                  double p_b1) {
    Tally t;
    for (std::uint64_t i = begin; i < end; ++i) {
        if (uniform01(seed, i, 0) >= p_accept) continue;
        ++t.accepted;
        if (uniform01(seed, i, 1) < p_b1) ++t.b1;
    }
    return t;
}

}  // namespace

CountResult simulate_counts(const ShotConfig& sc, unsigned n_workers) {
    if (sc.n_photons == 0) throw std::invalid_argument("simulate_counts: n_photons must be >= 1");

    double p_accept = 0.0;
    double p_b1 = 0.0;
    try {
        const SimulationOutcome out = run_pipeline(sc.cfg);
        p_accept = out.p_postselect;
        p_b1 = out.p_b1;
    } catch (const PostSelectionImpossibleError&) {
        // nothing ever passes the polarizer; report empty counts below
    }

    const unsigned workers =
        std::clamp<unsigned>(n_workers, 1u, 256u);

    Tally total;
    if (workers == 1 || sc.n_photons < 2 * workers) {
        total = count_range(sc.seed, 0, sc.n_photons, p_accept, p_b1);
    } else {
        std::vector<std::future<Tally>> parts;
        parts.reserve(workers);
        const std::uint64_t chunk = sc.n_photons / workers;
        for (unsigned k = 0; k < workers; ++k) {
            const std::uint64_t begin = k * chunk;
            const std::uint64_t end = (k + 1 == workers) ? sc.n_photons : begin + chunk;
            parts.push_back(std::async(std::launch::async, count_range, sc.seed, begin, end,
                                       p_accept, p_b1));
        }
        for (auto& f : parts) {
            const Tally t = f.get();
            total.accepted += t.accepted;
            total.b1 += t.b1;
        }
    }

    CountResult res;
    res.seed = sc.seed;
    res.n_postselected = total.accepted;
    res.n_b1 = total.b1;
    res.n_b2 = total.accepted - total.b1;
    if (total.accepted > 0) {
        res.estimate = (static_cast<double>(res.n_b1) - static_cast<double>(res.n_b2)) /
                       static_cast<double>(res.n_postselected);
        const double var = std::max(0.0, 1.0 - res.estimate * res.estimate);
        res.stderr_ = std::sqrt(var / static_cast<double>(res.n_postselected));
        res.estimate_defined = true;
    }
    return res;
}

ShotNoiseReport shot_noise_validation(double phi_deg, double theta_deg, std::uint64_t n_photons,
                                      unsigned n_trials, std::uint64_t seed,
                                      Interpretation interpretation, unsigned n_workers) {
    if (n_trials < 30)
        throw std::invalid_argument("shot_noise_validation: need at least 30 trials");

    ShotNoiseReport rep;
    rep.phi_deg = phi_deg;
    rep.theta_deg = theta_deg;
    rep.interpretation = interpretation;
    rep.n_photons = n_photons;
    rep.n_trials = n_trials;

    InterferometerConfig cfg;
    cfg.prep.phi_deg = phi_deg;
    cfg.hwp.theta_deg = theta_deg;
    cfg.hwp.interpretation = interpretation;
    rep.true_diff = run_pipeline(cfg).diff;

    const Cplx w1 = interpretation_weak_value(phi_deg, interpretation);
    rep.predicted_fluctuation =
        fluctuation(theta_deg, effective_weak_value_real(w1, interpretation));

    std::vector<double> estimates;
    estimates.reserve(n_trials);
    double sum_n_ps = 0.0;
    for (unsigned t = 0; t < n_trials; ++t) {
        ShotConfig sc{n_photons, derive_stream(seed, t), cfg};
        const CountResult res = simulate_counts(sc, n_workers);
        if (!res.estimate_defined)
            throw PostSelectionImpossibleError(
                "shot_noise_validation: a trial produced no post-selected photons");
        estimates.push_back(res.estimate);
        sum_n_ps += static_cast<double>(res.n_postselected);
    }

    double mean = 0.0;
    for (double e : estimates) mean += e;
    mean /= estimates.size();
    double ssq = 0.0;
    for (double e : estimates) ssq += (e - mean) * (e - mean);
    const double stddev = std::sqrt(ssq / (estimates.size() - 1));

    rep.mean_estimate = mean;
    rep.mean_n_postselected = sum_n_ps / n_trials;
    rep.empirical_stddev = stddev;
    rep.degenerate = rep.predicted_fluctuation < 1e-9;
    rep.predicted_stddev = rep.predicted_fluctuation / std::sqrt(rep.mean_n_postselected);
    rep.empirical_fluctuation = stddev * std::sqrt(rep.mean_n_postselected);
    rep.stddev_ratio = rep.degenerate ? 0.0 : rep.empirical_stddev / rep.predicted_stddev;
    return rep;
}

}  // namespace wmsim
