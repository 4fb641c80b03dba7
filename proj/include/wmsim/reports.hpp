// reports.hpp
// Grid sweeps, the experiment comparison fit, and their CSV/JSON
// serialization. This is the machinery behind the CLI subcommands; it lives
// in the library so the row-level invariants are unit-testable.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wmsim/monte_carlo.hpp"
#include "wmsim/theory.hpp"

namespace wmsim {

inline constexpr int kSchemaVersion = 1;

// Inclusive numeric range with positive step; a single value is start==stop.
struct Range {
    double start = 0;
    double stop = 0;
    double step = 1;

    static Range single(double v) { return {v, v, 1.0}; }
    std::size_t count() const;
    double at(std::size_t i) const { return start + static_cast<double>(i) * step; }
    void validate(const char* name) const;
};

struct SweepSpec {
    Range phi = Range::single(45.0);
    Range theta = Range::single(0.0);
    Interpretation interpretation = Interpretation::SigmaX;
    double visibility = 1.0;
    bool include_disentangler = false;
};

struct SweepRow {
    double phi = 0;
    double theta = 0;
    double zeta = 0;
    double diff_closed = 0;
    double diff_pipeline = 0;
    double variance = 0;
    double fluctuation = 0;
    double p_postselect = 0;
    std::optional<double> s_corresponding{};  // only for theta < 22.5°
    std::optional<double> gaussian_q{};
    std::optional<double> gaussian_p{};
    double istkh_diff = 0;
    double abs_residual = 0;  // |diff_closed − diff_pipeline|, gated at 1e-12
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<std::string> skipped;  // diagnostics for singular grid points
};

// One row per (φ, θ), φ outer / θ inner, ascending. Singular grid points are
// recorded in `skipped`. Throws SingularPointError if a row fails the
// closed-form-vs-pipeline residual gate.
SweepResult run_sweep(const SweepSpec& spec);

// Fixed CSV header, exactly the SweepRow field names.
extern const char* const kSweepCsvHeader;

std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string sweep_json(const SweepSpec& spec, const SweepResult& result);

// --- experiment comparison ---------------------------------------------------

struct ExperimentRow {
    double theta_deg = 0;
    double measured_diff = 0;
    std::optional<double> measured_error{};
};

struct ComparisonRow {
    double theta_deg = 0;
    double measured_diff = 0;
    std::optional<double> measured_error{};
    double ideal_diff = 0;      // visibility 1
    double predicted_diff = 0;  // v · ideal
    double residual = 0;        // measured − predicted
    double theory_fluctuation = 0;
};

struct FluctuationRatio {
    double theta_deg = 0;       // compared against the reference row
    double reference_theta = 0; // row with the smallest theory Δ
    double theory_ratio = 0;    // Δ(θ)/Δ(ref)
    double measured_ratio = 0;  // err(θ)/err(ref)
};

struct ComparisonReport {
    double weak_value = 0;
    double visibility = 1.0;
    bool visibility_fitted = false;
    std::vector<ComparisonRow> rows;
    std::vector<FluctuationRatio> ratios;  // present when ≥2 rows carry errors
};

// Least-squares fit of the visibility on the rows whose θ is listed in
// fit_thetas (all rows when empty), unless forced_visibility is given.
// At least one row is required.
ComparisonReport compare_experiment(const std::vector<ExperimentRow>& rows, double weak_value,
                                    std::optional<double> forced_visibility = {},
                                    const std::vector<double>& fit_thetas = {});

std::string comparison_json(const ComparisonReport& rep);
std::string comparison_text(const ComparisonReport& rep);

// --- formatting helpers --------------------------------------------------------

// Full-precision (17 significant digits) locale-independent float text.
std::string format_full(double v);

std::string count_result_json(const ShotConfig& sc, const CountResult& res);
std::string shot_noise_json(const ShotNoiseReport& rep);

}  // namespace wmsim
