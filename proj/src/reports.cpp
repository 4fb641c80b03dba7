#include "wmsim/reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace wmsim {

using nlohmann::json;

std::size_t Range::count() const {
    if (step <= 0.0) return 0;
    if (stop < start) return 0;
    // small slack so 0..22 by 0.5 lands exactly on 45 points
    return static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
}

void Range::validate(const char* name) const {
    if (!(step > 0.0))
        throw std::invalid_argument(std::string(name) + ": step must be positive");
    if (stop < start)
        throw std::invalid_argument(std::string(name) + ": empty range (stop < start)");
}

std::string format_full(double v) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

json range_json(const Range& r) {
    return json{{"start", r.start}, {"stop", r.stop}, {"step", r.step}};
}

json optional_json(const std::optional<double>& v) {
    if (v) return *v;
    return nullptr;
}

std::string optional_csv(const std::optional<double>& v) {
    return v ? format_full(*v) : std::string{};
}

json envelope(const char* command, json params, json rows) {
    return json{{"schema_version", kSchemaVersion},
                {"command", command},
                {"params", std::move(params)},
                {"rows", std::move(rows)}};
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
    spec.phi.validate("phi");
    spec.theta.validate("theta");
    if (spec.visibility < 0.0 || spec.visibility > 1.0)
        throw std::invalid_argument("sweep: visibility must lie in [0, 1]");

    SweepResult result;
    result.rows.reserve(spec.phi.count() * spec.theta.count());

    for (std::size_t i = 0; i < spec.phi.count(); ++i) {
        const double phi = spec.phi.at(i);
        for (std::size_t j = 0; j < spec.theta.count(); ++j) {
            const double theta = spec.theta.at(j);
            InterferometerConfig cfg;
            cfg.prep.phi_deg = phi;
            cfg.hwp.theta_deg = theta;
            cfg.hwp.interpretation = spec.interpretation;
            cfg.include_disentangler = spec.include_disentangler;
            cfg.visibility = spec.visibility;

            SweepRow row;
            row.phi = phi;
            row.theta = theta;
            try {
                const Cplx w1 = interpretation_weak_value(phi, spec.interpretation);
                row.zeta = effective_zeta(theta, w1, spec.interpretation);
                row.diff_closed =
                    visibility_adjusted_diff(theta, w1, spec.visibility, spec.interpretation);

                const SimulationOutcome out = run_pipeline(cfg);
                row.diff_pipeline = out.diff;
                row.variance = out.variance;
                row.fluctuation = out.fluctuation;
                row.p_postselect = out.p_postselect;

                if (theta >= 0.0 && theta < 22.5) {
                    const double s = strength_correspondence(theta);
                    row.s_corresponding = s;
                    row.gaussian_q = gaussian_pointer_q({s, w1});
                    row.gaussian_p = gaussian_pointer_p({s, w1});
                }
                const Cplx w_conv = conventional_weak_value(
                    {Cplx{cfg.prep.c_h(), 0}, Cplx{cfg.prep.c_v(), 0}}, PolState::horizontal(),
                    pauli_x());
                row.istkh_diff = istkh_form(theta, w_conv);
            } catch (const UndefinedWeakValueError& e) {
                result.skipped.push_back("phi=" + format_full(phi) + " theta=" +
                                         format_full(theta) + ": " + e.what());
                continue;
            } catch (const SingularPointError& e) {
                result.skipped.push_back("phi=" + format_full(phi) + " theta=" +
                                         format_full(theta) + ": " + e.what());
                continue;
            } catch (const PostSelectionImpossibleError& e) {
                result.skipped.push_back("phi=" + format_full(phi) + " theta=" +
                                         format_full(theta) + ": " + e.what());
                continue;
            }

            row.abs_residual = std::abs(row.diff_closed - row.diff_pipeline);
            if (row.abs_residual > kExactTol)
                throw SingularPointError(
                    "sweep: closed form and pipeline disagree at phi=" + format_full(phi) +
                    " theta=" + format_full(theta) + " (residual " +
                    format_full(row.abs_residual) + ")");
            result.rows.push_back(row);
        }
    }
    return result;
}

const char* const kSweepCsvHeader =
    "phi,theta,zeta,diff_closed,diff_pipeline,variance,fluctuation,p_postselect,"
    "s_corresponding,gaussian_q,gaussian_p,istkh_diff,abs_residual";

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << kSweepCsvHeader << '\n';
    for (const auto& r : rows) {
        out << format_full(r.phi) << ',' << format_full(r.theta) << ',' << format_full(r.zeta)
            << ',' << format_full(r.diff_closed) << ',' << format_full(r.diff_pipeline) << ','
            << format_full(r.variance) << ',' << format_full(r.fluctuation) << ','
            << format_full(r.p_postselect) << ',' << optional_csv(r.s_corresponding) << ','
            << optional_csv(r.gaussian_q) << ',' << optional_csv(r.gaussian_p) << ','
            << format_full(r.istkh_diff) << ',' << format_full(r.abs_residual) << '\n';
    }
    return out.str();
}

namespace {

json sweep_row_json(const SweepRow& r) {
    return json{{"phi", r.phi},
                {"theta", r.theta},
                {"zeta", r.zeta},
                {"diff_closed", r.diff_closed},
                {"diff_pipeline", r.diff_pipeline},
                {"variance", r.variance},
                {"fluctuation", r.fluctuation},
                {"p_postselect", r.p_postselect},
                {"s_corresponding", optional_json(r.s_corresponding)},
                {"gaussian_q", optional_json(r.gaussian_q)},
                {"gaussian_p", optional_json(r.gaussian_p)},
                {"istkh_diff", r.istkh_diff},
                {"abs_residual", r.abs_residual}};
}

}  // namespace

std::string sweep_json(const SweepSpec& spec, const SweepResult& result) {
    json rows = json::array();
    for (const auto& r : result.rows) rows.push_back(sweep_row_json(r));
    json params{{"phi", range_json(spec.phi)},
                {"theta", range_json(spec.theta)},
                {"interpretation", to_string(spec.interpretation)},
                {"visibility", spec.visibility},
                {"disentangler", spec.include_disentangler}};
    json env = envelope("sweep", std::move(params), std::move(rows));
    env["skipped"] = result.skipped;
    return env.dump(2) + "\n";
}

ComparisonReport compare_experiment(const std::vector<ExperimentRow>& rows, double weak_value,
                                    std::optional<double> forced_visibility,
                                    const std::vector<double>& fit_thetas) {
    if (rows.empty())
        throw std::invalid_argument("compare_experiment: at least one data row is required");
    if (std::abs(weak_value) <= kOverlapFloor)
        throw std::invalid_argument("compare_experiment: weak value must be nonzero");

    ComparisonReport rep;
    rep.weak_value = weak_value;

    std::vector<double> ideal(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        ideal[i] = prob_difference(rows[i].theta_deg, Cplx{weak_value, 0.0},
                                   Interpretation::SigmaX);

    if (forced_visibility) {
        if (*forced_visibility < 0.0 || *forced_visibility > 1.0)
            throw std::invalid_argument("compare_experiment: visibility must lie in [0, 1]");
        rep.visibility = *forced_visibility;
    } else {
        const auto in_fit_set = [&](double theta) {
            if (fit_thetas.empty()) return true;
            return std::any_of(fit_thetas.begin(), fit_thetas.end(),
                               [&](double t) { return std::abs(t - theta) <= 1e-9; });
        };
        double num = 0.0;
        double den = 0.0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (!in_fit_set(rows[i].theta_deg)) continue;
            num += rows[i].measured_diff * ideal[i];
            den += ideal[i] * ideal[i];
        }
        if (den <= kOverlapFloor)
            throw SingularPointError(
                "compare_experiment: fit rows carry no ideal signal (all sin4θ = 0?)");
        rep.visibility = num / den;
        rep.visibility_fitted = true;
    }

    for (std::size_t i = 0; i < rows.size(); ++i) {
        ComparisonRow c;
        c.theta_deg = rows[i].theta_deg;
        c.measured_diff = rows[i].measured_diff;
        c.measured_error = rows[i].measured_error;
        c.ideal_diff = ideal[i];
        c.predicted_diff = rep.visibility * ideal[i];
        c.residual = c.measured_diff - c.predicted_diff;
        c.theory_fluctuation = fluctuation(rows[i].theta_deg, weak_value);
        rep.rows.push_back(c);
    }

    // fluctuation-ratio block against the row with the smallest theory Δ
    std::vector<std::size_t> with_err;
    for (std::size_t i = 0; i < rep.rows.size(); ++i)
        if (rep.rows[i].measured_error) with_err.push_back(i);
    if (with_err.size() >= 2) {
        const auto ref = *std::min_element(
            with_err.begin(), with_err.end(), [&](std::size_t a, std::size_t b) {
                return rep.rows[a].theory_fluctuation < rep.rows[b].theory_fluctuation;
            });
        const double ref_fluct = rep.rows[ref].theory_fluctuation;
        const double ref_err = *rep.rows[ref].measured_error;
        for (std::size_t i : with_err) {
            if (i == ref) continue;
            FluctuationRatio r;
            r.theta_deg = rep.rows[i].theta_deg;
            r.reference_theta = rep.rows[ref].theta_deg;
            r.theory_ratio = ref_fluct > 0 ? rep.rows[i].theory_fluctuation / ref_fluct : 0.0;
            r.measured_ratio = ref_err > 0 ? *rep.rows[i].measured_error / ref_err : 0.0;
            rep.ratios.push_back(r);
        }
    }
    return rep;
}

std::string comparison_json(const ComparisonReport& rep) {
    json rows = json::array();
    for (const auto& r : rep.rows) {
        rows.push_back(json{{"theta", r.theta_deg},
                            {"measured_diff", r.measured_diff},
                            {"measured_error", optional_json(r.measured_error)},
                            {"ideal_diff", r.ideal_diff},
                            {"predicted_diff", r.predicted_diff},
                            {"residual", r.residual},
                            {"theory_fluctuation", r.theory_fluctuation}});
    }
    json params{{"weak_value", rep.weak_value},
                {"visibility", rep.visibility},
                {"visibility_fitted", rep.visibility_fitted}};
    json env = envelope("compare-experiment", std::move(params), std::move(rows));
    if (!rep.ratios.empty()) {
        json ratios = json::array();
        for (const auto& r : rep.ratios) {
            ratios.push_back(json{{"theta", r.theta_deg},
                                  {"reference_theta", r.reference_theta},
                                  {"theory_fluctuation_ratio", r.theory_ratio},
                                  {"measured_error_ratio", r.measured_ratio}});
        }
        env["fluctuation_ratios"] = std::move(ratios);
        env["note"] =
            "Theory ratios compare pure quantum fluctuations; measured errors also "
            "contain other noise sources (shot noise, setup imperfections), so the "
            "measured ratio is expected to be smaller.";
    }
    return env.dump(2) + "\n";
}

std::string comparison_text(const ComparisonReport& rep) {
    std::ostringstream out;
    out << "visibility " << (rep.visibility_fitted ? "(fitted) = " : "(forced) = ")
        << format_full(rep.visibility) << ", weak value = " << format_full(rep.weak_value)
        << "\n";
    out << "theta      measured     ideal        predicted    residual     theory_fluct\n";
    char buf[160];
    for (const auto& r : rep.rows) {
        std::snprintf(buf, sizeof(buf), "%-10.4g %-12.6g %-12.6g %-12.6g %-12.4g %-12.6g\n",
                      r.theta_deg, r.measured_diff, r.ideal_diff, r.predicted_diff, r.residual,
                      r.theory_fluctuation);
        out << buf;
    }
    for (const auto& r : rep.ratios) {
        std::snprintf(buf, sizeof(buf),
                      "fluctuation ratio theta %.4g vs %.4g: theory %.4g, measured errors %.4g\n",
                      r.theta_deg, r.reference_theta, r.theory_ratio, r.measured_ratio);
        out << buf;
    }
    if (!rep.ratios.empty())
        out << "note: theory ratios compare pure quantum fluctuations; measured errors also\n"
               "contain other noise sources (shot noise, setup imperfections), so the\n"
               "measured ratio is expected to be smaller.\n";
    return out.str();
}

std::string count_result_json(const ShotConfig& sc, const CountResult& res) {
    json params{{"phi", sc.cfg.prep.phi_deg},
                {"theta", sc.cfg.hwp.theta_deg},
                {"interpretation", to_string(sc.cfg.hwp.interpretation)},
                {"visibility", sc.cfg.visibility},
                {"disentangler", sc.cfg.include_disentangler},
                {"n_photons", sc.n_photons},
                {"seed", sc.seed}};
    json row{{"n_postselected", res.n_postselected},
             {"n_b1", res.n_b1},
             {"n_b2", res.n_b2},
             {"estimate", res.estimate_defined ? json(res.estimate) : json(nullptr)},
             {"stderr", res.estimate_defined ? json(res.stderr_) : json(nullptr)},
             {"estimate_defined", res.estimate_defined},
             {"seed", res.seed}};
    try {
        const SimulationOutcome out = run_pipeline(sc.cfg);
        const Cplx w1 =
            interpretation_weak_value(sc.cfg.prep.phi_deg, sc.cfg.hwp.interpretation);
        const double fluct = fluctuation(sc.cfg.hwp.theta_deg,
                                         effective_weak_value_real(w1, sc.cfg.hwp.interpretation));
        row["true_diff"] = out.diff;
        row["theory_fluctuation"] = fluct;
        row["predicted_stderr"] =
            res.n_postselected > 0
                ? json(fluct / std::sqrt(static_cast<double>(res.n_postselected)))
                : json(nullptr);
    } catch (const std::exception&) {
        row["true_diff"] = nullptr;
        row["theory_fluctuation"] = nullptr;
        row["predicted_stderr"] = nullptr;
    }
    return envelope("montecarlo", std::move(params), json::array({std::move(row)})).dump(2) +
           "\n";
}

std::string shot_noise_json(const ShotNoiseReport& rep) {
    json params{{"phi", rep.phi_deg},
                {"theta", rep.theta_deg},
                {"interpretation", to_string(rep.interpretation)},
                {"n_photons", rep.n_photons},
                {"n_trials", rep.n_trials}};
    json row{{"true_diff", rep.true_diff},
             {"predicted_fluctuation", rep.predicted_fluctuation},
             {"mean_estimate", rep.mean_estimate},
             {"mean_n_postselected", rep.mean_n_postselected},
             {"empirical_stddev", rep.empirical_stddev},
             {"predicted_stddev", rep.predicted_stddev},
             {"empirical_fluctuation", rep.empirical_fluctuation},
             {"stddev_ratio", rep.stddev_ratio},
             {"degenerate", rep.degenerate}};
    return envelope("montecarlo-trials", std::move(params), json::array({std::move(row)}))
               .dump(2) +
           "\n";
}

}  // namespace wmsim
