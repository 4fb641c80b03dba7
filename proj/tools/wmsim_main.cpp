// wmsim — command-line front end.
//
// Subcommands: simulate, sweep, optimal, montecarlo, compare-experiment.
// Exit codes: 0 success, 2 usage error, 3 singular/undefined point,
// 4 I/O error, 1 internal error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "wmsim/monte_carlo.hpp"
#include "wmsim/reports.hpp"
#include "wmsim/theory.hpp"
#include "wmsim/weak_values.hpp"

namespace {

using nlohmann::json;
using namespace wmsim;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitSingular = 3;
constexpr int kExitIo = 4;

struct OutputSink {
    std::string format = "text";  // text | csv | json
    std::string path;             // empty = stdout
    std::string config_file;      // consumed by expand_config before parsing

    void write(const std::string& payload) const {
        if (path.empty()) {
            std::cout << payload;
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::ios_base::failure("cannot open output path '" + path + "'");
        out << payload;
        if (!out) throw std::ios_base::failure("write to '" + path + "' failed");
    }
};

void add_output_flags(CLI::App* cmd, OutputSink& sink, const char* default_format) {
    sink.format = default_format;
    cmd->add_option("--format", sink.format, "Output format")
        ->check(CLI::IsMember({"text", "csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--output", sink.path, "Write output to this path instead of stdout");
    cmd->add_option("--config", sink.config_file,
                    "Read options from a flat key = value file (flags override the file)");
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

// Replaces `--config FILE` with the file's `key = value` lines expanded to
// `--key ...` tokens. Keys also given explicitly on the command line are
// dropped, so flags override the file. Whitespace-separated values expand to
// multiple tokens (for range options).
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    std::string path;
    std::size_t insert_at = args.size();
    for (std::size_t i = 1; i < args.size();) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size())
                throw std::invalid_argument("--config requires a file path");
            path = args[i + 1];
            insert_at = i;
            args.erase(args.begin() + i, args.begin() + i + 2);
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            insert_at = i;
            args.erase(args.begin() + i);
        } else {
            ++i;
        }
    }
    if (path.empty()) return args;

    std::set<std::string> given;
    for (const auto& t : args)
        if (t.rfind("--", 0) == 0) given.insert(t.substr(0, t.find('=')));

    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open config file '" + path + "'");
    std::vector<std::string> expanded;
    std::string line;
    while (std::getline(in, line)) {
        const std::string entry = trim(line);
        if (entry.empty() || entry[0] == '#') continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line is not 'key = value': " + line);
        const std::string key = trim(entry.substr(0, eq));
        const std::string value = trim(entry.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("config line is not 'key = value': " + line);
        const std::string flag = "--" + key;
        if (given.count(flag)) continue;  // command line wins
        if (value.find_first_of(" \t") != std::string::npos) {
            expanded.push_back(flag);
            std::istringstream parts(value);
            std::string piece;
            while (parts >> piece) expanded.push_back(piece);
        } else {
            expanded.push_back(flag + "=" + value);
        }
    }
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(insert_at), expanded.begin(),
                expanded.end());
    return args;
}

json complex_json(const Cplx& z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

std::string complex_text(const Cplx& z) {
    const double re = z.real() == 0.0 ? 0.0 : z.real();  // drop signed zeros
    const double im = z.imag() == 0.0 ? 0.0 : z.imag();
    std::ostringstream out;
    out << format_full(re);
    if (im >= 0)
        out << " + " << format_full(im) << "i";
    else
        out << " - " << format_full(-im) << "i";
    return out.str();
}

// ---- simulate ---------------------------------------------------------------

struct SimulateArgs {
    double phi = 45.0;
    double theta = 0.0;
    std::string interpretation = "sigma-x";
    double visibility = 1.0;
    bool disentangler = false;
    OutputSink sink;
};

int run_simulate(const SimulateArgs& a) {
    const Interpretation interp = interpretation_from_string(a.interpretation);
    InterferometerConfig cfg{{a.phi}, {a.theta, interp}, a.disentangler, a.visibility};

    const SimulationOutcome out = run_pipeline(cfg);
    const Cplx w1 = interpretation_weak_value(a.phi, interp);
    const TheoryPoint pt = theory_point(a.phi, a.theta, interp);
    const double closed_diff = visibility_adjusted_diff(a.theta, w1, a.visibility, interp);
    const double residual = std::abs(closed_diff - out.diff);

    const auto [wx1, wx2] = sigma_x_extended_weak_values(a.phi);
    const auto [wy1, wy2] = sigma_y_extended_weak_values(a.phi);
    const CompositeState ent = prepare_entangled(cfg.prep);
    const Cplx overlap = inner(final_state(Port::F1), change_path_basis(ent));
    const Cplx w_conv = conventional_weak_value({Cplx{cfg.prep.c_h(), 0}, Cplx{cfg.prep.c_v(), 0}},
                                                PolState::horizontal(), pauli_x());

    if (a.sink.format == "json") {
        json row{{"phi", a.phi},
                 {"theta", a.theta},
                 {"interpretation", to_string(interp)},
                 {"visibility", a.visibility},
                 {"zeta", pt.zeta},
                 {"diff_closed", closed_diff},
                 {"diff_pipeline", out.diff},
                 {"variance", out.variance},
                 {"fluctuation", out.fluctuation},
                 {"p_postselect", out.p_postselect},
                 {"p_b1", out.p_b1},
                 {"p_b2", out.p_b2},
                 {"abs_residual", residual},
                 {"weak_values",
                  json{{"conventional_sigma_x", complex_json(w_conv)},
                       {"sigma_x_A", json::array({complex_json(wx1), complex_json(wx2)})},
                       {"sigma_y_A", json::array({complex_json(wy1), complex_json(wy2)})},
                       {"overlap_f1", complex_json(overlap)}}}};
        if (a.theta >= 0.0 && a.theta < 22.5) {
            const double s = strength_correspondence(a.theta);
            row["s_corresponding"] = s;
            row["gaussian_q"] = gaussian_pointer_q({s, w1});
            row["gaussian_p"] = gaussian_pointer_p({s, w1});
            row["istkh_diff"] = istkh_form(a.theta, w_conv);
        }
        json params{{"phi", a.phi},
                    {"theta", a.theta},
                    {"interpretation", to_string(interp)},
                    {"visibility", a.visibility},
                    {"disentangler", a.disentangler}};
        a.sink.write(json{{"schema_version", kSchemaVersion},
                          {"command", "simulate"},
                          {"params", std::move(params)},
                          {"rows", json::array({std::move(row)})}}
                         .dump(2) +
                     "\n");
        return kExitOk;
    }

    if (a.sink.format == "csv") {
        SweepSpec spec;
        spec.phi = Range::single(a.phi);
        spec.theta = Range::single(a.theta);
        spec.interpretation = interp;
        spec.visibility = a.visibility;
        spec.include_disentangler = a.disentangler;
        a.sink.write(sweep_csv(run_sweep(spec).rows));
        return kExitOk;
    }

    std::ostringstream text;
    text << "phi = " << format_full(a.phi) << " deg, theta = " << format_full(a.theta)
         << " deg, interpretation = " << to_string(interp)
         << ", visibility = " << format_full(a.visibility) << "\n"
         << "weak values:\n"
         << "  conventional <sigma_x>_w      = " << complex_text(w_conv) << "\n"
         << "  <sigma_x (x) A>_w(1), _w(2)   = " << complex_text(wx1) << ",  "
         << complex_text(wx2) << "\n"
         << "  <sigma_y (x) A>_w(1), _w(2)   = " << complex_text(wy1) << ",  "
         << complex_text(wy2) << "\n"
         << "  <psi_f(1)|psi_ent>            = " << complex_text(overlap) << "\n"
         << "theory:   zeta = " << format_full(pt.zeta) << ", diff = " << format_full(closed_diff)
         << ", variance = " << format_full(pt.variance)
         << ", fluctuation = " << format_full(pt.fluctuation) << "\n"
         << "pipeline: p_postselect = " << format_full(out.p_postselect)
         << ", p_b1 = " << format_full(out.p_b1) << ", p_b2 = " << format_full(out.p_b2) << "\n"
         << "          diff = " << format_full(out.diff)
         << ", variance = " << format_full(out.variance)
         << ", fluctuation = " << format_full(out.fluctuation) << "\n"
         << "residual |closed - pipeline| = " << format_full(residual) << "\n";
    if (a.theta >= 0.0 && a.theta < 22.5) {
        const double s = strength_correspondence(a.theta);
        text << "correspondence: s = " << format_full(s)
             << ", gaussian <q>'/g = " << format_full(gaussian_pointer_q({s, w1}))
             << ", g<p>' = " << format_full(gaussian_pointer_p({s, w1}))
             << ", istkh diff = " << format_full(istkh_form(a.theta, w_conv)) << "\n";
    }
    a.sink.write(text.str());
    return kExitOk;
}

// ---- sweep ------------------------------------------------------------------

struct SweepArgs {
    std::vector<double> phi_range;    // start stop step, or single value
    std::vector<double> theta_range;
    std::string interpretation = "sigma-x";
    double visibility = 1.0;
    bool disentangler = false;
    OutputSink sink;
};

Range parse_range(const std::vector<double>& v, const char* name) {
    if (v.size() == 1) return Range::single(v[0]);
    if (v.size() == 3) {
        Range r{v[0], v[1], v[2]};
        r.validate(name);
        return r;
    }
    throw CLI::ValidationError(std::string(name) +
                               ": expected one value or START STOP STEP");
}

int run_sweep_cmd(const SweepArgs& a) {
    SweepSpec spec;
    spec.phi = parse_range(a.phi_range, "--phi");
    spec.theta = parse_range(a.theta_range, "--theta");
    spec.interpretation = interpretation_from_string(a.interpretation);
    spec.visibility = a.visibility;
    spec.include_disentangler = a.disentangler;

    const SweepResult result = run_sweep(spec);
    for (const auto& s : result.skipped) std::cerr << "skipped " << s << "\n";
    if (result.rows.empty()) {
        std::cerr << "error: sweep produced no rows\n";
        return kExitSingular;
    }
    if (a.sink.format == "json")
        a.sink.write(sweep_json(spec, result));
    else
        a.sink.write(sweep_csv(result.rows));
    return kExitOk;
}

// ---- optimal ----------------------------------------------------------------

struct OptimalArgs {
    std::optional<double> weak_value;
    std::optional<double> phi;
    OutputSink sink;
};

int run_optimal(const OptimalArgs& a) {
    double w = 0.0;
    if (a.weak_value) {
        w = *a.weak_value;
    } else if (a.phi) {
        w = std::abs(interpretation_weak_value(*a.phi, Interpretation::SigmaX).real());
    } else {
        std::cerr << "error: provide --weak-value or --phi\n";
        return kExitUsage;
    }

    const double theta_star = optimal_theta(w);
    // at |w| <= 1 the optimum sits at theta* >= 22.5 deg where cos4theta <= 0
    // and no finite correspondence strength exists
    const bool has_s = theta_star < 22.5;
    const double s_star = has_s ? strength_correspondence(theta_star) : 0.0;
    const double z = zeta(theta_star, std::abs(w));
    const double diff = 2.0 * z / (1.0 + z * z);
    const double fluct = fluctuation(theta_star, std::abs(w));

    if (a.sink.format == "json") {
        json row{{"weak_value", w},
                 {"theta_star", theta_star},
                 {"s_star", has_s ? json(s_star) : json(nullptr)},
                 {"zeta", z},
                 {"diff", diff},
                 {"fluctuation", fluct}};
        json params = a.phi ? json{{"phi", *a.phi}} : json{{"weak_value", w}};
        a.sink.write(json{{"schema_version", kSchemaVersion},
                          {"command", "optimal"},
                          {"params", std::move(params)},
                          {"rows", json::array({std::move(row)})}}
                         .dump(2) +
                     "\n");
    } else {
        std::ostringstream text;
        text << "weak value |w| = " << format_full(std::abs(w)) << "\n"
             << "optimal theta  = " << format_full(theta_star) << " deg (zeta = "
             << format_full(z) << ")\n"
             << "corresponding s = " << (has_s ? format_full(s_star) : std::string("inf"))
             << "\n"
             << "P(b1)-P(b2) at optimum = " << format_full(diff)
             << ", fluctuation = " << format_full(fluct) << "\n";
        a.sink.write(text.str());
    }
    return kExitOk;
}

// ---- montecarlo -------------------------------------------------------------

struct MonteCarloArgs {
    double phi = 67.5;
    double theta = 11.0;
    std::string interpretation = "sigma-y";
    double visibility = 1.0;
    bool disentangler = false;
    std::uint64_t n_photons = 100000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    unsigned trials = 0;  // 0 = single counting run
    OutputSink sink;
};

int run_montecarlo(const MonteCarloArgs& a) {
    const Interpretation interp = interpretation_from_string(a.interpretation);
    InterferometerConfig cfg{{a.phi}, {a.theta, interp}, a.disentangler, a.visibility};

    if (a.trials > 0) {
        const ShotNoiseReport rep = shot_noise_validation(a.phi, a.theta, a.n_photons, a.trials,
                                                          a.seed, interp, a.workers);
        if (a.sink.format == "json") {
            a.sink.write(shot_noise_json(rep));
        } else {
            std::ostringstream text;
            text << "trials = " << rep.n_trials << ", photons/trial = " << rep.n_photons
                 << ", mean n_postselected = " << format_full(rep.mean_n_postselected) << "\n"
                 << "true diff = " << format_full(rep.true_diff)
                 << ", mean estimate = " << format_full(rep.mean_estimate) << "\n"
                 << "empirical stddev = " << format_full(rep.empirical_stddev)
                 << ", predicted = " << format_full(rep.predicted_stddev)
                 << (rep.degenerate ? " (degenerate point)" : "") << "\n"
                 << "empirical fluctuation = " << format_full(rep.empirical_fluctuation)
                 << ", theory = " << format_full(rep.predicted_fluctuation) << "\n";
            a.sink.write(text.str());
        }
        return kExitOk;
    }

    const ShotConfig sc{a.n_photons, a.seed, cfg};
    const CountResult res = simulate_counts(sc, a.workers);
    if (a.sink.format == "json") {
        a.sink.write(count_result_json(sc, res));
    } else {
        std::ostringstream text;
        text << "n_photons = " << a.n_photons << ", seed = " << a.seed << "\n"
             << "n_postselected = " << res.n_postselected << ", n_b1 = " << res.n_b1
             << ", n_b2 = " << res.n_b2 << "\n";
        if (res.estimate_defined) {
            text << "estimate = " << format_full(res.estimate)
                 << ", stderr = " << format_full(res.stderr_) << "\n";
            try {
                const SimulationOutcome out = run_pipeline(cfg);
                const Cplx w1 = interpretation_weak_value(a.phi, interp);
                const double fl =
                    fluctuation(a.theta, effective_weak_value_real(w1, interp));
                text << "true diff = " << format_full(out.diff)
                     << ", theory fluctuation = " << format_full(fl)
                     << ", predicted stderr = "
                     << format_full(fl / std::sqrt(double(res.n_postselected))) << "\n";
            } catch (const std::exception&) {
            }
        } else {
            text << "estimate undefined (no post-selected photons)\n";
        }
        a.sink.write(text.str());
    }
    return kExitOk;
}

// ---- compare-experiment -----------------------------------------------------

struct CompareArgs {
    std::vector<std::string> rows;  // THETA,DIFF[,ERR]
    std::string data_path;
    std::optional<double> weak_value;
    std::optional<double> phi;
    std::optional<double> visibility;
    std::vector<double> fit_thetas;
    OutputSink sink;
};

ExperimentRow parse_experiment_row(const std::string& text) {
    ExperimentRow row;
    std::istringstream in(text);
    std::string field;
    std::vector<double> vals;
    while (std::getline(in, field, ',')) {
        if (field.empty()) continue;
        vals.push_back(std::stod(field));
    }
    if (vals.size() < 2 || vals.size() > 3)
        throw CLI::ValidationError("--row: expected THETA,DIFF[,ERR], got '" + text + "'");
    row.theta_deg = vals[0];
    row.measured_diff = vals[1];
    if (vals.size() == 3) row.measured_error = vals[2];
    return row;
}

int run_compare(const CompareArgs& a) {
    std::vector<ExperimentRow> rows;
    for (const auto& r : a.rows) rows.push_back(parse_experiment_row(r));
    if (!a.data_path.empty()) {
        std::ifstream in(a.data_path);
        if (!in) throw std::ios_base::failure("cannot open data file '" + a.data_path + "'");
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            rows.push_back(parse_experiment_row(line));
        }
    }
    if (rows.empty()) {
        std::cerr << "error: no data rows (use --row or --data)\n";
        return kExitUsage;
    }

    double w = 0.0;
    if (a.weak_value) {
        w = *a.weak_value;
    } else if (a.phi) {
        w = std::abs(interpretation_weak_value(*a.phi, Interpretation::SigmaX).real());
    } else {
        std::cerr << "error: provide --weak-value or --phi\n";
        return kExitUsage;
    }

    const ComparisonReport rep = compare_experiment(rows, w, a.visibility, a.fit_thetas);
    if (a.sink.format == "json")
        a.sink.write(comparison_json(rep));
    else
        a.sink.write(comparison_text(rep));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interferometric weak-measurement simulator and analysis toolkit"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Evaluate one (phi, theta) point");
    sim_cmd->add_option("--phi", sim.phi, "Preparation angle in degrees [0,90]")
        ->capture_default_str();
    sim_cmd->add_option("--theta", sim.theta, "HWP fast-axis angle in degrees")
        ->capture_default_str();
    sim_cmd->add_option("--interpretation", sim.interpretation, "sigma-x or sigma-y")
        ->capture_default_str();
    sim_cmd->add_option("--visibility", sim.visibility, "Interference contrast in [0,1]")
        ->capture_default_str();
    sim_cmd->add_flag("--disentangler", sim.disentangler, "Include the b2-arm HWP");
    add_output_flags(sim_cmd, sim.sink, "text");

    SweepArgs swp;
    auto* swp_cmd = app.add_subcommand("sweep", "Tabulate a (phi, theta) grid");
    swp_cmd->add_option("--phi", swp.phi_range, "Single value or START STOP STEP")
        ->expected(1, 3)
        ->required();
    swp_cmd->add_option("--theta", swp.theta_range, "Single value or START STOP STEP")
        ->expected(1, 3)
        ->required();
    swp_cmd->add_option("--interpretation", swp.interpretation, "sigma-x or sigma-y")
        ->capture_default_str();
    swp_cmd->add_option("--visibility", swp.visibility, "Interference contrast in [0,1]")
        ->capture_default_str();
    swp_cmd->add_flag("--disentangler", swp.disentangler, "Include the b2-arm HWP");
    add_output_flags(swp_cmd, swp.sink, "csv");

    OptimalArgs opt;
    auto* opt_cmd = app.add_subcommand("optimal", "Optimal HWP angle for a weak value");
    opt_cmd->add_option("--weak-value", opt.weak_value, "Real weak value (nonzero)");
    opt_cmd->add_option("--phi", opt.phi, "Derive |w| = C_V/C_H from this preparation angle");
    add_output_flags(opt_cmd, opt.sink, "text");

    MonteCarloArgs mc;
    auto* mc_cmd = app.add_subcommand("montecarlo", "Photon-counting emulation");
    mc_cmd->add_option("--phi", mc.phi, "Preparation angle in degrees")->capture_default_str();
    mc_cmd->add_option("--theta", mc.theta, "HWP angle in degrees")->capture_default_str();
    mc_cmd->add_option("--interpretation", mc.interpretation, "sigma-x or sigma-y")
        ->capture_default_str();
    mc_cmd->add_option("--visibility", mc.visibility, "Interference contrast in [0,1]")
        ->capture_default_str();
    mc_cmd->add_flag("--disentangler", mc.disentangler, "Include the b2-arm HWP");
    mc_cmd->add_option("--n-photons", mc.n_photons, "Photons per run")->capture_default_str();
    mc_cmd->add_option("--seed", mc.seed, "RNG seed")->capture_default_str();
    mc_cmd->add_option("--workers", mc.workers, "Worker threads (result-invariant)")
        ->capture_default_str();
    mc_cmd->add_option("--trials", mc.trials,
                       "Run this many independent trials and report the estimator spread");
    add_output_flags(mc_cmd, mc.sink, "text");

    CompareArgs cmp;
    auto* cmp_cmd =
        app.add_subcommand("compare-experiment", "Fit visibility against measured rows");
    cmp_cmd->add_option("--row", cmp.rows, "Data row THETA,DIFF[,ERR]; repeatable");
    cmp_cmd->add_option("--data", cmp.data_path, "File of THETA,DIFF[,ERR] lines (# comments)");
    cmp_cmd->add_option("--weak-value", cmp.weak_value, "Assumed real weak value");
    cmp_cmd->add_option("--phi", cmp.phi, "Derive the weak value from this preparation angle");
    cmp_cmd->add_option("--visibility", cmp.visibility, "Force this visibility (skip the fit)");
    cmp_cmd->add_option("--fit-theta", cmp.fit_thetas,
                        "Fit only on rows with these theta values (default: all rows)");
    add_output_flags(cmp_cmd, cmp.sink, "text");

    try {
        std::vector<std::string> args = expand_config(argc, argv);
        // CLI11's vector overload wants reversed args without the program name
        std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (sim_cmd->parsed()) return run_simulate(sim);
        if (swp_cmd->parsed()) return run_sweep_cmd(swp);
        if (opt_cmd->parsed()) return run_optimal(opt);
        if (mc_cmd->parsed()) return run_montecarlo(mc);
        if (cmp_cmd->parsed()) return run_compare(cmp);
    } catch (const UndefinedWeakValueError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSingular;
    } catch (const SingularPointError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSingular;
    } catch (const PostSelectionImpossibleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSingular;
    } catch (const NoOptimumError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSingular;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
