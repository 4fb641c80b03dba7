#include "wmsim/optics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wmsim {

double deg_to_rad(double deg) { return deg * (HwpSetting::kPhase / 180.0); }

const char* to_string(Interpretation i) {
    return i == Interpretation::SigmaX ? "sigma-x" : "sigma-y";
}

Interpretation interpretation_from_string(const std::string& s) {
    if (s == "sigma-x" || s == "sigma_x" || s == "x") return Interpretation::SigmaX;
    if (s == "sigma-y" || s == "sigma_y" || s == "y") return Interpretation::SigmaY;
    throw std::invalid_argument("unknown interpretation '" + s + "' (want sigma-x or sigma-y)");
}

CompositeState prepare_entangled(const PolarizationPrep& prep) {
    if (prep.phi_deg < 0.0 || prep.phi_deg > 90.0)
        throw std::invalid_argument("prepare_entangled: phi must lie in [0, 90] degrees");
    CompositeState out;
    out.basis = PathBasis::A;
    out.amps = {Cplx{0, 0}, Cplx{prep.c_h(), 0}, Cplx{prep.c_v(), 0}, Cplx{0, 0}};
    out.normalized = true;
    return out;
}

CompositeOperator hwp_unitary_sigma_x(double theta_deg) {
    const double two_theta = deg_to_rad(2.0 * theta_deg);
    const double s = std::sin(two_theta);
    const double c = std::cos(two_theta);
    const CompositeOperator xa = kron(pauli_x(), which_path_a(), PathBasis::A, true);
    const CompositeOperator z1 = kron(pauli_z(), mat2_identity(), PathBasis::A, true);
    CompositeOperator u;
    u.basis = PathBasis::A;
    u.unitary = true;
    const Cplx minus_i{0, -1};
    for (std::size_t k = 0; k < 16; ++k) u.m[k] = minus_i * (s * xa.m[k] + c * z1.m[k]);
    return u;
}

CompositeOperator hwp_unitary_sigma_y(double theta_deg) {
    const double two_theta = deg_to_rad(2.0 * theta_deg);
    const double s = std::sin(two_theta);
    const double c = std::cos(two_theta);
    const CompositeOperator ya = kron(pauli_y(), which_path_a(), PathBasis::A, true);
    CompositeOperator u = identity_op(PathBasis::A);
    const Cplx minus_i{0, -1};
    for (std::size_t k = 0; k < 16; ++k) u.m[k] = c * u.m[k] + minus_i * s * ya.m[k];
    return u;
}

CompositeOperator hwp_unitary(const HwpSetting& hwp) {
    return hwp.interpretation == Interpretation::SigmaX ? hwp_unitary_sigma_x(hwp.theta_deg)
                                                        : hwp_unitary_sigma_y(hwp.theta_deg);
}

CompositeOperator disentangler() {
    const Mat2 b1_proj{Cplx{1, 0}, {0, 0}, {0, 0}, {0, 0}};
    const Mat2 b2_proj{Cplx{0, 0}, {0, 0}, {0, 0}, {1, 0}};
    const CompositeOperator keep = kron(mat2_identity(), b1_proj, PathBasis::B, false);
    const CompositeOperator flip = kron(pauli_z(), b2_proj, PathBasis::B, false);
    CompositeOperator u;
    u.basis = PathBasis::B;
    u.unitary = true;
    for (std::size_t k = 0; k < 16; ++k) u.m[k] = keep.m[k] + flip.m[k];
    return u;
}

PortStats which_path_expectation(const PathAmps& b_path, double weight) {
    if (weight <= 0.0)
        throw std::invalid_argument("which_path_expectation: weight must be positive");
    PortStats out;
    out.p_b1 = std::norm(b_path[0]) / weight;
    out.p_b2 = std::norm(b_path[1]) / weight;
    out.diff = (std::norm(b_path[0]) - std::norm(b_path[1])) / weight;
    return out;
}

SimulationOutcome run_pipeline(const InterferometerConfig& cfg) {
    if (cfg.visibility < 0.0 || cfg.visibility > 1.0)
        throw std::invalid_argument("run_pipeline: visibility must lie in [0, 1]");

    CompositeState state = prepare_entangled(cfg.prep);
    state = apply(hwp_unitary(cfg.hwp), state);
    state = change_path_basis(state);
    if (cfg.include_disentangler) state = apply(disentangler(), state);

    const PolProjection proj = project_polarization(state, PolState::horizontal());
    if (proj.weight < kOverlapFloor)
        throw PostSelectionImpossibleError(
            "run_pipeline: post-selection probability below " + std::to_string(kOverlapFloor));

    const double w1 = std::norm(proj.path[0]);
    const double w2 = std::norm(proj.path[1]);
    const double v = cfg.visibility;

    SimulationOutcome out;
    out.p_postselect = proj.weight;
    // cross-term scaling: keep the symmetric part, damp the b1↔b2 asymmetry
    out.p_b1 = (w1 * (1.0 + v) + w2 * (1.0 - v)) / (2.0 * proj.weight);
    out.p_b2 = (w2 * (1.0 + v) + w1 * (1.0 - v)) / (2.0 * proj.weight);
    out.diff = v * (w1 - w2) / proj.weight;
    // 4·p1·p2 == 1 − diff² for p1+p2 = 1, without the cancellation near |diff|→1
    out.variance = 4.0 * out.p_b1 * out.p_b2;
    out.fluctuation = 2.0 * std::sqrt(out.p_b1 * out.p_b2);
    return out;
}

}  // namespace wmsim
