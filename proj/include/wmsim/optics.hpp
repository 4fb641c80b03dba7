// optics.hpp
// The optical elements of the interferometric weak measurement and the
// end-to-end pipeline: prepare → entangle at the PBS → in-arm HWP weak
// interaction → (disentangler HWP) → 50:50 BS → ⟨H| post-selection →
// which-path port probabilities.

#pragma once

#include "wmsim/qstate.hpp"

namespace wmsim {

// The two equivalent readings of the in-arm HWP interaction: a σ_x ⊗ Â
// coupling (real extended weak value) or a σ_y ⊗ Â rotation generator
// (imaginary extended weak value).
enum class Interpretation { SigmaX, SigmaY };

const char* to_string(Interpretation i);
Interpretation interpretation_from_string(const std::string& s);

double deg_to_rad(double deg);

// Preparation stage (GTP + HWP before the PBS): C_H = cos φ, C_V = sin φ,
// both real non-negative for φ ∈ [0°, 90°].
struct PolarizationPrep {
    double phi_deg = 45.0;

    double c_h() const { return std::cos(deg_to_rad(phi_deg)); }
    double c_v() const { return std::sin(deg_to_rad(phi_deg)); }
};

// In-arm HWP: fast-axis angle θ (degrees) and which effective coupling the
// pipeline uses. The retardation phase is that of a half-wave plate, π.
struct HwpSetting {
    double theta_deg = 0.0;
    Interpretation interpretation = Interpretation::SigmaX;

    static constexpr double kPhase = 3.14159265358979323846;
};

struct InterferometerConfig {
    PolarizationPrep prep{};
    HwpSetting hwp{};
    bool include_disentangler = false;
    double visibility = 1.0;  // interference contrast in [0,1]
};

struct SimulationOutcome {
    double p_postselect = 0;  // ⟨ψ_f|ψ_f⟩ of the post-selected branch
    double p_b1 = 0;          // conditional port probabilities, p_b1 + p_b2 = 1
    double p_b2 = 0;
    double diff = 0;          // P(b1) − P(b2)
    double variance = 0;      // of the which-path observable, = 1 − diff²
    double fluctuation = 0;   // √variance
};

struct PortStats {
    double p_b1 = 0;
    double p_b2 = 0;
    double diff = 0;
};

// C_V|V⟩⊗|a1⟩ + C_H|H⟩⊗|a2⟩, the entangled state behind the PBS.
CompositeState prepare_entangled(const PolarizationPrep& prep);

// U₁ = −i(sin2θ σ_x⊗Â + cos2θ σ_z⊗1̂); squares to −1.
CompositeOperator hwp_unitary_sigma_x(double theta_deg);

// U₂ = exp(−i 2θ σ_y⊗Â) = cos2θ 1̂⊗1̂ − i sin2θ σ_y⊗Â. On path a2 this is the
// active rotation of (C_H, C_V) by +2θ, on a1 by −2θ.
CompositeOperator hwp_unitary_sigma_y(double theta_deg);

CompositeOperator hwp_unitary(const HwpSetting& hwp);

// HWP on output path b2: 1̂⊗|b1⟩⟨b1| + σ_z⊗|b2⟩⟨b2|. Gives the π phase between
// |H⟩ and |V⟩ in that arm; neutral for every ⟨H|-post-selected observable.
// B-basis operator: applying it to an A-basis state throws.
CompositeOperator disentangler();

// Conditional port probabilities of a post-selected path state (B basis).
// weight must be positive.
PortStats which_path_expectation(const PathAmps& b_path, double weight);

// Full state evolution. Visibility v < 1 scales the interference cross term
// of the port probabilities (the antisymmetric part under b1↔b2); the
// conditional probabilities still sum to 1 and p_postselect is unaffected.
// Throws PostSelectionImpossibleError when the ⟨H| branch carries no weight.
SimulationOutcome run_pipeline(const InterferometerConfig& cfg);

}  // namespace wmsim
