// theory.hpp
// Closed-form predictions for the which-path weak measurement: the ζ
// parameter, P(b1)−P(b2), its quantum fluctuation, the optimal measurement
// strength, the eigenstate decomposition of the post-selected state, the
// back-action form of the "experimental weak value", the all-order
// Gaussian-pointer results, and the strength map between the two frameworks.
//
// Everything here is validated against the optics pipeline (brute-force
// state evolution), which defines the canonical signed P(b1)−P(b2).

#pragma once

#include <utility>

#include "wmsim/optics.hpp"
#include "wmsim/weak_values.hpp"

namespace wmsim {

struct TheoryPoint {
    double phi_deg = 0;
    double theta_deg = 0;
    Interpretation interpretation = Interpretation::SigmaX;
    double zeta = 0;
    double diff = 0;         // = 2ζ/(1+ζ²)
    double variance = 0;     // = ((1−ζ²)/(1+ζ²))²
    double fluctuation = 0;  // = |1−ζ²|/(1+ζ²)
    double p_postselect = 0;
};

// Gaussian-pointer measurement: strength s = 2g²⟨p²⟩ and the weak value the
// pointer reads out. g and ⟨p²⟩ enter only through s.
struct GaussianPointerParams {
    double s = 0;
    Cplx w{};
};

// ζ = tan(2θ)·w_real. Throws SingularPointError where tan2θ diverges.
double zeta(double theta_deg, double w_real);

// The real number the ζ parametrization runs on: Re w for the σ_x coupling,
// Im w for the σ_y coupling.
double effective_weak_value_real(Cplx w, Interpretation interpretation);

double effective_zeta(double theta_deg, Cplx w, Interpretation interpretation);

// Shared denominator 1 + ½(1−|w|²)(cos4θ − 1) of the interference closed
// forms; equals C_H²cos²2θ + C_V²sin²2θ over C_H² when w = ±C_V/C_H.
double backaction_denominator(double theta_deg, Cplx w);

// Denominator 1 + ½(1−|w|²)(e^{−s} − 1) of the Gaussian-pointer results.
double gaussian_denominator(double s, Cplx w);

// Closed-form P(b1) − P(b2). Signed to match the brute-force pipeline of the
// corresponding interpretation: numerator sin4θ·Re w for σ_x and
// sin4θ·Im w for σ_y, over backaction_denominator.
double prob_difference(double theta_deg, Cplx w, Interpretation interpretation);

// Δ(P(b1)−P(b2)) = |1−ζ²|/(1+ζ²); vanishes exactly at ζ = ±1.
double fluctuation(double theta_deg, double w_real);

// θ* solving tan2θ·|w_real| = 1 on (0°, 45°); the strength at which the
// post-selected state is a which-path eigenstate and the fluctuation is zero.
double optimal_theta(double w_real);

// Coefficients (c_b1, c_b2) = −i cos2θ (C_H/√2)·(1+ζ, 1−ζ) of the
// post-selected path state under the σ_x coupling.
std::pair<Cplx, Cplx> final_state_coefficients(double phi_deg, double theta_deg);

// ⟨q⟩′/g and g⟨p⟩′ after post-selection, all orders in the coupling.
double gaussian_pointer_q(const GaussianPointerParams& params);
double gaussian_pointer_p(const GaussianPointerParams& params);

// s(θ) = −ln cos4θ: the strength at which the Gaussian-pointer denominator
// coincides with the interferometric one (e^{−s} = cos4θ). A structural
// analogy between the frameworks, not an equality — the numerators differ.
// θ must lie in [0°, 22.5°).
double strength_correspondence(double theta_deg);

// η(θ) = (1 − cos4θ)/2, the back-action parameter, θ ∈ [0°, 45°].
double back_action_eta(double theta_deg);

// sin4θ·Re w / backaction_denominator — the back-action ("experimental weak
// value") form expressed with the conventional weak value w = C_V/C_H. Equals
// −prob_difference(θ, w(1), SigmaX) for w(1) = −w.
double istkh_form(double theta_deg, Cplx w);

// w / (1 + η(|w|²−1)): the η-parametrized distorted weak value.
Cplx istkh_experimental_weak_value(Cplx w, double eta);

// v · prob_difference. Models interference-contrast loss; matches the
// pipeline run with the same visibility.
double visibility_adjusted_diff(double theta_deg, Cplx w, double visibility,
                                Interpretation interpretation = Interpretation::SigmaX);

// All closed-form outputs at one (φ, θ).
TheoryPoint theory_point(double phi_deg, double theta_deg, Interpretation interpretation);

}  // namespace wmsim
