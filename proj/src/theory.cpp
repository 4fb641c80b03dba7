#include "wmsim/theory.hpp"

#include <cmath>
#include <stdexcept>

namespace wmsim {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244008443621048490;

double tan_2theta(double theta_deg) {
    const double c = std::cos(deg_to_rad(2.0 * theta_deg));
    if (std::abs(c) <= kOverlapFloor)
        throw SingularPointError("tan(2 theta) diverges at theta = 45 deg (mod 90)");
    return std::sin(deg_to_rad(2.0 * theta_deg)) / c;
}

}  // namespace

double zeta(double theta_deg, double w_real) { return tan_2theta(theta_deg) * w_real; }

double effective_weak_value_real(Cplx w, Interpretation interpretation) {
    return interpretation == Interpretation::SigmaX ? w.real() : w.imag();
}

double effective_zeta(double theta_deg, Cplx w, Interpretation interpretation) {
    return zeta(theta_deg, effective_weak_value_real(w, interpretation));
}

double backaction_denominator(double theta_deg, Cplx w) {
    const double four_theta = deg_to_rad(4.0 * theta_deg);
    return 1.0 + 0.5 * (1.0 - std::norm(w)) * (std::cos(four_theta) - 1.0);
}

double gaussian_denominator(double s, Cplx w) {
    return 1.0 + 0.5 * (1.0 - std::norm(w)) * (std::exp(-s) - 1.0);
}

double prob_difference(double theta_deg, Cplx w, Interpretation interpretation) {
    const double den = backaction_denominator(theta_deg, w);
    if (den <= kOverlapFloor)
        throw SingularPointError("prob_difference: denominator vanishes");
    const double num =
        std::sin(deg_to_rad(4.0 * theta_deg)) * effective_weak_value_real(w, interpretation);
    return num / den;
}

double fluctuation(double theta_deg, double w_real) {
    const double z = zeta(theta_deg, w_real);
    // (1−ζ)(1+ζ) keeps full precision where ζ ≈ ±1 and the fluctuation dies
    return std::abs((1.0 - z) * (1.0 + z)) / (1.0 + z * z);
}

double optimal_theta(double w_real) {
    if (std::abs(w_real) <= kOverlapFloor)
        throw NoOptimumError("optimal_theta: zero weak value has no finite optimum");
    return 0.5 * std::atan(1.0 / std::abs(w_real)) * (180.0 / HwpSetting::kPhase);
}

std::pair<Cplx, Cplx> final_state_coefficients(double phi_deg, double theta_deg) {
    const double c = std::cos(deg_to_rad(2.0 * theta_deg));
    if (std::abs(c) <= kOverlapFloor)
        throw SingularPointError("final_state_coefficients: cos(2 theta) vanishes");
    const Cplx w1 = sigma_x_extended_weak_values(phi_deg).first;
    const double z = zeta(theta_deg, w1.real());
    const PolarizationPrep prep{phi_deg};
    const Cplx prefactor = Cplx{0.0, -1.0} * c * (prep.c_h() * kInvSqrt2);
    return {prefactor * (1.0 + z), prefactor * (1.0 - z)};
}

double gaussian_pointer_q(const GaussianPointerParams& params) {
    if (params.s < 0.0)
        throw std::invalid_argument("gaussian_pointer_q: strength s must be non-negative");
    const double den = gaussian_denominator(params.s, params.w);
    if (den <= kOverlapFloor) throw SingularPointError("gaussian_pointer_q: denominator vanishes");
    return params.w.real() / den;
}

double gaussian_pointer_p(const GaussianPointerParams& params) {
    if (params.s < 0.0)
        throw std::invalid_argument("gaussian_pointer_p: strength s must be non-negative");
    const double den = gaussian_denominator(params.s, params.w);
    if (den <= kOverlapFloor) throw SingularPointError("gaussian_pointer_p: denominator vanishes");
    return params.s * std::exp(-params.s) * params.w.imag() / den;
}

double strength_correspondence(double theta_deg) {
    if (theta_deg < 0.0 || theta_deg >= 22.5)
        throw std::invalid_argument(
            "strength_correspondence: theta must lie in [0, 22.5) degrees");
    return -std::log(std::cos(deg_to_rad(4.0 * theta_deg)));
}

double back_action_eta(double theta_deg) {
    if (theta_deg < 0.0 || theta_deg > 45.0)
        throw std::invalid_argument("back_action_eta: theta must lie in [0, 45] degrees");
    return 0.5 * (1.0 - std::cos(deg_to_rad(4.0 * theta_deg)));
}

double istkh_form(double theta_deg, Cplx w) {
    const double den = backaction_denominator(theta_deg, w);
    if (den <= kOverlapFloor) throw SingularPointError("istkh_form: denominator vanishes");
    return std::sin(deg_to_rad(4.0 * theta_deg)) * w.real() / den;
}

Cplx istkh_experimental_weak_value(Cplx w, double eta) {
    const double den = 1.0 + eta * (std::norm(w) - 1.0);
    if (std::abs(den) <= kOverlapFloor)
        throw SingularPointError("istkh_experimental_weak_value: denominator vanishes");
    return w / den;
}

double visibility_adjusted_diff(double theta_deg, Cplx w, double visibility,
                                Interpretation interpretation) {
    if (visibility < 0.0 || visibility > 1.0)
        throw std::invalid_argument("visibility_adjusted_diff: visibility must lie in [0, 1]");
    return visibility * prob_difference(theta_deg, w, interpretation);
}

TheoryPoint theory_point(double phi_deg, double theta_deg, Interpretation interpretation) {
    TheoryPoint pt;
    pt.phi_deg = phi_deg;
    pt.theta_deg = theta_deg;
    pt.interpretation = interpretation;
    const Cplx w1 = interpretation_weak_value(phi_deg, interpretation);
    pt.zeta = effective_zeta(theta_deg, w1, interpretation);
    pt.diff = prob_difference(theta_deg, w1, interpretation);
    const double one_minus = (1.0 - pt.zeta) * (1.0 + pt.zeta);
    const double one_plus = 1.0 + pt.zeta * pt.zeta;
    pt.fluctuation = std::abs(one_minus) / one_plus;
    pt.variance = pt.fluctuation * pt.fluctuation;
    pt.p_postselect = normalization_factor(phi_deg, theta_deg, interpretation);
    return pt;
}

}  // namespace wmsim
