#include "wmsim/weak_values.hpp"

#include <cmath>

namespace wmsim {

Cplx conventional_weak_value(const PolState& pre, const PolState& post, const Mat2& op) {
    const Cplx overlap = std::conj(post.c_h) * pre.c_h + std::conj(post.c_v) * pre.c_v;
    if (std::abs(overlap) <= kOverlapFloor)
        throw UndefinedWeakValueError(
            "conventional_weak_value: pre- and post-selected states are orthogonal");
    const Cplx op_pre_h = op[0] * pre.c_h + op[1] * pre.c_v;
    const Cplx op_pre_v = op[2] * pre.c_h + op[3] * pre.c_v;
    const Cplx numerator = std::conj(post.c_h) * op_pre_h + std::conj(post.c_v) * op_pre_v;
    return numerator / overlap;
}

CompositeState final_state(Port port) {
    const PathAmps path = port == Port::F1 ? PathAmps{Cplx{1, 0}, Cplx{0, 0}}
                                           : PathAmps{Cplx{0, 0}, Cplx{1, 0}};
    return tensor(PolState::horizontal(), path, PathBasis::B);
}

WeakValueRecord extended_weak_value(const CompositeState& comp, const CompositeState& final,
                                    const CompositeOperator& op, std::string label) {
    const Cplx overlap = inner(final, comp);
    if (std::abs(overlap) <= kOverlapFloor)
        throw UndefinedWeakValueError(
            "extended_weak_value: final state is orthogonal to the pre-selected state");
    WeakValueRecord rec;
    rec.overlap = overlap;
    rec.value = inner(final, apply(op, comp)) / overlap;
    rec.operator_label = std::move(label);
    return rec;
}

WeakValueRecord extended_weak_value(const CompositeState& comp, Port port,
                                    const CompositeOperator& op, std::string label) {
    CompositeState fin = final_state(port);
    if (fin.basis != op.basis) fin = change_path_basis(fin);
    CompositeState pre = comp;
    if (pre.basis != op.basis) pre = change_path_basis(pre);
    WeakValueRecord rec = extended_weak_value(pre, fin, op, std::move(label));
    rec.port = port;
    return rec;
}

namespace {

Cplx weak_value_ratio(double phi_deg) {
    const PolarizationPrep prep{phi_deg};
    const double c_h = prep.c_h();
    if (std::abs(c_h) <= kOverlapFloor)
        throw UndefinedWeakValueError("extended weak values diverge at phi = 90 deg (C_H = 0)");
    return Cplx{prep.c_v() / c_h, 0.0};
}

}  // namespace

std::pair<Cplx, Cplx> sigma_x_extended_weak_values(double phi_deg) {
    const Cplx r = weak_value_ratio(phi_deg);
    return {-r, r};
}

std::pair<Cplx, Cplx> sigma_y_extended_weak_values(double phi_deg) {
    const Cplx r = weak_value_ratio(phi_deg);
    const Cplx i{0.0, 1.0};
    return {i * r, -i * r};
}

Cplx interpretation_weak_value(double phi_deg, Interpretation interpretation) {
    return interpretation == Interpretation::SigmaX ? sigma_x_extended_weak_values(phi_deg).first
                                                    : sigma_y_extended_weak_values(phi_deg).first;
}

double normalization_factor(double phi_deg, double theta_deg, Interpretation interpretation) {
    if (phi_deg < 0.0 || phi_deg > 90.0)
        throw std::invalid_argument("normalization_factor: phi must lie in [0, 90] degrees");
    const PolarizationPrep prep{phi_deg};
    const double two_theta = deg_to_rad(2.0 * theta_deg);
    const double c = std::cos(two_theta);
    const double s = std::sin(two_theta);
    if (std::abs(prep.c_h()) <= kOverlapFloor) {
        // w(1) diverges but C_H²|w(1)|² → C_V²; take the limit
        return s * s * prep.c_v() * prep.c_v();
    }
    const Cplx w1 = interpretation_weak_value(phi_deg, interpretation);
    const double overlap_sq = 0.5 * prep.c_h() * prep.c_h();  // |⟨ψ_f(1)|ψ_ent⟩|² = C_H²/2
    return 2.0 * overlap_sq * (c * c + s * s * std::norm(w1));
}

}  // namespace wmsim
