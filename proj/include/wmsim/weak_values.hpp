// weak_values.hpp
// Conventional weak values ⟨ψ₂|Ô|ψ₁⟩/⟨ψ₂|ψ₁⟩ on the polarization qubit and
// their extension to the composite polarization⊗path space,
// ⟨ψ_f(i)|Ô⊗P̂|ψ_comp⟩/⟨ψ_f(i)|ψ_comp⟩, where the final state is a product of
// the polarization post-selection and a which-path port.
//
// The generic extended_weak_value is the single source of truth; the
// closed-form σ_x/σ_y pairs are validation wrappers tested against it.

#pragma once

#include <optional>
#include <string>
#include <utility>

#include "wmsim/optics.hpp"
#include "wmsim/qstate.hpp"

namespace wmsim {

enum class Port { F1, F2 };  // |H⟩⊗|b1⟩ and |H⟩⊗|b2⟩

struct WeakValueRecord {
    Cplx value{};
    Cplx overlap{};  // ⟨ψ_f(i)|ψ_comp⟩, guaranteed nonzero
    std::optional<Port> port{};
    std::string operator_label{};
};

// ⟨post|op|pre⟩ / ⟨post|pre⟩ for 2x2 op. Throws UndefinedWeakValueError when
// pre and post are (numerically) orthogonal.
Cplx conventional_weak_value(const PolState& pre, const PolState& post, const Mat2& op);

// |H⟩⊗|b_i⟩ in the B path basis.
CompositeState final_state(Port port);

// Generic form for an arbitrary final state (matching bases required).
WeakValueRecord extended_weak_value(const CompositeState& comp, const CompositeState& final,
                                    const CompositeOperator& op, std::string label = {});

// Port-conditioned form: final state built internally and brought to the
// operator's basis.
WeakValueRecord extended_weak_value(const CompositeState& comp, Port port,
                                    const CompositeOperator& op, std::string label = {});

// ⟨σ_x⊗Â⟩_w(1) = −C_V/C_H and ⟨σ_x⊗Â⟩_w(2) = +C_V/C_H (both real).
std::pair<Cplx, Cplx> sigma_x_extended_weak_values(double phi_deg);

// ⟨σ_y⊗Â⟩_w(1) = +i C_V/C_H and ⟨σ_y⊗Â⟩_w(2) = −i C_V/C_H (both imaginary).
std::pair<Cplx, Cplx> sigma_y_extended_weak_values(double phi_deg);

// w(1) for the chosen coupling; the quantity the closed-form predictions run on.
Cplx interpretation_weak_value(double phi_deg, Interpretation interpretation);

// ⟨ψ_f|ψ_f⟩ of the post-selected branch via the weak-value expression
// 2|⟨ψ_ent|ψ_f(1)⟩|²[cos²2θ + sin²2θ |w(1)|²]; equals
// C_H²cos²2θ + C_V²sin²2θ and the pipeline's p_postselect.
double normalization_factor(double phi_deg, double theta_deg, Interpretation interpretation);

}  // namespace wmsim
