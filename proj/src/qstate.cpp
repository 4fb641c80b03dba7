#include "wmsim/qstate.hpp"

#include <cmath>

namespace wmsim {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244008443621048490;

}  // namespace

bool PolState::is_normalized(double tol) const {
    return std::abs(norm_sq() - 1.0) <= tol;
}

double CompositeState::norm_sq() const {
    double n = 0.0;
    for (const auto& a : amps) n += std::norm(a);
    return n;
}

double CompositeState::norm() const { return std::sqrt(norm_sq()); }

bool CompositeOperator::is_unitary(double tol) const {
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            Cplx acc = 0.0;
            for (std::size_t k = 0; k < 4; ++k) acc += std::conj(at(k, r)) * at(k, c);
            const Cplx want = (r == c) ? Cplx{1.0, 0.0} : Cplx{0.0, 0.0};
            if (std::abs(acc - want) > tol) return false;
        }
    }
    return true;
}

CompositeState tensor(const PolState& pol, const PathAmps& path, PathBasis basis) {
    CompositeState out;
    out.basis = basis;
    const Cplx pol_c[2] = {pol.c_h, pol.c_v};
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) out.amps[i * 2 + j] = pol_c[i] * path[j];
    out.normalized = std::abs(out.norm_sq() - 1.0) <= kExactTol;
    return out;
}

CompositeOperator kron(const Mat2& pol_op, const Mat2& path_op, PathBasis basis, bool unitary) {
    CompositeOperator out;
    out.basis = basis;
    out.unitary = unitary;
    for (std::size_t i1 = 0; i1 < 2; ++i1)
        for (std::size_t i2 = 0; i2 < 2; ++i2)
            for (std::size_t j1 = 0; j1 < 2; ++j1)
                for (std::size_t j2 = 0; j2 < 2; ++j2)
                    out.at(i1 * 2 + i2, j1 * 2 + j2) = pol_op[i1 * 2 + j1] * path_op[i2 * 2 + j2];
    return out;
}

Mat2 mat2_identity() { return {Cplx{1, 0}, {0, 0}, {0, 0}, {1, 0}}; }
Mat2 pauli_x() { return {Cplx{0, 0}, {1, 0}, {1, 0}, {0, 0}}; }
Mat2 pauli_y() { return {Cplx{0, 0}, {0, -1}, {0, 1}, {0, 0}}; }
Mat2 pauli_z() { return {Cplx{1, 0}, {0, 0}, {0, 0}, {-1, 0}}; }
Mat2 which_path_a() { return {Cplx{-1, 0}, {0, 0}, {0, 0}, {1, 0}}; }
Mat2 which_path_b() { return {Cplx{1, 0}, {0, 0}, {0, 0}, {-1, 0}}; }

CompositeOperator identity_op(PathBasis basis) {
    return kron(mat2_identity(), mat2_identity(), basis, true);
}

CompositeState apply(const CompositeOperator& op, const CompositeState& s) {
    if (op.basis != s.basis)
        throw BasisMismatchError("apply: operator is in the " + std::string(to_string(op.basis)) +
                                 " path basis, state is in " + to_string(s.basis));
    CompositeState out;
    out.basis = s.basis;
    for (std::size_t r = 0; r < 4; ++r) {
        Cplx acc = 0.0;
        for (std::size_t c = 0; c < 4; ++c) acc += op.at(r, c) * s.amps[c];
        out.amps[r] = acc;
    }
    out.normalized = s.normalized && op.unitary;
    return out;
}

PolProjection project_polarization(const CompositeState& s, const PolState& pol) {
    if (!pol.is_normalized())
        throw std::invalid_argument("project_polarization: polarization state must be normalized");
    PolProjection out;
    const Cplx pol_c[2] = {pol.c_h, pol.c_v};
    for (std::size_t j = 0; j < 2; ++j) {
        Cplx acc = 0.0;
        for (std::size_t i = 0; i < 2; ++i) acc += std::conj(pol_c[i]) * s.amps[i * 2 + j];
        out.path[j] = acc;
    }
    out.weight = std::norm(out.path[0]) + std::norm(out.path[1]);
    return out;
}

Mat2 path_basis_matrix(PathBasis from, PathBasis to) {
    if (from == to) return mat2_identity();
    if (from == PathBasis::A) {
        // rows ⟨b1|, ⟨b2| against columns |a1⟩, |a2⟩
        return {Cplx{kInvSqrt2, 0}, {kInvSqrt2, 0}, {-kInvSqrt2, 0}, {kInvSqrt2, 0}};
    }
    // inverse (transpose, the block is real orthogonal)
    return {Cplx{kInvSqrt2, 0}, {-kInvSqrt2, 0}, {kInvSqrt2, 0}, {kInvSqrt2, 0}};
}

PathAmps change_path_amps(const PathAmps& path, PathBasis from) {
    const Mat2 r = path_basis_matrix(from, from == PathBasis::A ? PathBasis::B : PathBasis::A);
    return {r[0] * path[0] + r[1] * path[1], r[2] * path[0] + r[3] * path[1]};
}

CompositeState change_path_basis(const CompositeState& s) {
    CompositeState out;
    out.basis = s.basis == PathBasis::A ? PathBasis::B : PathBasis::A;
    out.normalized = s.normalized;
    const Mat2 r = path_basis_matrix(s.basis, out.basis);
    for (std::size_t i = 0; i < 2; ++i) {
        out.amps[i * 2 + 0] = r[0] * s.amps[i * 2 + 0] + r[1] * s.amps[i * 2 + 1];
        out.amps[i * 2 + 1] = r[2] * s.amps[i * 2 + 0] + r[3] * s.amps[i * 2 + 1];
    }
    return out;
}

Cplx inner(const CompositeState& x, const CompositeState& y) {
    if (x.basis != y.basis)
        throw BasisMismatchError("inner: states are tagged with different path bases");
    Cplx acc = 0.0;
    for (std::size_t i = 0; i < 4; ++i) acc += std::conj(x.amps[i]) * y.amps[i];
    return acc;
}

CompositeState normalized(const CompositeState& s) {
    const double n = s.norm();
    if (n <= kOverlapFloor)
        throw PostSelectionImpossibleError("normalized: state has (near-)zero norm");
    CompositeState out = s;
    for (auto& a : out.amps) a /= n;
    out.normalized = true;
    return out;
}

bool all_finite(const CompositeState& s) {
    for (const auto& a : s.amps)
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) return false;
    return true;
}

}  // namespace wmsim
