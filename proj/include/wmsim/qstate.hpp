// qstate.hpp
// Dense complex linear algebra for the polarization ⊗ path composite space:
// 2-component polarization states, 4-component composite states, 4x4
// operators, tensor products, polarization projections and the a↔b
// path-basis change.
//
// Conventions fixed once here and relied on everywhere else:
//   * composite amplitude ordering (H⊗p1, H⊗p2, V⊗p1, V⊗p2)
//   * σ_z|H⟩=+|H⟩, σ_x|H⟩=|V⟩, σ_y = −i|H⟩⟨V| + i|V⟩⟨H|
//   * |b1⟩ = (|a1⟩+|a2⟩)/√2, |b2⟩ = (−|a1⟩+|a2⟩)/√2

#pragma once

#include <array>
#include <complex>
#include <cstddef>

#include "wmsim/errors.hpp"

namespace wmsim {

using Cplx = std::complex<double>;
using Mat2 = std::array<Cplx, 4>;       // row-major 2x2
using PathAmps = std::array<Cplx, 2>;   // (p1, p2) components

// Tolerance for exact-math identities at double precision.
inline constexpr double kExactTol = 1e-12;
// Guard below which a normalization check is considered violated.
inline constexpr double kNormTol = 1e-9;
// Floor under which overlaps / post-selection weights count as zero.
inline constexpr double kOverlapFloor = 1e-15;

enum class PathBasis { A, B };

inline const char* to_string(PathBasis b) { return b == PathBasis::A ? "a" : "b"; }

// Polarization state c_h|H⟩ + c_v|V⟩.
struct PolState {
    Cplx c_h{};
    Cplx c_v{};

    double norm_sq() const { return std::norm(c_h) + std::norm(c_v); }
    bool is_normalized(double tol = kNormTol) const;

    static PolState horizontal() { return {1.0, 0.0}; }
    static PolState vertical() { return {0.0, 1.0}; }
};

// 4-component state on polarization ⊗ path, tagged with the path basis its
// components refer to. Sub-normalized states are first class: they represent
// post-selected branches, and their squared norm is a probability.
struct CompositeState {
    std::array<Cplx, 4> amps{};
    PathBasis basis = PathBasis::A;
    bool normalized = false;

    double norm_sq() const;
    double norm() const;
};

// 4x4 operator on the composite space, tagged like states. The unitary flag
// is a promise checked by is_unitary() in tests, not enforced on every use.
struct CompositeOperator {
    std::array<Cplx, 16> m{};
    PathBasis basis = PathBasis::A;
    bool unitary = false;

    Cplx& at(std::size_t row, std::size_t col) { return m[row * 4 + col]; }
    const Cplx& at(std::size_t row, std::size_t col) const { return m[row * 4 + col]; }

    bool is_unitary(double tol = kExactTol) const;  // M†M == 1 entrywise
};

// --- construction -----------------------------------------------------------

// pol ⊗ path with the given basis tag; amps[i*2+j] = pol_i * path_j.
CompositeState tensor(const PolState& pol, const PathAmps& path, PathBasis basis);

// Kronecker product of a polarization operator and a path operator.
CompositeOperator kron(const Mat2& pol_op, const Mat2& path_op, PathBasis basis, bool unitary);

Mat2 mat2_identity();
Mat2 pauli_x();
Mat2 pauli_y();
Mat2 pauli_z();
// Which-path operator Â = −|a1⟩⟨a1| + |a2⟩⟨a2| (A basis by convention).
Mat2 which_path_a();
// |b1⟩⟨b1| − |b2⟩⟨b2| (B basis by convention).
Mat2 which_path_b();

CompositeOperator identity_op(PathBasis basis);

// --- operations --------------------------------------------------------------

// Matrix-vector product. Throws BasisMismatchError when tags differ.
CompositeState apply(const CompositeOperator& op, const CompositeState& s);

struct PolProjection {
    PathAmps path{};   // ⟨pol| ⊗ 1 applied to the state
    double weight = 0; // |path|², the post-selection probability of the branch
};

// ⟨pol|⊗1 acting on s. pol must be normalized.
PolProjection project_polarization(const CompositeState& s, const PolState& pol);

// 2x2 matrix with entries ⟨to_i|from_j⟩ for the path bases. The A→B block is
// the 50:50 beam-splitter transfer; B→A is its inverse.
Mat2 path_basis_matrix(PathBasis from, PathBasis to);

PathAmps change_path_amps(const PathAmps& path, PathBasis from);

// Re-express s in the other path basis (A↔B). Norm preserving; a round trip
// is the identity.
CompositeState change_path_basis(const CompositeState& s);

// ⟨x|y⟩, conjugate-linear in x. Throws BasisMismatchError when tags differ.
Cplx inner(const CompositeState& x, const CompositeState& y);

// Explicitly normalized copy (post-selection probability is an observable in
// this library, so normalization is never implicit).
CompositeState normalized(const CompositeState& s);

bool all_finite(const CompositeState& s);

}  // namespace wmsim
