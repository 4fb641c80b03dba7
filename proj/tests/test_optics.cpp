#include "wmsim/optics.hpp"

#include <cmath>

#include "doctest.h"
#include "test_helpers.hpp"

using namespace wmsim;
using wmsim::testing::Mat4;
using wmsim::testing::Rng;

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244008443621048490;
constexpr double kPi = 3.14159265358979323846;

// hand-written generators, independent of the library's kron
// ordering (H a1, H a2, V a1, V a2)
Mat4 gen_sigma_x_A() {
    Mat4 m{};
    m[0 * 4 + 2] = -1.0;  // |V a1> -> -|H a1|
    m[1 * 4 + 3] = 1.0;
    m[2 * 4 + 0] = -1.0;
    m[3 * 4 + 1] = 1.0;
    return m;
}

Mat4 gen_sigma_z_1() {
    Mat4 m{};
    m[0] = 1.0;
    m[5] = 1.0;
    m[10] = -1.0;
    m[15] = -1.0;
    return m;
}

Mat4 gen_sigma_y_A() {
    // sigma_y: |H> -> i|V>, |V> -> -i|H>;  A: a1 -> -a1, a2 -> +a2
    Mat4 m{};
    m[0 * 4 + 2] = Cplx{0, 1};   // -i * (-1) on a1 column of V
    m[1 * 4 + 3] = Cplx{0, -1};
    m[2 * 4 + 0] = Cplx{0, -1};  // i * (-1)
    m[3 * 4 + 1] = Cplx{0, 1};
    return m;
}

Mat4 to_mat4(const CompositeOperator& op) {
    Mat4 m;
    for (int k = 0; k < 16; ++k) m[k] = op.m[k];
    return m;
}

InterferometerConfig random_config(Rng& rng, Interpretation interp) {
    InterferometerConfig cfg;
    cfg.prep.phi_deg = rng.uniform(1.0, 89.0);
    cfg.hwp.theta_deg = rng.uniform(0.0, 44.0);
    cfg.hwp.interpretation = interp;
    return cfg;
}

}  // namespace

TEST_CASE("prepare_entangled at reference angles") {
    const CompositeState equal = prepare_entangled({45.0});
    CHECK(std::abs(equal.amps[0]) == 0.0);
    CHECK(std::abs(equal.amps[1] - Cplx{kInvSqrt2, 0}) < kExactTol);
    CHECK(std::abs(equal.amps[2] - Cplx{kInvSqrt2, 0}) < kExactTol);
    CHECK(std::abs(equal.amps[3]) == 0.0);
    CHECK(equal.normalized);

    const CompositeState h_only = prepare_entangled({0.0});
    CHECK(h_only.amps[1] == Cplx{1, 0});
    CHECK(std::abs(h_only.amps[2]) == 0.0);

    const CompositeState tilted = prepare_entangled({67.5});
    CHECK(tilted.amps[2].real() == doctest::Approx(0.92388).epsilon(1e-5));
    CHECK(tilted.amps[1].real() == doctest::Approx(0.38268).epsilon(1e-5));
    CHECK(tilted.amps[2].real() == doctest::Approx(std::sin(67.5 * kPi / 180.0)));
    CHECK_THROWS_AS(prepare_entangled({-1.0}), std::invalid_argument);
    CHECK_THROWS_AS(prepare_entangled({90.5}), std::invalid_argument);
}

TEST_CASE("sigma_x HWP unitary: limits, involution, exponential oracle") {
    const CompositeOperator u0 = hwp_unitary_sigma_x(0.0);
    const Mat4 sz1 = gen_sigma_z_1();
    for (int k = 0; k < 16; ++k)
        CHECK(std::abs(u0.m[k] - Cplx{0, -1} * sz1[k]) < kExactTol);

    const CompositeOperator u45 = hwp_unitary_sigma_x(45.0);
    const Mat4 sxa = gen_sigma_x_A();
    for (int k = 0; k < 16; ++k)
        CHECK(std::abs(u45.m[k] - Cplx{0, -1} * sxa[k]) < kExactTol);

    // U1^2 = -1 (the generator squares to the identity)
    const CompositeOperator u = hwp_unitary_sigma_x(22.5);
    CHECK(u.is_unitary());
    const Mat4 u2 = wmsim::testing::mat4_mul(to_mat4(u), to_mat4(u));
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            CHECK(std::abs(u2[r * 4 + c] - (r == c ? Cplx{-1, 0} : Cplx{0, 0})) < kExactTol);

    // against exp(-i pi/2 (sin2t sx A + cos2t sz 1)) computed by Taylor series
    const double two_theta = 2.0 * 22.5 * kPi / 180.0;
    Mat4 gen{};
    for (int k = 0; k < 16; ++k)
        gen[k] = Cplx{0, -kPi / 2.0} *
                 (std::sin(two_theta) * sxa[k] + std::cos(two_theta) * sz1[k]);
    const Mat4 expected = wmsim::testing::mat4_exp(gen);
    CHECK(wmsim::testing::mat4_max_abs_diff(expected, to_mat4(u)) < kExactTol);
}

TEST_CASE("sigma_y HWP unitary: limits and exponential oracle") {
    const CompositeOperator u0 = hwp_unitary_sigma_y(0.0);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            CHECK(std::abs(u0.at(r, c) - (r == c ? Cplx{1, 0} : Cplx{0, 0})) < kExactTol);

    const CompositeOperator u45 = hwp_unitary_sigma_y(45.0);
    const Mat4 sya = gen_sigma_y_A();
    for (int k = 0; k < 16; ++k)
        CHECK(std::abs(u45.m[k] - Cplx{0, -1} * sya[k]) < kExactTol);

    for (double theta : {3.0, 12.5, 31.0}) {
        const CompositeOperator u = hwp_unitary_sigma_y(theta);
        CHECK(u.is_unitary());
        Mat4 gen{};
        for (int k = 0; k < 16; ++k)
            gen[k] = Cplx{0, -2.0 * theta * kPi / 180.0} * sya[k];
        CHECK(wmsim::testing::mat4_max_abs_diff(wmsim::testing::mat4_exp(gen), to_mat4(u)) <
              kExactTol);
    }
}

TEST_CASE("sigma_y HWP rotates the a2 block by +2theta and the a1 block by -2theta") {
    Rng rng(201);
    const double theta = 5.0;
    const double two_theta = 2.0 * theta * kPi / 180.0;
    const double c = std::cos(two_theta);
    const double s = std::sin(two_theta);
    const CompositeOperator u = hwp_unitary_sigma_y(theta);
    for (int i = 0; i < 20; ++i) {
        const PolState pol = rng.pol_state();
        // a2 block: (c_h, c_v) -> (c c_h - s c_v, s c_h + c c_v)
        const CompositeState in2 = tensor(pol, {Cplx{0, 0}, Cplx{1, 0}}, PathBasis::A);
        const CompositeState out2 = apply(u, in2);
        CHECK(std::abs(out2.amps[1] - (c * pol.c_h - s * pol.c_v)) < kExactTol);
        CHECK(std::abs(out2.amps[3] - (s * pol.c_h + c * pol.c_v)) < kExactTol);
        // a1 block: inverse rotation
        const CompositeState in1 = tensor(pol, {Cplx{1, 0}, Cplx{0, 0}}, PathBasis::A);
        const CompositeState out1 = apply(u, in1);
        CHECK(std::abs(out1.amps[0] - (c * pol.c_h + s * pol.c_v)) < kExactTol);
        CHECK(std::abs(out1.amps[2] - (-s * pol.c_h + c * pol.c_v)) < kExactTol);
    }
}

TEST_CASE("disentangler flips only |V>|b2>") {
    const CompositeOperator d = disentangler();
    CHECK(d.is_unitary());
    const CompositeState hb2 =
        tensor(PolState::horizontal(), {Cplx{0, 0}, Cplx{1, 0}}, PathBasis::B);
    const CompositeState hb2_out = apply(d, hb2);
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(std::abs(hb2_out.amps[k] - hb2.amps[k]) < kExactTol);

    const CompositeState vb2 =
        tensor(PolState::vertical(), {Cplx{0, 0}, Cplx{1, 0}}, PathBasis::B);
    const CompositeState vb2_out = apply(d, vb2);
    CHECK(std::abs(vb2_out.amps[3] - Cplx{-1, 0}) < kExactTol);

    const CompositeState a_state =
        tensor(PolState::vertical(), {Cplx{0, 0}, Cplx{1, 0}}, PathBasis::A);
    CHECK_THROWS_AS(apply(d, a_state), BasisMismatchError);
}

TEST_CASE("disentangler never changes the simulation outcome") {
    Rng rng(202);
    for (int i = 0; i < 50; ++i) {
        for (Interpretation interp : {Interpretation::SigmaX, Interpretation::SigmaY}) {
            InterferometerConfig cfg = random_config(rng, interp);
            InterferometerConfig with = cfg;
            with.include_disentangler = true;
            const SimulationOutcome a = run_pipeline(cfg);
            const SimulationOutcome b = run_pipeline(with);
            CHECK(a.p_postselect == doctest::Approx(b.p_postselect).epsilon(kExactTol));
            CHECK(a.p_b1 == doctest::Approx(b.p_b1).epsilon(kExactTol));
            CHECK(a.p_b2 == doctest::Approx(b.p_b2).epsilon(kExactTol));
            CHECK(a.diff == doctest::Approx(b.diff).epsilon(kExactTol));
            CHECK(a.variance == doctest::Approx(b.variance).epsilon(kExactTol));
            CHECK(a.fluctuation == doctest::Approx(b.fluctuation).epsilon(kExactTol));
        }
    }
}

TEST_CASE("pipeline reference points") {
    // no interaction: <H| picks the a2 branch, both ports equally likely
    for (double phi : {10.0, 45.0, 80.0}) {
        InterferometerConfig cfg{{phi}, {0.0, Interpretation::SigmaY}, false, 1.0};
        const SimulationOutcome out = run_pipeline(cfg);
        CHECK(std::abs(out.diff) < kExactTol);
        const double c_h = std::cos(phi * kPi / 180.0);
        CHECK(out.p_postselect == doctest::Approx(c_h * c_h).epsilon(kExactTol));
    }

    {
        InterferometerConfig cfg{{45.0}, {22.5, Interpretation::SigmaX}, false, 1.0};
        const SimulationOutcome out = run_pipeline(cfg);
        CHECK(out.diff == doctest::Approx(-1.0).epsilon(kExactTol));
        CHECK(out.variance <= kExactTol);
        CHECK(out.p_postselect == doctest::Approx(0.5).epsilon(kExactTol));
    }

    {
        InterferometerConfig cfg{{67.5}, {11.25, Interpretation::SigmaY}, false, 1.0};
        const SimulationOutcome out = run_pipeline(cfg);
        CHECK(std::abs(std::abs(out.diff) - 1.0) < kExactTol);
        CHECK(out.variance <= kExactTol);
    }
}

TEST_CASE("which_path_expectation basics and bounds") {
    const PortStats pure = which_path_expectation({Cplx{1, 0}, Cplx{0, 0}}, 1.0);
    CHECK(pure.p_b1 == doctest::Approx(1.0));
    CHECK(pure.p_b2 == doctest::Approx(0.0));
    CHECK(pure.diff == doctest::Approx(1.0));

    const PortStats balanced =
        which_path_expectation({Cplx{kInvSqrt2, 0}, Cplx{0, kInvSqrt2}}, 1.0);
    CHECK(balanced.p_b1 == doctest::Approx(0.5).epsilon(kExactTol));
    CHECK(balanced.p_b2 == doctest::Approx(0.5).epsilon(kExactTol));
    CHECK(std::abs(balanced.diff) < kExactTol);

    Rng rng(203);
    for (int i = 0; i < 200; ++i) {
        const PathAmps p = rng.path_amps();
        const double weight = std::norm(p[0]) + std::norm(p[1]);
        const PortStats st = which_path_expectation(p, weight);
        CHECK(st.diff >= -1.0 - kExactTol);
        CHECK(st.diff <= 1.0 + kExactTol);
        CHECK(st.p_b1 + st.p_b2 == doctest::Approx(1.0).epsilon(kExactTol));
    }
    CHECK_THROWS_AS(which_path_expectation({Cplx{1, 0}, Cplx{0, 0}}, 0.0),
                    std::invalid_argument);
}

TEST_CASE("post-selection probability closed form holds on random configs") {
    Rng rng(204);
    for (int i = 0; i < 100; ++i) {
        for (Interpretation interp : {Interpretation::SigmaX, Interpretation::SigmaY}) {
            const InterferometerConfig cfg = random_config(rng, interp);
            const SimulationOutcome out = run_pipeline(cfg);
            const double c_h = cfg.prep.c_h();
            const double c_v = cfg.prep.c_v();
            const double c2 = std::cos(2.0 * cfg.hwp.theta_deg * kPi / 180.0);
            const double s2 = std::sin(2.0 * cfg.hwp.theta_deg * kPi / 180.0);
            const double expected = c_h * c_h * c2 * c2 + c_v * c_v * s2 * s2;
            CHECK(out.p_postselect == doctest::Approx(expected).epsilon(kExactTol));
        }
    }
}

TEST_CASE("projection and beam splitter commute (acting on different factors)") {
    Rng rng(205);
    for (int i = 0; i < 100; ++i) {
        const InterferometerConfig cfg = random_config(rng, Interpretation::SigmaX);
        CompositeState evolved = apply(hwp_unitary(cfg.hwp), prepare_entangled(cfg.prep));

        // BS first, then project
        const PolProjection after_bs =
            project_polarization(change_path_basis(evolved), PolState::horizontal());
        // project first, then BS on the 2-component path state
        const PolProjection before_bs = project_polarization(evolved, PolState::horizontal());
        const PathAmps moved = change_path_amps(before_bs.path, PathBasis::A);

        CHECK(after_bs.weight == doctest::Approx(before_bs.weight).epsilon(kExactTol));
        for (int k = 0; k < 2; ++k)
            CHECK(std::abs(after_bs.path[k] - moved[k]) < kExactTol);
    }
}

TEST_CASE("the two interpretations give opposite signed, equal magnitude diff") {
    Rng rng(206);
    for (int i = 0; i < 100; ++i) {
        InterferometerConfig cfg = random_config(rng, Interpretation::SigmaX);
        InterferometerConfig cfg_y = cfg;
        cfg_y.hwp.interpretation = Interpretation::SigmaY;
        const SimulationOutcome x = run_pipeline(cfg);
        const SimulationOutcome y = run_pipeline(cfg_y);
        CHECK(std::abs(x.diff) == doctest::Approx(std::abs(y.diff)).epsilon(kExactTol));
        CHECK(x.diff == doctest::Approx(-y.diff).epsilon(kExactTol));
        CHECK(x.p_postselect == doctest::Approx(y.p_postselect).epsilon(kExactTol));
    }
}

TEST_CASE("visibility scales the port asymmetry linearly") {
    Rng rng(207);
    for (int i = 0; i < 50; ++i) {
        InterferometerConfig cfg = random_config(rng, Interpretation::SigmaY);
        const SimulationOutcome ideal = run_pipeline(cfg);
        const double v = rng.uniform(0.0, 1.0);
        cfg.visibility = v;
        const SimulationOutcome dimmed = run_pipeline(cfg);
        CHECK(dimmed.diff == doctest::Approx(v * ideal.diff).epsilon(kExactTol));
        CHECK(dimmed.p_b1 + dimmed.p_b2 == doctest::Approx(1.0).epsilon(kExactTol));
        CHECK(dimmed.p_postselect == doctest::Approx(ideal.p_postselect).epsilon(kExactTol));
        CHECK(dimmed.variance ==
              doctest::Approx(1.0 - dimmed.diff * dimmed.diff).epsilon(kExactTol));
        CHECK(dimmed.fluctuation == doctest::Approx(std::sqrt(dimmed.variance)));
    }
    CHECK_THROWS_AS(
        run_pipeline({{45.0}, {5.0, Interpretation::SigmaX}, false, 1.5}),
        std::invalid_argument);
}

TEST_CASE("impossible post-selection raises") {
    // phi = 0 (C_V = 0) and theta = 45: the <H| branch is empty
    InterferometerConfig cfg{{0.0}, {45.0, Interpretation::SigmaX}, false, 1.0};
    CHECK_THROWS_AS(run_pipeline(cfg), PostSelectionImpossibleError);
}

TEST_CASE("diff is the expectation of the output which-path observable") {
    Rng rng(208);
    const CompositeOperator k = kron(mat2_identity(), which_path_b(), PathBasis::B, false);
    for (int i = 0; i < 50; ++i) {
        const InterferometerConfig cfg = random_config(rng, Interpretation::SigmaY);
        const SimulationOutcome out = run_pipeline(cfg);

        CompositeState s = change_path_basis(apply(hwp_unitary(cfg.hwp),
                                                   prepare_entangled(cfg.prep)));
        const PolProjection proj = project_polarization(s, PolState::horizontal());
        const CompositeState branch = tensor(PolState::horizontal(), proj.path, PathBasis::B);
        const Cplx expectation = inner(branch, apply(k, branch));
        CHECK(expectation.real() / proj.weight == doctest::Approx(out.diff).epsilon(kExactTol));
        CHECK(std::abs(expectation.imag()) < kExactTol);
    }
}
