#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "quadlind/bogoliubov.hpp"

#include "support/random_models.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

using namespace quadlind;

namespace {

// independent route: nonnegative half of the H_bdg spectrum, ascending
RealVector bdg_spectrum_oracle(const QuadraticHamiltonian& h) {
    const auto nambu = build_bdg(h);
    Eigen::SelfAdjointEigenSolver<Matrix> es(nambu.H_bdg);
    return es.eigenvalues().tail(h.n_sites());
}

BogoliubovDecomposition fake_decomposition(const RealVector& omegas,
                                           Statistics stat) {
    BogoliubovDecomposition dec;
    dec.statistics = stat;
    const Eigen::Index n = omegas.size();
    dec.A = Matrix::Identity(n, n);
    dec.B = Matrix::Zero(n, n);
    dec.omegas = omegas;
    dec.phi = dec.A;
    dec.spectral_norm = omegas.cwiseAbs().maxCoeff();
    return dec;
}

// two decoupled copies of the same Kitaev 2-site block: a genuinely
// degenerate paired model
QuadraticHamiltonian doubled_kitaev() {
    const auto block = kitaev_chain(2, 1.0, 0.6, 0.4);
    QuadraticHamiltonian h;
    h.statistics = Statistics::fermion;
    h.Q = Matrix::Zero(4, 4);
    h.P = Matrix::Zero(4, 4);
    h.Q.topLeftCorner(2, 2) = block.Q;
    h.Q.bottomRightCorner(2, 2) = block.Q;
    h.P.topLeftCorner(2, 2) = block.P;
    h.P.bottomRightCorner(2, 2) = block.P;
    return h;
}

}  // namespace

TEST_CASE("already-diagonal Q sorts modes ascending") {
    Matrix q = Matrix::Zero(2, 2);
    q(0, 0) = 3;
    q(1, 1) = 1;
    QuadraticHamiltonian h{Statistics::fermion, q, Matrix::Zero(2, 2)};
    const auto dec = diagonalize(h);
    CHECK(dec.omegas(0) == doctest::Approx(1.0));
    CHECK(dec.omegas(1) == doctest::Approx(3.0));
    Matrix permutation(2, 2);
    permutation << 0, 1, 1, 0;
    CHECK(max_abs(dec.A - permutation) < 1e-14);
    CHECK(max_abs(dec.B) == 0.0);
}

TEST_CASE("tight-binding chain N=3 has the closed-form spectrum") {
    const auto h = tight_binding_chain(3, 1.0, 2.0);
    const auto dec = diagonalize(h);
    // closed form eps0 - 2 J cos(k pi / 4), cross-checked by a dense solve
    CHECK(dec.omegas(0) == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));
    CHECK(dec.omegas(1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(dec.omegas(2) == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));
    const RealVector reference = bdg_spectrum_oracle(h);
    CHECK(max_abs(Matrix((dec.omegas - reference).cast<Complex>())) < 1e-12);
}

TEST_CASE("Kitaev 2-site at J = Delta, mu0 = 0 carries a zero mode") {
    // dense eigensolve of the 4x4 H_bdg fixes the spectrum at (0, 2)
    const auto h = kitaev_chain(2, 1.0, 1.0, 0.0);
    const RealVector reference = bdg_spectrum_oracle(h);
    CHECK(reference(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(reference(1) == doctest::Approx(2.0).epsilon(1e-12));

    const auto dec = diagonalize(h);
    CHECK(dec.omegas(0) == doctest::Approx(0.0));
    CHECK(dec.omegas(1) == doctest::Approx(2.0));
    CHECK(verify_canonical(dec, h.statistics).max() < 1e-12);
    CHECK(reconstruct_residual(dec, h) < 1e-12);

    // real Hamiltonian: the zero-mode columns stay real, so phi is real
    CHECK(dec.A.imag().cwiseAbs().maxCoeff() == 0.0);
    CHECK(dec.B.imag().cwiseAbs().maxCoeff() == 0.0);

    const auto cls = classify_spectrum(dec);
    CHECK(cls.zero_modes == std::vector<int>{0});
    CHECK(cls.classes.size() == 2);
}

TEST_CASE("Kitaev 2-site away from the sweet spot: omega = (|J-D|, J+D)") {
    const auto h = kitaev_chain(2, 1.0, 0.5, 0.0);
    const auto dec = diagonalize(h);
    CHECK(dec.omegas(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(dec.omegas(1) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("verify_canonical residual patterns") {
    auto dec = fake_decomposition(RealVector::Ones(3), Statistics::fermion);
    CHECK(verify_canonical(dec, Statistics::fermion).max() == 0.0);
    dec.A *= 2.0;
    const auto residuals = verify_canonical(dec, Statistics::fermion);
    CHECK(residuals.left_normalization == doctest::Approx(3.0));
}

TEST_CASE("reconstruct_residual reacts to corruption") {
    std::mt19937 rng(11);
    const auto h = testsupport::random_fermion(rng, 6);
    auto dec = diagonalize(h);
    CHECK(reconstruct_residual(dec, h) < 1e-10);
    dec.A(2, 3) += 0.1;
    CHECK(reconstruct_residual(dec, h) > 1e-3);
}

TEST_CASE("random fermionic models satisfy the canonical constraints") {
    std::mt19937 rng(101);
    for (int trial = 0; trial < 100; ++trial) {
        const auto h = testsupport::random_fermion(rng, 8);
        const auto dec = diagonalize(h);
        CHECK(verify_canonical(dec, h.statistics).max() < 1e-10);
        CHECK(reconstruct_residual(dec, h) < 1e-10);
        CHECK(dec.omegas.minCoeff() >= 0.0);
        // spectrum matches the nonnegative half of the dense solve
        const RealVector reference = bdg_spectrum_oracle(h);
        CHECK((dec.omegas - reference).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("random stable bosonic models diagonalize in the indefinite metric") {
    std::mt19937 rng(202);
    for (int trial = 0; trial < 50; ++trial) {
        const auto h = testsupport::random_stable_boson(rng, 6);
        const auto dec = diagonalize(h);
        CHECK(verify_canonical(dec, h.statistics).max() < 1e-9);
        CHECK(reconstruct_residual(dec, h) < 1e-9);
        CHECK(dec.omegas.minCoeff() > 0.0);
    }
}

TEST_CASE("normal fermionic models with positive Q keep B = 0, A unitary") {
    std::mt19937 rng(303);
    for (int trial = 0; trial < 20; ++trial) {
        QuadraticHamiltonian h;
        h.statistics = Statistics::fermion;
        const Matrix g = testsupport::random_complex(rng, 7);
        h.Q = g.adjoint() * g + 0.1 * Matrix::Identity(7, 7);
        h.P = Matrix::Zero(7, 7);
        const auto dec = diagonalize(h);
        CHECK(max_abs(dec.B) == 0.0);
        CHECK(max_abs(dec.A.adjoint() * dec.A - Matrix::Identity(7, 7)) < 1e-12);
        CHECK(dec.omegas.minCoeff() > 0.0);
    }
}

TEST_CASE("indefinite normal Q canonicalizes to omega >= 0") {
    std::mt19937 rng(304);
    for (int trial = 0; trial < 20; ++trial) {
        QuadraticHamiltonian h;
        h.statistics = Statistics::fermion;
        h.Q = testsupport::random_hermitian(rng, 7);
        h.P = Matrix::Zero(7, 7);
        const auto dec = diagonalize(h);
        CHECK(dec.omegas.minCoeff() >= 0.0);
        CHECK(verify_canonical(dec, h.statistics).max() < 1e-12);
        CHECK(reconstruct_residual(dec, h) < 1e-12);
    }
}

TEST_CASE("normal path swaps negative single-particle levels into B") {
    Matrix q = Matrix::Zero(2, 2);
    q(0, 0) = -2.0;
    q(1, 1) = 1.0;
    QuadraticHamiltonian h{Statistics::fermion, q, Matrix::Zero(2, 2)};
    const auto dec = diagonalize(h);
    CHECK(dec.omegas(0) == doctest::Approx(1.0));
    CHECK(dec.omegas(1) == doctest::Approx(2.0));
    CHECK(verify_canonical(dec, h.statistics).max() < 1e-14);
    CHECK(reconstruct_residual(dec, h) < 1e-14);
    // the swapped mode lives in the B block
    CHECK(std::abs(dec.B(0, 1)) == doctest::Approx(1.0));
    CHECK(std::abs(dec.A(0, 1)) == doctest::Approx(0.0));
}

TEST_CASE("unstable bosonic models are rejected") {
    QuadraticHamiltonian h;
    h.statistics = Statistics::boson;
    h.Q = Matrix::Identity(2, 2);
    h.P = Matrix::Zero(2, 2);
    h.P(0, 1) = h.P(1, 0) = 3.0;  // pairing overwhelms the gap
    CHECK_THROWS_AS(diagonalize(h), PhysicsError);

    Matrix q = Matrix::Zero(2, 2);
    q(0, 0) = -1.0;
    q(1, 1) = 1.0;
    QuadraticHamiltonian normal{Statistics::boson, q, Matrix::Zero(2, 2)};
    CHECK_THROWS_AS(diagonalize(normal), PhysicsError);
}

TEST_CASE("classify_spectrum buckets energies") {
    RealVector omegas(3);
    omegas << 0.5, 1.0, 2.0;
    auto cls = classify_spectrum(fake_decomposition(omegas, Statistics::fermion),
                                 1e-8, 1e-8);
    CHECK(cls.zero_modes.empty());
    CHECK(cls.classes.size() == 3);
    CHECK(cls.nondegenerate());

    omegas << 1e-12, 1.0, 1.0 + 1e-12;
    cls = classify_spectrum(fake_decomposition(omegas, Statistics::fermion),
                            1e-8, 1e-8);
    CHECK(cls.zero_modes == std::vector<int>{0});
    REQUIRE(cls.classes.size() == 2);
    CHECK(cls.classes[1].size() == 2);
    CHECK_FALSE(cls.nondegenerate());
}

TEST_CASE("bosonic zero modes are rejected as unsupported") {
    RealVector omegas(2);
    omegas << 1e-14, 1.0;
    CHECK_THROWS_AS(classify_spectrum(
                        fake_decomposition(omegas, Statistics::boson), 1e-8, 1e-8),
                    CapabilityError);
}

TEST_CASE("degenerate paired model keeps the exact block structure") {
    const auto h = doubled_kitaev();
    const auto dec = diagonalize(h);
    CHECK(verify_canonical(dec, h.statistics).max() < 1e-10);
    CHECK(reconstruct_residual(dec, h) < 1e-10);
    const auto cls = classify_spectrum(dec);
    REQUIRE(cls.classes.size() == 2);  // two doubly-degenerate energies
    CHECK(cls.classes[0].size() == 2);
    CHECK(cls.classes[1].size() == 2);
}

TEST_CASE("complex Hamiltonian with a zero mode still diagonalizes") {
    // gauge-rotate the zero-mode Kitaev point by site-dependent phases
    const auto base = kitaev_chain(3, 1.0, 1.0, 0.0);
    Vector phases(3);
    phases << std::polar(1.0, 0.3), std::polar(1.0, -1.1), std::polar(1.0, 0.7);
    QuadraticHamiltonian h;
    h.statistics = Statistics::fermion;
    h.Q = phases.asDiagonal() * base.Q * phases.conjugate().asDiagonal();
    h.P = phases.asDiagonal() * base.P * phases.asDiagonal();
    REQUIRE(validate(h, 1e-12).passed);

    const auto dec = diagonalize(h);
    CHECK(verify_canonical(dec, h.statistics).max() < 1e-10);
    CHECK(reconstruct_residual(dec, h) < 1e-10);
    const auto cls = classify_spectrum(dec);
    CHECK(cls.zero_modes.size() == 1);
}

TEST_CASE("bosonic spectrum equals the nonnegative eigenvalues of D") {
    std::mt19937 rng(404);
    for (int trial = 0; trial < 10; ++trial) {
        const auto h = testsupport::random_stable_boson(rng, 5);
        const auto dec = diagonalize(h);
        const auto nambu = build_bdg(h);
        Eigen::ComplexEigenSolver<Matrix> es(nambu.D);
        REQUIRE(es.info() == Eigen::Success);
        std::vector<double> positive;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            CHECK(std::abs(es.eigenvalues()(i).imag()) < 1e-9);
            if (es.eigenvalues()(i).real() > 0.0)
                positive.push_back(es.eigenvalues()(i).real());
        }
        REQUIRE(positive.size() == 5);
        std::sort(positive.begin(), positive.end());
        for (Eigen::Index k = 0; k < 5; ++k)
            CHECK(std::abs(dec.omegas(k) - positive[static_cast<std::size_t>(k)]) <
                  1e-10);
    }
}

TEST_CASE("constant shift equals zeta/2 (Tr Q - sum omega)") {
    const auto h = kitaev_chain(2, 1.0, 1.0, 0.0);
    const auto dec = diagonalize(h);
    // Tr Q = 0, sum omega = 2 -> shift = -1; Fock spectrum is {-1,-1,1,1}
    CHECK(dec.constant_shift == doctest::Approx(-1.0));
}
