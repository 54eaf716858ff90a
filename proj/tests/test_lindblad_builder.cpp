#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "quadlind/lindblad_builder.hpp"

#include "support/random_models.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>

using namespace quadlind;
using testsupport::flat_bath;

namespace {

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

TEST_CASE("coupling weights: zero weights give a zero vector") {
    const auto dec = diagonalize(tight_binding_chain(3, 1.0, 2.0));
    CouplingRegion region;
    region.sites = {0, 1};
    region.weights = Vector::Zero(2);
    CHECK(max_abs(RealMatrix(coupling_weights(dec, region))) == 0.0);
}

TEST_CASE("coupling weights: single site in a normal model gives |A_pk|^2") {
    std::mt19937 rng(5);
    QuadraticHamiltonian h;
    h.statistics = Statistics::fermion;
    const Matrix g = testsupport::random_complex(rng, 4);
    h.Q = g.adjoint() * g + 0.1 * Matrix::Identity(4, 4);  // positive spectrum
    h.P = Matrix::Zero(4, 4);
    const auto dec = diagonalize(h);
    REQUIRE(max_abs(dec.B) == 0.0);
    CouplingRegion region;
    region.sites = {2};
    region.weights = Vector::Ones(1);
    const RealVector phi = coupling_weights(dec, region);
    for (Eigen::Index k = 0; k < 4; ++k)
        CHECK(phi(k) == doctest::Approx(std::norm(dec.A(2, k))).epsilon(1e-12));
}

TEST_CASE("tight-binding 3-chain end coupling gives Phi = (1/4, 1/2, 1/4)") {
    const auto dec = diagonalize(tight_binding_chain(3, 1.0, 2.0));
    CouplingRegion region;
    region.sites = {0};
    region.weights = Vector::Ones(1);
    const RealVector phi = coupling_weights(dec, region);
    CHECK(phi(0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(phi(1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(phi(2) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("effective couplings: flat density scales Phi by gamma0") {
    const auto h = tight_binding_chain(3, 1.0, 2.0);
    const auto dec = diagonalize(h);
    const std::vector<BathSpec> baths = {flat_bath(1.0, 0.0, 0.3, {0}),
                                         flat_bath(2.0, 0.5, 0.7, {2})};
    const RealMatrix gamma = effective_couplings(dec, baths);
    const RealVector phi_left = coupling_weights(dec, baths[0].region);
    const RealVector phi_right = coupling_weights(dec, baths[1].region);
    for (Eigen::Index k = 0; k < 3; ++k) {
        CHECK(gamma(0, k) == doctest::Approx(0.3 * phi_left(k)).epsilon(1e-14));
        CHECK(gamma(1, k) == doctest::Approx(0.7 * phi_right(k)).epsilon(1e-14));
        CHECK(gamma(0, k) >= 0.0);
    }
}

TEST_CASE("effective couplings: ohmic density evaluated mode by mode") {
    const auto h = tight_binding_chain(3, 1.0, 2.0);
    const auto dec = diagonalize(h);
    BathSpec bath = flat_bath(1.0, 0.0, 1.0, {0});
    bath.spectral_density = SpectralDensity::ohmic(0.8, 5.0);
    const RealMatrix gamma = effective_couplings(dec, {bath});
    const RealVector phi = coupling_weights(dec, bath.region);
    for (Eigen::Index k = 0; k < 3; ++k) {
        const double w = dec.omegas(k);
        const double scalar = 0.8 * w * std::exp(-w / 5.0) * phi(k);
        CHECK(gamma(0, k) == doctest::Approx(scalar).epsilon(1e-12));
    }
}

TEST_CASE("decoupled region produces a zero gamma row") {
    const auto dec = diagonalize(tight_binding_chain(3, 1.0, 2.0));
    BathSpec bath = flat_bath(1.0, 0.0, 0.5, {1});
    bath.region.weights = Vector::Zero(1);
    const RealMatrix gamma = effective_couplings(dec, {bath});
    CHECK(max_abs(gamma) == 0.0);
}

TEST_CASE("eigenoperator coefficients select the resonant modes") {
    const auto h = tight_binding_chain(3, 1.0, 2.0);
    const auto dec = diagonalize(h);
    CouplingRegion region;
    region.sites = {0};
    region.weights = Vector::Ones(1);

    SUBCASE("off-spectrum frequency yields an empty list") {
        CHECK(eigenoperator_coefficients(dec, region, 17.0).empty());
    }
    SUBCASE("positive Bohr frequency picks b_k with overlap coefficient") {
        const auto terms = eigenoperator_coefficients(dec, region, dec.omegas(1));
        REQUIRE(terms.size() == 1);
        CHECK(terms[0].mode == 1);
        CHECK_FALSE(terms[0].dagger);
        CHECK(std::abs(terms[0].coefficient - dec.phi(0, 1)) < 1e-14);
    }
    SUBCASE("negative Bohr frequency picks the conjugate on b_k^dag") {
        const auto terms =
            eigenoperator_coefficients(dec, region, -dec.omegas(2));
        REQUIRE(terms.size() == 1);
        CHECK(terms[0].mode == 2);
        CHECK(terms[0].dagger);
        CHECK(std::abs(terms[0].coefficient - std::conj(dec.phi(0, 2))) < 1e-14);
    }
}

TEST_CASE("eigenoperator coefficients at omega = 0 carry both branches") {
    const auto h = kitaev_chain(2, 1.0, 1.0, 0.0);  // zero mode
    const auto dec = diagonalize(h);
    CouplingRegion region;
    region.sites = {0};
    region.weights = Vector::Ones(1);
    const auto terms = eigenoperator_coefficients(dec, region, 0.0);
    REQUIRE(terms.size() == 2);
    CHECK(terms[0].mode == 0);
    CHECK_FALSE(terms[0].dagger);
    CHECK(terms[1].mode == 0);
    CHECK(terms[1].dagger);
}

TEST_CASE("degenerate class eigenoperator lists both class members") {
    const auto h = doubled_kitaev();
    const auto dec = diagonalize(h);
    CouplingRegion region;
    region.sites = {0, 2};
    region.weights = Vector::Ones(2);
    const auto cls = classify_spectrum(dec);
    REQUIRE(cls.classes[0].size() == 2);
    const auto terms = eigenoperator_coefficients(
        dec, region, cls.class_energies[0], cls.cluster_tol);
    CHECK(terms.size() == 2);
}

TEST_CASE("three-site chain with two end baths builds a clean model") {
    const auto h = tight_binding_chain(3, 1.0, 2.0);
    const auto model = build_effective_model(
        h, {flat_bath(2.0, 0.5, 0.4, {0}), flat_bath(1.0, 0.5, 0.4, {2})});
    CHECK(model.closed_form_ok);
    CHECK_FALSE(model.zero_mode.has_value());
    CHECK(model.classification.nondegenerate());
    CHECK(model.gamma.rows() == 2);
    CHECK(model.gamma.cols() == 3);
    CHECK(model.gamma.minCoeff() > 0.0);
    // flat baths: no Lamb shift
    CHECK(max_abs(RealMatrix(model.omega_tilde - model.decomposition.omegas)) <
          1e-14);
}

TEST_CASE("engineered zero level populates the zero-mode data") {
    QuadraticHamiltonian h;
    h.statistics = Statistics::fermion;
    h.Q = Matrix::Zero(2, 2);
    h.Q(1, 1) = 1.0;
    h.P = Matrix::Zero(2, 2);
    const auto model = build_effective_model(
        h, {flat_bath(1.0, 0.2, 0.3, {0, 1}), flat_bath(0.5, -0.1, 0.6, {0})});
    REQUIRE(model.zero_mode.has_value());
    const auto& zm = *model.zero_mode;
    CHECK(zm.index == 0);
    // Delta = sum_n J_n(0) Phi_{n,0}: definition versus the gamma row, exact
    double delta_definition = 0.0;
    for (Eigen::Index b = 0; b < model.n_baths(); ++b)
        delta_definition += model.baths[b].spectral_density(0.0) *
                            model.coupling_phi(b, zm.index);
    CHECK(zm.delta == delta_definition);
    CHECK(zm.delta == model.gamma.col(zm.index).sum());
    CHECK(zm.closed_form_ok);
    CHECK(model.closed_form_ok);
    for (Eigen::Index b = 0; b < model.n_baths(); ++b)
        CHECK(std::abs(zm.psi(b)) ==
              doctest::Approx(model.coupling_phi(b, zm.index)).epsilon(1e-12));
}

TEST_CASE("Kitaev sweet spot builds zero-mode data, not degeneracy blocks") {
    const auto h = kitaev_chain(2, 1.0, 1.0, 0.0);
    const auto model = build_effective_model(
        h, {flat_bath(1.0, 0.0, 0.5, {0}), flat_bath(2.0, 0.0, 0.5, {1})});
    CHECK(model.zero_mode.has_value());
    CHECK(model.degeneracy_blocks.empty());
    CHECK(model.closed_form_ok);
    CHECK(model.zero_mode->delta > 0.0);
}

TEST_CASE("degenerate model populates rank-one PSD Hermitian blocks") {
    const auto h = doubled_kitaev();
    const auto model = build_effective_model(
        h, {flat_bath(1.0, 0.0, 0.5, {0, 2}), flat_bath(2.0, 0.3, 0.5, {1, 3})});
    CHECK_FALSE(model.closed_form_ok);
    REQUIRE_FALSE(model.degeneracy_blocks.empty());
    bool saw_nontrivial = false;
    for (const auto& block : model.degeneracy_blocks) {
        for (const auto& phi_block : block.phi_blocks) {
            CHECK(max_abs(phi_block - phi_block.adjoint()) < 1e-12);
            Eigen::SelfAdjointEigenSolver<Matrix> es(phi_block);
            const auto& eigs = es.eigenvalues();
            CHECK(eigs.minCoeff() > -1e-12);
            if (eigs.size() > 1) {
                saw_nontrivial = true;
                CHECK(eigs(eigs.size() - 2) <=
                      1e-10 * std::max(1e-300, eigs(eigs.size() - 1)));
            }
        }
    }
    CHECK(saw_nontrivial);
}

TEST_CASE("block spectra are invariant under a degenerate-class gauge change") {
    const auto h = doubled_kitaev();
    const auto dec = diagonalize(h);
    const auto cls = classify_spectrum(dec);
    const std::vector<BathSpec> baths = {flat_bath(1.0, 0.0, 0.5, {0, 2})};
    const auto blocks = build_degeneracy_blocks(dec, baths, cls);

    std::mt19937 rng(21);
    const Matrix g = testsupport::random_hermitian(rng, 2);
    const Matrix w = (Complex(0, 1) * g).exp();
    auto rotated = dec;
    const auto& modes = cls.classes[0];
    REQUIRE(modes.size() == 2);
    Matrix cols_a(dec.A.rows(), 2), cols_b(dec.B.rows(), 2);
    cols_a << dec.A.col(modes[0]), dec.A.col(modes[1]);
    cols_b << dec.B.col(modes[0]), dec.B.col(modes[1]);
    cols_a *= w;
    cols_b *= w.conjugate();
    rotated.A.col(modes[0]) = cols_a.col(0);
    rotated.A.col(modes[1]) = cols_a.col(1);
    rotated.B.col(modes[0]) = cols_b.col(0);
    rotated.B.col(modes[1]) = cols_b.col(1);
    rotated.phi = rotated.A + rotated.B.conjugate();

    CHECK(verify_canonical(rotated, h.statistics).max() < 1e-10);
    const auto rotated_blocks = build_degeneracy_blocks(rotated, baths, cls);
    for (std::size_t l = 0; l < blocks.size(); ++l) {
        Eigen::SelfAdjointEigenSolver<Matrix> a(blocks[l].phi_blocks[0]);
        Eigen::SelfAdjointEigenSolver<Matrix> b(rotated_blocks[l].phi_blocks[0]);
        CHECK(max_abs(Matrix((a.eigenvalues() - b.eigenvalues())
                                 .cast<Complex>())) < 1e-10);
    }
}

TEST_CASE("singleton blocks reduce to the scalar coupling weights") {
    const auto h = tight_binding_chain(3, 1.0, 2.0);
    const auto dec = diagonalize(h);
    const auto cls = classify_spectrum(dec);
    const std::vector<BathSpec> baths = {flat_bath(1.0, 0.0, 0.5, {0})};
    const auto blocks = build_degeneracy_blocks(dec, baths, cls);
    const RealVector phi = coupling_weights(dec, baths[0].region);
    REQUIRE(blocks.size() == 3);
    for (const auto& block : blocks) {
        REQUIRE(block.phi_blocks[0].rows() == 1);
        CHECK(block.phi_blocks[0](0, 0).real() ==
              doctest::Approx(phi(block.modes[0])).epsilon(1e-12));
    }
}

TEST_CASE("complex zero-mode gauge disables the closed-form pipeline") {
    const auto base = kitaev_chain(2, 1.0, 1.0, 0.0);
    Vector phases(2);
    phases << std::polar(1.0, 0.9), std::polar(1.0, -0.4);
    QuadraticHamiltonian h;
    h.statistics = Statistics::fermion;
    h.Q = phases.asDiagonal() * base.Q * phases.conjugate().asDiagonal();
    h.P = phases.asDiagonal() * base.P * phases.asDiagonal();
    const auto model = build_effective_model(
        h, {flat_bath(1.0, 0.0, 0.5, {0}), flat_bath(2.0, 0.0, 0.5, {1})});
    REQUIRE(model.zero_mode.has_value());
    CHECK_FALSE(model.zero_mode->closed_form_ok);
    CHECK_FALSE(model.closed_form_ok);
    CHECK_FALSE(model.warnings.empty());
    CHECK_THROWS_AS(model.require_closed_form("test"), CapabilityError);
}

TEST_CASE("bosonic chemical potential above the lowest mode is rejected") {
    const auto h = harmonic_chain(3, 0.5, 2.0);
    const auto dec = diagonalize(h);
    const double omega_min = dec.omegas.minCoeff();
    CHECK_THROWS_AS(
        build_effective_model(h, {flat_bath(1.0, omega_min + 0.1, 0.5, {0})}),
        PhysicsError);
    const auto model =
        build_effective_model(h, {flat_bath(1.0, omega_min - 0.5, 0.5, {0})});
    CHECK(model.gamma.minCoeff() >= 0.0);
}

TEST_CASE("local comparison rates") {
    SUBCASE("single flat bath at resonance Omega = mu") {
        const auto rates = local_rates({flat_bath(1.0, 1.0, 0.8, {0, 1})}, 1.0,
                                       Statistics::fermion);
        REQUIRE(rates.sites.size() == 2);
        CHECK(rates.up(0) == doctest::Approx(0.4));
        CHECK(rates.down(0) == doctest::Approx(0.4));
    }
    SUBCASE("cold fermionic bath above mu only removes particles") {
        const auto rates = local_rates({flat_bath(1e-4, 0.0, 0.8, {0})}, 1.0,
                                       Statistics::fermion);
        CHECK(rates.up(0) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(rates.down(0) == doctest::Approx(0.8).epsilon(1e-12));
    }
    SUBCASE("two overlapping baths add their scalar rates") {
        const auto left = flat_bath(1.0, 0.0, 0.3, {0, 1});
        const auto right = flat_bath(2.0, 0.4, 0.9, {1});
        const auto rates = local_rates({left, right}, 1.3, Statistics::fermion);
        REQUIRE(rates.sites.size() == 2);
        const double f_l = occupation(left, Statistics::fermion, 1.3);
        const double f_r = occupation(right, Statistics::fermion, 1.3);
        CHECK(rates.up(1) == doctest::Approx(0.3 * f_l + 0.9 * f_r));
        CHECK(rates.up(0) == doctest::Approx(0.3 * f_l));
        CHECK(rates.down(1) ==
              doctest::Approx(0.3 * (1 - f_l) + 0.9 * (1 - f_r)));
    }
    SUBCASE("Omega must be positive") {
        CHECK_THROWS_AS(local_rates({flat_bath(1.0, 0.0, 0.3, {0})}, 0.0,
                                    Statistics::fermion),
                        ConfigError);
    }
}

TEST_CASE("gamma stays nonnegative across random configurations") {
    std::mt19937 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const auto h = testsupport::random_fermion(rng, 5);
        std::uniform_real_distribution<double> pick(0.1, 2.0);
        const auto model = build_effective_model(
            h, {flat_bath(pick(rng), pick(rng) - 1.0, pick(rng), {0, 2}),
                flat_bath(pick(rng), pick(rng) - 1.0, pick(rng), {4})});
        CHECK(model.gamma.minCoeff() >= 0.0);
    }
}

TEST_CASE("quasi-degenerate spectra surface a gap warning") {
    QuadraticHamiltonian h;
    h.statistics = Statistics::fermion;
    h.Q = Matrix::Zero(2, 2);
    h.Q(0, 0) = 1.0;
    h.Q(1, 1) = 1.0 + 1e-5;
    h.P = Matrix::Zero(2, 2);
    const auto model =
        build_effective_model(h, {flat_bath(1.0, 0.0, 0.5, {0, 1})});
    CHECK(model.classification.nondegenerate());
    CHECK_FALSE(model.warnings.empty());
    CHECK(model.smallest_class_gap == doctest::Approx(1e-5).epsilon(1e-6));
}
