// random_models.hpp — seeded generators for random quadratic models and baths
// shared by the unit and acceptance suites.

#pragma once

#include "quadlind/bogoliubov.hpp"
#include "quadlind/environment.hpp"
#include "quadlind/lindblad_builder.hpp"
#include "quadlind/oracle.hpp"
#include "quadlind/quadratic_model.hpp"
#include "quadlind/types.hpp"

#include <Eigen/Eigenvalues>

#include <random>
#include <vector>

namespace testsupport {

using namespace quadlind;

inline Matrix random_complex(std::mt19937& rng, int n, double scale = 1.0) {
    std::normal_distribution<double> dist(0.0, scale);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = Complex(dist(rng), dist(rng));
    return m;
}

inline Matrix random_hermitian(std::mt19937& rng, int n, double scale = 1.0) {
    Matrix m = random_complex(rng, n, scale);
    return 0.5 * (m + m.adjoint());
}

// P with P^T = -zeta P
inline Matrix random_pairing(std::mt19937& rng, int n, Statistics stat,
                             double scale = 1.0) {
    Matrix m = random_complex(rng, n, scale);
    const double z = static_cast<double>(zeta(stat));
    return 0.5 * (m - z * m.transpose());
}

inline QuadraticHamiltonian random_fermion(std::mt19937& rng, int n,
                                           double pairing_scale = 1.0,
                                           bool real_valued = false) {
    QuadraticHamiltonian h;
    h.statistics = Statistics::fermion;
    h.Q = random_hermitian(rng, n);
    h.P = random_pairing(rng, n, Statistics::fermion, pairing_scale);
    if (real_valued) {
        h.Q = h.Q.real().cast<Complex>();
        h.P = h.P.real().cast<Complex>();
    }
    return h;
}

// Stable bosonic model: shift Q until H_bdg is positive definite with margin.
inline QuadraticHamiltonian random_stable_boson(std::mt19937& rng, int n,
                                                double pairing_scale = 0.5) {
    QuadraticHamiltonian h;
    h.statistics = Statistics::boson;
    h.Q = random_hermitian(rng, n);
    h.P = random_pairing(rng, n, Statistics::boson, pairing_scale);
    const NambuMatrices nambu = build_bdg(h);
    Eigen::SelfAdjointEigenSolver<Matrix> es(nambu.H_bdg);
    const double floor = 0.1 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    const double lift = floor - es.eigenvalues().minCoeff();
    if (lift > 0.0)
        h.Q += lift * Matrix::Identity(n, n);
    return h;
}

inline BathSpec flat_bath(double temperature, double mu, double gamma0,
                          std::vector<int> sites) {
    BathSpec bath;
    bath.temperature = temperature;
    bath.chemical_potential = mu;
    bath.spectral_density = SpectralDensity::flat(gamma0);
    bath.region.sites = std::move(sites);
    bath.region.weights =
        Vector::Ones(static_cast<Eigen::Index>(bath.region.sites.size()));
    return bath;
}

// Two flat baths on the chain ends.
inline std::vector<BathSpec> end_baths(int n_sites, double t_left, double mu_left,
                                       double t_right, double mu_right,
                                       double gamma0 = 0.5) {
    return {flat_bath(t_left, mu_left, gamma0, {0}),
            flat_bath(t_right, mu_right, gamma0, {n_sites - 1})};
}

// rho ~ exp(-K) with K a random quadratic form in the quasiparticle modes:
// a Gaussian state with generic theta off-diagonals and pairing kappa.
inline Matrix random_gaussian_state(std::mt19937& rng, const OperatorSet& ops,
                                    double strength = 0.8) {
    const int n = ops.space.n_modes;
    const Matrix x = random_hermitian(rng, n, strength);
    const Matrix y = random_pairing(rng, n, ops.space.statistics, strength);
    const Eigen::Index d = ops.space.dimension;
    Matrix k_op = Matrix::Zero(d, d);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            k_op += x(i, j) * ops.b[i].adjoint() * ops.b[j];
            k_op += 0.5 * y(i, j) * ops.b[i].adjoint() * ops.b[j].adjoint();
            k_op += 0.5 * std::conj(y(i, j)) * ops.b[j] * ops.b[i];
        }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (k_op + k_op.adjoint()));
    const RealVector exponent = -es.eigenvalues();
    const double peak = exponent.maxCoeff();
    RealVector weights = (exponent.array() - peak).exp().matrix();
    Matrix rho = es.eigenvectors() * weights.cast<Complex>().asDiagonal() *
                 es.eigenvectors().adjoint();
    rho /= rho.trace();
    return rho;
}

// Random non-degenerate fermionic model whose modes all couple to both end
// baths at a healthy rate (keeps oracle integrations short). Statistically
// almost every draw passes; the loop guards the rare bad seed.
inline QuadraticHamiltonian random_conducting_fermion(std::mt19937& rng, int n,
                                                      double pairing_scale,
                                                      double gamma0,
                                                      double min_rate) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        QuadraticHamiltonian h = random_fermion(rng, n, pairing_scale);
        const auto dec = diagonalize(h);
        const auto cls = classify_spectrum(dec);
        if (!cls.nondegenerate() || cls.has_zero_mode()) continue;
        bool healthy = true;
        for (const auto& region :
             {std::vector<int>{0}, std::vector<int>{n - 1}}) {
            CouplingRegion r;
            r.sites = region;
            r.weights = Vector::Ones(1);
            const RealVector phi = coupling_weights(dec, r);
            if (gamma0 * phi.minCoeff() < min_rate) healthy = false;
        }
        if (healthy) return h;
    }
    throw std::runtime_error("random_conducting_fermion: no healthy draw");
}

}  // namespace testsupport
