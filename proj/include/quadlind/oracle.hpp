// oracle.hpp — Brute-force ground truth: the full LGKS generator on the
// many-body Fock space for small systems, time integration, expectation
// values, and steady-state extraction.

#pragma once

#include "quadlind/dynamics.hpp"
#include "quadlind/lindblad_builder.hpp"
#include "quadlind/types.hpp"

#include <string>
#include <vector>

namespace quadlind {

// Occupation-number basis of the quasiparticle modes. State index x encodes
// digit x_k = (x / base^k) mod base for mode k (mode 0 least significant);
// fermionic operators carry Jordan-Wigner signs over the lower modes.
struct FockSpace {
    Statistics statistics = Statistics::fermion;
    int n_modes = 0;
    int boson_cutoff = 0;  // occupations 0..cutoff per mode
    Eigen::Index dimension = 0;

    static FockSpace fermionic(int n_modes, Eigen::Index dim_cap = 4096);
    static FockSpace bosonic(int n_modes, int cutoff, Eigen::Index dim_cap = 4096);

    int base() const {
        return statistics == Statistics::fermion ? 2 : boson_cutoff + 1;
    }
    int occupation_of(Eigen::Index state, int mode) const;
    Matrix annihilator(int mode) const;  // b_mode
};

// Quasiparticle (b) and site (a) operators materialized on the Fock space.
struct OperatorSet {
    FockSpace space;
    std::vector<Matrix> b;
    std::vector<Matrix> a;  // present when built with a decomposition

    explicit OperatorSet(const FockSpace& space);
    OperatorSet(const FockSpace& space, const BogoliubovDecomposition& dec);
};

struct LindbladTerm {
    int bath = 0;
    double rate = 0.0;
    Matrix op;
    Matrix op_dag;     // cached L^dag
    Matrix op_normal;  // cached L^dag L
};

// drho/dt = -i[H, rho] + sum_t rate_t (2 L rho L^dag - {L^dag L, rho})
struct DenseGenerator {
    Eigen::Index dimension = 0;
    Matrix hamiltonian;
    std::vector<LindbladTerm> terms;

    void add_term(int bath, double rate, Matrix op);
    Matrix apply(const Matrix& rho) const;
    Matrix apply_dissipator(const Matrix& rho, int bath = -1) const;  // -1: all
    // Explicit matrix in the row-major vectorization vec(rho)[i*d+j] = rho_ij.
    Matrix superoperator() const;
};

DenseGenerator build_generator(const EffectiveModel& model,
                               const FockSpace& space);

// rho for the Gaussian state exp(-sum (omega_k - mu) n_k / T) / Z.
Matrix grand_canonical_state(const OperatorSet& ops, const RealVector& omegas,
                             double temperature, double chemical_potential);

// Extract <b^dag b> and <b b> matrices from a density matrix.
QuasiparticleState extract_two_point(const Matrix& rho, const OperatorSet& ops);

// Adaptive embedded Runge-Kutta 5(4); returns rho at each requested time
// (t_grid ascending, starting at or after rho0's time zero).
std::vector<Matrix> integrate(const DenseGenerator& gen, const Matrix& rho0,
                              const std::vector<double>& t_grid,
                              double local_tol = 1e-9);

// ----------------------------- observables ----------------------------------

struct ObsFactor {
    int index = 0;       // 0-based mode/site
    bool dagger = false;
    bool site = false;   // site (a) vs quasiparticle (b) basis
};
struct ObsTerm {
    Complex coefficient{1.0, 0.0};
    std::vector<ObsFactor> factors;
};
struct Observable {
    std::vector<ObsTerm> terms;
};

// "1.5 * bdag_1 b_1 + (0,1) a_2 adag_3 - n_2" with 1-based indices;
// n_k abbreviates bdag_k b_k. Throws ConfigError on unknown symbols.
Observable parse_observable(const std::string& text);

Observable total_particle_number(int n_sites);
Observable total_quasiparticle_number(int n_modes);

Matrix materialize(const Observable& obs, const OperatorSet& ops);
Complex expectation(const Matrix& rho, const Observable& obs,
                    const OperatorSet& ops);

// ----------------------------- steady state ----------------------------------

struct SteadyStateResult {
    int dimension = 0;           // numerical kernel dimension
    std::vector<Matrix> basis;   // raw kernel vectors, unvectorized
    Matrix state;                // hermitized unit-trace state when dimension == 1
};

SteadyStateResult steady_state(const DenseGenerator& gen,
                               double null_tol = 1e-10);

}  // namespace quadlind
