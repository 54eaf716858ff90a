// quadratic_model.hpp — Quadratic lattice Hamiltonians, Nambu/BdG assembly,
// bath coupling regions, and a small zoo of standard chain models.

#pragma once

#include "quadlind/types.hpp"

#include <vector>

namespace quadlind {

// H = sum_ij Q_ij a_i^dag a_j + 1/2 (P_ij a_i^dag a_j^dag + P*_ij a_j a_i),
// with Q Hermitian and P^T = -zeta P. Immutable after construction.
struct QuadraticHamiltonian {
    Statistics statistics = Statistics::fermion;
    Matrix Q;
    Matrix P;

    Eigen::Index n_sites() const { return Q.rows(); }
};

struct ValidationReport {
    double hermiticity_violation = 0.0;  // max |Q - Q^dag|
    double pairing_violation     = 0.0;  // max |P^T + zeta P|
    double tolerance             = 0.0;
    bool   passed                = false;
};

// Doubled-space coefficient matrices: H_bdg = [[Q, P], [-z P*, -z Q*]],
// D = metric * H_bdg with metric = diag(I, z I).
struct NambuMatrices {
    Matrix H_bdg;
    Matrix D;
    Statistics statistics = Statistics::fermion;

    Eigen::Index n_sites() const { return H_bdg.rows() / 2; }
    RealVector metric_diagonal() const;
};

// Sites touched by one bath, with per-site weights. Sites are 0-based here;
// the JSON interface is 1-based and converts on parse.
struct CouplingRegion {
    std::vector<int> sites;
    Vector weights;
};

ValidationReport validate(const QuadraticHamiltonian& h, double tol = -1.0);

// Throws ConfigError unless validate(h) passes.
void require_valid(const QuadraticHamiltonian& h, double tol = -1.0);

NambuMatrices build_bdg(const QuadraticHamiltonian& h);

// Region sanity: indices within [0, n_sites), no duplicates, finite weights.
void check_region(const CouplingRegion& region, Eigen::Index n_sites);

// ----------------------------- standard models ------------------------------
// All chains use open boundary conditions unless periodic = true.

// Q_jj = onsite, Q_{j,j+1} = -hopping, P = 0.
QuadraticHamiltonian tight_binding_chain(int n_sites, double hopping, double onsite,
                                         Statistics statistics = Statistics::fermion,
                                         bool periodic = false);

// Fermionic: Q_jj = -mu0, Q_{j,j+1} = -hopping, P_{j,j+1} = pairing = -P_{j+1,j}.
QuadraticHamiltonian kitaev_chain(int n_sites, double hopping, double pairing,
                                  double mu0, bool periodic = false);

// Bosonic tight-binding chain; requires onsite > 2*hopping so the model is
// stable for every length (throws PhysicsError otherwise).
QuadraticHamiltonian harmonic_chain(int n_sites, double hopping, double onsite,
                                    bool periodic = false);

}  // namespace quadlind
