// bogoliubov.hpp — Bogoliubov-Valatin diagonalization of quadratic Hamiltonians,
// canonical-constraint verification, and spectrum classification.

#pragma once

#include "quadlind/quadratic_model.hpp"
#include "quadlind/types.hpp"

#include <vector>

namespace quadlind {

// a_j = sum_k (A_jk b_k + B_jk b_k^dag) with T = [[A, B], [B*, A*]] satisfying
// T I^(z) T^dag = I^(z) and T^-1 D T = diag(omega, -omega), omega >= 0 ascending.
struct BogoliubovDecomposition {
    Statistics statistics = Statistics::fermion;
    Matrix A;
    Matrix B;
    RealVector omegas;      // ascending, >= 0
    Matrix phi;             // A + B*
    double constant_shift = 0.0;  // z/2 (Tr Q - sum omega)
    double spectral_norm  = 0.0;  // |H_bdg|_2, used for tolerance scaling

    Eigen::Index n_modes() const { return A.rows(); }
    Matrix nambu_transform() const;  // the 2N x 2N matrix T

    double default_zero_tol(double scale = 1e-10) const {
        return scale * std::max(1.0, spectral_norm);
    }
    double default_cluster_tol(double scale = 1e-8) const {
        return scale * std::max(1.0, spectral_norm);
    }
};

struct CanonicalResiduals {
    double left_normalization  = 0.0;  // |A^dag A + z B^T B* - I|
    double right_normalization = 0.0;  // |A A^dag + z B B^dag - I|
    double left_pairing        = 0.0;  // |A^dag B + z B^T A*|
    double right_pairing       = 0.0;  // |A B^T + z B A^T|
    double metric_condition    = 0.0;  // |T I^(z) T^dag - I^(z)|

    double max() const {
        return std::max({left_normalization, right_normalization, left_pairing,
                         right_pairing, metric_condition});
    }
};

// Modes bucketed by energy: one class per (near-)degenerate eigenvalue,
// contiguous in the sorted spectrum. Zero modes form their own class.
struct SpectrumClassification {
    std::vector<int> zero_modes;              // indices k with omega_k <= zero_tol
    std::vector<std::vector<int>> classes;    // partition of {0..N-1}
    std::vector<double> class_energies;       // representative omega per class
    double zero_tol    = 0.0;
    double cluster_tol = 0.0;

    bool has_zero_mode() const { return !zero_modes.empty(); }
    bool is_zero_class(std::size_t lambda) const {
        return class_energies[lambda] <= zero_tol;
    }
    bool nondegenerate() const {
        for (const auto& c : classes)
            if (c.size() > 1) return false;
        return true;
    }
    // index of the class containing mode k
    int class_of(int k) const;
};

// Throws PhysicsError for unstable bosonic models, NumericalError if the
// eigenproblem misbehaves. zero_scale sets the zero-mode detection tolerance
// relative to max(1, |H_bdg|_2).
BogoliubovDecomposition diagonalize(const QuadraticHamiltonian& h,
                                    double zero_scale = 1e-10);

CanonicalResiduals verify_canonical(const BogoliubovDecomposition& dec,
                                    Statistics statistics);

// max |D T - T diag(omega, -omega)|
double reconstruct_residual(const BogoliubovDecomposition& dec,
                            const QuadraticHamiltonian& h);

SpectrumClassification classify_spectrum(const BogoliubovDecomposition& dec,
                                         double zero_tol = -1.0,
                                         double cluster_tol = -1.0);

}  // namespace quadlind
