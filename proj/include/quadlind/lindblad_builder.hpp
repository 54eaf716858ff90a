// lindblad_builder.hpp — Assembles the effective master-equation data: per-mode
// couplings gamma_{n,k}, Lamb-shifted frequencies, zero-mode constants, and
// degenerate-class coupling blocks.

#pragma once

#include "quadlind/bogoliubov.hpp"
#include "quadlind/environment.hpp"
#include "quadlind/quadratic_model.hpp"
#include "quadlind/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace quadlind {

struct EigenoperatorTerm {
    int mode = 0;
    bool dagger = false;
    Complex coefficient;
};

// Fermionic zero mode: Delta = sum_n J_n(0) Phi_{n,0}; Psi_{n,0} are the
// squared (unconjugated) overlaps. The closed-form pipeline needs Psi = Phi,
// i.e. real overlaps, which holds in the real-Hamiltonian gauge.
struct ZeroModeData {
    int index = 0;
    double delta = 0.0;
    Vector psi;
    bool closed_form_ok = false;
};

// Rank-one coupling matrices of one degeneracy class: Phi^(n,l) = c c^dag and,
// on the zero class, Psi^(n,0) = c c^T, with c_u = sum_p w_{p,n} phi_{p,u}.
struct DegeneracyBlock {
    int class_index = 0;
    double omega = 0.0;
    std::vector<int> modes;
    std::vector<Matrix> phi_blocks;  // one per bath
    std::vector<Matrix> psi_blocks;  // one per bath; zero class only
    Matrix lamb_block;               // phi_uv = sum_n Phi^(n,l)_{vu} kernel_n
};

struct EffectiveModel {
    QuadraticHamiltonian hamiltonian;
    BogoliubovDecomposition decomposition;
    std::vector<BathSpec> baths;

    Matrix coupling_c;        // N_B x N overlaps c_{n,k}
    RealMatrix coupling_phi;  // N_B x N, |c|^2
    RealMatrix gamma;         // N_B x N, J_n(omega_k) Phi_{n,k}
    RealMatrix f_at_modes;    // N_B x N, f_n(omega_k)
    RealVector omega_tilde;   // Lamb-shifted frequencies; zero class pinned to 0

    SpectrumClassification classification;
    std::optional<ZeroModeData> zero_mode;
    std::vector<DegeneracyBlock> degeneracy_blocks;  // empty unless degenerate

    // true when the closed-form dynamics/transport formulas apply
    bool closed_form_ok = true;
    double smallest_class_gap = 0.0;
    std::vector<std::string> warnings;

    Eigen::Index n_modes() const { return decomposition.n_modes(); }
    Eigen::Index n_baths() const { return static_cast<Eigen::Index>(baths.size()); }
    double total_rate(Eigen::Index k) const { return gamma.col(k).sum(); }
    bool is_zero_mode(Eigen::Index k) const {
        return zero_mode && zero_mode->index == static_cast<int>(k);
    }
    void require_closed_form(const char* where) const;
};

// Phi_{n,k} = |sum_{p in region} w_p phi_{p,k}|^2 for a single region.
RealVector coupling_weights(const BogoliubovDecomposition& dec,
                            const CouplingRegion& region);

// The complex overlaps c_k themselves.
Vector coupling_overlaps(const BogoliubovDecomposition& dec,
                         const CouplingRegion& region);

// gamma_{n,k} = J_n(omega_k) Phi_{n,k}; surfaces bosonic occupation
// divergences with the offending bath index.
RealMatrix effective_couplings(const BogoliubovDecomposition& dec,
                               const std::vector<BathSpec>& baths);

// Coefficients of the eigenoperator at Bohr frequency omega: c_k on b_k when
// omega ~ +omega_k, conj(c_k) on b_k^dag when omega ~ -omega_k.
std::vector<EigenoperatorTerm> eigenoperator_coefficients(
    const BogoliubovDecomposition& dec, const CouplingRegion& region,
    double omega, double tol = -1.0);

// Degeneracy blocks for every class (1x1 for singletons).
std::vector<DegeneracyBlock> build_degeneracy_blocks(
    const BogoliubovDecomposition& dec, const std::vector<BathSpec>& baths,
    const SpectrumClassification& cls, double quadrature_rel = 1e-8);

EffectiveModel build_effective_model(const QuadraticHamiltonian& h,
                                     std::vector<BathSpec> baths,
                                     const Tolerances& tol = {});

// Local-dissipator comparison rates at reference frequency Omega.
struct LocalRates {
    std::vector<int> sites;
    RealVector up;    // population rates
    RealVector down;  // depopulation rates
};
LocalRates local_rates(const std::vector<BathSpec>& baths, double big_omega,
                       Statistics statistics);

}  // namespace quadlind
