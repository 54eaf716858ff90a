// transport.hpp — Two-bath steady-state currents (particle, quasiparticle,
// energy, heat), the anomaly factor, and thermoelectric linear response with
// the Onsager symmetry check.

#pragma once

#include "quadlind/lindblad_builder.hpp"
#include "quadlind/types.hpp"

#include <vector>

namespace quadlind {

struct ChannelContribution {
    int mode = 0;
    double transfer = 0.0;         // 2 gL gR / (gL + gR)
    double anomaly = 0.0;          // S_k
    double occupation_bias = 0.0;  // f_L - f_R
};

struct LinearResponsePoint {
    double mu = 0.0;
    double temperature = 1.0;  // > 0
    double dmu = 1e-4;         // finite-difference steps for the cross-check
    double dT = 1e-4;
};

struct OnsagerResult {
    Eigen::Matrix2d ell = Eigen::Matrix2d::Zero();
    double asymmetry = 0.0;  // |l12 - l21| / max |l|
};

struct TransportReport {
    RealVector anomaly;  // S_k for every mode
    double particle = 0.0;
    double quasiparticle = 0.0;
    double energy = 0.0;
    double heat = 0.0;
    double reference_mu = 0.0;
    double reference_temperature = 0.0;
    OnsagerResult onsager;  // evaluated at the midpoint reference
    std::vector<ChannelContribution> channels;  // conducting modes only
    std::vector<int> excluded_modes;            // zero mode, one-sided modes
};

// S_k = (A^dag A - zeta B^dag B)_kk; identically 1 for normal models.
RealVector anomaly_factors(const BogoliubovDecomposition& dec);

// Landauer-style sums over modes with both couplings nonzero; a zero mode is
// excluded (its dissipator moves no particles in the steady state).
double particle_current(const EffectiveModel& model);
double quasiparticle_current(const EffectiveModel& model);
double energy_current(const EffectiveModel& model);
double heat_current(const EffectiveModel& model, double mu);

// Independent per-bath fluxes 2 sum_k gamma_{n,k} S_k [f_n - theta_kk];
// returns (left, right), which must balance to zero at the steady state.
std::pair<double, double> bath_resolved_particle_flux(const EffectiveModel& model);

// Analytic-derivative Onsager matrix at a common reference (T, mu). Only the
// couplings and mode energies of the model are used.
OnsagerResult onsager_matrix(const EffectiveModel& model,
                             const LinearResponsePoint& point);

// Central finite differences through the current formulas themselves.
OnsagerResult onsager_matrix_fd(const EffectiveModel& model,
                                const LinearResponsePoint& point);

TransportReport transport_report(const EffectiveModel& model);

// All four currents with bath occupations displaced to the given (T, mu)
// pairs; the couplings gamma stay fixed. Heat is referenced to the mean mu.
struct CurrentSet {
    double particle = 0.0;
    double quasiparticle = 0.0;
    double energy = 0.0;
    double heat = 0.0;
};
CurrentSet currents_with_occupations(const EffectiveModel& model, double t_left,
                                     double mu_left, double t_right,
                                     double mu_right);

}  // namespace quadlind
