// dynamics.hpp — Closed-form evolution of quasiparticle two-point functions,
// steady-state occupations, real-space correlation matrices, and Wick
// density-density covariances.

#pragma once

#include "quadlind/lindblad_builder.hpp"
#include "quadlind/types.hpp"

#include <optional>
#include <vector>

namespace quadlind {

// theta_{kq} = <b_k^dag b_q>, kappa_{kq} = <b_k b_q>.
struct QuasiparticleState {
    Matrix theta;
    Matrix kappa;
    double time = 0.0;
};

// C_{ij} = <a_i^dag a_j>, F_{ij} = <a_i^dag a_j^dag>.
struct CorrelationSet {
    Matrix C;
    Matrix F;
};

QuasiparticleState vacuum_state(Eigen::Index n_modes);

// theta_kk = f(omega_k): every quasiparticle mode filled thermally.
QuasiparticleState thermal_state(const BogoliubovDecomposition& dec,
                                 double temperature, double chemical_potential);

// Throws ConfigError on malformed states, CapabilityError when the model has
// no closed-form solution (degenerate spectrum, complex zero-mode gauge).
QuasiparticleState evolve_two_point(const EffectiveModel& model,
                                    const QuasiparticleState& initial, double t);

struct SteadyReport {
    QuasiparticleState state;
    std::vector<int> non_relaxing;  // modes with every gamma_{n,k} = 0
    bool unique = true;
};

// Diagonal occupations relax to the gamma-weighted bath average; a fermionic
// zero mode pins to 1/2. Non-relaxing modes keep their initial occupation when
// one is supplied and are reported (steady state not unique).
SteadyReport steady_theta(const EffectiveModel& model,
                          const std::optional<QuasiparticleState>& initial = {});

CorrelationSet real_space_correlations(const BogoliubovDecomposition& dec,
                                       const QuasiparticleState& state);

// G_ij = <n_i n_j> - <n_i><n_j> by Wick factorization.
RealMatrix density_density(const CorrelationSet& corr, Statistics statistics);

}  // namespace quadlind
