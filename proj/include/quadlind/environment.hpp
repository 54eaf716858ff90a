// environment.hpp — Thermal baths: occupation functions, spectral densities,
// the half-Fourier correlation rates Gamma(omega), and Lamb-shift integrals.

#pragma once

#include "quadlind/quadratic_model.hpp"
#include "quadlind/types.hpp"

#include <utility>
#include <vector>

namespace quadlind {

// J(omega) >= 0 with J = 0 for omega < 0.
struct SpectralDensity {
    enum class Kind { flat, ohmic, tabulated };

    Kind kind = Kind::flat;
    double gamma0 = 0.0;                             // flat level
    double eta = 0.0, omega_c = 0.0;                 // ohmic: eta w exp(-w/w_c)
    std::vector<std::pair<double, double>> table;    // sorted (w, J) samples

    double operator()(double omega) const;

    static SpectralDensity flat(double gamma0);
    static SpectralDensity ohmic(double eta, double omega_c);
    static SpectralDensity tabulated(std::vector<std::pair<double, double>> points);
};

struct BathSpec {
    double temperature = 1.0;         // > 0
    double chemical_potential = 0.0;
    SpectralDensity spectral_density;
    CouplingRegion region;
};

// f = 1 / (zeta + exp((omega - mu)/T)). Bosonic omega <= mu diverges.
double occupation(const BathSpec& bath, Statistics statistics, double omega);

// d f / d mu at fixed T; with T df/dT = (omega - mu) df/dmu.
double occupation_dmu(const BathSpec& bath, Statistics statistics, double omega);

// Gamma_nn(omega): J(w)[1 - z f(w)] for w > 0, J(-w) f(-w) for w < 0,
// J(0)[1 + (1 - z) f(0)] at w = 0.
double gamma_function(const BathSpec& bath, Statistics statistics, double omega);

// (1/pi) [ PV int J(e)/(w - e) de + z PV int J(e)/(w + e) de ].
// Flat densities return exactly 0; so does omega = 0 for fermions, where the
// two principal values cancel.
double lamb_kernel(const SpectralDensity& density, Statistics statistics,
                   double omega, double rel_tol = 1e-8);

// phi_k = sum_n Phi(n, k) * lamb_kernel(J_n, omega_k).
RealVector lamb_shift(const std::vector<BathSpec>& baths, Statistics statistics,
                      const RealMatrix& coupling_phi, const RealVector& omegas,
                      double rel_tol = 1e-8);

}  // namespace quadlind
