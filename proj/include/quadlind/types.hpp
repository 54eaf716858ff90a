// types.hpp — Shared scalar/matrix typedefs, particle statistics, error taxonomy

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace quadlind {

using Complex    = std::complex<double>;
using Matrix     = Eigen::MatrixXcd;
using Vector     = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// +1 selects anticommutation rules, -1 commutation rules.
enum class Statistics { fermion, boson };

inline constexpr int zeta(Statistics s) { return s == Statistics::fermion ? +1 : -1; }

inline const char* to_string(Statistics s) {
    return s == Statistics::fermion ? "fermion" : "boson";
}

// ----------------------------- error taxonomy -------------------------------
// Each class maps to one process exit code (see cli.hpp):
//   ConfigError -> 2, PhysicsError -> 3, CapabilityError -> 4, NumericalError -> 5

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input (shapes, schemas, option combinations).
struct ConfigError : Error {
    using Error::Error;
};

// Physically invalid regime: unstable bosonic model, divergent occupation, ...
struct PhysicsError : Error {
    using Error::Error;
};

// Valid input outside the closed-form pipeline (degenerate spectra and such);
// the dense oracle still handles these.
struct CapabilityError : Error {
    using Error::Error;
};

// Solver or quadrature breakdown.
struct NumericalError : Error {
    using Error::Error;
};

// ----------------------------- small helpers --------------------------------

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_effectively_real(const Eigen::MatrixBase<Derived>& m, double tol) {
    return m.size() == 0 || m.imag().cwiseAbs().maxCoeff() <= tol;
}

// Numerical knobs shared across the pipeline. All overridable from the CLI
// config ("tolerances" block); defaults documented in the README.
struct Tolerances {
    // Hermiticity/antisymmetry input checks, relative to max|Q| (negative = auto).
    double validate = -1.0;
    // zero-mode and degeneracy-cluster detection, scaled by max(1, |H_bdg|_2)
    double zero_scale    = 1e-10;
    double cluster_scale = 1e-8;
    // principal-value quadrature relative target
    double quadrature_rel = 1e-8;
    // singular values below steady_null * sigma_max span the generator kernel
    double steady_null = 1e-10;
    // oracle integrator local error target
    double oracle_local_error = 1e-9;
};

}  // namespace quadlind
