#include "quadlind/dynamics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace quadlind {

namespace {

constexpr Complex kImag{0.0, 1.0};

void check_state(const QuasiparticleState& state, const EffectiveModel& model) {
    const Eigen::Index n = model.n_modes();
    if (state.theta.rows() != n || state.theta.cols() != n ||
        state.kappa.rows() != n || state.kappa.cols() != n)
        throw ConfigError("quasiparticle state: matrix dimensions do not match model");
    const double scale = std::max(1.0, max_abs(state.theta));
    if (max_abs(state.theta - state.theta.adjoint()) > 1e-8 * scale)
        throw ConfigError("quasiparticle state: theta must be Hermitian");
    const double z = static_cast<double>(zeta(model.hamiltonian.statistics));
    if (max_abs(state.kappa.transpose() + z * state.kappa) >
        1e-8 * std::max(1.0, max_abs(state.kappa)))
        throw ConfigError("quasiparticle state: kappa symmetry violated");
    if (model.hamiltonian.statistics == Statistics::fermion) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const double d = state.theta(k, k).real();
            if (d < -1e-8 || d > 1.0 + 1e-8)
                throw ConfigError(
                    "quasiparticle state: fermionic occupation outside [0, 1]");
        }
    }
}

}  // namespace

QuasiparticleState vacuum_state(Eigen::Index n_modes) {
    QuasiparticleState s;
    s.theta = Matrix::Zero(n_modes, n_modes);
    s.kappa = Matrix::Zero(n_modes, n_modes);
    return s;
}

QuasiparticleState thermal_state(const BogoliubovDecomposition& dec,
                                 double temperature, double chemical_potential) {
    BathSpec reference;
    reference.temperature = temperature;
    reference.chemical_potential = chemical_potential;
    QuasiparticleState s = vacuum_state(dec.n_modes());
    for (Eigen::Index k = 0; k < dec.n_modes(); ++k)
        s.theta(k, k) = occupation(reference, dec.statistics, dec.omegas(k));
    return s;
}

QuasiparticleState evolve_two_point(const EffectiveModel& model,
                                    const QuasiparticleState& initial, double t) {
    model.require_closed_form("evolve_two_point");
    if (t < 0.0) throw ConfigError("evolve_two_point: t must be >= 0");
    check_state(initial, model);

    const Eigen::Index n = model.n_modes();
    RealVector rate(n);
    for (Eigen::Index k = 0; k < n; ++k) rate(k) = model.total_rate(k);
    const RealVector& wt = model.omega_tilde;

    QuasiparticleState out;
    out.time = initial.time + t;
    out.theta.resize(n, n);
    out.kappa.resize(n, n);

    const int k0 = model.zero_mode ? model.zero_mode->index : -1;
    const double delta = model.zero_mode ? model.zero_mode->delta : 0.0;

    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index q = 0; q < n; ++q) {
            const bool k_zero = static_cast<int>(k) == k0;
            const bool q_zero = static_cast<int>(q) == k0;

            if (k_zero && q_zero) {
                // diagonal zero-mode law; relaxes to 1/2 at rate 4*Delta
                out.theta(k, k) =
                    (initial.theta(k, k) - 0.5) * std::exp(-4.0 * delta * t) + 0.5;
                out.kappa(k, k) = 0.0;  // fermionic
                continue;
            }
            if (k_zero || q_zero) {
                // mixing of <b_0^dag b_q> with <b_0 b_q> at rate 2*Delta;
                // the (q, 0) entries follow from Hermiticity/antisymmetry
                if (q_zero) continue;  // filled from the (0, q) pass below
                const Complex x0 = initial.theta(k, q);
                const Complex y0 = initial.kappa(k, q);
                const double e4 = std::exp(-4.0 * delta * t);
                const Complex envelope =
                    std::exp((-kImag * wt(q) - rate(q)) * t) * 0.5;
                out.theta(k, q) = envelope * (x0 * (e4 + 1.0) + y0 * (e4 - 1.0));
                out.kappa(k, q) = envelope * (x0 * (e4 - 1.0) + y0 * (e4 + 1.0));
                out.theta(q, k) = std::conj(out.theta(k, q));
                out.kappa(q, k) = -out.kappa(k, q);
                continue;
            }

            if (k == q) {
                const double g = rate(k);
                if (g > 0.0) {
                    const double target = model.gamma.col(k).dot(
                                              model.f_at_modes.col(k)) / g;
                    out.theta(k, k) =
                        target + (initial.theta(k, k).real() - target) *
                                     std::exp(-2.0 * g * t);
                } else {
                    out.theta(k, k) = initial.theta(k, k);  // decoupled mode
                }
            } else {
                out.theta(k, q) =
                    initial.theta(k, q) *
                    std::exp((kImag * (wt(k) - wt(q)) - (rate(k) + rate(q))) * t);
            }
            out.kappa(k, q) =
                initial.kappa(k, q) *
                std::exp((-kImag * (wt(k) + wt(q)) - (rate(k) + rate(q))) * t);
        }
    }
    return out;
}

SteadyReport steady_theta(const EffectiveModel& model,
                          const std::optional<QuasiparticleState>& initial) {
    model.require_closed_form("steady_theta");
    if (initial) check_state(*initial, model);

    const Eigen::Index n = model.n_modes();
    SteadyReport report;
    report.state = vacuum_state(n);
    report.state.time = std::numeric_limits<double>::infinity();

    for (Eigen::Index k = 0; k < n; ++k) {
        if (model.is_zero_mode(k) && model.zero_mode->delta > 0.0) {
            report.state.theta(k, k) = 0.5;
            continue;
        }
        const double g = model.total_rate(k);
        if (g > 0.0) {
            report.state.theta(k, k) =
                model.gamma.col(k).dot(model.f_at_modes.col(k)) / g;
        } else {
            report.non_relaxing.push_back(static_cast<int>(k));
            report.state.theta(k, k) =
                initial ? initial->theta(k, k)
                        : Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
        }
    }
    report.unique = report.non_relaxing.empty();
    return report;
}

CorrelationSet real_space_correlations(const BogoliubovDecomposition& dec,
                                       const QuasiparticleState& state) {
    const double z = static_cast<double>(zeta(dec.statistics));
    const Matrix& a = dec.A;
    const Matrix& b = dec.B;
    const Matrix& th = state.theta;
    const Matrix& ka = state.kappa;
    const bool has_b = max_abs(b) != 0.0;
    const bool has_kappa = max_abs(ka) != 0.0;

    // all-real inputs take the real-arithmetic path (the N ~ 1000 case)
    if (!has_kappa && a.imag().cwiseAbs().maxCoeff() == 0.0 &&
        b.imag().cwiseAbs().maxCoeff() == 0.0 &&
        th.imag().cwiseAbs().maxCoeff() == 0.0) {
        const RealMatrix ar = a.real();
        const RealMatrix thr = th.real();
        CorrelationSet corr;
        if (!has_b) {
            corr.C = (ar * thr * ar.transpose()).cast<Complex>();
            corr.F = Matrix::Zero(a.rows(), a.cols());
            return corr;
        }
        const RealMatrix br = b.real();
        corr.C = (ar * thr * ar.transpose() - z * br * thr.transpose() * br.transpose() +
                  br * br.transpose())
                     .cast<Complex>();
        corr.F = (ar * thr * br.transpose() - z * br * thr.transpose() * ar.transpose() +
                  br * ar.transpose())
                     .cast<Complex>();
        return corr;
    }

    const Matrix ac = a.conjugate();
    const Matrix bc = b.conjugate();
    const Matrix kbar = ka.adjoint();  // <b_k^dag b_q^dag>

    CorrelationSet corr;
    corr.C = ac * th * a.transpose();
    corr.F = ac * th * b.adjoint();
    if (has_kappa) {
        corr.C += ac * kbar * b.transpose() + bc * ka * a.transpose();
        corr.F += ac * kbar * a.adjoint() + bc * ka * b.adjoint();
    }
    if (has_b) {
        corr.C += -z * bc * th.transpose() * b.transpose() + bc * b.transpose();
        corr.F += -z * bc * th.transpose() * a.adjoint() + bc * a.adjoint();
    }
    return corr;
}

RealMatrix density_density(const CorrelationSet& corr, Statistics statistics) {
    const double z = static_cast<double>(zeta(statistics));
    const Eigen::Index n = corr.C.rows();
    RealMatrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            Complex value = -z * (corr.F(i, j) * std::conj(corr.F(j, i)) +
                                  corr.C(i, j) * corr.C(j, i));
            if (i == j) value += corr.C(i, i);
            g(i, j) = value.real();
        }
    }
    return g;
}

}  // namespace quadlind
