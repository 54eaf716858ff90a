#include "quadlind/quadratic_model.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace quadlind {

RealVector NambuMatrices::metric_diagonal() const {
    const Eigen::Index n = n_sites();
    RealVector d(2 * n);
    d.head(n).setOnes();
    d.tail(n).setConstant(static_cast<double>(zeta(statistics)));
    return d;
}

static double auto_tolerance(const QuadraticHamiltonian& h) {
    const double scale = std::max({max_abs(h.Q), max_abs(h.P), 1.0});
    return 1e-10 * scale;
}

ValidationReport validate(const QuadraticHamiltonian& h, double tol) {
    if (h.Q.rows() != h.Q.cols()) throw ConfigError("validate: Q must be square");
    if (h.P.rows() != h.P.cols()) throw ConfigError("validate: P must be square");
    if (h.Q.rows() != h.P.rows())
        throw ConfigError("validate: Q and P dimensions differ");
    if (h.Q.rows() < 2) throw ConfigError("validate: need at least 2 sites");

    ValidationReport report;
    report.tolerance = tol >= 0.0 ? tol : auto_tolerance(h);
    report.hermiticity_violation = max_abs(h.Q - h.Q.adjoint());
    const double z = static_cast<double>(zeta(h.statistics));
    report.pairing_violation = max_abs(h.P.transpose() + z * h.P);
    report.passed = report.hermiticity_violation <= report.tolerance &&
                    report.pairing_violation <= report.tolerance;
    return report;
}

void require_valid(const QuadraticHamiltonian& h, double tol) {
    const ValidationReport report = validate(h, tol);
    if (!report.passed) {
        std::ostringstream msg;
        msg << "invalid quadratic Hamiltonian: max |Q - Q^dag| = "
            << report.hermiticity_violation << ", max |P^T + zeta P| = "
            << report.pairing_violation << " (tolerance " << report.tolerance << ")";
        throw ConfigError(msg.str());
    }
}

NambuMatrices build_bdg(const QuadraticHamiltonian& h) {
    const Eigen::Index n = h.n_sites();
    const double z = static_cast<double>(zeta(h.statistics));

    NambuMatrices nambu;
    nambu.statistics = h.statistics;
    nambu.H_bdg.resize(2 * n, 2 * n);
    nambu.H_bdg.topLeftCorner(n, n)     = h.Q;
    nambu.H_bdg.topRightCorner(n, n)    = h.P;
    nambu.H_bdg.bottomLeftCorner(n, n)  = -z * h.P.conjugate();
    nambu.H_bdg.bottomRightCorner(n, n) = -z * h.Q.conjugate();

    nambu.D = nambu.H_bdg;
    nambu.D.bottomRows(n) *= z;
    return nambu;
}

void check_region(const CouplingRegion& region, Eigen::Index n_sites) {
    if (static_cast<Eigen::Index>(region.sites.size()) != region.weights.size())
        throw ConfigError("coupling region: one weight per site required");
    std::set<int> seen;
    for (int p : region.sites) {
        if (p < 0 || p >= n_sites)
            throw ConfigError("coupling region: site index out of range");
        if (!seen.insert(p).second)
            throw ConfigError("coupling region: duplicate site index");
    }
    for (Eigen::Index i = 0; i < region.weights.size(); ++i) {
        if (!std::isfinite(region.weights(i).real()) ||
            !std::isfinite(region.weights(i).imag()))
            throw ConfigError("coupling region: non-finite weight");
    }
}

static Matrix chain_matrix(int n, double diag, double offdiag, bool periodic) {
    Matrix m = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) m(j, j) = diag;
    for (int j = 0; j + 1 < n; ++j) {
        m(j, j + 1) = offdiag;
        m(j + 1, j) = offdiag;
    }
    if (periodic && n > 2) {
        m(n - 1, 0) = offdiag;
        m(0, n - 1) = offdiag;
    }
    return m;
}

QuadraticHamiltonian tight_binding_chain(int n_sites, double hopping, double onsite,
                                         Statistics statistics, bool periodic) {
    if (n_sites < 2) throw ConfigError("tight_binding_chain: need at least 2 sites");
    QuadraticHamiltonian h;
    h.statistics = statistics;
    h.Q = chain_matrix(n_sites, onsite, -hopping, periodic);
    h.P = Matrix::Zero(n_sites, n_sites);
    return h;
}

QuadraticHamiltonian kitaev_chain(int n_sites, double hopping, double pairing,
                                  double mu0, bool periodic) {
    if (n_sites < 2) throw ConfigError("kitaev_chain: need at least 2 sites");
    QuadraticHamiltonian h;
    h.statistics = Statistics::fermion;
    h.Q = chain_matrix(n_sites, -mu0, -hopping, periodic);
    h.P = Matrix::Zero(n_sites, n_sites);
    for (int j = 0; j + 1 < n_sites; ++j) {
        h.P(j, j + 1) = pairing;
        h.P(j + 1, j) = -pairing;
    }
    if (periodic && n_sites > 2) {
        h.P(n_sites - 1, 0) = pairing;
        h.P(0, n_sites - 1) = -pairing;
    }
    return h;
}

QuadraticHamiltonian harmonic_chain(int n_sites, double hopping, double onsite,
                                    bool periodic) {
    if (n_sites < 2) throw ConfigError("harmonic_chain: need at least 2 sites");
    if (onsite <= 2.0 * std::abs(hopping)) {
        std::ostringstream msg;
        msg << "harmonic_chain: unstable parameters, onsite " << onsite
            << " must exceed 2*|hopping| = " << 2.0 * std::abs(hopping);
        throw PhysicsError(msg.str());
    }
    QuadraticHamiltonian h;
    h.statistics = Statistics::boson;
    h.Q = chain_matrix(n_sites, onsite, -hopping, periodic);
    h.P = Matrix::Zero(n_sites, n_sites);
    return h;
}

}  // namespace quadlind
