#include "quadlind/bogoliubov.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace quadlind {

Matrix BogoliubovDecomposition::nambu_transform() const {
    const Eigen::Index n = n_modes();
    Matrix t(2 * n, 2 * n);
    t.topLeftCorner(n, n)     = A;
    t.topRightCorner(n, n)    = B;
    t.bottomLeftCorner(n, n)  = B.conjugate();
    t.bottomRightCorner(n, n) = A.conjugate();
    return t;
}

int SpectrumClassification::class_of(int k) const {
    for (std::size_t lambda = 0; lambda < classes.size(); ++lambda)
        for (int u : classes[lambda])
            if (u == k) return static_cast<int>(lambda);
    throw ConfigError("class_of: mode index outside classification");
}

namespace {

void hermitian_eigs(const Matrix& h, RealVector& evals, Matrix& evecs) {
    if (h.imag().cwiseAbs().maxCoeff() == 0.0) {
        Eigen::SelfAdjointEigenSolver<RealMatrix> es(h.real());
        if (es.info() != Eigen::Success)
            throw NumericalError("hermitian eigensolver failed");
        evals = es.eigenvalues();
        evecs = es.eigenvectors().cast<Complex>();
    } else {
        Eigen::SelfAdjointEigenSolver<Matrix> es(h);
        if (es.info() != Eigen::Success)
            throw NumericalError("hermitian eigensolver failed");
        evals = es.eigenvalues();
        evecs = es.eigenvectors();
    }
}

// X (u; w) = (w; u), applied columnwise
Matrix block_swap(const Matrix& v) {
    const Eigen::Index n = v.rows() / 2;
    Matrix r(v.rows(), v.cols());
    r.topRows(n)    = v.bottomRows(n);
    r.bottomRows(n) = v.topRows(n);
    return r;
}

// antiunitary particle-hole map C v = X v*
Vector ph_conjugate(const Vector& v) {
    const Eigen::Index n = v.size() / 2;
    Vector r(v.size());
    r.head(n) = v.tail(n).conjugate();
    r.tail(n) = v.head(n).conjugate();
    return r;
}

// One normal mode column of the doubled space, before sorting.
struct ModeColumn {
    double omega;
    Vector column;  // (A_col; conj(B_col))
};

// Split a zero-energy cluster (even dimension 2m) into m mode columns v with
// {v_k} U {C v_k} orthonormal. For a real basis the result is real, which is
// the gauge the closed-form zero-mode pipeline relies on.
std::vector<Vector> pair_zero_cluster(const Matrix& z_basis) {
    const Eigen::Index two_m = z_basis.cols();
    if (two_m % 2 != 0)
        throw NumericalError("zero-energy cluster has odd dimension");
    const Eigen::Index m = two_m / 2;

    if (z_basis.imag().cwiseAbs().maxCoeff() == 0.0) {
        // X restricted to the real null space is a symmetric involution with
        // balanced +/-1 signature; combine eigenvectors across the two signs.
        RealMatrix z = z_basis.real();
        RealMatrix zx(z.rows(), z.cols());
        const Eigen::Index half = z.rows() / 2;
        zx.topRows(half)    = z.bottomRows(half);
        zx.bottomRows(half) = z.topRows(half);
        RealMatrix s = z.transpose() * zx;
        Eigen::SelfAdjointEigenSolver<RealMatrix> es(0.5 * (s + s.transpose()));
        if (es.info() != Eigen::Success)
            throw NumericalError("zero-cluster involution eigensolver failed");
        std::vector<Eigen::Index> neg, pos;
        for (Eigen::Index i = 0; i < two_m; ++i)
            (es.eigenvalues()(i) < 0.0 ? neg : pos).push_back(i);
        if (static_cast<Eigen::Index>(neg.size()) != m)
            throw NumericalError("zero-cluster involution signature unbalanced");
        std::vector<Vector> modes;
        for (Eigen::Index k = 0; k < m; ++k) {
            RealVector r = z * es.eigenvectors().col(pos[k]);
            RealVector t = z * es.eigenvectors().col(neg[k]);
            modes.push_back(((r + t) / std::sqrt(2.0)).cast<Complex>());
        }
        return modes;
    }

    // Complex cluster: build a C-real orthonormal basis y (C y = y), then pair
    // (y_{2k} + i y_{2k+1})/sqrt(2).
    std::vector<Vector> ys;
    while (static_cast<Eigen::Index>(ys.size()) < two_m) {
        Vector best;
        double best_norm = -1.0;
        for (Eigen::Index c = 0; c < two_m; ++c) {
            Vector z = z_basis.col(c);
            for (const Vector& y : ys) z -= y * y.dot(z);
            if (z.norm() > best_norm) {
                best_norm = z.norm();
                best = z;
            }
        }
        if (best_norm < 1e-12)
            throw NumericalError("zero-cluster basis construction stalled");
        best /= best_norm;
        Vector w = best + ph_conjugate(best);
        if (w.norm() < 0.7)
            w = Complex(0.0, 1.0) * (best - ph_conjugate(best));
        for (const Vector& y : ys) w -= y * y.dot(w);
        if (w.norm() < 1e-8)
            throw NumericalError("zero-cluster basis construction degenerate");
        ys.push_back(w / w.norm());
    }
    std::vector<Vector> modes;
    for (Eigen::Index k = 0; k < m; ++k)
        modes.push_back((ys[2 * k] + Complex(0.0, 1.0) * ys[2 * k + 1]) /
                        std::sqrt(2.0));
    return modes;
}

BogoliubovDecomposition assemble(Statistics statistics, const Matrix& q,
                                 std::vector<ModeColumn> modes, double norm) {
    std::stable_sort(modes.begin(), modes.end(),
                     [](const ModeColumn& a, const ModeColumn& b) {
                         return a.omega < b.omega;
                     });
    const Eigen::Index n = static_cast<Eigen::Index>(modes.size());
    BogoliubovDecomposition dec;
    dec.statistics = statistics;
    dec.A.resize(n, n);
    dec.B.resize(n, n);
    dec.omegas.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        dec.omegas(k) = modes[k].omega;
        dec.A.col(k)  = modes[k].column.head(n);
        dec.B.col(k)  = modes[k].column.tail(n).conjugate();
    }
    dec.phi = dec.A + dec.B.conjugate();
    dec.constant_shift =
        0.5 * zeta(statistics) * (q.trace().real() - dec.omegas.sum());
    dec.spectral_norm = norm;
    return dec;
}

BogoliubovDecomposition diagonalize_normal(const QuadraticHamiltonian& h,
                                           double zero_scale) {
    RealVector eps;
    Matrix v;
    hermitian_eigs(h.Q, eps, v);
    const Eigen::Index n = h.n_sites();
    const double norm = eps.cwiseAbs().maxCoeff();
    const double ztol = zero_scale * std::max(1.0, norm);

    if (h.statistics == Statistics::boson && eps.minCoeff() <= 0.0) {
        std::ostringstream msg;
        msg << "bosonic model unstable: min eigenvalue " << eps.minCoeff()
            << " is not positive";
        throw PhysicsError(msg.str());
    }

    std::vector<ModeColumn> modes;
    modes.reserve(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const bool swap = eps(k) < -ztol;  // fermionic negative branch only
        ModeColumn mode;
        mode.omega = std::abs(eps(k));
        mode.column = Vector::Zero(2 * n);
        if (swap)
            mode.column.tail(n) = v.col(k).conjugate();
        else
            mode.column.head(n) = v.col(k);
        modes.push_back(std::move(mode));
    }
    return assemble(h.statistics, h.Q, std::move(modes), norm);
}

BogoliubovDecomposition diagonalize_fermion(const QuadraticHamiltonian& h,
                                            const NambuMatrices& nambu,
                                            double zero_scale) {
    RealVector evals;
    Matrix evecs;
    hermitian_eigs(nambu.H_bdg, evals, evecs);
    const Eigen::Index n = h.n_sites();
    const double norm = evals.cwiseAbs().maxCoeff();
    const double ztol = zero_scale * std::max(1.0, norm);

    std::vector<Eigen::Index> zero_idx, pos_idx;
    for (Eigen::Index i = 0; i < 2 * n; ++i) {
        if (std::abs(evals(i)) <= ztol)
            zero_idx.push_back(i);
        else if (evals(i) > 0.0)
            pos_idx.push_back(i);
    }
    if (zero_idx.size() % 2 != 0 ||
        static_cast<Eigen::Index>(pos_idx.size() + zero_idx.size() / 2) != n)
        throw NumericalError(
            "BdG spectrum is not particle-hole symmetric within tolerance");

    std::vector<ModeColumn> modes;
    modes.reserve(n);
    // positive branch straight from the eigensolver; the negative branch is
    // its particle-hole image, which fixes the exact block structure of T
    for (Eigen::Index i : pos_idx)
        modes.push_back({evals(i), evecs.col(i)});

    if (!zero_idx.empty()) {
        Matrix z_basis(2 * n, static_cast<Eigen::Index>(zero_idx.size()));
        double omega_zero = 0.0;
        for (std::size_t c = 0; c < zero_idx.size(); ++c) {
            z_basis.col(static_cast<Eigen::Index>(c)) = evecs.col(zero_idx[c]);
            omega_zero += std::abs(evals(zero_idx[c]));
        }
        omega_zero /= static_cast<double>(zero_idx.size());
        for (Vector& v : pair_zero_cluster(z_basis))
            modes.push_back({omega_zero, std::move(v)});
    }
    return assemble(h.statistics, h.Q, std::move(modes), norm);
}

BogoliubovDecomposition diagonalize_boson(const QuadraticHamiltonian& h,
                                          const NambuMatrices& nambu) {
    const Eigen::Index n = h.n_sites();
    Eigen::LLT<Matrix> llt(nambu.H_bdg);
    if (llt.info() != Eigen::Success) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(nambu.H_bdg);
        std::ostringstream msg;
        msg << "bosonic model unstable: BdG matrix not positive definite"
            << " (min eigenvalue "
            << (es.info() == Eigen::Success ? es.eigenvalues().minCoeff() : 0.0)
            << ")";
        throw PhysicsError(msg.str());
    }

    // H_bdg = K^dag K; W = K I^(z) K^dag shares the +/-omega spectrum of D and
    // K^-1 u sqrt(omega) are metric-normalized eigenvectors of D.
    const Matrix k_factor = llt.matrixL().adjoint();
    const Vector metric = nambu.metric_diagonal().cast<Complex>();
    Matrix w = k_factor * metric.asDiagonal() * k_factor.adjoint();
    RealVector evals;
    Matrix evecs;
    hermitian_eigs(0.5 * (w + w.adjoint()), evals, evecs);

    Eigen::SelfAdjointEigenSolver<Matrix> norm_solver;
    const double norm = [&] {
        norm_solver.compute(nambu.H_bdg, Eigen::EigenvaluesOnly);
        return norm_solver.eigenvalues().cwiseAbs().maxCoeff();
    }();

    std::vector<ModeColumn> modes;
    modes.reserve(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double omega = evals(n + k);
        if (omega <= 0.0 || evals(n - 1 - k) >= 0.0)
            throw NumericalError("bosonic spectrum lost its +/- pairing");
        Vector t = k_factor.triangularView<Eigen::Upper>().solve(evecs.col(n + k));
        modes.push_back({omega, t * std::sqrt(omega)});
    }
    return assemble(h.statistics, h.Q, std::move(modes), norm);
}

}  // namespace

BogoliubovDecomposition diagonalize(const QuadraticHamiltonian& h, double zero_scale) {
    require_valid(h);
    if (max_abs(h.P) == 0.0) return diagonalize_normal(h, zero_scale);
    const NambuMatrices nambu = build_bdg(h);
    return h.statistics == Statistics::fermion
               ? diagonalize_fermion(h, nambu, zero_scale)
               : diagonalize_boson(h, nambu);
}

CanonicalResiduals verify_canonical(const BogoliubovDecomposition& dec,
                                    Statistics statistics) {
    const double z = static_cast<double>(zeta(statistics));
    const Eigen::Index n = dec.n_modes();
    const Matrix& a = dec.A;
    const Matrix& b = dec.B;
    const Matrix id = Matrix::Identity(n, n);

    CanonicalResiduals r;
    r.left_normalization  = max_abs(a.adjoint() * a + z * b.transpose() * b.conjugate() - id);
    r.right_normalization = max_abs(a * a.adjoint() + z * b * b.adjoint() - id);
    r.left_pairing        = max_abs(a.adjoint() * b + z * b.transpose() * a.conjugate());
    r.right_pairing       = max_abs(a * b.transpose() + z * b * a.transpose());

    Vector metric(2 * n);
    metric.head(n).setOnes();
    metric.tail(n).setConstant(z);
    const Matrix t = dec.nambu_transform();
    r.metric_condition =
        max_abs(t * metric.asDiagonal() * t.adjoint() - Matrix(metric.asDiagonal()));
    return r;
}

double reconstruct_residual(const BogoliubovDecomposition& dec,
                            const QuadraticHamiltonian& h) {
    const NambuMatrices nambu = build_bdg(h);
    const Eigen::Index n = dec.n_modes();
    Vector spectrum(2 * n);
    spectrum.head(n) = dec.omegas.cast<Complex>();
    spectrum.tail(n) = -dec.omegas.cast<Complex>();
    const Matrix t = dec.nambu_transform();
    return max_abs(nambu.D * t - t * spectrum.asDiagonal());
}

SpectrumClassification classify_spectrum(const BogoliubovDecomposition& dec,
                                         double zero_tol, double cluster_tol) {
    SpectrumClassification cls;
    cls.zero_tol = zero_tol >= 0.0 ? zero_tol : dec.default_zero_tol();
    cls.cluster_tol = cluster_tol >= 0.0 ? cluster_tol : dec.default_cluster_tol();

    const Eigen::Index n = dec.n_modes();
    Eigen::Index k = 0;
    while (k < n && dec.omegas(k) <= cls.zero_tol) {
        cls.zero_modes.push_back(static_cast<int>(k));
        ++k;
    }
    if (!cls.zero_modes.empty()) {
        if (dec.statistics == Statistics::boson)
            throw CapabilityError(
                "bosonic zero modes (soft modes) are not supported");
        cls.classes.push_back(cls.zero_modes);
        cls.class_energies.push_back(0.0);
    }
    while (k < n) {
        std::vector<int> group{static_cast<int>(k)};
        double sum = dec.omegas(k);
        ++k;
        while (k < n && dec.omegas(k) - dec.omegas(k - 1) <= cls.cluster_tol) {
            group.push_back(static_cast<int>(k));
            sum += dec.omegas(k);
            ++k;
        }
        cls.class_energies.push_back(sum / static_cast<double>(group.size()));
        cls.classes.push_back(std::move(group));
    }
    return cls;
}

}  // namespace quadlind
