#include "quadlind/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cctype>
#include <cmath>
#include <sstream>

namespace quadlind {

namespace {

constexpr Complex kImag{0.0, 1.0};

Eigen::Index int_pow(Eigen::Index base, int exponent) {
    Eigen::Index result = 1;
    for (int i = 0; i < exponent; ++i) {
        if (result > (1LL << 40) / base)
            throw ConfigError("Fock space dimension overflow");
        result *= base;
    }
    return result;
}

}  // namespace

FockSpace FockSpace::fermionic(int n_modes, Eigen::Index dim_cap) {
    if (n_modes < 1) throw ConfigError("FockSpace: need >= 1 mode");
    FockSpace space;
    space.statistics = Statistics::fermion;
    space.n_modes = n_modes;
    space.boson_cutoff = 1;
    space.dimension = int_pow(2, n_modes);
    if (space.dimension > dim_cap)
        throw ConfigError("Fock space dimension exceeds the configured cap");
    return space;
}

FockSpace FockSpace::bosonic(int n_modes, int cutoff, Eigen::Index dim_cap) {
    if (n_modes < 1) throw ConfigError("FockSpace: need >= 1 mode");
    if (cutoff < 1) throw ConfigError("FockSpace: boson cutoff must be >= 1");
    FockSpace space;
    space.statistics = Statistics::boson;
    space.n_modes = n_modes;
    space.boson_cutoff = cutoff;
    space.dimension = int_pow(cutoff + 1, n_modes);
    if (space.dimension > dim_cap)
        throw ConfigError("Fock space dimension exceeds the configured cap");
    return space;
}

int FockSpace::occupation_of(Eigen::Index state, int mode) const {
    Eigen::Index divisor = int_pow(base(), mode);
    return static_cast<int>((state / divisor) % base());
}

Matrix FockSpace::annihilator(int mode) const {
    if (mode < 0 || mode >= n_modes)
        throw ConfigError("FockSpace: mode index out of range");
    Matrix op = Matrix::Zero(dimension, dimension);
    const Eigen::Index stride = int_pow(base(), mode);
    for (Eigen::Index x = 0; x < dimension; ++x) {
        const int occupation = occupation_of(x, mode);
        if (occupation == 0) continue;
        const Eigen::Index target = x - stride;
        if (statistics == Statistics::fermion) {
            int parity = 0;
            for (int j = 0; j < mode; ++j) parity += occupation_of(x, j);
            op(target, x) = (parity % 2 == 0) ? 1.0 : -1.0;
        } else {
            op(target, x) = std::sqrt(static_cast<double>(occupation));
        }
    }
    return op;
}

OperatorSet::OperatorSet(const FockSpace& fock) : space(fock) {
    b.reserve(static_cast<std::size_t>(space.n_modes));
    for (int k = 0; k < space.n_modes; ++k) b.push_back(space.annihilator(k));
}

OperatorSet::OperatorSet(const FockSpace& fock, const BogoliubovDecomposition& dec)
    : OperatorSet(fock) {
    if (dec.n_modes() != space.n_modes)
        throw ConfigError("OperatorSet: decomposition size mismatch");
    a.reserve(b.size());
    for (Eigen::Index i = 0; i < dec.n_modes(); ++i) {
        Matrix site = Matrix::Zero(space.dimension, space.dimension);
        for (Eigen::Index k = 0; k < dec.n_modes(); ++k) {
            if (dec.A(i, k) != 0.0) site += dec.A(i, k) * b[k];
            if (dec.B(i, k) != 0.0) site += dec.B(i, k) * b[k].adjoint();
        }
        a.push_back(std::move(site));
    }
}

void DenseGenerator::add_term(int bath, double rate, Matrix op) {
    LindbladTerm term;
    term.bath = bath;
    term.rate = rate;
    term.op_dag = op.adjoint();
    term.op_normal = term.op_dag * op;
    term.op = std::move(op);
    terms.push_back(std::move(term));
}

Matrix DenseGenerator::apply(const Matrix& rho) const {
    Matrix out = -kImag * (hamiltonian * rho - rho * hamiltonian);
    out += apply_dissipator(rho, -1);
    return out;
}

Matrix DenseGenerator::apply_dissipator(const Matrix& rho, int bath) const {
    Matrix out = Matrix::Zero(dimension, dimension);
    for (const auto& term : terms) {
        if (bath >= 0 && term.bath != bath) continue;
        out += term.rate * (2.0 * (term.op * rho) * term.op_dag -
                            term.op_normal * rho - rho * term.op_normal);
    }
    return out;
}

namespace {

// row-major vec: vec(A rho B)[(i,j)] = sum_kl A(i,k) B(l,j) vec(rho)[(k,l)]
Matrix kron_sandwich(const Matrix& a, const Matrix& b) {
    const Eigen::Index d = a.rows();
    Matrix s(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            for (Eigen::Index k = 0; k < d; ++k)
                for (Eigen::Index l = 0; l < d; ++l)
                    s(i * d + j, k * d + l) = a(i, k) * b(l, j);
    return s;
}

}  // namespace

Matrix DenseGenerator::superoperator() const {
    const Eigen::Index d = dimension;
    if (d > 64)
        throw ConfigError(
            "superoperator materialization capped at dimension 64");
    const Matrix id = Matrix::Identity(d, d);
    Matrix s = -kImag * (kron_sandwich(hamiltonian, id) -
                         kron_sandwich(id, hamiltonian));
    for (const auto& term : terms) {
        const Matrix ldl = term.op.adjoint() * term.op;
        s += term.rate * (2.0 * kron_sandwich(term.op, term.op.adjoint()) -
                          kron_sandwich(ldl, id) - kron_sandwich(id, ldl));
    }
    return s;
}

DenseGenerator build_generator(const EffectiveModel& model,
                               const FockSpace& space) {
    if (space.n_modes != model.n_modes())
        throw ConfigError("build_generator: Fock space size mismatch");
    if (space.statistics != model.hamiltonian.statistics)
        throw ConfigError("build_generator: statistics mismatch");

    const OperatorSet ops(space);
    const auto& cls = model.classification;
    const Eigen::Index d = space.dimension;

    DenseGenerator gen;
    gen.dimension = d;

    // H = sum_k omega_k n_k plus the (matrix-valued on degenerate classes)
    // environment shift; for singleton classes this is omega_tilde n_k.
    gen.hamiltonian = Matrix::Zero(d, d);
    if (model.degeneracy_blocks.empty()) {
        for (Eigen::Index k = 0; k < model.n_modes(); ++k)
            gen.hamiltonian +=
                model.omega_tilde(k) * (ops.b[k].adjoint() * ops.b[k]);
    } else {
        for (Eigen::Index k = 0; k < model.n_modes(); ++k) {
            const double w = cls.is_zero_class(cls.class_of(static_cast<int>(k)))
                                 ? 0.0
                                 : model.decomposition.omegas(k);
            gen.hamiltonian += w * (ops.b[k].adjoint() * ops.b[k]);
        }
        for (const auto& block : model.degeneracy_blocks) {
            const Eigen::Index m = static_cast<Eigen::Index>(block.modes.size());
            for (Eigen::Index u = 0; u < m; ++u)
                for (Eigen::Index v = 0; v < m; ++v)
                    if (block.lamb_block(u, v) != 0.0)
                        gen.hamiltonian += block.lamb_block(u, v) *
                                           (ops.b[block.modes[u]].adjoint() *
                                            ops.b[block.modes[v]]);
        }
    }

    // One Lindblad operator per (bath, class, branch); rank-one coupling
    // blocks collapse each class sum into a single collective operator.
    for (Eigen::Index n = 0; n < model.n_baths(); ++n) {
        for (std::size_t lambda = 0; lambda < cls.classes.size(); ++lambda) {
            const auto& modes = cls.classes[lambda];
            const bool zero_class = cls.is_zero_class(lambda);
            const double omega = zero_class ? 0.0 : cls.class_energies[lambda];

            if (zero_class) {
                Matrix op = Matrix::Zero(d, d);
                for (int u : modes) {
                    const Complex c = model.coupling_c(n, u);
                    op += c * ops.b[u] + std::conj(c) * ops.b[u].adjoint();
                }
                const double rate = gamma_function(
                    model.baths[n], model.hamiltonian.statistics, 0.0);
                if (rate != 0.0 && max_abs(op) != 0.0)
                    gen.add_term(static_cast<int>(n), rate, std::move(op));
                continue;
            }

            Matrix lower = Matrix::Zero(d, d);
            Matrix raise = Matrix::Zero(d, d);
            for (int u : modes) {
                const Complex c = model.coupling_c(n, u);
                lower += c * ops.b[u];
                raise += std::conj(c) * ops.b[u].adjoint();
            }
            const double cool = gamma_function(
                model.baths[n], model.hamiltonian.statistics, omega);
            const double heat = gamma_function(
                model.baths[n], model.hamiltonian.statistics, -omega);
            if (cool != 0.0 && max_abs(lower) != 0.0)
                gen.add_term(static_cast<int>(n), cool, std::move(lower));
            if (heat != 0.0 && max_abs(raise) != 0.0)
                gen.add_term(static_cast<int>(n), heat, std::move(raise));
        }
    }
    return gen;
}

Matrix grand_canonical_state(const OperatorSet& ops, const RealVector& omegas,
                             double temperature, double chemical_potential) {
    if (temperature <= 0.0)
        throw ConfigError("grand_canonical_state: temperature must be > 0");
    const Eigen::Index d = ops.space.dimension;
    RealVector energies = RealVector::Zero(d);
    for (Eigen::Index x = 0; x < d; ++x)
        for (int k = 0; k < ops.space.n_modes; ++k)
            energies(x) += (omegas(k) - chemical_potential) *
                           ops.space.occupation_of(x, k);
    const double ground = energies.minCoeff();
    RealVector weights =
        ((ground - energies.array()) / temperature).exp().matrix();
    weights /= weights.sum();
    Matrix rho = Matrix::Zero(d, d);
    rho.diagonal() = weights.cast<Complex>();
    return rho;
}

QuasiparticleState extract_two_point(const Matrix& rho, const OperatorSet& ops) {
    const int n = ops.space.n_modes;
    QuasiparticleState state;
    state.theta.resize(n, n);
    state.kappa.resize(n, n);
    for (int k = 0; k < n; ++k) {
        for (int q = 0; q < n; ++q) {
            state.theta(k, q) = (rho * ops.b[k].adjoint() * ops.b[q]).trace();
            state.kappa(k, q) = (rho * ops.b[k] * ops.b[q]).trace();
        }
    }
    return state;
}

std::vector<Matrix> integrate(const DenseGenerator& gen, const Matrix& rho0,
                              const std::vector<double>& t_grid,
                              double local_tol) {
    if (rho0.rows() != gen.dimension || rho0.cols() != gen.dimension)
        throw ConfigError("integrate: state dimension mismatch");
    if (max_abs(rho0 - rho0.adjoint()) > 1e-9 * std::max(1.0, max_abs(rho0)))
        throw ConfigError("integrate: initial state must be Hermitian");
    if (std::abs(rho0.trace().real() - 1.0) > 1e-8 ||
        std::abs(rho0.trace().imag()) > 1e-10)
        throw ConfigError("integrate: initial state must have unit trace");
    {
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho0 + rho0.adjoint()));
        if (es.eigenvalues().minCoeff() < -1e-8)
            throw ConfigError("integrate: initial state must be positive");
    }
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (t_grid[i] < t_grid[i - 1])
            throw ConfigError("integrate: time grid must ascend");

    // Dormand-Prince 5(4) tableau (c nodes implicit: autonomous generator)
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                        a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    std::vector<Matrix> snapshots;
    snapshots.reserve(t_grid.size());

    Matrix rho = rho0;
    double t = 0.0;
    double dt = 1e-3;
    Matrix k1 = gen.apply(rho);  // FSAL

    for (double target : t_grid) {
        if (target < 0.0) throw ConfigError("integrate: negative time");
        if (target <= t + 1e-15 * std::max(1.0, t)) {
            snapshots.push_back(rho);
            continue;
        }
        while (t < target) {
            double h = std::min(dt, target - t);
            const Matrix k2 = gen.apply(rho + h * a21 * k1);
            const Matrix k3 = gen.apply(rho + h * (a31 * k1 + a32 * k2));
            const Matrix k4 = gen.apply(rho + h * (a41 * k1 + a42 * k2 + a43 * k3));
            const Matrix k5 = gen.apply(
                rho + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            const Matrix k6 = gen.apply(
                rho + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            const Matrix next =
                rho + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            const Matrix k7 = gen.apply(next);
            const Matrix err_mat =
                h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            const double err = max_abs(err_mat);
            const double tol = local_tol * std::max(1.0, max_abs(rho));
            if (err <= tol) {
                t += h;
                rho = next;
                k1 = k7;
            }
            const double factor =
                err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
            dt = h * std::min(5.0, std::max(0.2, factor));
            if (dt < 1e-14 * std::max(1.0, std::abs(t)))
                throw NumericalError("integrate: step size underflow");
        }
        snapshots.push_back(rho);
    }
    return snapshots;
}

// ----------------------------- observables ----------------------------------

Observable parse_observable(const std::string& text) {
    Observable obs;
    std::size_t pos = 0;
    const auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    };
    const auto fail = [&](const std::string& what) -> void {
        throw ConfigError("observable: " + what + " at position " +
                          std::to_string(pos) + " in \"" + text + "\"");
    };

    double sign = 1.0;
    skip_ws();
    while (pos < text.size()) {
        ObsTerm term;
        term.coefficient = sign;

        skip_ws();
        // optional numeric or (re,im) coefficient
        if (pos < text.size() &&
            (std::isdigit(static_cast<unsigned char>(text[pos])) ||
             text[pos] == '.' || text[pos] == '(')) {
            if (text[pos] == '(') {
                std::size_t close = text.find(')', pos);
                if (close == std::string::npos) fail("unterminated complex literal");
                std::string body = text.substr(pos + 1, close - pos - 1);
                std::size_t comma = body.find(',');
                if (comma == std::string::npos) fail("complex literal needs re,im");
                term.coefficient *= Complex(std::stod(body.substr(0, comma)),
                                            std::stod(body.substr(comma + 1)));
                pos = close + 1;
            } else {
                std::size_t used = 0;
                term.coefficient *= std::stod(text.substr(pos), &used);
                pos += used;
            }
            skip_ws();
            if (pos < text.size() && text[pos] == '*') {
                ++pos;
                skip_ws();
            }
        }

        // factors: (b|bdag|a|adag|n)_<index>
        bool any_factor = false;
        while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) {
            std::size_t start = pos;
            while (pos < text.size() &&
                   std::isalpha(static_cast<unsigned char>(text[pos])))
                ++pos;
            const std::string name = text.substr(start, pos - start);
            if (pos >= text.size() || text[pos] != '_') fail("expected _<index>");
            ++pos;
            std::size_t used = 0;
            int index = std::stoi(text.substr(pos), &used);
            pos += used;
            if (index < 1) fail("indices are 1-based");
            ObsFactor factor;
            factor.index = index - 1;
            if (name == "b") {
                factor.site = false;
                factor.dagger = false;
            } else if (name == "bdag") {
                factor.site = false;
                factor.dagger = true;
            } else if (name == "a") {
                factor.site = true;
                factor.dagger = false;
            } else if (name == "adag") {
                factor.site = true;
                factor.dagger = true;
            } else if (name == "n") {
                term.factors.push_back({index - 1, true, false});
                factor.site = false;
                factor.dagger = false;
            } else {
                pos = start;
                fail("unknown symbol \"" + name + "\"");
            }
            term.factors.push_back(factor);
            any_factor = true;
            skip_ws();
            if (pos < text.size() && text[pos] == '*') {
                ++pos;
                skip_ws();
            }
        }
        if (!any_factor && term.factors.empty() &&
            term.coefficient == Complex(sign, 0.0))
            fail("empty term");
        obs.terms.push_back(std::move(term));

        skip_ws();
        if (pos >= text.size()) break;
        if (text[pos] == '+')
            sign = 1.0;
        else if (text[pos] == '-')
            sign = -1.0;
        else
            fail("expected + or -");
        ++pos;
        skip_ws();
    }
    if (obs.terms.empty()) throw ConfigError("observable: empty expression");
    return obs;
}

Observable total_particle_number(int n_sites) {
    Observable obs;
    for (int i = 0; i < n_sites; ++i)
        obs.terms.push_back({1.0, {{i, true, true}, {i, false, true}}});
    return obs;
}

Observable total_quasiparticle_number(int n_modes) {
    Observable obs;
    for (int k = 0; k < n_modes; ++k)
        obs.terms.push_back({1.0, {{k, true, false}, {k, false, false}}});
    return obs;
}

Matrix materialize(const Observable& obs, const OperatorSet& ops) {
    const Eigen::Index d = ops.space.dimension;
    Matrix total = Matrix::Zero(d, d);
    for (const auto& term : obs.terms) {
        Matrix product = Matrix::Identity(d, d);
        for (const auto& factor : term.factors) {
            const auto& bank = factor.site ? ops.a : ops.b;
            if (factor.site && ops.a.empty())
                throw ConfigError(
                    "observable uses site operators but no transformation "
                    "was attached to the operator set");
            if (factor.index < 0 ||
                factor.index >= static_cast<int>(bank.size()))
                throw ConfigError("observable index out of range");
            product = factor.dagger
                          ? Matrix(product * bank[factor.index].adjoint())
                          : Matrix(product * bank[factor.index]);
        }
        total += term.coefficient * product;
    }
    return total;
}

Complex expectation(const Matrix& rho, const Observable& obs,
                    const OperatorSet& ops) {
    return (rho * materialize(obs, ops)).trace();
}

SteadyStateResult steady_state(const DenseGenerator& gen, double null_tol) {
    const Matrix super = gen.superoperator();
    Eigen::BDCSVD<Matrix> svd(super, Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    const double cutoff = null_tol * sigma(0);

    SteadyStateResult result;
    const Eigen::Index d = gen.dimension;
    for (Eigen::Index i = sigma.size(); i-- > 0;) {
        if (sigma(i) > cutoff) break;
        Matrix candidate(d, d);
        for (Eigen::Index r = 0; r < d; ++r)
            candidate.row(r) = svd.matrixV().col(i).segment(r * d, d).transpose();
        result.basis.push_back(std::move(candidate));
    }
    result.dimension = static_cast<int>(result.basis.size());
    if (result.dimension == 0)
        throw NumericalError("steady_state: no kernel vector found");
    if (result.dimension == 1) {
        Matrix rho = 0.5 * (result.basis[0] + result.basis[0].adjoint());
        const double trace = rho.trace().real();
        if (std::abs(trace) < 1e-10 * std::max(1.0, max_abs(rho)))
            throw NumericalError(
                "steady_state: kernel vector is traceless, extraction is "
                "ill-conditioned");
        result.state = rho / trace;
    }
    return result;
}

}  // namespace quadlind
