#include "quadlind/lindblad_builder.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace quadlind {

void EffectiveModel::require_closed_form(const char* where) const {
    if (closed_form_ok) return;
    std::ostringstream msg;
    msg << where << ": model is outside the closed-form pipeline (";
    if (!classification.nondegenerate())
        msg << "degenerate spectrum";
    else
        msg << "zero mode without a real coupling gauge";
    msg << "); use the dense oracle instead";
    throw CapabilityError(msg.str());
}

Vector coupling_overlaps(const BogoliubovDecomposition& dec,
                         const CouplingRegion& region) {
    check_region(region, dec.n_modes());
    Vector c = Vector::Zero(dec.n_modes());
    for (std::size_t i = 0; i < region.sites.size(); ++i)
        c += region.weights(static_cast<Eigen::Index>(i)) *
             dec.phi.row(region.sites[i]).transpose();
    return c;
}

RealVector coupling_weights(const BogoliubovDecomposition& dec,
                            const CouplingRegion& region) {
    return coupling_overlaps(dec, region).cwiseAbs2();
}

RealMatrix effective_couplings(const BogoliubovDecomposition& dec,
                               const std::vector<BathSpec>& baths) {
    const Eigen::Index n = dec.n_modes();
    const Eigen::Index nb = static_cast<Eigen::Index>(baths.size());
    const double ztol = dec.default_zero_tol();
    RealMatrix gamma(nb, n);
    for (Eigen::Index b = 0; b < nb; ++b) {
        const RealVector phi = coupling_weights(dec, baths[b].region);
        for (Eigen::Index k = 0; k < n; ++k) {
            const double w = dec.omegas(k) <= ztol ? 0.0 : dec.omegas(k);
            gamma(b, k) = baths[b].spectral_density(w) * phi(k);
        }
    }
    return gamma;
}

std::vector<EigenoperatorTerm> eigenoperator_coefficients(
    const BogoliubovDecomposition& dec, const CouplingRegion& region,
    double omega, double tol) {
    if (tol < 0.0) tol = dec.default_cluster_tol();
    const Vector c = coupling_overlaps(dec, region);
    std::vector<EigenoperatorTerm> terms;
    for (Eigen::Index k = 0; k < dec.n_modes(); ++k) {
        if (std::abs(omega - dec.omegas(k)) <= tol)
            terms.push_back({static_cast<int>(k), false, c(k)});
        if (std::abs(omega + dec.omegas(k)) <= tol)
            terms.push_back({static_cast<int>(k), true, std::conj(c(k))});
    }
    return terms;
}

std::vector<DegeneracyBlock> build_degeneracy_blocks(
    const BogoliubovDecomposition& dec, const std::vector<BathSpec>& baths,
    const SpectrumClassification& cls, double quadrature_rel) {
    std::vector<Vector> overlaps;
    overlaps.reserve(baths.size());
    for (const auto& bath : baths)
        overlaps.push_back(coupling_overlaps(dec, bath.region));

    std::vector<DegeneracyBlock> blocks;
    for (std::size_t lambda = 0; lambda < cls.classes.size(); ++lambda) {
        DegeneracyBlock block;
        block.class_index = static_cast<int>(lambda);
        block.modes = cls.classes[lambda];
        const bool zero_class = cls.is_zero_class(lambda);
        block.omega = zero_class ? 0.0 : cls.class_energies[lambda];
        const Eigen::Index m = static_cast<Eigen::Index>(block.modes.size());

        block.lamb_block = Matrix::Zero(m, m);
        for (std::size_t b = 0; b < baths.size(); ++b) {
            Vector c(m);
            for (Eigen::Index i = 0; i < m; ++i)
                c(i) = overlaps[b](block.modes[static_cast<std::size_t>(i)]);
            block.phi_blocks.push_back(c * c.adjoint());
            if (zero_class)
                block.psi_blocks.push_back(c * c.transpose());
            const double kernel =
                lamb_kernel(baths[b].spectral_density, dec.statistics,
                            block.omega, quadrature_rel);
            if (kernel != 0.0)
                block.lamb_block += kernel * block.phi_blocks.back().transpose();
        }
        blocks.push_back(std::move(block));
    }
    return blocks;
}

EffectiveModel build_effective_model(const QuadraticHamiltonian& h,
                                     std::vector<BathSpec> baths,
                                     const Tolerances& tol) {
    require_valid(h, tol.validate);
    if (baths.empty()) throw ConfigError("build_effective_model: need >= 1 bath");
    for (const auto& bath : baths) check_region(bath.region, h.n_sites());

    EffectiveModel model;
    model.hamiltonian = h;
    model.decomposition = diagonalize(h, tol.zero_scale);
    model.baths = std::move(baths);
    const auto& dec = model.decomposition;
    const Eigen::Index n = dec.n_modes();
    const Eigen::Index nb = model.n_baths();

    model.classification = classify_spectrum(
        dec, dec.default_zero_tol(tol.zero_scale),
        dec.default_cluster_tol(tol.cluster_scale));
    const auto& cls = model.classification;

    if (h.statistics == Statistics::boson) {
        const double omega_min = dec.omegas.minCoeff();
        for (Eigen::Index b = 0; b < nb; ++b) {
            if (model.baths[b].chemical_potential >= omega_min) {
                std::ostringstream msg;
                msg << "bath " << b + 1 << ": bosonic chemical potential "
                    << model.baths[b].chemical_potential
                    << " must lie below the lowest mode energy " << omega_min;
                throw PhysicsError(msg.str());
            }
        }
    }

    // snapped frequencies: zero-class modes evaluate bath functions at 0
    RealVector omega_eval = dec.omegas;
    for (int k : cls.zero_modes) omega_eval(k) = 0.0;

    model.coupling_c.resize(nb, n);
    for (Eigen::Index b = 0; b < nb; ++b)
        model.coupling_c.row(b) =
            coupling_overlaps(dec, model.baths[b].region).transpose();
    model.coupling_phi = model.coupling_c.cwiseAbs2();

    model.gamma.resize(nb, n);
    model.f_at_modes.resize(nb, n);
    for (Eigen::Index b = 0; b < nb; ++b) {
        for (Eigen::Index k = 0; k < n; ++k) {
            model.gamma(b, k) = model.baths[b].spectral_density(omega_eval(k)) *
                                model.coupling_phi(b, k);
            model.f_at_modes(b, k) =
                occupation(model.baths[b], h.statistics, omega_eval(k));
        }
    }

    model.omega_tilde =
        omega_eval + lamb_shift(model.baths, h.statistics, model.coupling_phi,
                                omega_eval, tol.quadrature_rel);

    if (cls.has_zero_mode() && cls.zero_modes.size() == 1) {
        ZeroModeData zm;
        zm.index = cls.zero_modes.front();
        zm.delta = model.gamma.col(zm.index).sum();
        zm.psi.resize(nb);
        zm.closed_form_ok = true;
        for (Eigen::Index b = 0; b < nb; ++b) {
            const Complex c = model.coupling_c(b, zm.index);
            zm.psi(b) = c * c;
            const double phi = std::norm(c);
            if (std::abs(zm.psi(b) - phi) > 1e-10 * std::max(1.0, phi))
                zm.closed_form_ok = false;
        }
        model.zero_mode = std::move(zm);
    }

    if (!cls.nondegenerate())
        model.degeneracy_blocks = build_degeneracy_blocks(
            dec, model.baths, cls, tol.quadrature_rel);

    model.closed_form_ok =
        cls.nondegenerate() && (!model.zero_mode || model.zero_mode->closed_form_ok);

    model.smallest_class_gap = 0.0;
    if (cls.class_energies.size() > 1) {
        double gap = std::numeric_limits<double>::infinity();
        for (std::size_t l = 1; l < cls.class_energies.size(); ++l)
            gap = std::min(gap, cls.class_energies[l] - cls.class_energies[l - 1]);
        model.smallest_class_gap = gap;
        if (gap < 1e-3 * std::max(1.0, dec.spectral_norm)) {
            std::ostringstream msg;
            msg << "quasi-degenerate spectrum: smallest class gap " << gap
                << "; the full secular approximation may be unreliable here";
            model.warnings.push_back(msg.str());
        }
    }
    if (model.zero_mode && !model.zero_mode->closed_form_ok)
        model.warnings.push_back(
            "zero mode with complex coupling overlaps: closed-form dynamics "
            "disabled, oracle required");
    if (cls.zero_modes.size() > 1)
        model.warnings.push_back(
            "multiple zero modes form a degenerate zero class: oracle required");

    return model;
}

LocalRates local_rates(const std::vector<BathSpec>& baths, double big_omega,
                       Statistics statistics) {
    if (big_omega <= 0.0) throw ConfigError("local_rates: Omega must be > 0");
    std::set<int> sites;
    for (const auto& bath : baths)
        sites.insert(bath.region.sites.begin(), bath.region.sites.end());

    LocalRates rates;
    rates.sites.assign(sites.begin(), sites.end());
    const Eigen::Index np = static_cast<Eigen::Index>(rates.sites.size());
    rates.up = RealVector::Zero(np);
    rates.down = RealVector::Zero(np);
    const double z = static_cast<double>(zeta(statistics));
    for (Eigen::Index i = 0; i < np; ++i) {
        for (const auto& bath : baths) {
            const bool touches =
                std::find(bath.region.sites.begin(), bath.region.sites.end(),
                          rates.sites[static_cast<std::size_t>(i)]) !=
                bath.region.sites.end();
            if (!touches) continue;
            const double j = bath.spectral_density(big_omega);
            const double f = occupation(bath, statistics, big_omega);
            rates.up(i) += j * f;
            rates.down(i) += j * (1.0 - z * f);
        }
    }
    return rates;
}

}  // namespace quadlind
