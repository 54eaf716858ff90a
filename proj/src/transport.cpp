#include "quadlind/transport.hpp"

#include "quadlind/dynamics.hpp"

#include <cmath>

namespace quadlind {

namespace {

void require_two_baths(const EffectiveModel& model, const char* where) {
    if (model.n_baths() != 2)
        throw ConfigError(std::string(where) + ": exactly two baths required");
    model.require_closed_form(where);
}

// true when mode k enters the primed current sums
bool conducting(const EffectiveModel& model, Eigen::Index k) {
    if (model.is_zero_mode(k)) return false;
    return model.gamma(0, k) > 0.0 && model.gamma(1, k) > 0.0;
}

double transfer_factor(const EffectiveModel& model, Eigen::Index k) {
    const double gl = model.gamma(0, k);
    const double gr = model.gamma(1, k);
    return 2.0 * gl * gr / (gl + gr);
}

// f_L - f_R at mode k
double bias(const EffectiveModel& model, Eigen::Index k) {
    return model.f_at_modes(0, k) - model.f_at_modes(1, k);
}

double current_sum(const EffectiveModel& model, const RealVector* anomaly,
                   bool weight_energy) {
    double total = 0.0;
    for (Eigen::Index k = 0; k < model.n_modes(); ++k) {
        if (!conducting(model, k)) continue;
        double term = transfer_factor(model, k) * bias(model, k);
        if (anomaly) term *= (*anomaly)(k);
        if (weight_energy) term *= model.decomposition.omegas(k);
        total += term;
    }
    return total;
}

}  // namespace

RealVector anomaly_factors(const BogoliubovDecomposition& dec) {
    const double z = static_cast<double>(zeta(dec.statistics));
    return (dec.A.adjoint() * dec.A - z * dec.B.adjoint() * dec.B)
        .diagonal()
        .real();
}

double particle_current(const EffectiveModel& model) {
    require_two_baths(model, "particle_current");
    const RealVector s = anomaly_factors(model.decomposition);
    return current_sum(model, &s, false);
}

double quasiparticle_current(const EffectiveModel& model) {
    require_two_baths(model, "quasiparticle_current");
    return current_sum(model, nullptr, false);
}

double energy_current(const EffectiveModel& model) {
    require_two_baths(model, "energy_current");
    return current_sum(model, nullptr, true);
}

double heat_current(const EffectiveModel& model, double mu) {
    return energy_current(model) - mu * quasiparticle_current(model);
}

std::pair<double, double> bath_resolved_particle_flux(const EffectiveModel& model) {
    require_two_baths(model, "bath_resolved_particle_flux");
    const RealVector s = anomaly_factors(model.decomposition);
    const SteadyReport steady = steady_theta(model);
    double left = 0.0, right = 0.0;
    for (Eigen::Index k = 0; k < model.n_modes(); ++k) {
        if (model.is_zero_mode(k) || model.total_rate(k) == 0.0) continue;
        const double occupation = steady.state.theta(k, k).real();
        left += 2.0 * model.gamma(0, k) * s(k) *
                (model.f_at_modes(0, k) - occupation);
        right += 2.0 * model.gamma(1, k) * s(k) *
                 (model.f_at_modes(1, k) - occupation);
    }
    return {left, right};
}

OnsagerResult onsager_matrix(const EffectiveModel& model,
                             const LinearResponsePoint& point) {
    require_two_baths(model, "onsager_matrix");
    if (point.temperature <= 0.0)
        throw ConfigError("onsager_matrix: temperature must be > 0");

    BathSpec reference;
    reference.temperature = point.temperature;
    reference.chemical_potential = point.mu;
    const Statistics stat = model.hamiltonian.statistics;

    OnsagerResult result;
    double l11 = 0.0, l12 = 0.0, l21 = 0.0, l22 = 0.0;
    for (Eigen::Index k = 0; k < model.n_modes(); ++k) {
        if (!conducting(model, k)) continue;
        const double w = model.decomposition.omegas(k);
        const double tau = transfer_factor(model, k);
        const double dfdmu = occupation_dmu(reference, stat, w);
        const double dfdT = (w - point.mu) / point.temperature * dfdmu;
        const double t = point.temperature;
        l11 += t * tau * dfdmu;
        l12 += t * t * tau * dfdT;
        l21 += t * (tau * w * dfdmu - point.mu * tau * dfdmu);
        l22 += t * t * (tau * w * dfdT - point.mu * tau * dfdT);
    }
    result.ell << l11, l12, l21, l22;
    const double scale = result.ell.cwiseAbs().maxCoeff();
    result.asymmetry = scale > 0.0 ? std::abs(l12 - l21) / scale : 0.0;
    return result;
}

OnsagerResult onsager_matrix_fd(const EffectiveModel& model,
                                const LinearResponsePoint& point) {
    require_two_baths(model, "onsager_matrix_fd");
    const Statistics stat = model.hamiltonian.statistics;

    // currents through the Landauer sums with f_{L/R} displaced by
    // (+-dmu/2, +-dT/2); gamma is bias-independent so no rebuild is needed
    const auto currents = [&](double mu_l, double t_l, double mu_r, double t_r) {
        BathSpec left, right;
        left.chemical_potential = mu_l;
        left.temperature = t_l;
        right.chemical_potential = mu_r;
        right.temperature = t_r;
        double jnq = 0.0, je = 0.0;
        for (Eigen::Index k = 0; k < model.n_modes(); ++k) {
            if (!conducting(model, k)) continue;
            const double w = model.decomposition.omegas(k);
            const double df =
                occupation(left, stat, w) - occupation(right, stat, w);
            const double term = transfer_factor(model, k) * df;
            jnq += term;
            je += w * term;
        }
        return std::make_pair(jnq, je);
    };

    const double t = point.temperature, mu = point.mu;
    OnsagerResult result;
    {
        const auto [jnq, je] = currents(mu + 0.5 * point.dmu, t,
                                        mu - 0.5 * point.dmu, t);
        const double jq = je - mu * jnq;
        result.ell(0, 0) = t * jnq / point.dmu;
        result.ell(1, 0) = t * jq / point.dmu;
    }
    {
        const auto [jnq, je] = currents(mu, t + 0.5 * point.dT,
                                        mu, t - 0.5 * point.dT);
        const double jq = je - mu * jnq;
        result.ell(0, 1) = t * t * jnq / point.dT;
        result.ell(1, 1) = t * t * jq / point.dT;
    }
    const double scale = result.ell.cwiseAbs().maxCoeff();
    result.asymmetry =
        scale > 0.0 ? std::abs(result.ell(0, 1) - result.ell(1, 0)) / scale : 0.0;
    return result;
}

CurrentSet currents_with_occupations(const EffectiveModel& model, double t_left,
                                     double mu_left, double t_right,
                                     double mu_right) {
    require_two_baths(model, "currents_with_occupations");
    const Statistics stat = model.hamiltonian.statistics;
    BathSpec left, right;
    left.temperature = t_left;
    left.chemical_potential = mu_left;
    right.temperature = t_right;
    right.chemical_potential = mu_right;

    const RealVector s = anomaly_factors(model.decomposition);
    CurrentSet set;
    for (Eigen::Index k = 0; k < model.n_modes(); ++k) {
        if (!conducting(model, k)) continue;
        const double w = model.decomposition.omegas(k);
        const double df =
            occupation(left, stat, w) - occupation(right, stat, w);
        const double term = transfer_factor(model, k) * df;
        set.particle += s(k) * term;
        set.quasiparticle += term;
        set.energy += w * term;
    }
    set.heat = set.energy - 0.5 * (mu_left + mu_right) * set.quasiparticle;
    return set;
}

TransportReport transport_report(const EffectiveModel& model) {
    require_two_baths(model, "transport_report");

    TransportReport report;
    report.anomaly = anomaly_factors(model.decomposition);
    report.particle = current_sum(model, &report.anomaly, false);
    report.quasiparticle = current_sum(model, nullptr, false);
    report.energy = current_sum(model, nullptr, true);
    report.reference_mu = 0.5 * (model.baths[0].chemical_potential +
                                 model.baths[1].chemical_potential);
    report.reference_temperature =
        0.5 * (model.baths[0].temperature + model.baths[1].temperature);
    report.heat = report.energy - report.reference_mu * report.quasiparticle;

    LinearResponsePoint point;
    point.mu = report.reference_mu;
    point.temperature = report.reference_temperature;
    report.onsager = onsager_matrix(model, point);

    for (Eigen::Index k = 0; k < model.n_modes(); ++k) {
        if (conducting(model, k)) {
            report.channels.push_back({static_cast<int>(k),
                                       transfer_factor(model, k),
                                       report.anomaly(k), bias(model, k)});
        } else {
            report.excluded_modes.push_back(static_cast<int>(k));
        }
    }
    return report;
}

}  // namespace quadlind
