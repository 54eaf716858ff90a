#include "quadlind/environment.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace quadlind {

double SpectralDensity::operator()(double omega) const {
    if (omega < 0.0) return 0.0;
    switch (kind) {
        case Kind::flat:
            return gamma0;
        case Kind::ohmic:
            return eta * omega * std::exp(-omega / omega_c);
        case Kind::tabulated: {
            if (table.empty() || omega < table.front().first ||
                omega > table.back().first)
                return 0.0;
            auto hi = std::lower_bound(
                table.begin(), table.end(), omega,
                [](const auto& pt, double w) { return pt.first < w; });
            if (hi == table.begin()) return hi->second;
            auto lo = hi - 1;
            if (hi == table.end()) return lo->second;
            const double t = (omega - lo->first) / (hi->first - lo->first);
            return (1.0 - t) * lo->second + t * hi->second;
        }
    }
    return 0.0;
}

SpectralDensity SpectralDensity::flat(double gamma0) {
    if (gamma0 < 0.0) throw ConfigError("spectral density: gamma0 must be >= 0");
    SpectralDensity d;
    d.kind = Kind::flat;
    d.gamma0 = gamma0;
    return d;
}

SpectralDensity SpectralDensity::ohmic(double eta, double omega_c) {
    if (eta < 0.0) throw ConfigError("spectral density: eta must be >= 0");
    if (omega_c <= 0.0) throw ConfigError("spectral density: omega_c must be > 0");
    SpectralDensity d;
    d.kind = Kind::ohmic;
    d.eta = eta;
    d.omega_c = omega_c;
    return d;
}

SpectralDensity SpectralDensity::tabulated(
    std::vector<std::pair<double, double>> points) {
    if (points.size() < 2)
        throw ConfigError("tabulated spectral density: need at least 2 points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].first < 0.0)
            throw ConfigError("tabulated spectral density: negative frequency");
        if (points[i].second < 0.0)
            throw ConfigError("tabulated spectral density: negative value");
        if (i > 0 && points[i].first <= points[i - 1].first)
            throw ConfigError("tabulated spectral density: frequencies must ascend");
    }
    SpectralDensity d;
    d.kind = Kind::tabulated;
    d.table = std::move(points);
    return d;
}

double occupation(const BathSpec& bath, Statistics statistics, double omega) {
    if (bath.temperature <= 0.0)
        throw ConfigError("bath temperature must be > 0");
    const double x = (omega - bath.chemical_potential) / bath.temperature;
    if (statistics == Statistics::fermion) {
        // stable logistic evaluation on both tails
        if (x >= 0.0) {
            const double e = std::exp(-x);
            return e / (1.0 + e);
        }
        return 1.0 / (1.0 + std::exp(x));
    }
    if (omega <= bath.chemical_potential) {
        std::ostringstream msg;
        msg << "Bose-Einstein occupation diverges: omega " << omega
            << " <= mu " << bath.chemical_potential;
        throw PhysicsError(msg.str());
    }
    return 1.0 / std::expm1(x);
}

double occupation_dmu(const BathSpec& bath, Statistics statistics, double omega) {
    const double z = static_cast<double>(zeta(statistics));
    const double t = bath.temperature;
    const double x = (omega - bath.chemical_potential) / t;
    if (statistics == Statistics::boson && omega <= bath.chemical_potential)
        throw PhysicsError("Bose-Einstein occupation diverges in derivative");
    // e^x / (T (z + e^x)^2), evaluated via e^{-x} to avoid overflow
    const double em = std::exp(-x);
    const double denom = 1.0 + z * em;
    return em / (t * denom * denom);
}

double gamma_function(const BathSpec& bath, Statistics statistics, double omega) {
    const auto& j = bath.spectral_density;
    const double z = static_cast<double>(zeta(statistics));
    if (omega > 0.0)
        return j(omega) * (1.0 - z * occupation(bath, statistics, omega));
    if (omega < 0.0) return j(-omega) * occupation(bath, statistics, -omega);
    const double j0 = j(0.0);
    if (j0 == 0.0) return 0.0;
    return j0 * (1.0 + (1.0 - z) * occupation(bath, statistics, 0.0));
}

namespace {

template <typename F>
double adaptive_integral(const F& f, double a, double b, double rel_tol) {
    double error = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 15>::
        integrate(f, a, b, 12, rel_tol, &error);
    if (!(std::isfinite(value)) ||
        error > 100.0 * rel_tol * std::max(1.0, std::abs(value)))
        throw NumericalError("principal-value quadrature did not converge");
    return value;
}

// PV int_0^inf J(e)/(w - e) de for w > 0, pairing e = w +/- u to cancel the
// pole, plus the smooth tail beyond 2w.
double pv_integral_singular(const SpectralDensity& j, double w, double rel_tol) {
    const auto paired = [&](double u) {
        if (u == 0.0) return 0.0;
        return (j(w - u) - j(w + u)) / u;
    };
    const double head = adaptive_integral(paired, 0.0, w, rel_tol);
    double tail = 0.0;
    if (j.kind == SpectralDensity::Kind::tabulated) {
        const double support = j.table.back().first;
        if (support > 2.0 * w)
            tail = adaptive_integral([&](double e) { return j(e) / (w - e); },
                                     2.0 * w, support, rel_tol);
    } else {
        tail = adaptive_integral(
            [&](double e) { return j(e) / (w - e); }, 2.0 * w,
            std::numeric_limits<double>::infinity(), rel_tol);
    }
    return head + tail;
}

// int_0^inf J(e)/(w + e) de, no singularity for w > 0.
double pv_integral_regular(const SpectralDensity& j, double w, double rel_tol) {
    const auto f = [&](double e) { return j(e) / (w + e); };
    if (j.kind == SpectralDensity::Kind::tabulated)
        return adaptive_integral(f, j.table.front().first, j.table.back().first,
                                 rel_tol);
    return adaptive_integral(f, 0.0, std::numeric_limits<double>::infinity(),
                             rel_tol);
}

// Exact per-segment principal values for a piecewise-linear density. Each
// segment [e1, e2] with J = a + b e contributes
//   -b (e2 - e1) - (a + b w) ln|w - e2|/|w - e1|
// and the log endpoint terms cancel pairwise at interior grid points.
double tabulated_pv(const std::vector<std::pair<double, double>>& table, double w) {
    double total = 0.0;
    for (std::size_t s = 0; s + 1 < table.size(); ++s) {
        const double e1 = table[s].first, j1 = table[s].second;
        const double e2 = table[s + 1].first, j2 = table[s + 1].second;
        const double b = (j2 - j1) / (e2 - e1);
        const double a = j1 - b * e1;
        total -= b * (e2 - e1);
        const double d1 = std::abs(w - e1), d2 = std::abs(w - e2);
        if (d1 > 0.0 && d2 > 0.0)
            total -= (a + b * w) * std::log(d2 / d1);
        else if (d2 > 0.0)
            total -= (a + b * w) * std::log(d2);
        else if (d1 > 0.0)
            total += (a + b * w) * std::log(d1);
    }
    return total;
}

}  // namespace

double lamb_kernel(const SpectralDensity& density, Statistics statistics,
                   double omega, double rel_tol) {
    const double z = static_cast<double>(zeta(statistics));
    if (density.kind == SpectralDensity::Kind::flat) return 0.0;
    if (omega < 0.0) throw ConfigError("lamb_kernel: omega must be >= 0");
    if (omega == 0.0) {
        // both principal values reduce to int J/e with opposite signs for
        // fermions; bosons keep a -2/pi int J/e term
        if (statistics == Statistics::fermion) return 0.0;
        const double i0 = adaptive_integral(
            [&](double e) { return e > 0.0 ? density(e) / e : 0.0; }, 0.0,
            density.kind == SpectralDensity::Kind::tabulated
                ? density.table.back().first
                : std::numeric_limits<double>::infinity(),
            rel_tol);
        return -2.0 * i0 / M_PI;
    }
    double singular, regular;
    if (density.kind == SpectralDensity::Kind::tabulated) {
        const auto& tb = density.table;
        if ((omega == tb.front().first && tb.front().second > 0.0) ||
            (omega == tb.back().first && tb.back().second > 0.0))
            throw NumericalError(
                "principal value diverges at the edge of the tabulated support");
        singular = tabulated_pv(tb, omega);
        regular = pv_integral_regular(density, omega, rel_tol);
    } else {
        singular = pv_integral_singular(density, omega, rel_tol);
        regular = pv_integral_regular(density, omega, rel_tol);
    }
    return (singular + z * regular) / M_PI;
}

RealVector lamb_shift(const std::vector<BathSpec>& baths, Statistics statistics,
                      const RealMatrix& coupling_phi, const RealVector& omegas,
                      double rel_tol) {
    const Eigen::Index n_baths = static_cast<Eigen::Index>(baths.size());
    if (coupling_phi.rows() != n_baths || coupling_phi.cols() != omegas.size())
        throw ConfigError("lamb_shift: Phi must be n_baths x n_modes");
    RealVector shifts = RealVector::Zero(omegas.size());
    for (Eigen::Index n = 0; n < n_baths; ++n) {
        // one kernel evaluation per distinct (bath, omega); flat baths skip
        if (baths[n].spectral_density.kind == SpectralDensity::Kind::flat)
            continue;
        for (Eigen::Index k = 0; k < omegas.size(); ++k) {
            if (coupling_phi(n, k) == 0.0) continue;
            shifts(k) += coupling_phi(n, k) *
                         lamb_kernel(baths[n].spectral_density, statistics,
                                     omegas(k), rel_tol);
        }
    }
    return shifts;
}

}  // namespace quadlind
