#include "heymw/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace heymw {

namespace {
inline double sqr(double x) { return x * x; }
}  // namespace

double OrbitState::norm() const {
    return std::max({std::abs(r), std::abs(N), std::abs(w), std::abs(U),
                     std::abs(kappa), std::abs(zeta)});
}

bool OrbitState::finite() const {
    return std::isfinite(rho) && std::isfinite(r) && std::isfinite(N) &&
           std::isfinite(w) && std::isfinite(U) && std::isfinite(kappa) &&
           std::isfinite(zeta);
}

double InitialData::energy() const {
    return 1.0 + 2.0 * U0 * U0 - sqr(1.0 - w0 * w0) / (r0 * r0);
}

bool InitialData::admissible() const {
    if (!(r0 > 0.0) || !(std::abs(w0) <= 1.0)) return false;
    const double e0 = energy();
    // tolerate rounding just below the E0 = 0 boundary
    return e0 >= -16.0 * std::numeric_limits<double>::epsilon() * (1.0 + 2.0 * U0 * U0 + sqr(1.0 - w0 * w0) / (r0 * r0));
}

StateVec rhs(const OrbitState& s) {
    if (!s.finite()) throw std::domain_error("rhs: non-finite state");
    if (!(s.r > 0.0)) throw std::domain_error("rhs: r must be positive");
    const double p = (1.0 - s.w * s.w);
    const double pr = p / s.r;
    return {
        s.r * s.N,                                   // rdot
        1.0 - pr * pr - s.kappa * s.N,               // Ndot
        s.r * s.U,                                   // wdot
        -(s.kappa - s.N) * s.U - s.w * p / s.r,      // Udot
        1.0 + 2.0 * s.U * s.U - s.kappa * s.kappa,   // kappadot
        -s.kappa * s.zeta                            // zetadot
    };
}

double constraint_residual(const OrbitState& s) {
    if (!s.finite()) throw std::domain_error("constraint_residual: non-finite state");
    if (!(s.r > 0.0)) throw std::domain_error("constraint_residual: r must be positive");
    const double pr = (1.0 - s.w * s.w) / s.r;
    return s.zeta * s.zeta -
           (1.0 + 2.0 * s.U * s.U - pr * pr - 2.0 * s.kappa * s.N + s.N * s.N);
}

EnergyPair energies(const OrbitState& s) {
    if (!(s.r > 0.0)) throw std::domain_error("energies: r must be positive");
    const double pr = (1.0 - s.w * s.w) / s.r;
    const double E = 1.0 + 2.0 * s.U * s.U - pr * pr;
    const double wdot = s.r * s.U;
    const double F = 2.0 * wdot * wdot - sqr(1.0 - s.w * s.w);
    return {E, F};
}

OrbitState initial_state(const InitialData& data) {
    if (!(data.r0 > 0.0)) throw std::domain_error("initial_state: r0 must be positive");
    if (!(std::abs(data.w0) <= 1.0)) throw std::domain_error("initial_state: |w0| must be <= 1");
    if (!data.admissible()) throw std::domain_error("initial_state: E0 < 0, data not admissible");
    const double e0 = std::max(0.0, data.energy());
    return {0.0, data.r0, 0.0, data.w0, data.U0, 0.0, std::sqrt(e0)};
}

double ResidualTable::max_abs() const {
    double m = 0.0;
    for (auto* col : {&yang_mills, &einstein_tau, &einstein_r, &constraint})
        for (double v : *col) m = std::max(m, std::abs(v));
    return m;
}

ResidualTable second_order_residuals(double rho0, double h,
                                     std::span<const double> tau,
                                     std::span<const double> r,
                                     std::span<const double> w,
                                     double pi0) {
    const std::size_t n = tau.size();
    if (n < 5 || r.size() != n || w.size() != n)
        throw std::invalid_argument("second_order_residuals: need >= 5 equal-length columns");
    if (!(h > 0.0)) throw std::invalid_argument("second_order_residuals: h must be positive");
    for (double ri : r)
        if (!(ri > 0.0)) throw std::domain_error("second_order_residuals: r must be positive");

    ResidualTable out;
    out.rho.reserve(n - 4);
    // fourth-order centred stencils; the solutions carry third derivatives of
    // order 1 + 2 U0^2, which an h^2 stencil cannot push below 1e-6 at h = 1e-3
    const double inv12h = 1.0 / (12.0 * h);
    const double inv12h2 = 1.0 / (12.0 * h * h);
    auto d1 = [&](std::span<const double> f, std::size_t i) {
        return (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) * inv12h;
    };
    auto d2 = [&](std::span<const double> f, std::size_t i) {
        return (-f[i + 2] + 16.0 * f[i + 1] - 30.0 * f[i] + 16.0 * f[i - 1] - f[i - 2]) *
               inv12h2;
    };
    for (std::size_t i = 2; i + 2 < n; ++i) {
        const double td = d1(tau, i);
        const double tdd = d2(tau, i);
        const double rd = d1(r, i);
        const double rdd = d2(r, i);
        const double wd = d1(w, i);
        const double wdd = d2(w, i);

        const double ri = r[i];
        const double p = 1.0 - w[i] * w[i];
        const double p2r2 = sqr(p / ri);

        out.rho.push_back(rho0 + static_cast<double>(i) * h);
        out.yang_mills.push_back(wdd + (td - rd / ri) * wd + w[i] * p);
        out.einstein_tau.push_back(tdd + td * td + rd * td / ri - 2.0 * wd * wd / (ri * ri) - p2r2);
        out.einstein_r.push_back(rdd / ri + rd * td / ri - 1.0 + p2r2);
        out.constraint.push_back(1.0 + 2.0 * wd * wd / (ri * ri) - p2r2 -
                                 (rd / ri) * (rd / ri + 2.0 * td) -
                                 sqr(pi0 / (ri * std::exp(tau[i]))));
    }
    return out;
}

double energy_rate(const OrbitState& s) {
    const double pr = (1.0 - s.w * s.w) / s.r;
    return -4.0 * (s.kappa - s.N) * s.U * s.U + 2.0 * s.N * pr * pr;
}

double autonomous_energy_rate(const OrbitState& s) {
    const double wdot = s.r * s.U;
    return -4.0 * (s.kappa - 2.0 * s.N) * wdot * wdot;
}

}  // namespace heymw
