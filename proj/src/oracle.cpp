#include "heymw/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace heymw {

OracleKind OracleKind::ellis_bronnikov(double r0, double w_sign) {
    if (!(r0 > 0.0)) throw std::domain_error("oracle: r0 must be positive");
    if (w_sign != 1.0 && w_sign != -1.0)
        throw std::domain_error("oracle: Ellis-Bronnikov w sign must be +-1");
    return {OracleFamily::EllisBronnikov, r0, w_sign};
}

OracleKind OracleKind::abelian(double r0) {
    // E0 = 1 - 1/r0^2 >= 0 forces r0 >= 1
    if (!(r0 >= 1.0)) throw std::domain_error("oracle: abelian family requires r0 >= 1");
    return {OracleFamily::Abelian, r0, 0.0};
}

OracleKind OracleKind::cylindrical_fixed_point() {
    return {OracleFamily::CylindricalFixedPoint, 1.0, 0.0};
}

OracleKind OracleKind::constant_w(double w0, double r0) {
    if (w0 == 0.0) return r0 == 1.0 ? cylindrical_fixed_point() : abelian(r0);
    if (w0 == 1.0 || w0 == -1.0) return ellis_bronnikov(r0, w0);
    throw std::domain_error("oracle: constant w requires w0 in {-1, 0, +1}");
}

InitialData OracleKind::data() const {
    switch (family) {
        case OracleFamily::EllisBronnikov: return {r0, w_sign, 0.0};
        default: return {r0, 0.0, 0.0};
    }
}

OrbitState oracle_state(const OracleKind& kind, double rho) {
    // common to every constant-w solution
    const double kappa = std::tanh(rho);
    const double sech = 1.0 / std::cosh(rho);

    switch (kind.family) {
        case OracleFamily::EllisBronnikov:
            // r = r0 cosh, N = tanh, w = +-1, E0 = 1
            return {rho, kind.r0 * std::cosh(rho), std::tanh(rho), kind.w_sign,
                    0.0, kappa, sech};
        case OracleFamily::CylindricalFixedPoint:
            // E0 = 0, zeta = 0
            return {rho, 1.0, 0.0, 0.0, 0.0, kappa, 0.0};
        case OracleFamily::Abelian: {
            const double r0 = kind.r0;
            // r0 = 1 collapses to the exact cylinder; the general formula
            // loses digits there (cos of an angle approaching pi/2)
            if (r0 == 1.0) return {rho, 1.0, 0.0, 0.0, 0.0, kappa, 0.0};
            const double psi = std::atan(std::sinh(rho)) / r0;
            const double r = r0 * std::cosh(rho) * std::cos(psi);
            if (!(r > 0.0))
                throw std::domain_error("oracle: abelian r <= 0 at requested rho");
            // hand-differentiated N; validated against finite differences in tests
            const double N = std::tanh(rho) - (sech / r0) * std::tan(psi);
            const double e0 = 1.0 - 1.0 / (r0 * r0);
            return {rho, r, N, 0.0, 0.0, kappa, std::sqrt(e0) * sech};
        }
    }
    throw std::logic_error("oracle_state: unknown family");
}

MassCharges oracle_mass_charges(const OracleKind& kind) {
    switch (kind.family) {
        case OracleFamily::EllisBronnikov:
            // r(1-N^2) = r0 sech -> 0;  r zeta = r0 cosh sech = r0
            return {0.0, kind.r0, 0.0};
        case OracleFamily::Abelian: {
            const double r0 = kind.r0;
            if (r0 == 1.0)
                throw std::domain_error("oracle_mass_charges: abelian r0 = 1 is cylindrical, not flat");
            // psi -> pi/2:  r zeta -> r0 sqrt(E0) cos(pi/(2 r0)),
            // r (1 - N) -> sin(pi/(2 r0)), 1 + N -> 2.
            const double half = 0.5 * std::numbers::pi / r0;
            const double alpha = r0 * std::sqrt(1.0 - 1.0 / (r0 * r0)) * std::cos(half);
            const double beta = 2.0 * std::sin(half);
            return {0.5 * beta, alpha, beta};
        }
        case OracleFamily::CylindricalFixedPoint:
            throw std::domain_error("oracle_mass_charges: cylindrical fixed point is not asymptotically flat");
    }
    throw std::logic_error("oracle_mass_charges: unknown family");
}

}  // namespace heymw
