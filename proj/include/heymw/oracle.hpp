#pragma once

#include "heymw/model.hpp"

// Closed-form reference solutions: the Ellis-Bronnikov family (w constant at
// +-1), the abelian family (w constant at 0, r0 >= 1) and the cylindrical
// fixed point r == 1. These are integrator-independent and exact.
namespace heymw {

enum class OracleFamily { EllisBronnikov, Abelian, CylindricalFixedPoint };

struct OracleKind {
    OracleFamily family;
    double r0;
    double w_sign;  // +1 or -1, Ellis-Bronnikov only

    static OracleKind ellis_bronnikov(double r0, double w_sign = 1.0);
    static OracleKind abelian(double r0);  // requires r0 >= 1 (E0 >= 0)
    static OracleKind cylindrical_fixed_point();
    // The constant-w trivial solutions: w0 in {-1, 0, +1} with U0 = 0.
    static OracleKind constant_w(double w0, double r0);

    InitialData data() const;
};

/// Exact state of the closed-form solution at rho.
OrbitState oracle_state(const OracleKind& kind, double rho);

struct MassCharges {
    double m_infty;
    double alpha;  // lim r zeta
    double beta;   // lim r (1 - N^2) = 2 m_infty
};

/// Analytic asymptotic charges of the flat families. Throws
/// std::domain_error for kinds that are not asymptotically flat
/// (the cylindrical fixed point, abelian with r0 = 1).
MassCharges oracle_mass_charges(const OracleKind& kind);

}  // namespace heymw
