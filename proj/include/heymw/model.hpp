#pragma once

#include <array>
#include <span>
#include <vector>

// Static spherically symmetric SU(2) Einstein-Yang-Mills system coupled to a
// phantom scalar, as a first-order system in (r, N, w, U, kappa, zeta) of the
// radial coordinate rho.
namespace heymw {

// Order of the dependent variables in flat arrays.
using StateVec = std::array<double, 6>;

// The six dependent variables at one value of rho.
//   r     areal radius, > 0
//   N     rdot / r
//   w     Yang-Mills potential
//   U     wdot / r
//   kappa taudot + N
//   zeta  phantom term pi0 / (r e^tau), >= 0 on admissible orbits
struct OrbitState {
    double rho = 0.0;
    double r = 1.0;
    double N = 0.0;
    double w = 0.0;
    double U = 0.0;
    double kappa = 0.0;
    double zeta = 0.0;

    StateVec vec() const { return {r, N, w, U, kappa, zeta}; }
    static OrbitState from_vec(double rho, const StateVec& y) {
        return {rho, y[0], y[1], y[2], y[3], y[4], y[5]};
    }
    // max-norm over the six dependent variables
    double norm() const;
    bool finite() const;
};

// Shooting parameters. The initial energy E0 is always derived from
// (r0, w0, U0), never stored, so admissibility has a single source.
struct InitialData {
    double r0 = 1.0;
    double w0 = 0.0;
    double U0 = 0.0;

    // E0 = 1 + 2 U0^2 - (1 - w0^2)^2 / r0^2
    double energy() const;
    bool admissible() const;
};

struct EnergyPair {
    double E;  // 1 + 2U^2 - (1-w^2)^2/r^2
    double F;  // 2 wdot^2 - (1-w^2)^2 = r^2 (E - 1)
};

/// Right-hand side of the first-order system. Throws std::domain_error on
/// non-finite input or r <= 0.
StateVec rhs(const OrbitState& s);

/// zeta^2 - (1 + 2U^2 - (1-w^2)^2/r^2 - 2 kappa N + N^2); zero on exact
/// solutions of the constrained system.
double constraint_residual(const OrbitState& s);

/// Energies from their defining expressions (not the constraint-reduced ones).
EnergyPair energies(const OrbitState& s);

/// State at rho = 0: (r0, 0, w0, U0, 0, sqrt(E0)). Throws std::domain_error
/// for inadmissible data. E0 within a few ulps below zero is clamped to 0 so
/// that data constructed on the E0 = 0 boundary stay admissible.
OrbitState initial_state(const InitialData& data);

// Pointwise residuals of the second-order field equations, evaluated on the
// interior of a uniform sample grid with centred second-order differences.
struct ResidualTable {
    std::vector<double> rho;
    std::vector<double> yang_mills;   // w'' + (tau' - r'/r) w' + w(1-w^2)
    std::vector<double> einstein_tau; // tau'' + tau'^2 + r'tau'/r - 2w'^2/r^2 - (1-w^2)^2/r^2
    std::vector<double> einstein_r;   // r''/r + r'tau'/r - 1 + (1-w^2)^2/r^2
    std::vector<double> constraint;   // 1 + 2w'^2/r^2 - (1-w^2)^2/r^2 - (r'/r)(r'/r + 2tau') - pi0^2/(r e^tau)^2

    double max_abs() const;
};

/// tau, r, w sampled on the uniform grid rho0 + i*h, i = 0..n-1, n >= 5.
/// pi0 is the phantom charge entering the constraint equation.
ResidualTable second_order_residuals(double rho0, double h,
                                     std::span<const double> tau,
                                     std::span<const double> r,
                                     std::span<const double> w,
                                     double pi0);

// Energy derivatives along solutions, used as trajectory monitors:
//   dE/drho = -4 (kappa - N) U^2 + 2 N (1-w^2)^2 / r^2
//   dF/drho = -4 (kappa - 2N) wdot^2
double energy_rate(const OrbitState& s);
double autonomous_energy_rate(const OrbitState& s);

}  // namespace heymw
