#pragma once

#include "heymw/integrator.hpp"

#include <string>

namespace heymw {

// Orbit taxonomy: escaping / crashing singular orbits, oscillatory and
// regular global orbits, plus an explicit "could not decide" verdict for
// data too close to a class boundary.
enum class OrbitClassKind { Escaping, Crashing, Oscillatory, Regular, Unresolved };

struct ClassDiagnostics {
    double rho_end = 0.0;
    OrbitState terminal;
    Termination termination = Termination::ReachedRhoMax;
    int zero_events = 0;     // zeros of w for rho > 0, from the event log
    int zero_winding = 0;    // same count from the polar angle of (w, wdot)
    double F_end = 0.0;      // terminal autonomous energy
    double strip_end = 0.0;  // terminal (1 - w^2)^2
    bool w_monotone = false; // U kept its initial sign at every node
    bool entered_n_plus_zeta_negative = false;
    bool asymptotically_flat_oscillatory = false;  // w == 0 with r0 > 1
    std::string note;
};

struct OrbitClass {
    OrbitClassKind kind = OrbitClassKind::Unresolved;
    int zeros = 0;  // meaningful for Escaping / Regular
    ClassDiagnostics diag;

    bool is(OrbitClassKind k) const { return kind == k; }
};

struct ClassifyPolicy {
    double eps_cls = 1e-4;      // terminal discriminant tolerance
    double rho_growth = 2.0;    // horizon growth factor on an undecided run
    double rho_cap = 400.0;     // horizon cap before giving up
};

/// Integrates the datum forward and assigns its orbit class. Undecidable
/// horizons are retried with a grown rho_max up to the policy cap, then
/// reported Unresolved. Integration failures also yield Unresolved with the
/// reason in the note.
OrbitClass classify(const InitialData& data, const IntegrationControls& controls,
                    const ClassifyPolicy& policy = {});

struct ZeroCounts {
    int events;   // w-zero events with rho > 0
    int winding;  // polar-angle crossings of the zero set of w
};

/// Both zero counters for a trajectory. Both are 0 when w is identically 0.
ZeroCounts count_w_zeros(const Trajectory& traj);

/// Continuous polar angle of (w, wdot) at the trajectory start, normalised
/// into (-2 pi, 0].
double initial_polar_angle(const OrbitState& s);

const char* to_string(OrbitClassKind k);

}  // namespace heymw
