#include "heymw/classifier.hpp"

#include <cmath>
#include <numbers>

namespace heymw {

namespace {

constexpr double kPi = std::numbers::pi;

inline double angle_of(const OrbitState& s) { return std::atan2(s.r * s.U, s.w); }

// number of down-crossed zero levels of w (theta = pi/2 - j pi) at or above theta
inline long level_index(double theta) {
    return static_cast<long>(std::floor((0.5 * kPi - theta) / kPi));
}

// continuous polar angle at the end of the trajectory, unwrapped with
// adaptive subdivision so no sample-to-sample jump exceeds pi/2
double final_polar_angle(const Trajectory& traj) {
    double theta = initial_polar_angle(traj.initial());
    double prev_angle = angle_of(traj.initial());

    auto advance = [&](const OrbitState& s) {
        const double a = angle_of(s);
        theta += std::remainder(a - prev_angle, 2.0 * kPi);
        prev_angle = a;
    };

    for (std::size_t i = 1; i < traj.nodes().size(); ++i) {
        const OrbitState& a = traj.nodes()[i - 1];
        const OrbitState& b = traj.nodes()[i];
        // depth-first subdivision of [a.rho, b.rho]
        struct Seg { double lo, hi; };
        std::vector<Seg> stack{{a.rho, b.rho}};
        double cursor = a.rho;
        while (!stack.empty()) {
            Seg s = stack.back();
            stack.pop_back();
            if (s.lo < cursor) s.lo = cursor;
            if (s.hi <= s.lo) continue;
            const OrbitState end = traj.sample(s.hi);
            const double jump = std::abs(std::remainder(angle_of(end) - prev_angle, 2.0 * kPi));
            if (jump > 0.5 * kPi && s.hi - s.lo > 1e-13 * (1.0 + std::abs(s.hi))) {
                const double mid = 0.5 * (s.lo + s.hi);
                stack.push_back({mid, s.hi});
                stack.push_back({s.lo, mid});
                continue;
            }
            advance(end);
            cursor = s.hi;
        }
    }
    return theta;
}

bool is_identically_zero_w(const Trajectory& traj) {
    const OrbitState& s0 = traj.initial();
    return s0.w == 0.0 && s0.U == 0.0;
}

bool left_strip_outward(const Trajectory& traj) {
    for (const Event& e : traj.events())
        if (e.kind == EventKind::WUnitCross && e.state.w * e.state.U > 0.0) return true;
    const OrbitState& t = traj.terminal();
    return std::abs(t.w) > 1.0 && t.w * t.U > 0.0;
}

ClassDiagnostics make_diagnostics(const Trajectory& traj, const InitialData& data) {
    ClassDiagnostics d;
    d.rho_end = traj.rho_end();
    d.terminal = traj.terminal();
    d.termination = traj.termination();
    const ZeroCounts zc = count_w_zeros(traj);
    d.zero_events = zc.events;
    d.zero_winding = zc.winding;
    d.F_end = energies(traj.terminal()).F;
    const double p = 1.0 - traj.terminal().w * traj.terminal().w;
    d.strip_end = p * p;
    for (const Event& e : traj.events())
        if (e.kind == EventKind::NPlusZetaZero) d.entered_n_plus_zeta_negative = true;

    d.w_monotone = true;
    int sign = 0;
    for (const OrbitState& s : traj.nodes()) {
        if (s.U == 0.0) continue;
        const int u = s.U > 0.0 ? 1 : -1;
        if (sign == 0)
            sign = u;
        else if (u != sign) {
            d.w_monotone = false;
            break;
        }
    }
    d.asymptotically_flat_oscillatory = (data.w0 == 0.0 && data.U0 == 0.0 && data.r0 > 1.0);
    return d;
}

}  // namespace

double initial_polar_angle(const OrbitState& s) {
    double theta = angle_of(s);
    if (theta > 0.0) theta -= 2.0 * kPi;  // normalise into (-2 pi, 0]
    return theta;
}

ZeroCounts count_w_zeros(const Trajectory& traj) {
    if (is_identically_zero_w(traj)) return {0, 0};
    int events = 0;
    for (const Event& e : traj.events())
        if (e.kind == EventKind::WZero && e.rho > traj.rho_begin()) ++events;
    const double theta0 = initial_polar_angle(traj.initial());
    const double theta1 = final_polar_angle(traj);
    const long winding = level_index(theta1) - level_index(theta0);
    return {events, static_cast<int>(winding)};
}

OrbitClass classify(const InitialData& data, const IntegrationControls& controls,
                    const ClassifyPolicy& policy) {
    const OrbitState state0 = initial_state(data);

    IntegrationControls ctl = controls;
    for (;;) {
        Trajectory traj;
        try {
            traj = integrate(state0, ctl);
        } catch (const integration_error& ex) {
            OrbitClass oc;
            oc.kind = OrbitClassKind::Unresolved;
            oc.diag.note = std::string("integration failure: ") + ex.what();
            oc.diag.terminal = ex.last_good;
            oc.diag.rho_end = ex.last_good.rho;
            return oc;
        }

        OrbitClass oc;
        oc.diag = make_diagnostics(traj, data);

        switch (traj.termination()) {
            case Termination::EscapedLatch:
                oc.kind = OrbitClassKind::Escaping;
                oc.zeros = oc.diag.zero_events;
                return oc;
            case Termination::Collapsed:
            case Termination::BlowUp:
                if (left_strip_outward(traj)) {
                    oc.kind = OrbitClassKind::Escaping;
                    oc.zeros = oc.diag.zero_events;
                } else {
                    oc.kind = OrbitClassKind::Crashing;
                }
                return oc;
            case Termination::ReachedRhoMax: {
                const OrbitState& t = traj.terminal();
                const double ru = t.r * t.U;
                if (oc.diag.strip_end <= policy.eps_cls && std::abs(ru) <= policy.eps_cls) {
                    oc.kind = OrbitClassKind::Regular;
                    oc.zeros = oc.diag.zero_events;
                    return oc;
                }
                if (t.w * t.w + ru * ru <= policy.eps_cls) {
                    oc.kind = OrbitClassKind::Oscillatory;
                    oc.diag.note = oc.diag.asymptotically_flat_oscillatory
                                       ? "asymptotically flat (abelian w == 0)"
                                       : "asymptotically cylindrical";
                    return oc;
                }
                const double next = ctl.rho_max * policy.rho_growth;
                if (next <= policy.rho_cap * (1.0 + 1e-12)) {
                    ctl.rho_max = next;
                    continue;
                }
                oc.kind = OrbitClassKind::Unresolved;
                oc.diag.note = "horizon cap reached with undecided terminal discriminants";
                return oc;
            }
        }
    }
}

const char* to_string(OrbitClassKind k) {
    switch (k) {
        case OrbitClassKind::Escaping: return "escaping";
        case OrbitClassKind::Crashing: return "crashing";
        case OrbitClassKind::Oscillatory: return "oscillatory";
        case OrbitClassKind::Regular: return "regular";
        case OrbitClassKind::Unresolved: return "unresolved";
    }
    return "?";
}

}  // namespace heymw
