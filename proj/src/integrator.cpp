#include "heymw/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace heymw {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// embedded 4th-order error weights (b - bhat)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense-output weights
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

inline StateVec deriv(double rho, const StateVec& y) {
    return rhs(OrbitState::from_vec(rho, y));
}

inline bool vec_finite(const StateVec& y) {
    for (double v : y)
        if (!std::isfinite(v)) return false;
    return true;
}

double error_norm(const StateVec& err, const StateVec& y0, const StateVec& y1, double atol,
                  double rtol) {
    double s = 0.0;
    for (int i = 0; i < 6; ++i) {
        const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double q = err[i] / sc;
        s += q * q;
    }
    return std::sqrt(s / 6.0);
}

// Hairer-style initial step selection.
double initial_step(double rho0, const StateVec& y0, const StateVec& f0, double atol, double rtol,
                    double span) {
    double d0 = 0.0, d1n = 0.0;
    for (int i = 0; i < 6; ++i) {
        const double sc = atol + rtol * std::abs(y0[i]);
        d0 = std::max(d0, std::abs(y0[i]) / sc);
        d1n = std::max(d1n, std::abs(f0[i]) / sc);
    }
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h0 = std::min(h0, span);

    StateVec y1;
    for (int i = 0; i < 6; ++i) y1[i] = y0[i] + h0 * f0[i];
    StateVec f1;
    bool ok = true;
    try {
        f1 = deriv(rho0 + h0, y1);
    } catch (const std::domain_error&) {
        ok = false;
    }
    double h1 = h0;
    if (ok && vec_finite(f1)) {
        double d2 = 0.0;
        for (int i = 0; i < 6; ++i) {
            const double sc = atol + rtol * std::abs(y0[i]);
            d2 = std::max(d2, std::abs(f1[i] - f0[i]) / sc);
        }
        d2 /= h0;
        const double dm = std::max(d1n, d2);
        h1 = (dm <= 1e-15) ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    }
    return std::min({100.0 * h0, h1, span});
}

struct EventFn {
    EventKind kind;
    double (*g)(const OrbitState&);
};

double g_w(const OrbitState& s) { return s.w; }
double g_n(const OrbitState& s) { return s.N; }
double g_wunit(const OrbitState& s) { return s.w * s.w - 1.0; }
double g_nz(const OrbitState& s) { return s.N + s.zeta; }

constexpr EventFn kEventFns[] = {
    {EventKind::WZero, g_w},
    {EventKind::NZero, g_n},
    {EventKind::WUnitCross, g_wunit},
    {EventKind::NPlusZetaZero, g_nz},
};

inline int sgn(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

// 5-point Gauss-Legendre abscissae/weights on [0, 1]
constexpr double kGx[5] = {0.046910077030668004, 0.23076534494715845, 0.5,
                           0.76923465505284155, 0.953089922969332};
constexpr double kGw[5] = {0.11846344252809454, 0.23931433524968324, 0.28444444444444444,
                           0.23931433524968324, 0.11846344252809454};

}  // namespace

void IntegrationControls::validate() const {
    if (!(rtol > 0.0) || !(atol > 0.0))
        throw std::invalid_argument("controls: tolerances must be positive");
    if (!(rho_max > 0.0)) throw std::invalid_argument("controls: rho_max must be positive");
    if (!(r_floor > 0.0)) throw std::invalid_argument("controls: r_floor must be positive");
    if (!(n_floor < 0.0)) throw std::invalid_argument("controls: n_floor must be negative");
    if (!(h_min > 0.0)) throw std::invalid_argument("controls: h_min must be positive");
    if (!(exit_band > 0.0 && exit_band <= 0.5))
        throw std::invalid_argument("controls: exit_band must lie in (0, 0.5]");
}

StateVec DenseStep::eval_theta(double t) const {
    const double t1 = 1.0 - t;
    StateVec y;
    for (int i = 0; i < 6; ++i)
        y[i] = c[0][i] + t * (c[1][i] + t1 * (c[2][i] + t * (c[3][i] + t1 * c[4][i])));
    return y;
}

StateVec DenseStep::eval(double rho) const { return eval_theta((rho - rho0) / h); }

const DenseStep& Trajectory::step_at(double rho) const {
    // binary search for the step containing rho
    std::size_t lo = 0, hi = steps_.size();
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (steps_[mid].rho0 <= rho)
            lo = mid;
        else
            hi = mid;
    }
    return steps_[lo];
}

OrbitState Trajectory::sample(double rho) const {
    if (!(rho >= rho_begin() && rho <= rho_end()))
        throw std::out_of_range("Trajectory::sample: rho outside the integrated span");
    if (steps_.empty() || rho == rho_begin()) return nodes_.front();
    if (rho == rho_end()) return nodes_.back();
    return OrbitState::from_vec(rho, step_at(rho).eval(rho));
}

double Trajectory::integral_to(double rho,
                               const std::function<double(const OrbitState&)>& f) const {
    if (!(rho >= rho_begin() && rho <= rho_end()))
        throw std::out_of_range("Trajectory::integral_to: rho outside the integrated span");
    double acc = 0.0;
    for (const DenseStep& st : steps_) {
        const double hi = std::min(st.rho0 + st.h, rho);
        if (hi <= st.rho0) break;
        const double len = hi - st.rho0;
        for (int q = 0; q < 5; ++q) {
            const double x = st.rho0 + kGx[q] * len;
            acc += kGw[q] * len * f(OrbitState::from_vec(x, st.eval(x)));
        }
        if (hi < st.rho0 + st.h) break;
    }
    return acc;
}

namespace {

class Stepper {
  public:
    Stepper(const OrbitState& s0, const IntegrationControls& c) : ctl_(c) {
        y_ = s0.vec();
        rho_ = s0.rho;
        f_ = deriv(rho_, y_);
        h_ = initial_step(rho_, y_, f_, c.atol, c.rtol, c.rho_max - rho_);
    }

    // one accepted step; returns the dense record
    DenseStep advance() {
        const double rho_end = ctl_.rho_max;
        bool rejected = false;
        for (;;) {
            double h = std::min(h_, rho_end - rho_);
            if (h < ctl_.h_min) h = ctl_.h_min;
            StateVec k1 = f_, k2, k3, k4, k5, k6, k7, y1;
            auto stage = [&](double cfrac, const StateVec& incr) {
                StateVec ys;
                for (int i = 0; i < 6; ++i) ys[i] = y_[i] + h * incr[i];
                return deriv(rho_ + cfrac * h, ys);
            };
            try {
                {
                    StateVec t;
                    for (int i = 0; i < 6; ++i) t[i] = a21 * k1[i];
                    k2 = stage(0.2, t);
                    for (int i = 0; i < 6; ++i) t[i] = a31 * k1[i] + a32 * k2[i];
                    k3 = stage(0.3, t);
                    for (int i = 0; i < 6; ++i) t[i] = a41 * k1[i] + a42 * k2[i] + a43 * k3[i];
                    k4 = stage(0.8, t);
                    for (int i = 0; i < 6; ++i)
                        t[i] = a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i];
                    k5 = stage(8.0 / 9.0, t);
                    for (int i = 0; i < 6; ++i)
                        t[i] = a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i];
                    k6 = stage(1.0, t);
                    for (int i = 0; i < 6; ++i)
                        y1[i] = y_[i] +
                                h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
                    k7 = deriv(rho_ + h, y1);
                }
            } catch (const std::domain_error& ex) {
                // r crossed zero inside a trial stage: shrink and retry
                if (h <= ctl_.h_min * (1.0 + 1e-9))
                    throw integration_error(std::string("stage failure at minimum step: ") + ex.what(),
                                            OrbitState::from_vec(rho_, y_));
                h_ = 0.25 * h;
                rejected = true;
                continue;
            }

            StateVec err;
            for (int i = 0; i < 6; ++i)
                err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                              e7 * k7[i]);
            if (!vec_finite(y1) || !vec_finite(err))
                throw integration_error("non-finite state during stepping",
                                        OrbitState::from_vec(rho_, y_));

            const double en = error_norm(err, y_, y1, ctl_.atol, ctl_.rtol);
            const bool at_floor = h <= ctl_.h_min * (1.0 + 1e-9);
            if (en <= 1.0 || at_floor) {
                DenseStep ds;
                ds.rho0 = rho_;
                ds.h = h;
                for (int i = 0; i < 6; ++i) {
                    const double dy = y1[i] - y_[i];
                    ds.c[0][i] = y_[i];
                    ds.c[1][i] = dy;
                    ds.c[2][i] = h * k1[i] - dy;
                    ds.c[3][i] = dy - h * k7[i] - ds.c[2][i];
                    ds.c[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                      d6 * k6[i] + d7 * k7[i]);
                }
                rho_ += h;
                y_ = y1;
                f_ = k7;  // FSAL
                double fac = 0.9 * std::pow(std::max(en, 1e-30), -0.2);
                fac = std::min(rejected ? 1.0 : 5.0, std::max(0.2, fac));
                h_ = h * fac;
                underflowed_ = at_floor && en > 1.0;
                return ds;
            }
            rejected = true;
            h_ = h * std::max(0.2, 0.9 * std::pow(en, -0.2));
        }
    }

    double rho() const { return rho_; }
    const StateVec& y() const { return y_; }
    bool underflowed() const { return underflowed_; }

  private:
    IntegrationControls ctl_;
    StateVec y_, f_;
    double rho_, h_;
    bool underflowed_ = false;
};

}  // namespace

Trajectory integrate(const OrbitState& state0, const IntegrationControls& controls) {
    controls.validate();
    if (!state0.finite()) throw std::domain_error("integrate: non-finite initial state");
    if (!(state0.r > 0.0)) throw std::domain_error("integrate: r must be positive");

    Trajectory traj;
    traj.nodes_.push_back(state0);

    // per-kind sign tracking for the event scan
    int last_sign[4];
    double last_rho[4];
    for (int k = 0; k < 4; ++k) {
        const double g0 = kEventFns[k].g(state0);
        last_sign[k] = sgn(g0);
        last_rho[k] = state0.rho;
        // a zero at the very first node is an event tied to that node, except
        // the initial w0 = 0 of odd data which is excluded from forward counts
        if (last_sign[k] == 0 && kEventFns[k].kind != EventKind::WZero)
            traj.events_.push_back({state0.rho, kEventFns[k].kind, state0});
    }

    auto scan_events = [&](const DenseStep& ds) {
        constexpr int kSub = 4;
        const std::size_t before = traj.events_.size();
        for (int k = 0; k < 4; ++k) {
            const auto g = kEventFns[k].g;
            for (int j = 1; j <= kSub; ++j) {
                const double rb = (j == kSub) ? ds.rho0 + ds.h
                                              : ds.rho0 + ds.h * (static_cast<double>(j) / kSub);
                const OrbitState sb = OrbitState::from_vec(rb, ds.eval(rb));
                const int sb_sign = sgn(g(sb));
                if (sb_sign == 0) {
                    if (last_sign[k] != 0) traj.events_.push_back({rb, kEventFns[k].kind, sb});
                    last_sign[k] = 0;
                    last_rho[k] = rb;
                    continue;
                }
                if (last_sign[k] != 0 && sb_sign != last_sign[k]) {
                    // bisect the dense output for the crossing
                    double a = last_rho[k], b = rb;
                    const int sa = last_sign[k];
                    while (b - a > 1e-12 * (1.0 + std::abs(b))) {
                        const double m = 0.5 * (a + b);
                        const int sm = sgn(g(OrbitState::from_vec(m, ds.eval(std::max(m, ds.rho0)))));
                        if (sm == sa)
                            a = m;
                        else
                            b = m;
                    }
                    const double re = 0.5 * (a + b);
                    traj.events_.push_back(
                        {re, kEventFns[k].kind, OrbitState::from_vec(re, ds.eval(re))});
                }
                last_sign[k] = sb_sign;
                last_rho[k] = rb;
            }
        }
        // new events all lie inside this step, after everything recorded so far
        std::sort(traj.events_.begin() + static_cast<std::ptrdiff_t>(before), traj.events_.end(),
                  [](const Event& a, const Event& b) {
                      return a.rho != b.rho ? a.rho < b.rho : a.kind < b.kind;
                  });
    };

    // immediate latches on the initial state
    auto latched = [&](const OrbitState& s, Termination& t) {
        if (s.r < controls.r_floor) {
            t = Termination::Collapsed;
            return true;
        }
        if (s.N < controls.n_floor) {
            t = Termination::BlowUp;
            return true;
        }
        if (std::abs(s.w) >= 1.0 + controls.exit_band && s.w * s.U > 0.0) {
            t = Termination::EscapedLatch;
            return true;
        }
        return false;
    };

    Termination term = Termination::ReachedRhoMax;
    if (latched(state0, term)) {
        traj.termination_ = term;
        return traj;
    }

    Stepper stepper(state0, controls);
    while (traj.nodes_.back().rho < controls.rho_max) {
        DenseStep ds = stepper.advance();
        traj.steps_.push_back(ds);
        const OrbitState node = OrbitState::from_vec(stepper.rho(), stepper.y());
        traj.nodes_.push_back(node);
        scan_events(traj.steps_.back());
        if (latched(node, term)) {
            traj.termination_ = term;
            return traj;
        }
        if (stepper.underflowed()) {
            traj.termination_ = Termination::BlowUp;  // step underflow
            return traj;
        }
    }
    traj.termination_ = Termination::ReachedRhoMax;
    return traj;
}

const char* to_string(Termination t) {
    switch (t) {
        case Termination::ReachedRhoMax: return "reached-rho-max";
        case Termination::Collapsed: return "collapsed";
        case Termination::BlowUp: return "blow-up";
        case Termination::EscapedLatch: return "escaped-latch";
    }
    return "?";
}

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::WZero: return "w-zero";
        case EventKind::NZero: return "N-zero";
        case EventKind::WUnitCross: return "|w|-crosses-1";
        case EventKind::NPlusZetaZero: return "(N+zeta)-crosses-0";
    }
    return "?";
}

}  // namespace heymw
