#include "heymw/wormhole.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace heymw {

namespace {

constexpr double kTrustEps = 1e-4;  // same discriminant scale as the classifier

double sqr(double x) { return x * x; }

double zeta_of(const OrbitState& s) { return s.zeta; }

double mass_rate(const OrbitState& s) {
    const double wdot = s.r * s.U;
    const double p = 1.0 - s.w * s.w;
    const double rz = s.r * s.zeta;
    return (s.N / s.r) * (2.0 * wdot * wdot + p * p - rz * rz);
}

// last rho at which the orbit still tracks an asymptotically flat end
double trusted_cut(const Trajectory& traj, const InitialData& data) {
    const OrbitState& t = traj.terminal();
    if (traj.termination() == Termination::ReachedRhoMax) {
        const double strip = sqr(1.0 - t.w * t.w);
        if (strip <= kTrustEps && std::abs(t.r * t.U) <= kTrustEps) return traj.rho_end();
        if (data.w0 == 0.0 && data.U0 == 0.0 && data.r0 > 1.0) return traj.rho_end();
    }
    // scan backwards for the last state still on the flat track; the
    // autonomous-energy guard rejects the finite-precision departure, which
    // transits |w| = 1 at F of order one while the track keeps F near zero
    for (auto it = traj.nodes().rbegin(); it != traj.nodes().rend(); ++it) {
        const OrbitState& s = *it;
        if (s.rho <= 0.0) break;
        if (sqr(1.0 - s.w * s.w) <= kTrustEps && s.N + s.zeta >= 0.0 && s.N >= 0.25 &&
            energies(s).F <= 1e-3)
            return s.rho;
    }
    std::ostringstream os;
    os << "orbit does not track an asymptotically flat end (termination "
       << to_string(traj.termination()) << " at rho=" << traj.rho_end() << ")";
    throw build_error(os.str());
}

int zeros_within(const Trajectory& traj, double cut) {
    int n = 0;
    const double edge = cut + 1e-12 * (1.0 + cut);
    for (const Event& e : traj.events())
        if (e.kind == EventKind::WZero && e.rho > 0.0 && e.rho <= edge) ++n;
    return n;
}

constexpr double kGx[5] = {0.046910077030668004, 0.23076534494715845, 0.5,
                           0.76923465505284155, 0.953089922969332};
constexpr double kGw[5] = {0.11846344252809454, 0.23931433524968324, 0.28444444444444444,
                           0.23931433524968324, 0.11846344252809454};

std::vector<double> prefix_integral(const Trajectory& traj,
                                    const std::function<double(const OrbitState&)>& f) {
    std::vector<double> prefix;
    prefix.reserve(traj.step_count() + 1);
    prefix.push_back(0.0);
    double acc = 0.0;
    for (const DenseStep& st : traj.dense_steps()) {
        for (int q = 0; q < 5; ++q) {
            const double x = st.rho0 + kGx[q] * st.h;
            acc += kGw[q] * st.h * f(OrbitState::from_vec(x, st.eval(x)));
        }
        prefix.push_back(acc);
    }
    return prefix;
}

double eval_cumulative(const Trajectory& traj, const std::vector<double>& prefix,
                       const std::function<double(const OrbitState&)>& f, double rho) {
    // locate the step containing rho
    const auto& nodes = traj.nodes();
    std::size_t lo = 0, hi = traj.step_count();
    while (hi - lo > 0) {
        const std::size_t mid = (lo + hi) / 2;
        if (nodes[mid + 1].rho < rho)
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo >= traj.step_count()) return prefix.back();
    const double a = nodes[lo].rho;
    // partial Gauss-Legendre piece over [a, rho]
    const double len = rho - a;
    double part = 0.0;
    if (len > 0.0) {
        const DenseStep& st = traj.dense_steps()[lo];
        for (int q = 0; q < 5; ++q) {
            const double x = a + kGx[q] * len;
            part += kGw[q] * len * f(OrbitState::from_vec(x, st.eval(x)));
        }
    }
    return prefix[lo] + part;
}

double aitken(double x0, double x1, double x2) {
    const double d1 = x1 - x0, d2 = x2 - x1;
    const double den = d2 - d1;
    if (den == 0.0 || std::abs(den) <= 1e-10 * (std::abs(d1) + std::abs(d2))) return x2;
    const double r = x2 - d2 * d2 / den;
    return std::isfinite(r) ? r : x2;
}

double round_w_limit(double w) {
    if (w > 0.5) return 1.0;
    if (w < -0.5) return -1.0;
    return 0.0;
}

}  // namespace

OrbitState WormholeSolution::backward_state(double s) const {
    const OrbitState b = bwd_->sample(s);
    switch (route_) {
        case BackRoute::EvenReflect:
        case BackRoute::Transformed:
            return {-s, b.r, -b.N, b.w, -b.U, -b.kappa, b.zeta};
        case BackRoute::OddReflect:
            return {-s, b.r, -b.N, -b.w, b.U, -b.kappa, b.zeta};
    }
    throw std::logic_error("backward_state: bad route");
}

OrbitState WormholeSolution::state(double rho) const {
    if (!(rho >= -cut_bwd_ - 1e-12 && rho <= cut_fwd_ + 1e-12))
        throw std::out_of_range("WormholeSolution::state: rho outside the trusted span");
    if (rho >= 0.0) return fwd_->sample(std::min(rho, fwd_->rho_end()));
    return backward_state(std::min(-rho, bwd_->rho_end()));
}

double WormholeSolution::tau(double rho) const {
    const OrbitState s = state(rho);
    return tau_offset_ - std::log(s.r * s.zeta);
}

double WormholeSolution::phi(double rho) const {
    if (rho >= 0.0) return opts_.phantom_factor * eval_cumulative(*fwd_, phi_prefix_fwd_, zeta_of, rho);
    return -opts_.phantom_factor * eval_cumulative(*bwd_, phi_prefix_bwd_, zeta_of, -rho);
}

double WormholeSolution::mass_integral(double rho) const {
    if (rho >= 0.0)
        return data_.r0 + eval_cumulative(*fwd_, mass_prefix_fwd_, mass_rate, rho);
    return data_.r0 + eval_cumulative(*bwd_, mass_prefix_bwd_, mass_rate, -rho);
}

WormholeSolution::Row WormholeSolution::row(double rho) const {
    const OrbitState s = state(rho);
    return {rho, s.r, s.N, s.w, s.U, s.kappa, s.zeta, tau(rho), phi(rho), mass_of(s)};
}

WormholeSolution build(const InitialData& data, const IntegrationControls& controls,
                       const BuildOptions& opts, const ClassifyPolicy& policy) {
    WormholeSolution sol;
    sol.data_ = data;
    sol.opts_ = opts;

    const OrbitState s0 = initial_state(data);
    sol.fwd_ = std::make_shared<Trajectory>(integrate(s0, controls));
    try {
        sol.cut_fwd_ = trusted_cut(*sol.fwd_, data);
    } catch (const build_error& ex) {
        const OrbitClass c = classify(data, controls, policy);
        std::ostringstream os;
        os << "forward half is not regular: classified " << to_string(c.kind) << "; " << ex.what();
        throw build_error(os.str());
    }

    const bool w_identically_zero = data.w0 == 0.0 && data.U0 == 0.0;
    if (opts.force_transformed_route || (data.w0 != 0.0 && data.U0 != 0.0)) {
        sol.route_ = WormholeSolution::BackRoute::Transformed;
        const InitialData back{data.r0, data.w0, -data.U0};
        sol.bwd_ = std::make_shared<Trajectory>(integrate(initial_state(back), controls));
        try {
            sol.cut_bwd_ = trusted_cut(*sol.bwd_, back);
        } catch (const build_error& ex) {
            const OrbitClass c = classify(back, controls, policy);
            std::ostringstream os;
            os << "backward half (datum r0=" << back.r0 << ", w0=" << back.w0
               << ", U0=" << back.U0 << ") is not regular: classified " << to_string(c.kind)
               << "; " << ex.what();
            throw build_error(os.str());
        }
    } else {
        // symmetric data: the backward half is the parity reflection of the
        // forward one (even solutions for U0 = 0, odd ones for w0 = 0)
        sol.route_ = data.U0 == 0.0 ? WormholeSolution::BackRoute::EvenReflect
                                    : WormholeSolution::BackRoute::OddReflect;
        sol.bwd_ = sol.fwd_;
        sol.cut_bwd_ = sol.cut_fwd_;
    }

    sol.fwd_zeros_ = zeros_within(*sol.fwd_, sol.cut_fwd_);
    sol.bwd_zeros_ = w_identically_zero
                         ? 0
                         : zeros_within(*sol.bwd_, sol.cut_bwd_) + (data.w0 == 0.0 ? 1 : 0);

    // extrema of r: rho = 0 plus every zero of N within the trusted span
    {
        auto classify_extremum = [&](double rho, const OrbitState& s, double ndot) {
            const double tol = opts.degeneracy_tol * (1.0 + s.norm());
            ThroatPoint::Kind k = ThroatPoint::Kind::Degenerate;
            if (ndot > tol)
                k = ThroatPoint::Kind::Throat;
            else if (ndot < -tol)
                k = ThroatPoint::Kind::Belly;
            sol.extrema_.push_back({rho, s.r, ndot, k});
        };
        classify_extremum(0.0, s0, rhs(s0)[1]);
        for (const Event& e : sol.fwd_->events())
            if (e.kind == EventKind::NZero && e.rho > 0.0 && e.rho <= sol.cut_fwd_)
                classify_extremum(e.rho, e.state, rhs(e.state)[1]);
        for (const Event& e : sol.bwd_->events())
            if (e.kind == EventKind::NZero && e.rho > 0.0 && e.rho <= sol.cut_bwd_)
                classify_extremum(-e.rho, sol.backward_state(e.rho), rhs(e.state)[1]);
        std::sort(sol.extrema_.begin(), sol.extrema_.end(),
                  [](const ThroatPoint& a, const ThroatPoint& b) { return a.rho < b.rho; });
    }

    // quadrature caches
    sol.phi_prefix_fwd_ = prefix_integral(*sol.fwd_, zeta_of);
    sol.mass_prefix_fwd_ = prefix_integral(*sol.fwd_, mass_rate);
    if (sol.bwd_ == sol.fwd_) {
        sol.phi_prefix_bwd_ = sol.phi_prefix_fwd_;
        sol.mass_prefix_bwd_ = sol.mass_prefix_fwd_;
    } else {
        sol.phi_prefix_bwd_ = prefix_integral(*sol.bwd_, zeta_of);
        sol.mass_prefix_bwd_ = prefix_integral(*sol.bwd_, mass_rate);
    }

    // per-end asymptotic charges by Aitken extrapolation. alpha = lim r zeta
    // is well conditioned and sampled near the cut; beta = lim r (1 - N^2)
    // cancels digits once r grows (1 - N^2 ~ beta / r), so its window is
    // capped where the product still carries ~1e-9 absolute precision.
    auto make_end = [&](const Trajectory& traj, double cut,
                        const std::vector<double>& mass_prefix) {
        EndRecord rec;
        const double span = cut - traj.rho_begin();
        const double da = std::min(2.5, 0.2 * span);
        if (da > 1e-3) {
            double rz[3];
            for (int i = 0; i < 3; ++i) {
                const OrbitState s = traj.sample(cut - da * (2 - i));
                rz[i] = s.r * s.zeta;
            }
            rec.alpha = aitken(rz[0], rz[1], rz[2]);
        } else {
            const OrbitState s = traj.sample(cut);
            rec.alpha = s.r * s.zeta;
        }

        const double cut_b = std::min(cut, 12.0);
        const double db = std::min(2.0, 0.2 * (cut_b - traj.rho_begin()));
        if (db > 1e-3) {
            double rn[3], mi[3];
            for (int i = 0; i < 3; ++i) {
                const double x = cut_b - db * (2 - i);
                const OrbitState s = traj.sample(x);
                rn[i] = s.r * (1.0 - s.N * s.N);
                mi[i] = data.r0 + eval_cumulative(traj, mass_prefix, mass_rate, x);
            }
            rec.beta = aitken(rn[0], rn[1], rn[2]);
            rec.beta_integral = aitken(mi[0], mi[1], mi[2]);
        } else {
            const OrbitState s = traj.sample(cut_b);
            rec.beta = s.r * (1.0 - s.N * s.N);
            rec.beta_integral = data.r0 + eval_cumulative(traj, mass_prefix, mass_rate, cut_b);
        }
        rec.m_infty = 0.5 * rec.beta;
        rec.w_infty = round_w_limit(traj.sample(cut).w);
        return rec;
    };
    sol.end_plus_ = make_end(*sol.fwd_, sol.cut_fwd_, sol.mass_prefix_fwd_);
    sol.end_minus_ = make_end(*sol.bwd_, sol.cut_bwd_, sol.mass_prefix_bwd_);
    if (sol.route_ == WormholeSolution::BackRoute::OddReflect)
        sol.end_minus_.w_infty = -sol.end_minus_.w_infty;

    metric_and_phantom(sol, opts.normalize_end, opts.phantom_factor);
    return sol;
}

void metric_and_phantom(WormholeSolution& sol, End normalize_end, double phantom_factor) {
    const double e0 = std::max(0.0, sol.data_.energy());
    if (e0 <= 0.0)
        throw std::domain_error(
            "metric_and_phantom: E0 = 0 is phantom-free, tau is not determined by zeta");
    sol.opts_.normalize_end = normalize_end;
    sol.opts_.phantom_factor = phantom_factor;
    const double alpha_end =
        (normalize_end == End::Plus ? sol.end_plus_ : sol.end_minus_).alpha;
    if (!(alpha_end > 0.0))
        throw asymptotics_error("metric_and_phantom: nonpositive limit of r zeta");
    sol.tau_offset_ = std::log(alpha_end);
    // pi0 = r0 e^{tau(0)} sqrt(E0); with this normalisation it equals alpha_end
    sol.pi0_ = sol.data_.r0 * std::exp(sol.tau(0.0)) * std::sqrt(e0);
    sol.end_plus_.tau_infty = sol.tau_offset_ - std::log(sol.end_plus_.alpha);
    sol.end_minus_.tau_infty = sol.tau_offset_ - std::log(sol.end_minus_.alpha);
}

std::pair<EndRecord, EndRecord> asymptotics(const WormholeSolution& sol) {
    for (End e : {End::Minus, End::Plus}) {
        const EndRecord& rec = sol.end_record(e);
        if (std::abs(rec.beta - rec.beta_integral) > sol.options().asym_tol) {
            std::ostringstream os;
            os << "asymptotics unconverged at the " << (e == End::Plus ? "plus" : "minus")
               << " end: beta=" << rec.beta << " vs integral route " << rec.beta_integral
               << " (|diff| > " << sol.options().asym_tol << "); try a larger rho_max";
            throw asymptotics_error(os.str());
        }
    }
    return {sol.end_record(End::Minus), sol.end_record(End::Plus)};
}

}  // namespace heymw
