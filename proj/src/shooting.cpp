#include "heymw/shooting.hpp"

#include <cmath>
#include <sstream>

namespace heymw {

namespace {

std::string describe(const OrbitClass& c) {
    std::ostringstream os;
    os << to_string(c.kind);
    if (c.kind == OrbitClassKind::Escaping || c.kind == OrbitClassKind::Regular)
        os << "(" << c.zeros << ")";
    if (!c.diag.note.empty()) os << " [" << c.diag.note << "]";
    return os.str();
}

}  // namespace

double ParameterLine::p_min() const {
    if (vary_w0) return r0 < 1.0 ? std::sqrt(1.0 - r0) : 0.0;
    const double q = (1.0 - fixed_w0 * fixed_w0);
    const double e = q * q / (r0 * r0) - 1.0;
    return e > 0.0 ? std::sqrt(0.5 * e) : 0.0;
}

bool hi_side(const OrbitClass& c, int n) {
    switch (c.kind) {
        case OrbitClassKind::Escaping:
        case OrbitClassKind::Regular:
            return c.zeros <= n;
        case OrbitClassKind::Crashing:
        case OrbitClassKind::Oscillatory:
            return false;
        case OrbitClassKind::Unresolved:
            // near the boundary orbits track the regular solution long before
            // deviating; the zero count is the earliest stable signal
            return c.diag.zero_events <= n;
    }
    return false;
}

std::pair<double, double> bracket_axis(double r0, Axis axis, const IntegrationControls& controls,
                                       const ClassifyPolicy& policy) {
    if (!(r0 > 0.0)) throw std::domain_error("bracket_axis: r0 must be positive");
    const ParameterLine line =
        axis == Axis::Even ? ParameterLine::even_axis(r0) : ParameterLine::odd_axis(r0);
    if (axis == Axis::Even) return {line.p_min(), 1.0};

    // double U0 from 1 until the orbit escapes with <= 1 zero and monotone w
    for (double p = 1.0; p <= 1.152921504606847e18 /* 2^60 */; p *= 2.0) {
        const InitialData d = line.data(p);
        if (!d.admissible()) continue;
        const OrbitClass c = classify(d, controls, policy);
        if (c.kind == OrbitClassKind::Escaping && c.zeros <= 1 && c.diag.w_monotone)
            return {line.p_min(), p};
    }
    throw bracket_error("bracket_axis: doubling exceeded 2^60 without a monotone escape; "
                        "integrator is likely misconfigured");
}

namespace {

ShotResult bisect_level(const ParameterLine& line, int n, double lo, OrbitClass lo_class,
                        double hi, OrbitClass hi_class, double tol,
                        const IntegrationControls& controls, const ClassifyPolicy& policy) {
    if (hi_side(lo_class, n) || !hi_side(hi_class, n)) {
        std::ostringstream os;
        os << "bracket invalid for n=" << n << ": lo(" << lo << ") is " << describe(lo_class)
           << ", hi(" << hi << ") is " << describe(hi_class);
        throw bracket_error(os.str());
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;  // parameter resolution floor
        const OrbitClass c = classify(line.data(mid), controls, policy);
        if (hi_side(c, n)) {
            hi = mid;
            hi_class = c;
        } else {
            lo = mid;
            lo_class = c;
        }
    }
    ShotResult res;
    res.n = n;
    res.lo = lo;
    res.hi = hi;
    res.value = 0.5 * (lo + hi);
    res.lo_class = std::move(lo_class);
    res.hi_class = std::move(hi_class);
    res.midpoint_class = classify(line.data(res.value), controls, policy);
    return res;
}

}  // namespace

std::vector<ShotResult> find_levels(const ParameterLine& line, int n_top, double tol,
                                    const IntegrationControls& controls,
                                    const ClassifyPolicy& policy) {
    if (!(tol >= 1e-12))
        throw std::invalid_argument("find_levels: tol must be >= 1e-12 (double-precision floor)");
    const int n_lo = line.first_level();
    if (n_top < n_lo) throw std::invalid_argument("find_levels: level below the first on this line");

    double p_lo = line.p_min();
    double p_hi;
    OrbitClass lo_class = classify(line.data(p_lo), controls, policy);
    OrbitClass hi_class;
    if (line.vary_w0) {
        p_hi = 1.0;
        hi_class = classify(line.data(p_hi), controls, policy);
    } else {
        p_hi = 0.0;
        for (double p = 1.0;; p *= 2.0) {
            if (p > 1.152921504606847e18)
                throw bracket_error("find_levels: doubling exceeded 2^60 without a monotone escape");
            const InitialData d = line.data(p);
            if (!d.admissible()) continue;
            hi_class = classify(d, controls, policy);
            if (hi_class.kind == OrbitClassKind::Escaping && hi_class.zeros <= 1 &&
                hi_class.diag.w_monotone) {
                p_hi = p;
                break;
            }
        }
    }

    std::vector<ShotResult> out;
    out.reserve(static_cast<std::size_t>(n_top - n_lo + 1));
    for (int n = n_lo; n <= n_top; ++n) {
        ShotResult res =
            bisect_level(line, n, p_lo, lo_class, p_hi, hi_class, tol, controls, policy);
        // the lo endpoint sits in the escaping band just below the found
        // value, which is the upper anchor for the next level
        p_hi = res.lo;
        hi_class = res.lo_class;
        out.push_back(std::move(res));
    }
    return out;
}

std::vector<ShotResult> find_sequence(double r0, Axis axis, int n_max, double tol,
                                      const IntegrationControls& controls,
                                      const ClassifyPolicy& policy) {
    if (n_max < 0) throw std::invalid_argument("find_sequence: n_max must be >= 0");
    const ParameterLine line =
        axis == Axis::Even ? ParameterLine::even_axis(r0) : ParameterLine::odd_axis(r0);
    return find_levels(line, n_max, tol, controls, policy);
}

}  // namespace heymw
