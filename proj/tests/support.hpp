#pragma once

#include "heymw/model.hpp"

#include <cmath>
#include <random>
#include <vector>

// Test-side reference tools, kept independent of the library's integration
// path: a fixed-step classical RK4 walker and a deterministic sampler of
// admissible initial data.
namespace testkit {

using heymw::OrbitState;
using heymw::StateVec;

inline StateVec axpy(const StateVec& y, double a, const StateVec& d) {
    StateVec out;
    for (int i = 0; i < 6; ++i) out[i] = y[i] + a * d[i];
    return out;
}

// One classical RK4 step; h may be negative for backward runs.
inline OrbitState rk4_step(const OrbitState& s, double h) {
    const StateVec y = s.vec();
    const StateVec k1 = heymw::rhs(s);
    const StateVec k2 = heymw::rhs(OrbitState::from_vec(s.rho + 0.5 * h, axpy(y, 0.5 * h, k1)));
    const StateVec k3 = heymw::rhs(OrbitState::from_vec(s.rho + 0.5 * h, axpy(y, 0.5 * h, k2)));
    const StateVec k4 = heymw::rhs(OrbitState::from_vec(s.rho + h, axpy(y, h, k3)));
    StateVec out;
    for (int i = 0; i < 6; ++i)
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return OrbitState::from_vec(s.rho + h, out);
}

struct Rk4Result {
    OrbitState final_state;
    int w_zero_count = 0;     // sign changes of w after the start
    bool escaped = false;     // |w| > 1.05 with w * U > 0
    bool collapsed = false;   // r below floor or N below floor
};

// Walk the system with fixed-step RK4 until rho_end or a latch. This is the
// independent cross-check for classifications produced by the adaptive path.
inline Rk4Result rk4_walk(const OrbitState& s0, double rho_end, double h) {
    Rk4Result res;
    OrbitState s = s0;
    double prev_w = s.w;
    const double dir = rho_end >= s0.rho ? 1.0 : -1.0;
    const double step = dir * std::abs(h);
    while (dir * (rho_end - s.rho) > 1e-12) {
        double hh = step;
        if (dir * (rho_end - s.rho) < std::abs(step)) hh = rho_end - s.rho;
        s = rk4_step(s, hh);
        if (prev_w != 0.0 && s.w != 0.0 && (prev_w > 0) != (s.w > 0)) ++res.w_zero_count;
        if (s.w != 0.0) prev_w = s.w;
        if (std::abs(s.w) >= 1.05 && s.w * s.U > 0.0) {
            res.escaped = true;
            break;
        }
        if (s.r < 1e-8 || s.N < -1e6) {
            res.collapsed = true;
            break;
        }
    }
    res.final_state = s;
    return res;
}

// Deterministic admissible data generator (E0 >= 0, r0 > 0, |w0| <= 1).
class DataGen {
  public:
    explicit DataGen(std::uint64_t seed = 20240917u) : rng_(seed) {}

    heymw::InitialData next(double r0_lo = 0.25, double r0_hi = 3.0, double u_max = 2.0) {
        std::uniform_real_distribution<double> ur0(r0_lo, r0_hi);
        std::uniform_real_distribution<double> uw(-1.0, 1.0);
        std::uniform_real_distribution<double> uu(-u_max, u_max);
        for (;;) {
            heymw::InitialData d{ur0(rng_), uw(rng_), uu(rng_)};
            if (d.admissible() && d.energy() > 1e-6) return d;
        }
    }

    std::vector<heymw::InitialData> batch(std::size_t n) {
        std::vector<heymw::InitialData> v;
        v.reserve(n);
        for (std::size_t i = 0; i < n; ++i) v.push_back(next());
        return v;
    }

    std::mt19937_64& rng() { return rng_; }

  private:
    std::mt19937_64 rng_;
};

}  // namespace testkit
