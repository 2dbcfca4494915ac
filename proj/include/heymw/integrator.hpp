#pragma once

#include "heymw/model.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace heymw {

struct IntegrationControls {
    double rtol = 1e-12;
    double atol = 1e-12;
    double rho_max = 50.0;
    double r_floor = 1e-8;    // collapse latch
    double n_floor = -1e6;    // blow-up latch on N
    double h_min = 1e-14;     // step underflow latch
    double exit_band = 0.05;  // escape latch: |w| >= 1 + exit_band with w*wdot > 0

    void validate() const;  // throws std::invalid_argument
};

enum class Termination { ReachedRhoMax, Collapsed, BlowUp, EscapedLatch };

enum class EventKind { WZero, NZero, WUnitCross, NPlusZetaZero };

struct Event {
    double rho;
    EventKind kind;
    OrbitState state;  // dense-output state at the event
};

struct integration_error : std::runtime_error {
    OrbitState last_good;
    explicit integration_error(const std::string& what, const OrbitState& s)
        : std::runtime_error(what), last_good(s) {}
};

// One accepted step with its dense-output coefficients,
// y(rho0 + t h) = c0 + t (c1 + (1-t)(c2 + t (c3 + (1-t) c4))).
struct DenseStep {
    double rho0;
    double h;
    std::array<StateVec, 5> c;

    StateVec eval(double rho) const;
    StateVec eval_theta(double t) const;
};

// Immutable record of one integration: nodes, per-step dense output,
// sign-change events and the reason the run stopped.
class Trajectory {
  public:
    const std::vector<OrbitState>& nodes() const { return nodes_; }
    const std::vector<Event>& events() const { return events_; }
    Termination termination() const { return termination_; }
    const OrbitState& initial() const { return nodes_.front(); }
    const OrbitState& terminal() const { return nodes_.back(); }
    double rho_begin() const { return nodes_.front().rho; }
    double rho_end() const { return nodes_.back().rho; }

    /// Dense-output interpolation; throws std::out_of_range outside the span.
    OrbitState sample(double rho) const;

    /// Integral of f along the dense output from rho_begin to rho, by
    /// per-step 5-point Gauss-Legendre quadrature.
    double integral_to(double rho, const std::function<double(const OrbitState&)>& f) const;

    std::size_t step_count() const { return steps_.size(); }
    const std::vector<DenseStep>& dense_steps() const { return steps_; }

  private:
    friend Trajectory integrate(const OrbitState&, const IntegrationControls&);
    std::vector<OrbitState> nodes_;
    std::vector<DenseStep> steps_;
    std::vector<Event> events_;
    Termination termination_ = Termination::ReachedRhoMax;

    const DenseStep& step_at(double rho) const;
};

/// Error-controlled Dormand-Prince 5(4) integration of the system from
/// state0 forward until rho_max, collapse, blow-up or the escape latch.
/// Throws integration_error if the state turns non-finite.
Trajectory integrate(const OrbitState& state0, const IntegrationControls& controls);

const char* to_string(Termination t);
const char* to_string(EventKind k);

}  // namespace heymw
