#pragma once

#include "heymw/classifier.hpp"

#include <memory>
#include <numbers>

namespace heymw {

enum class End { Minus, Plus };

struct build_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct asymptotics_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ThroatPoint {
    enum class Kind { Throat, Belly, Degenerate };
    double rho;
    double r;
    double Ndot;  // from the N equation at the zero of N
    Kind kind;
};

struct EndRecord {
    double alpha = 0.0;    // lim r zeta
    double beta = 0.0;     // lim r (1 - N^2), terminal-extrapolation route
    double beta_integral = 0.0;  // same limit through the running mass integral
    double m_infty = 0.0;  // beta / 2
    double tau_infty = 0.0;
    double w_infty = 0.0;  // rounded to {-1, 0, +1}
};

struct BuildOptions {
    End normalize_end = End::Plus;
    double phantom_factor = std::numbers::sqrt2;
    double asym_tol = 1e-6;       // agreement gate between the two beta routes
    double degeneracy_tol = 1e-8; // |Ndot| <= tol * (1 + |state|) flags a degenerate extremum
    // integrate the reflected datum even for symmetric data instead of
    // applying the parity map to the forward half
    bool force_transformed_route = false;
};

// Full two-ended solution: forward half plus the reflected backward half,
// with the metric coefficient tau, the phantom field phi and the
// Misner-Sharp mass reconstructed on top of the orbit variables.
class WormholeSolution {
  public:
    struct Row {
        double rho, r, N, w, U, kappa, zeta, tau, phi, m;
    };

    OrbitState state(double rho) const;  // any rho in [rho_minus, rho_plus]
    double tau(double rho) const;
    double phi(double rho) const;
    double mass(double rho) const { return mass_of(state(rho)); }
    Row row(double rho) const;

    // trusted span: where the finite-precision orbit still tracks the
    // asymptotically flat solution it approximates
    double rho_minus() const { return -cut_bwd_; }
    double rho_plus() const { return cut_fwd_; }

    int forward_zeros() const { return fwd_zeros_; }
    int backward_zeros() const { return bwd_zeros_; }

    const InitialData& data() const { return data_; }
    double pi0() const { return pi0_; }
    const BuildOptions& options() const { return opts_; }
    double phantom_factor() const { return opts_.phantom_factor; }
    End normalization_end() const { return opts_.normalize_end; }

    const std::vector<ThroatPoint>& throats_and_bellies() const { return extrema_; }
    const EndRecord& end_record(End e) const {
        return e == End::Plus ? end_plus_ : end_minus_;
    }

    /// running-integral route for the mass: r0 + integral of
    /// (rdot/r^2)[2 wdot^2 + (1-w^2)^2 - (r zeta)^2], equal to 2 m(rho)
    double mass_integral(double rho) const;

    static double mass_of(const OrbitState& s) { return 0.5 * s.r * (1.0 - s.N * s.N); }

    const Trajectory& forward_trajectory() const { return *fwd_; }

  private:
    friend WormholeSolution build(const InitialData&, const IntegrationControls&,
                                  const BuildOptions&, const ClassifyPolicy&);
    friend void metric_and_phantom(WormholeSolution&, End, double);

    enum class BackRoute { EvenReflect, OddReflect, Transformed };

    InitialData data_;
    BuildOptions opts_;
    std::shared_ptr<const Trajectory> fwd_, bwd_;  // bwd_ == fwd_ on parity routes
    BackRoute route_ = BackRoute::Transformed;
    double cut_fwd_ = 0.0, cut_bwd_ = 0.0;
    int fwd_zeros_ = 0, bwd_zeros_ = 0;
    double tau_offset_ = 0.0;  // tau = tau_offset - log(r zeta)
    double pi0_ = 0.0;
    std::vector<ThroatPoint> extrema_;
    EndRecord end_plus_, end_minus_;
    std::vector<double> phi_prefix_fwd_, phi_prefix_bwd_;    // at step boundaries
    std::vector<double> mass_prefix_fwd_, mass_prefix_bwd_;

    OrbitState backward_state(double s) const;  // state at rho = -s, s >= 0
};

/// Assembles the two-ended solution for a (near-)regular datum. The forward
/// orbit must either classify Regular, be the flat abelian w == 0 solution,
/// or track an asymptotically flat end before its finite-precision departure;
/// otherwise build_error is thrown (likewise for the backward half).
WormholeSolution build(const InitialData& data, const IntegrationControls& controls,
                       const BuildOptions& opts = {}, const ClassifyPolicy& policy = {});

/// Recomputes tau, pi0 and the phantom-field normalisation for a different
/// normalization end or phantom factor. Throws std::domain_error when
/// E0 = 0 (phantom-free data leave tau undetermined by zeta).
void metric_and_phantom(WormholeSolution& sol, End normalize_end,
                        double phantom_factor = std::numbers::sqrt2);

/// Validated per-end asymptotics. Throws asymptotics_error when the two beta
/// routes disagree beyond opts.asym_tol (suggests a larger rho_max).
std::pair<EndRecord, EndRecord> asymptotics(const WormholeSolution& sol);

}  // namespace heymw
