#pragma once

#include "heymw/classifier.hpp"

#include <stdexcept>
#include <vector>

namespace heymw {

// Shooting along the even line (vary w0, U0 = 0) or the odd line
// (vary U0, w0 = 0). The general U0-line at fixed w0 backs the
// asymmetric-curve machinery.
enum class Axis { Even, Odd };

struct bracket_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One isolated regular value: the bisection bracket around the n-th
// boundary, with the endpoint classifications as evidence.
struct ShotResult {
    int n = 0;
    double value = 0.0;  // midpoint of the final bracket
    double lo = 0.0;
    double hi = 0.0;
    OrbitClass lo_class;
    OrbitClass hi_class;
    OrbitClass midpoint_class;
};

// A one-parameter family of initial data at fixed r0.
struct ParameterLine {
    double r0 = 1.0;
    bool vary_w0 = false;  // even axis varies w0; otherwise U0 varies
    double fixed_w0 = 0.0; // only for U0-lines

    static ParameterLine even_axis(double r0) { return {r0, true, 0.0}; }
    static ParameterLine odd_axis(double r0) { return {r0, false, 0.0}; }
    static ParameterLine u0_line(double r0, double w0) { return {r0, false, w0}; }

    InitialData data(double p) const {
        return vary_w0 ? InitialData{r0, p, 0.0} : InitialData{r0, fixed_w0, p};
    }
    // E0 >= 0 boundary of the parameter (the crash/oscillatory anchor)
    double p_min() const;
    // first level that exists on this line (1 on U0-lines with w0 < 0)
    int first_level() const { return (!vary_w0 && fixed_w0 < 0.0) ? 1 : 0; }
};

/// Parameter interval (p_min, p_max) enclosing the whole regular sequence.
/// The even upper anchor is the trivial w0 = 1 solution; odd/U0-line upper
/// anchors are found by doubling U0 until the orbit escapes with at most one
/// zero and monotone w. Throws bracket_error if doubling exceeds 2^60.
std::pair<double, double> bracket_axis(double r0, Axis axis,
                                       const IntegrationControls& controls,
                                       const ClassifyPolicy& policy = {});

/// The decreasing sequence of regular values for n = 0..n_max on the chosen
/// axis, each isolated to a bracket of width <= tol.
std::vector<ShotResult> find_sequence(double r0, Axis axis, int n_max, double tol,
                                      const IntegrationControls& controls,
                                      const ClassifyPolicy& policy = {});

/// Ladder of regular values along the general parameter line, for levels
/// first_level()..n_top. Used directly by the asymmetric-curve scan.
std::vector<ShotResult> find_levels(const ParameterLine& line, int n_top, double tol,
                                    const IntegrationControls& controls,
                                    const ClassifyPolicy& policy = {});

/// True when the class lies on or above the n-th regular boundary
/// (escaping or regular with at most n zeros; unresolved orbits side with
/// their zero count so far).
bool hi_side(const OrbitClass& c, int n);

}  // namespace heymw
