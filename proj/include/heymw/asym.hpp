#pragma once

#include "heymw/shooting.hpp"

namespace heymw {

// One point of the curve u0 = Utilde^(n)(w0): the n-th regular value of U0
// along the vertical line at w0, reindexed across w0 = 0 so the curve stays
// continuous (the raw level gains a zero when w0 turns negative).
struct CurveSample {
    double w0 = 0.0;
    int n = 0;
    double u0 = 0.0;
    ShotResult shot;
    bool ok = false;
    std::string error;
};

// Initial data whose forward orbit has n zeros and whose backward orbit has
// m zeros of w.
struct AsymPair {
    int n = 0;
    int m = 0;
    double w0 = 0.0;
    double u0 = 0.0;
};

struct AsymScan {
    std::vector<AsymPair> pairs;           // sorted by w0
    std::vector<std::string> diagnostics;  // skipped grid points / dropped candidates
};

/// Single curve value Utilde^(n)(w0); nested shooting along the U0 line.
double u0_curve_value(double r0, int n, double w0, double tol,
                      const IntegrationControls& controls, const ClassifyPolicy& policy = {});

/// Samples Utilde^(n) on the given w0 grid. Requires r0 < 1 and every
/// |w0| <= sqrt(1 - r0) (so the E0 = 0 crash anchor exists). Grid points are
/// evaluated concurrently; per-point failures are reported in the sample, the
/// scan continues.
std::vector<CurveSample> u0_curve(double r0, int n, std::span<const double> w0_grid, double tol,
                                  const IntegrationControls& controls,
                                  const ClassifyPolicy& policy = {}, unsigned threads = 0);

/// Uniform n-point grid on [-sqrt(1-r0), sqrt(1-r0)].
std::vector<double> default_w0_grid(double r0, int points = 65);

/// Locates sign changes of g(w0) = Utilde^(n)(w0) - Utilde^(m-1)(-w0) on the
/// grid and refines each to |dw0| <= tol by bisection (every evaluation is a
/// nested shoot). Requires 0 <= n < m with m - n >= 2; the symmetric cases
/// m - n < 2 are rejected. An empty result is not an error.
AsymScan find_asym_pairs(double r0, int n, int m, double tol,
                         const IntegrationControls& controls, const ClassifyPolicy& policy = {},
                         int grid_points = 65, double shoot_tol = 1e-12, unsigned threads = 0);

}  // namespace heymw
