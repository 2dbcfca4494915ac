#include "heymw/asym.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace heymw {

namespace {

void check_curve_domain(double r0, double w0) {
    if (!(r0 > 0.0 && r0 < 1.0))
        throw std::domain_error("asym: curves require 0 < r0 < 1");
    const double lim = std::sqrt(1.0 - r0);
    if (!(std::abs(w0) <= lim * (1.0 + 1e-12)))
        throw std::domain_error("asym: |w0| must not exceed sqrt(1 - r0), the crash anchor needs r0 + w0^2 <= 1");
}

// run fn(i) for i in [0, count) on a few threads, deterministically by index
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
    unsigned n = threads == 0 ? std::thread::hardware_concurrency() : threads;
    if (n <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    n = std::min<unsigned>(n, static_cast<unsigned>(count));
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t)
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < count; i += n) fn(i);
        });
    for (auto& th : pool) th.join();
}

ShotResult utilde_shot(double r0, int n, double w0, double tol,
                       const IntegrationControls& controls, const ClassifyPolicy& policy) {
    check_curve_domain(r0, w0);
    // the ladder index: level n for w0 >= 0, level n+1 for w0 < 0
    const int level = w0 >= 0.0 ? n : n + 1;
    const ParameterLine line = ParameterLine::u0_line(r0, w0);
    auto ladder = find_levels(line, level, tol, controls, policy);
    return ladder.back();
}

}  // namespace

double u0_curve_value(double r0, int n, double w0, double tol,
                      const IntegrationControls& controls, const ClassifyPolicy& policy) {
    return utilde_shot(r0, n, w0, tol, controls, policy).value;
}

std::vector<double> default_w0_grid(double r0, int points) {
    if (points < 2) throw std::invalid_argument("default_w0_grid: need at least 2 points");
    const double lim = std::sqrt(1.0 - r0);
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        grid[static_cast<std::size_t>(i)] =
            -lim + 2.0 * lim * static_cast<double>(i) / static_cast<double>(points - 1);
    return grid;
}

std::vector<CurveSample> u0_curve(double r0, int n, std::span<const double> w0_grid, double tol,
                                  const IntegrationControls& controls,
                                  const ClassifyPolicy& policy, unsigned threads) {
    if (n < 0) throw std::invalid_argument("u0_curve: n must be >= 0");
    for (double w0 : w0_grid) check_curve_domain(r0, w0);

    std::vector<CurveSample> out(w0_grid.size());
    parallel_for(w0_grid.size(), threads, [&](std::size_t i) {
        CurveSample& cs = out[i];
        cs.w0 = w0_grid[i];
        cs.n = n;
        try {
            cs.shot = utilde_shot(r0, n, cs.w0, tol, controls, policy);
            cs.u0 = cs.shot.value;
            cs.ok = true;
        } catch (const std::exception& ex) {
            cs.ok = false;
            cs.error = ex.what();
        }
    });
    return out;
}

AsymScan find_asym_pairs(double r0, int n, int m, double tol,
                         const IntegrationControls& controls, const ClassifyPolicy& policy,
                         int grid_points, double shoot_tol, unsigned threads) {
    if (n < 0 || m <= n) throw std::invalid_argument("find_asym_pairs: need 0 <= n < m");
    if (m - n < 2)
        throw std::invalid_argument(
            "find_asym_pairs: m - n >= 2 required, m - n < 2 is the symmetric case");
    if (!(tol > 0.0) || !(shoot_tol > 0.0))
        throw std::invalid_argument("find_asym_pairs: tolerances must be positive");

    // matching condition U0^(n)(w0) = U0^(m)(-w0), in curve form
    // g(w0) = Utilde^(n)(w0) - Utilde^(m-1)(-w0)
    auto eval_g = [&](double w0) {
        return u0_curve_value(r0, n, w0, shoot_tol, controls, policy) -
               u0_curve_value(r0, m - 1, -w0, shoot_tol, controls, policy);
    };

    const std::vector<double> grid = default_w0_grid(r0, grid_points);
    std::vector<double> gval(grid.size());
    std::vector<char> gok(grid.size(), 0);
    std::vector<std::string> gerr(grid.size());
    parallel_for(grid.size(), threads, [&](std::size_t i) {
        try {
            gval[i] = eval_g(grid[i]);
            gok[i] = 1;
        } catch (const std::exception& ex) {
            gerr[i] = ex.what();
        }
    });

    AsymScan scan;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (!gok[i]) {
            std::ostringstream os;
            os << "grid point w0=" << grid[i] << " skipped: " << gerr[i];
            scan.diagnostics.push_back(os.str());
        }

    // walk consecutive valid samples for sign changes
    std::size_t prev = grid.size();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!gok[i]) continue;
        if (prev == grid.size()) {
            prev = i;
            continue;
        }
        const double left = grid[prev], right = grid[i];
        const double ga = gval[prev], gb = gval[i];
        prev = i;
        if (ga == 0.0) {
            scan.pairs.push_back(
                {n, m, left, u0_curve_value(r0, n, left, shoot_tol, controls, policy)});
            continue;
        }
        if (!(ga * gb < 0.0)) continue;
        try {
            // triple the local density first, then bisect
            double a = left, b = right, fa = ga;
            for (int k = 1; k <= 2; ++k) {
                const double x = left + (right - left) * static_cast<double>(k) / 3.0;
                const double fx = eval_g(x);
                if (fa * fx <= 0.0) {
                    b = x;
                    break;
                }
                a = x;
                fa = fx;
            }
            while (b - a > tol) {
                const double mid = 0.5 * (a + b);
                if (!(mid > a && mid < b)) break;
                const double fm = eval_g(mid);
                if (fm == 0.0) {
                    a = b = mid;
                    break;
                }
                if (fa * fm < 0.0) {
                    b = mid;
                } else {
                    a = mid;
                    fa = fm;
                }
            }
            const double w0 = 0.5 * (a + b);
            scan.pairs.push_back(
                {n, m, w0, u0_curve_value(r0, n, w0, shoot_tol, controls, policy)});
        } catch (const std::exception& ex) {
            std::ostringstream os;
            os << "candidate in (" << left << ", " << right << ") dropped: " << ex.what();
            scan.diagnostics.push_back(os.str());
        }
    }

    std::sort(scan.pairs.begin(), scan.pairs.end(),
              [](const AsymPair& x, const AsymPair& y) { return x.w0 < y.w0; });
    return scan;
}

}  // namespace heymw
