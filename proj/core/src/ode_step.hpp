#ifndef WAVEBOX_ODE_STEP_HPP
#define WAVEBOX_ODE_STEP_HPP

// Internal fixed-step integrators over flat coefficient vectors.
// The rhs callable has signature f(t, y, dy) and must fill dy (same size).

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "wavebox/errors.hpp"

namespace wavebox::detail {

struct OdeWorkspace {
    std::vector<double> k1, k2, k3, k4, tmp;
    void ensure(std::size_t n) {
        if (k1.size() != n) {
            k1.assign(n, 0.0);
            k2.assign(n, 0.0);
            k3.assign(n, 0.0);
            k4.assign(n, 0.0);
            tmp.assign(n, 0.0);
        }
    }
};

template <typename F>
void rk4_step(F&& f, double t, double dt, std::vector<double>& y, OdeWorkspace& ws) {
    const std::size_t n = y.size();
    ws.ensure(n);
    f(t, y, ws.k1);
    for (std::size_t i = 0; i < n; ++i) ws.tmp[i] = y[i] + 0.5 * dt * ws.k1[i];
    f(t + 0.5 * dt, ws.tmp, ws.k2);
    for (std::size_t i = 0; i < n; ++i) ws.tmp[i] = y[i] + 0.5 * dt * ws.k2[i];
    f(t + 0.5 * dt, ws.tmp, ws.k3);
    for (std::size_t i = 0; i < n; ++i) ws.tmp[i] = y[i] + dt * ws.k3[i];
    f(t + dt, ws.tmp, ws.k4);
    for (std::size_t i = 0; i < n; ++i)
        y[i] += dt / 6.0 * (ws.k1[i] + 2.0 * ws.k2[i] + 2.0 * ws.k3[i] + ws.k4[i]);
}

// Stage equation s = f(t + dt/2, y + dt/2 s) solved by fixed-point iteration.
template <typename F>
void implicit_midpoint_step(F&& f, double t, double dt, std::vector<double>& y, OdeWorkspace& ws,
                            double tol = 1e-12, int max_iters = 50) {
    const std::size_t n = y.size();
    ws.ensure(n);
    std::vector<double>& s = ws.k1;
    std::vector<double>& s_next = ws.k2;
    f(t, y, s);
    bool converged = false;
    for (int it = 0; it < max_iters; ++it) {
        for (std::size_t i = 0; i < n; ++i) ws.tmp[i] = y[i] + 0.5 * dt * s[i];
        f(t + 0.5 * dt, ws.tmp, s_next);
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) delta = std::max(delta, std::abs(s_next[i] - s[i]));
        s.swap(s_next);
        if (delta <= tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NoConvergence("implicit midpoint stage iteration exhausted at t = " +
                            std::to_string(t));
    for (std::size_t i = 0; i < n; ++i) y[i] += dt * s[i];
}

}  // namespace wavebox::detail

#endif
