#ifndef WAVEBOX_FUNCTIONALS_HPP
#define WAVEBOX_FUNCTIONALS_HPP

// Scalar functionals along trajectories and the identity audits built on
// them: the energy E and its equality dE/dt + int sigma(u) u_t^2 = 0, the
// perturbed quadruple (E_a, G_a, N_a, Phi_a) and their identity, space-time
// norms, the nonlinear test functions M_eps / m_eps, Holder moduli of the
// velocity in H^-1, and the Lyapunov functional.
//
// Estimates of the form "<= C (...)" with an unknowable constant are audited
// as boundedness-of-ratio sweeps: the ratio must stay within a declared
// factor of its value at the smallest scale.

#include <map>
#include <string>
#include <vector>

#include "wavebox/galerkin.hpp"

namespace wavebox {

struct AuditSample {
    double t = 0.0;
    double measured = 0.0;
    double bound = 0.0;  // bound or target the measurement is compared against
};

struct AuditReport {
    std::string name;
    std::vector<AuditSample> samples;
    double max_residual = 0.0;
    double tolerance = 0.0;
    std::map<std::string, double> metadata;

    bool pass() const { return max_residual <= tolerance; }
    const char* verdict() const { return pass() ? "pass" : "fail"; }
};

// E(u) = 1/2 |u_t|^2 + 1/2 |grad u|^2 + int F(u) - int phi u.
double energy_E(const ModelSpec& model, const PhaseState& state);

// The Lyapunov functional of the gradient system; coincides with energy_E.
double lyapunov(const ModelSpec& model, const PhaseState& state);

// residual(t) = |E(t) - E(0) + D(t)| over snapshots.
AuditReport energy_equality_audit(const Trajectory& traj, double tolerance = 1e-6);

struct PerturbedFunctionals {
    double E_alpha = 0.0;
    double G_alpha = 0.0;
    double N_alpha = 0.0;
    double Phi_alpha = 0.0;
};

// E_a = E + a <u, u_t>
// G_a = int (sigma(u) u_t^2 - (3a/2) u_t^2 + a sigma(u) u_t u)
// N_a = (a/2) |grad u|^2 - a^2 <u, u_t>
// Phi_a = a int (f(u) u - F(u))
PerturbedFunctionals perturbed_functionals(const ModelSpec& model, const PhaseState& state,
                                           double alpha);

// Cumulative residual of d/dt E_a + a E_a + G_a + N_a + Phi_a = 0, with the
// derivative term differenced exactly and the rest trapezoid-integrated over
// snapshot intervals (use stride 1).
AuditReport perturbed_identity_audit(const Trajectory& traj, double alpha,
                                     double tolerance = 1e-5);

// ( int_0^T |u(t)|_{3k+6}^{k+2} dt )^{1/(k+2)} by trapezoidal time quadrature.
double spacetime_norm(const Trajectory& traj, double k);
double spacetime_norm(const Trajectory& traj, double k, double t_max);

// For each horizon T: ratio(T) = spacetime_norm^{k+2} / (R^4 T + R^5) with
// R = sup_{t<=T}(|u|_6 + |u_t|) + D(T) + 1 measured from the same run.
// Pass iff every ratio stays within bound_factor of the smallest-horizon one.
AuditReport spacetime_bound_audit(const ModelSpec& model, const PhaseState& initial, double k,
                                  const std::vector<double>& horizons, double dt = 1e-3,
                                  int stride = 10, double bound_factor = 10.0,
                                  Integrator method = Integrator::rk4);

// M_eps(s) = |s|^k s / (1 + eps |s|^k); m_eps(s) = int_0^{|s|} tau^{k/2} /
// (1 + eps tau^k)^{1/2} dtau (adaptive Simpson; closed form at eps = 0).
double test_function_M(double eps, double k, double s);
double test_function_m(double eps, double k, double s);

// sup_t |u_t(t+lag) - u_t(t)|_{H^-1} / (lag + sqrt(lag)) and
// sup_t |u(t+lag) - u(t)| / lag, swept over lags.
AuditReport holder_modulus_audit(const Trajectory& traj, const std::vector<double>& lags,
                                 double bound_factor = 10.0);

// max(0, L(t_{k+1}) - L(t_k)) vs tol_scale * (1 + |E(0)|).
AuditReport lyapunov_monotone_audit(const Trajectory& traj, double tol_scale = 1e-8);

}  // namespace wavebox

#endif
