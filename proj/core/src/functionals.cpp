#include "wavebox/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wavebox/errors.hpp"

namespace wavebox {

namespace {

// Everything the audits need at one state, from a single pair of transforms.
struct StateQuantities {
    double energy = 0.0;        // E
    double dissipation = 0.0;   // int sigma(u) u_t^2
    double sigma_uv = 0.0;      // int sigma(u) u_t u
    double fu_u = 0.0;          // int f(u) u
    double F_int = 0.0;         // int F(u)
    double v_l2_sq = 0.0;       // |u_t|^2
    double u_h1_sq = 0.0;       // |grad u|^2
    double uv_dot = 0.0;        // <u, u_t>
};

StateQuantities state_quantities(const ModelSpec& model, const PhaseState& state) {
    const auto& plan = model.plan();
    const NodalField un = plan.to_nodal(state.u);
    const NodalField vn = plan.to_nodal(state.v);
    const auto& damping = model.damping();
    const auto& nonlin = model.nonlinearity();

    double diss = 0.0, sigma_uv = 0.0, fu_u = 0.0, F_int = 0.0;
    for (std::size_t i = 0; i < un.values.size(); ++i) {
        const double s = un.values[i];
        const double w = vn.values[i];
        const double sig = sigma_eval(damping, s);
        diss += sig * w * w;
        sigma_uv += sig * w * s;
        fu_u += f_eval(nonlin, s) * s;
        F_int += F_primitive(nonlin, s);
    }
    const double cell = model.domain().cell_volume();

    StateQuantities q;
    q.dissipation = diss * cell;
    q.sigma_uv = sigma_uv * cell;
    q.fu_u = fu_u * cell;
    q.F_int = F_int * cell;
    q.v_l2_sq = dot(state.v, state.v);
    q.u_h1_sq = h1_dot(state.u, state.u);
    q.uv_dot = dot(state.u, state.v);
    q.energy = 0.5 * q.v_l2_sq + 0.5 * q.u_h1_sq + q.F_int - dot(model.forcing(), state.u);
    return q;
}

void require_not_diverged(const Trajectory& traj, const char* who) {
    if (traj.diverged())
        throw std::invalid_argument(std::string(who) + ": trajectory diverged at t = " +
                                    std::to_string(*traj.blowup_time));
    if (traj.snapshots.empty()) throw std::invalid_argument(std::string(who) + ": empty trajectory");
}

}  // namespace

double energy_E(const ModelSpec& model, const PhaseState& state) {
    return state_quantities(model, state).energy;
}

double lyapunov(const ModelSpec& model, const PhaseState& state) {
    return energy_E(model, state);
}

AuditReport energy_equality_audit(const Trajectory& traj, double tolerance) {
    require_not_diverged(traj, "energy_equality_audit");
    const ModelSpec& model = *traj.model;

    AuditReport report;
    report.name = "energy_equality";
    report.tolerance = tolerance;
    report.metadata["dt"] = traj.dt;
    report.metadata["N"] = model.domain().modes_per_dim;

    const double E0 = energy_E(model, traj.snapshots.front());
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
        const double E = energy_E(model, traj.snapshots[k]);
        const double residual = std::abs(E - E0 + traj.dissipation_cum[k]);
        report.samples.push_back({traj.snapshots[k].t, residual, tolerance});
        report.max_residual = std::max(report.max_residual, residual);
    }
    return report;
}

PerturbedFunctionals perturbed_functionals(const ModelSpec& model, const PhaseState& state,
                                           double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw InvalidRange("perturbed_functionals: alpha must be in [0, 1)");
    const StateQuantities q = state_quantities(model, state);
    PerturbedFunctionals out;
    out.E_alpha = q.energy + alpha * q.uv_dot;
    out.G_alpha = q.dissipation - 1.5 * alpha * q.v_l2_sq + alpha * q.sigma_uv;
    out.N_alpha = 0.5 * alpha * q.u_h1_sq - alpha * alpha * q.uv_dot;
    out.Phi_alpha = alpha * (q.fu_u - q.F_int);
    return out;
}

AuditReport perturbed_identity_audit(const Trajectory& traj, double alpha, double tolerance) {
    require_not_diverged(traj, "perturbed_identity_audit");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw InvalidRange("perturbed_identity_audit: alpha must be in (0, 1)");
    const ModelSpec& model = *traj.model;

    AuditReport report;
    report.name = "perturbed_identity";
    report.tolerance = tolerance;
    report.metadata["dt"] = traj.dt;
    report.metadata["alpha"] = alpha;

    // I(t) = a E_a + G_a + N_a + Phi_a; residual(t) = E_a(t) - E_a(0) + int_0^t I.
    double E_alpha_0 = 0.0, prev_I = 0.0, integral = 0.0, prev_t = 0.0;
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
        const auto pf = perturbed_functionals(model, traj.snapshots[k], alpha);
        const double I = alpha * pf.E_alpha + pf.G_alpha + pf.N_alpha + pf.Phi_alpha;
        const double t = traj.snapshots[k].t;
        if (k == 0) {
            E_alpha_0 = pf.E_alpha;
        } else {
            integral += 0.5 * (t - prev_t) * (I + prev_I);
        }
        const double residual = std::abs(pf.E_alpha - E_alpha_0 + integral);
        report.samples.push_back({t, residual, tolerance});
        report.max_residual = std::max(report.max_residual, residual);
        prev_I = I;
        prev_t = t;
    }
    return report;
}

double spacetime_norm(const Trajectory& traj, double k, double t_max) {
    require_not_diverged(traj, "spacetime_norm");
    if (!(k >= 0.0 && k <= 2.0)) throw InvalidRange("spacetime_norm: k must be in [0, 2]");
    const double q = 3.0 * k + 6.0;
    const double power = k + 2.0;
    const auto& plan = traj.model->plan();

    double integral = 0.0, prev_t = 0.0, prev_g = 0.0;
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        const double t = traj.snapshots[i].t;
        if (t > t_max + 1e-12) break;
        const double g = std::pow(lebesgue_norm(plan, traj.snapshots[i].u, q), power);
        if (i > 0) integral += 0.5 * (t - prev_t) * (g + prev_g);
        prev_t = t;
        prev_g = g;
    }
    return std::pow(integral, 1.0 / power);
}

double spacetime_norm(const Trajectory& traj, double k) {
    return spacetime_norm(traj, k, traj.t_final());
}

AuditReport spacetime_bound_audit(const ModelSpec& model, const PhaseState& initial, double k,
                                  const std::vector<double>& horizons, double dt, int stride,
                                  double bound_factor, Integrator method) {
    if (horizons.empty()) throw std::invalid_argument("spacetime_bound_audit: no horizons");
    for (std::size_t i = 1; i < horizons.size(); ++i)
        if (!(horizons[i] > horizons[i - 1]))
            throw std::invalid_argument("spacetime_bound_audit: horizons must increase");

    const Trajectory traj = simulate(model, initial, dt, horizons.back(), stride, method);
    require_not_diverged(traj, "spacetime_bound_audit");
    const auto& plan = model.plan();

    AuditReport report;
    report.name = "spacetime_bound";
    report.tolerance = bound_factor;
    report.metadata["k"] = k;
    report.metadata["dt"] = dt;

    double ratio0 = 0.0;
    double sup_term = 0.0;
    std::size_t snap = 0;
    for (double T : horizons) {
        // R grows with the window; reuse the running sup up to each horizon.
        while (snap < traj.snapshots.size() && traj.snapshots[snap].t <= T + 1e-12) {
            const auto& s = traj.snapshots[snap];
            sup_term = std::max(sup_term,
                                lebesgue_norm(plan, s.u, 6.0) + norm(s.v, Norm::L2));
            ++snap;
        }
        const double D = traj.dissipation_cum[snap == 0 ? 0 : snap - 1];
        const double R = sup_term + D + 1.0;
        const double st = std::pow(spacetime_norm(traj, k, T), k + 2.0);
        const double ratio = st / (std::pow(R, 4.0) * T + std::pow(R, 5.0));
        if (T == horizons.front()) ratio0 = ratio;
        const double rel = ratio0 > 0.0 ? ratio / ratio0 : (ratio > 0.0 ? bound_factor + 1.0 : 0.0);
        report.samples.push_back({T, ratio, ratio0 * bound_factor});
        report.max_residual = std::max(report.max_residual, rel);
    }
    return report;
}

double test_function_M(double eps, double k, double s) {
    if (!(eps >= 0.0 && eps < 1.0)) throw InvalidRange("test_function_M: eps must be in [0, 1)");
    if (!(k >= 0.0 && k <= 2.0)) throw InvalidRange("test_function_M: k must be in [0, 2]");
    const double a = std::pow(std::abs(s), k);
    return a * s / (1.0 + eps * a);
}

namespace {

double simpson(double (*h)(double, double, double), double eps, double k, double a, double b) {
    const double c = 0.5 * (a + b);
    return (b - a) / 6.0 * (h(eps, k, a) + 4.0 * h(eps, k, c) + h(eps, k, b));
}

double m_integrand(double eps, double k, double tau) {
    return std::pow(tau, 0.5 * k) / std::sqrt(1.0 + eps * std::pow(tau, k));
}

double adaptive_simpson(double eps, double k, double a, double b, double whole, double tol,
                        int depth) {
    const double c = 0.5 * (a + b);
    const double left = simpson(m_integrand, eps, k, a, c);
    const double right = simpson(m_integrand, eps, k, c, b);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(eps, k, a, c, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(eps, k, c, b, right, 0.5 * tol, depth - 1);
}

}  // namespace

double test_function_m(double eps, double k, double s) {
    if (!(eps >= 0.0 && eps < 1.0)) throw InvalidRange("test_function_m: eps must be in [0, 1)");
    if (!(k >= 0.0 && k <= 2.0)) throw InvalidRange("test_function_m: k must be in [0, 2]");
    const double b = std::abs(s);
    if (b == 0.0) return 0.0;
    if (eps == 0.0) return 2.0 / (k + 2.0) * std::pow(b, 0.5 * (k + 2.0));
    return adaptive_simpson(eps, k, 0.0, b, simpson(m_integrand, eps, k, 0.0, b), 1e-12, 48);
}

AuditReport holder_modulus_audit(const Trajectory& traj, const std::vector<double>& lags,
                                 double bound_factor) {
    require_not_diverged(traj, "holder_modulus_audit");
    if (lags.empty()) throw std::invalid_argument("holder_modulus_audit: no lags");
    if (traj.snapshots.size() < 2)
        throw std::invalid_argument("holder_modulus_audit: need at least two snapshots");

    const double spacing = traj.snapshots[1].t - traj.snapshots[0].t;
    const double span = traj.t_final() - traj.snapshots.front().t;

    AuditReport report;
    report.name = "holder_modulus";
    report.tolerance = bound_factor;

    // Two ratio families, each judged against its own smallest-lag value.
    std::vector<double> ratio_u, ratio_v, actual_lag;
    for (double lag : lags) {
        if (!(lag > 0.0) || lag > span)
            throw std::invalid_argument("holder_modulus_audit: lag outside trajectory span");
        const auto steps = static_cast<std::size_t>(std::llround(lag / spacing));
        if (steps == 0) throw std::invalid_argument("holder_modulus_audit: lag below resolution");
        const double dlag = static_cast<double>(steps) * spacing;
        double ru = 0.0, rv = 0.0;
        for (std::size_t i = 0; i + steps < traj.snapshots.size(); ++i) {
            const auto& s0 = traj.snapshots[i];
            const auto& s1 = traj.snapshots[i + steps];
            ModalField du = s1.u, dv = s1.v;
            for (std::size_t j = 0; j < du.coeffs.size(); ++j) {
                du.coeffs[j] -= s0.u.coeffs[j];
                dv.coeffs[j] -= s0.v.coeffs[j];
            }
            ru = std::max(ru, norm(du, Norm::L2) / dlag);
            rv = std::max(rv, norm(dv, Norm::Hminus1) / (dlag + std::sqrt(dlag)));
        }
        ratio_u.push_back(ru);
        ratio_v.push_back(rv);
        actual_lag.push_back(dlag);
    }

    // Smallest lag = reference scale.
    std::size_t ref = 0;
    for (std::size_t i = 1; i < actual_lag.size(); ++i)
        if (actual_lag[i] < actual_lag[ref]) ref = i;
    const double base_u = ratio_u[ref], base_v = ratio_v[ref];
    for (std::size_t i = 0; i < actual_lag.size(); ++i) {
        report.samples.push_back({actual_lag[i], ratio_u[i], base_u * bound_factor});
        report.samples.push_back({actual_lag[i], ratio_v[i], base_v * bound_factor});
        const double rel_u = base_u > 0.0 ? ratio_u[i] / base_u : (ratio_u[i] > 0.0 ? bound_factor + 1.0 : 0.0);
        const double rel_v = base_v > 0.0 ? ratio_v[i] / base_v : (ratio_v[i] > 0.0 ? bound_factor + 1.0 : 0.0);
        report.max_residual = std::max({report.max_residual, rel_u, rel_v});
    }
    return report;
}

AuditReport lyapunov_monotone_audit(const Trajectory& traj, double tol_scale) {
    require_not_diverged(traj, "lyapunov_monotone_audit");
    const ModelSpec& model = *traj.model;

    AuditReport report;
    report.name = "lyapunov_monotone";
    double prev = lyapunov(model, traj.snapshots.front());
    report.tolerance = tol_scale * (1.0 + std::abs(prev));
    report.samples.push_back({traj.snapshots.front().t, 0.0, report.tolerance});
    for (std::size_t k = 1; k < traj.snapshots.size(); ++k) {
        const double cur = lyapunov(model, traj.snapshots[k]);
        const double increase = std::max(0.0, cur - prev);
        report.samples.push_back({traj.snapshots[k].t, increase, report.tolerance});
        report.max_residual = std::max(report.max_residual, increase);
        prev = cur;
    }
    return report;
}

}  // namespace wavebox
