#include "wavebox/galerkin.hpp"

#include <cmath>
#include <stdexcept>

#include "ode_step.hpp"
#include "wavebox/errors.hpp"

namespace wavebox {

ModelSpec::ModelSpec(const Domain& domain, const DampingSpec& damping,
                     const NonlinearitySpec& nonlinearity, ModalField forcing)
    : domain_(domain),
      damping_(damping),
      nonlinearity_(nonlinearity),
      forcing_(std::move(forcing)),
      plan_(std::make_shared<TransformPlan>(domain)) {
    damping_.validate();
    nonlinearity_.validate();
    if (!(forcing_.domain == domain_))
        throw ValidationError("forcing", "defined on a different domain");
    if (!forcing_.all_finite()) throw ValidationError("forcing", "coefficients must be finite");
    if (nonlinearity_.lambda_margin >= domain_.lambda1())
        throw ValidationError("nonlinearity.lambda_margin",
                              "must be strictly below lambda_1 of the domain");
    const auto report = wavebox::check_assumptions(damping_, nonlinearity_, 10.0, 256);
    if (!report.passes("S1"))
        throw ValidationError("damping", "S1 fails on the default range");
    if (!report.passes("F3"))
        throw ValidationError("nonlinearity", "F3 fails on the default range (declared K too small)");
    region_ = exponent_region(damping_.m, damping_.r, nonlinearity_.p);
}

PhaseState::PhaseState(double t_, ModalField u_, ModalField v_)
    : t(t_), u(std::move(u_)), v(std::move(v_)) {
    if (!(u.domain == v.domain)) throw std::invalid_argument("PhaseState: u, v domain mismatch");
}

namespace {

// Flat layout used by the steppers: [u coeffs | v coeffs | D].
void eval_rhs_flat(const ModelSpec& model, double t, const std::vector<double>& y,
                   std::vector<double>& dy) {
    const auto& plan = model.plan();
    const auto& lam = plan.eigenvalues();
    const std::size_t M = lam.size();

    ModalField u(model.domain()), v(model.domain());
    std::copy(y.begin(), y.begin() + M, u.coeffs.begin());
    std::copy(y.begin() + M, y.begin() + 2 * M, v.coeffs.begin());

    const NodalField un = plan.to_nodal(u);
    const NodalField vn = plan.to_nodal(v);

    NodalField nl(model.domain());
    double dissipation = 0.0;
    const auto& damping = model.damping();
    const auto& nonlin = model.nonlinearity();
    for (std::size_t k = 0; k < un.values.size(); ++k) {
        const double s = un.values[k];
        const double w = vn.values[k];
        const double sig = sigma_eval(damping, s);
        nl.values[k] = sig * w + f_eval(nonlin, s);
        dissipation += sig * w * w;
    }
    dissipation *= model.domain().cell_volume();

    const ModalField proj = plan.to_modal(nl, model.domain().modes_per_dim);
    const auto& phi = model.forcing().coeffs;

    bool finite = std::isfinite(dissipation);
    for (std::size_t i = 0; i < M; ++i) {
        dy[i] = y[M + i];
        const double dvi = phi[i] - lam[i] * y[i] - proj.coeffs[i];
        dy[M + i] = dvi;
        finite = finite && std::isfinite(dvi);
    }
    dy[2 * M] = dissipation;
    if (!finite) throw NonFiniteState(t);
}

void pack(const PhaseState& state, double D, std::vector<double>& y) {
    const std::size_t M = state.u.coeffs.size();
    y.resize(2 * M + 1);
    std::copy(state.u.coeffs.begin(), state.u.coeffs.end(), y.begin());
    std::copy(state.v.coeffs.begin(), state.v.coeffs.end(), y.begin() + M);
    y[2 * M] = D;
}

PhaseState unpack(const ModelSpec& model, double t, const std::vector<double>& y) {
    const std::size_t M = static_cast<std::size_t>(model.domain().modes_total());
    PhaseState s(t, ModalField(model.domain()), ModalField(model.domain()));
    std::copy(y.begin(), y.begin() + M, s.u.coeffs.begin());
    std::copy(y.begin() + M, y.begin() + 2 * M, s.v.coeffs.begin());
    return s;
}

bool flat_finite(const std::vector<double>& y) {
    for (double x : y)
        if (!std::isfinite(x)) return false;
    return true;
}

void advance(const ModelSpec& model, Integrator method, double t, double dt,
             std::vector<double>& y, detail::OdeWorkspace& ws) {
    auto f = [&model](double tt, const std::vector<double>& yy, std::vector<double>& dyy) {
        eval_rhs_flat(model, tt, yy, dyy);
    };
    if (method == Integrator::rk4)
        detail::rk4_step(f, t, dt, y, ws);
    else
        detail::implicit_midpoint_step(f, t, dt, y, ws);
}

Trajectory run_simulation(const ModelSpec& model, const PhaseState& initial, double dt,
                          double t_end, int stride, Integrator method, bool strong,
                          std::vector<MicroStep>* record = nullptr) {
    if (!(dt > 0.0)) throw std::invalid_argument("simulate: dt must be > 0");
    if (!(t_end > 0.0)) throw std::invalid_argument("simulate: t_end must be > 0");
    if (stride < 1) throw std::invalid_argument("simulate: stride must be >= 1");
    if (!(initial.u.domain == model.domain()) || !(initial.v.domain == model.domain()))
        throw std::invalid_argument("simulate: initial data on a different domain");
    if (!initial.u.all_finite() || !initial.v.all_finite())
        throw NonFiniteState(initial.t);

    Trajectory traj;
    traj.model = std::make_shared<ModelSpec>(model);
    traj.dt = dt;
    traj.integrator = method;

    const long long steps = std::max(1LL, std::llround(t_end / dt));
    std::vector<double> y;
    pack(initial, 0.0, y);
    detail::OdeWorkspace ws;

    auto take_snapshot = [&](double t, double D) {
        traj.snapshots.push_back(unpack(model, t, y));
        traj.dissipation_cum.push_back(D);
        if (strong) {
            traj.grad_ut_norm.push_back(norm(traj.snapshots.back().v, Norm::H1));
            traj.lap_u_norm.push_back(norm(traj.snapshots.back().u, Norm::H2));
        }
    };

    const std::size_t M = static_cast<std::size_t>(model.domain().modes_total());
    std::vector<double> dy(y.size());
    auto record_micro = [&](double t) {
        if (!record) return;
        eval_rhs_flat(model, t, y, dy);
        MicroStep ms;
        ms.t = t;
        ms.u.assign(y.begin(), y.begin() + M);
        ms.v.assign(y.begin() + M, y.begin() + 2 * M);
        ms.a.assign(dy.begin() + M, dy.begin() + 2 * M);
        record->push_back(std::move(ms));
    };

    take_snapshot(initial.t, 0.0);
    record_micro(initial.t);
    std::vector<double> last_finite = y;
    double last_finite_t = initial.t;

    for (long long k = 0; k < steps; ++k) {
        const double t = initial.t + static_cast<double>(k) * dt;
        bool ok = true;
        try {
            advance(model, method, t, dt, y, ws);
        } catch (const NonFiniteState&) {
            ok = false;
        }
        if (ok && !flat_finite(y)) ok = false;
        const double t_next = initial.t + static_cast<double>(k + 1) * dt;
        if (!ok) {
            traj.blowup_time = t_next;
            if (last_finite_t > traj.snapshots.back().t) {
                y = last_finite;
                take_snapshot(last_finite_t, y.back());
            }
            return traj;
        }
        last_finite = y;
        last_finite_t = t_next;
        record_micro(t_next);
        if ((k + 1) % stride == 0 || k + 1 == steps) take_snapshot(t_next, y.back());
    }
    return traj;
}

}  // namespace

RhsEval rhs(const ModelSpec& model, const PhaseState& state) {
    std::vector<double> y, dy;
    pack(state, 0.0, y);
    dy.resize(y.size());
    eval_rhs_flat(model, state.t, y, dy);
    const std::size_t M = state.u.coeffs.size();
    RhsEval out{ModalField(model.domain()), ModalField(model.domain()), dy[2 * M]};
    std::copy(dy.begin(), dy.begin() + M, out.du.coeffs.begin());
    std::copy(dy.begin() + M, dy.begin() + 2 * M, out.dv.coeffs.begin());
    return out;
}

PhaseState step(const ModelSpec& model, const PhaseState& state, double dt, Integrator method) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
    std::vector<double> y;
    pack(state, 0.0, y);
    detail::OdeWorkspace ws;
    advance(model, method, state.t, dt, y, ws);
    if (!flat_finite(y)) throw NonFiniteState(state.t + dt);
    return unpack(model, state.t + dt, y);
}

Trajectory simulate(const ModelSpec& model, const PhaseState& initial, double dt, double t_end,
                    int stride, Integrator method) {
    return run_simulation(model, initial, dt, t_end, stride, method, false);
}

Trajectory strong_simulate(const ModelSpec& model, const PhaseState& initial, double dt,
                           double t_end, int stride, Integrator method) {
    const double vnorm = norm(initial.u, Norm::H2) + norm(initial.v, Norm::H1);
    if (!std::isfinite(vnorm))
        throw std::invalid_argument("strong_simulate: initial data has non-finite V-norm");
    return run_simulation(model, initial, dt, t_end, stride, method, true);
}

Trajectory simulate_recording(const ModelSpec& model, const PhaseState& initial, double dt,
                              double t_end, int stride, Integrator method,
                              std::vector<MicroStep>& record) {
    record.clear();
    return run_simulation(model, initial, dt, t_end, stride, method, false, &record);
}

AssumptionReport check_assumptions(const ModelSpec& model, double s_range, int samples) {
    return check_assumptions(model.damping(), model.nonlinearity(), s_range, samples);
}

}  // namespace wavebox
