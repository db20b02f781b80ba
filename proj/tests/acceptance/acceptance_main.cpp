// Acceptance suite: end-to-end checks of the simulator and every identity
// audit at desk scale (d = 1, N <= 64, plus one d = 3, N = 8 smoke run).
// Prints one PASS/FAIL line per criterion; exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "wavebox/experiments.hpp"
#include "wavebox/io.hpp"

using namespace wavebox;

namespace {

constexpr double kPi = std::numbers::pi;

struct Harness {
    int failures = 0;
    int index = 0;

    void record(const std::string& name, bool pass, const std::string& detail, double seconds) {
        ++index;
        std::printf("[%s] %2d. %-22s %s [%.1fs]\n", pass ? "PASS" : "FAIL", index, name.c_str(),
                    detail.c_str(), seconds);
        std::fflush(stdout);
        if (!pass) ++failures;
    }
};

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

std::string fmt(const char* pattern, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

// ---- shared configurations -------------------------------------------------

ModelSpec linear_model() {
    const Domain d(1, {kPi}, 4);
    ModalField phi(d);
    phi.coeffs[0] = 0.5;
    return ModelSpec(d, DampingSpec::constant(1.0), NonlinearitySpec::zero(), std::move(phi));
}

// d=1, N=32, sigma = 1 + |s|^2, f = s^3, phi = 0.5 e_1
ModelSpec default_model(int N = 32) {
    const Domain d(1, {kPi}, N);
    return ModelSpec(d, DampingSpec::power(1.0, 2.0), NonlinearitySpec::power(1.0, 3.0),
                     ModalField::mode(d, {1, 1, 1}, 0.5));
}

// Same right-hand side data but plateau damping (S3): gamma = 1 on [-8, 8].
ModelSpec plateau_model(int N = 32) {
    const Domain d(1, {kPi}, N);
    return ModelSpec(d, DampingSpec::plateau(1.0, 8.0, 0.01, 2.0),
                     NonlinearitySpec::power(1.0, 3.0), ModalField::mode(d, {1, 1, 1}, 0.5));
}

PhaseState default_initial(const ModelSpec& model) {
    ModalField u = ModalField::mode(model.domain(), {1, 1, 1}, 1.0);
    u.coeffs[1] = 0.25;
    return PhaseState(0.0, std::move(u), ModalField(model.domain()));
}

// ---- criteria ----------------------------------------------------------------

void criterion_linear_oracle(Harness& h) {
    Timer timer;
    const ModelSpec model = linear_model();
    const PhaseState init(0.0, ModalField::mode(model.domain(), {1, 1, 1}, 1.0),
                          ModalField(model.domain()));
    const Trajectory traj = simulate(model, init, 1e-4, 1.0, 100);

    // Closed form of a'' + a' + a = 1/2, a(0) = 1, a'(0) = 0.
    const double ap = 0.5;
    const double omega = std::sqrt(3.0) / 2.0;
    const double c1 = 1.0 - ap, c2 = 0.5 * c1 / omega;
    double max_err = 0.0;
    for (const auto& s : traj.snapshots) {
        const double e = std::exp(-0.5 * s.t);
        const double a = ap + e * (c1 * std::cos(omega * s.t) + c2 * std::sin(omega * s.t));
        const double da = e * ((-0.5 * c1 + omega * c2) * std::cos(omega * s.t) +
                               (-0.5 * c2 - omega * c1) * std::sin(omega * s.t));
        ModalField du = s.u, dv = s.v;
        du.coeffs[0] -= a;
        dv.coeffs[0] -= da;
        max_err = std::max(max_err, phase_norm(du, dv));
    }
    const double secs = timer.seconds();
    h.record("oracle-linear", max_err < 1e-8 && secs < 1.0,
             fmt("max phase error %.2e (tol 1e-8)", max_err), secs);
}

void criterion_energy_equality(Harness& h) {
    Timer timer;
    const ModelSpec model = default_model();
    const PhaseState init = default_initial(model);
    const double r1 = energy_equality_audit(simulate(model, init, 1e-3, 10.0, 10)).max_residual;
    const double r2 = energy_equality_audit(simulate(model, init, 5e-4, 10.0, 20)).max_residual;
    const double order = r1 / r2;
    const double secs = timer.seconds();
    h.record("energy-equality", r1 < 1e-6 && order >= std::pow(2.0, 3.5) && secs < 30.0,
             fmt("residual %.2e (tol 1e-6), halving gain %.1f (need >= 11.3)", r1, order), secs);
}

void criterion_perturbed_identity(Harness& h) {
    Timer timer;
    const ModelSpec model = default_model();
    const PhaseState init = default_initial(model);
    const double alpha = 0.1;
    const double r1 =
        perturbed_identity_audit(simulate(model, init, 1e-3, 10.0, 1), alpha).max_residual;
    const double r2 =
        perturbed_identity_audit(simulate(model, init, 5e-4, 10.0, 1), alpha).max_residual;
    const double order = r1 / r2;
    const double secs = timer.seconds();
    h.record("perturbed-identity", r1 < 1e-5 && order >= std::pow(2.0, 1.9) && secs < 30.0,
             fmt("residual %.2e (tol 1e-5), halving gain %.1f (need >= 3.7)", r1, order), secs);
}

void criterion_spacetime_bound(Harness& h) {
    Timer timer;
    const ModelSpec model = default_model();
    const AuditReport report = spacetime_bound_audit(model, default_initial(model), 2.0,
                                                     {5.0, 10.0, 20.0, 40.0}, 1e-3, 10, 10.0);
    const double secs = timer.seconds();
    h.record("spacetime-bound", report.pass() && secs < 120.0,
             fmt("max ratio drift %.2f (factor cap 10)", report.max_residual), secs);
}

void criterion_continuous_dependence(Harness& h) {
    Timer timer;
    const ModelSpec model = default_model();
    const AuditReport report = continuous_dependence(model, default_initial(model),
                                                     {1e-2, 1e-3, 1e-4}, 5.0, 1e-3, 10);
    const double secs = timer.seconds();
    h.record("continuous-dependence", report.pass() && secs < 60.0,
             fmt("ratio spread %.3f (factor cap 2)", report.max_residual), secs);
}

void criterion_equilibrium(Harness& h) {
    Timer timer;
    const Domain d(1, {kPi}, 32);
    const ModelSpec cubic(d, DampingSpec::power(1.0, 2.0), NonlinearitySpec::power(1.0, 3.0),
                          ModalField::mode(d, {1, 1, 1}, 0.1));
    const Equilibrium eq = solve_equilibrium(cubic, ModalField(d), 1e-10, 8);

    // Fixed-point oracle a <- (phi - P f(u)) / lambda.
    const auto& plan = cubic.plan();
    const auto& lam = plan.eigenvalues();
    ModalField a(d);
    for (int it = 0; it < 500; ++it) {
        const NodalField un = plan.to_nodal(a);
        NodalField fu(d);
        for (std::size_t k = 0; k < un.values.size(); ++k)
            fu.values[k] = f_eval(cubic.nonlinearity(), un.values[k]);
        const ModalField pf = plan.to_modal(fu, d.modes_per_dim);
        double delta = 0.0;
        for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
            const double next = (cubic.forcing().coeffs[i] - pf.coeffs[i]) / lam[i];
            delta = std::max(delta, std::abs(next - a.coeffs[i]));
            a.coeffs[i] = next;
        }
        if (delta < 1e-14) break;
    }
    double oracle_dist = 0.0;
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
        oracle_dist = std::max(oracle_dist, std::abs(a.coeffs[i] - eq.ubar.coeffs[i]));

    // Linear case: ubar = phi / lambda exactly.
    const ModelSpec linear(d, DampingSpec::constant(1.0), NonlinearitySpec::zero(),
                           ModalField::mode(d, {1, 1, 1}, 0.1));
    const Equilibrium leq = solve_equilibrium(linear, ModalField(d), 1e-12, 8);
    double linear_err = std::abs(leq.ubar.coeffs[0] - 0.1);
    for (std::size_t i = 1; i < leq.ubar.coeffs.size(); ++i)
        linear_err = std::max(linear_err, std::abs(leq.ubar.coeffs[i]));

    const double secs = timer.seconds();
    h.record("equilibrium-newton",
             eq.residual < 1e-10 && eq.newton_iters <= 8 && oracle_dist < 1e-8 &&
                 linear_err < 1e-12,
             fmt("residual %.1e in %d iters, oracle dist %.1e, linear err %.1e", eq.residual,
                 eq.newton_iters, oracle_dist, linear_err),
             secs);
}

void criterion_decomposition(Harness& h) {
    Timer timer;
    const ModelSpec model = plateau_model();
    const Equilibrium eq = solve_equilibrium(model, ModalField(model.domain()), 1e-11, 20);
    const PhaseState init(0.0, ModalField::mode(model.domain(), {1, 1, 1}, 2.5),
                          ModalField(model.domain()));

    double max_recon = 0.0;
    std::vector<DecompositionRun> runs;
    for (int n : {2, 4, 8}) {
        runs.push_back(decompose(model, eq, init, n, 10.0, 1e-3, 10));
        max_recon = std::max(max_recon, runs.back().max_reconstruction_residual());
    }
    const AuditReport l53 = lemma53_family_audit(runs, 10.0);

    FieldSampler sampler(1234);
    const auto [du, dv] = sampler.phase_sample(model.domain(), 1.0);
    const std::vector<double> offsets = {1e-1, 1e-2, 1e-3};
    std::vector<DecompositionRun> offset_runs;
    for (double off : offsets) {
        PhaseState start(0.0, eq.ubar, ModalField(model.domain()));
        for (std::size_t i = 0; i < start.u.coeffs.size(); ++i) {
            start.u.coeffs[i] += off * du.coeffs[i];
            start.v.coeffs[i] += off * dv.coeffs[i];
        }
        offset_runs.push_back(decompose(model, eq, start, 2, 10.0, 1e-3, 10));
    }
    const AuditReport l54 = lemma54_audit(offsets, offset_runs, 3.0);

    const double secs = timer.seconds();
    h.record("decomposition", max_recon < 1e-6 && l53.pass() && l54.pass() && secs < 180.0,
             fmt("recon %.1e (tol 1e-6), L5.3 spread %.2f (cap 10), L5.4 spread %.2f (cap 3)",
                 max_recon, l53.max_residual, l54.max_residual),
             secs);
}

void criterion_strong_audit(Harness& h) {
    Timer timer;
    const ModelSpec model = plateau_model();
    const PhaseState init(0.0, ModalField::mode(model.domain(), {1, 1, 1}, 0.8),
                          ModalField(model.domain()));
    const double r1 = strong_audit(strong_simulate(model, init, 1e-3, 5.0, 1)).max_residual;
    const double r2 = strong_audit(strong_simulate(model, init, 5e-4, 5.0, 1)).max_residual;
    const double order = r1 / r2;
    const double secs = timer.seconds();
    h.record("strong-identity", r1 < 1e-5 && order >= std::pow(2.0, 1.9),
             fmt("residual %.2e (tol 1e-5), halving gain %.1f (need >= 3.7)", r1, order), secs);
}

void criterion_dissipative_sweep(Harness& h) {
    Timer timer;
    const ModelSpec model = default_model();
    const SweepResult result =
        dissipative_sweep(model, {1.0, 5.0, 10.0}, 40.0, 1, 1e-3, 10, 1234, 2.0);
    bool lyapunov_ok = true;
    double worst_increase = 0.0;
    for (const auto& run : result.runs) {
        if (run.traj.diverged()) {
            lyapunov_ok = false;
            continue;
        }
        const AuditReport lyap = lyapunov_monotone_audit(run.traj, 1e-8);
        worst_increase = std::max(worst_increase, lyap.max_residual);
        lyapunov_ok = lyapunov_ok && lyap.pass();
    }
    const double secs = timer.seconds();
    h.record("dissipativity", result.report.pass() && lyapunov_ok && secs < 180.0,
             fmt("tail spread %.2f (cap 2), worst Lyapunov increase %.1e",
                 result.report.max_residual, worst_increase),
             secs);
}

void criterion_spectral_suite(Harness& h) {
    Timer timer;
    bool ok = true;
    std::string why = "all checks";

    {  // analytic eigenvalues
        const Domain d1(1, {kPi}, 3);
        const auto lam = eigenvalues(d1);
        ok = ok && lam[0] == 1.0 && lam[1] == 4.0 && lam[2] == 9.0;
        const Domain d2(2, {kPi, kPi}, 2);
        ok = ok && std::abs(eigenvalues(d2)[0] - 2.0) < 1e-15;
        if (!ok) why = "eigenvalues";
    }
    {  // round trip at N = 32
        const Domain d(1, {kPi}, 32);
        const TransformPlan plan(d);
        FieldSampler sampler(5);
        const ModalField f = sampler.spectral_envelope(d);
        const ModalField back = plan.to_modal(plan.to_nodal(f), d.modes_per_dim);
        for (std::size_t i = 0; i < f.coeffs.size(); ++i)
            if (std::abs(back.coeffs[i] - f.coeffs[i]) > 1e-12) ok = false;
        if (!ok && why == "all checks") why = "round trip";

        // Parseval
        if (std::abs(lebesgue_norm(f, 2.0) - norm(f, Norm::L2)) > 1e-10) ok = false;
        if (!ok && why == "all checks") why = "Parseval";
    }
    {  // sin^3 projection
        const Domain d(1, {kPi}, 8);
        const TransformPlan plan(d);
        const double a = 0.9;
        const NodalField un = plan.to_nodal(ModalField::mode(d, {1, 1, 1}, a));
        NodalField cubed(d);
        for (std::size_t k = 0; k < un.values.size(); ++k)
            cubed.values[k] = std::pow(un.values[k], 3.0);
        const ModalField proj = plan.to_modal(cubed, d.modes_per_dim);
        if (std::abs(proj.coeffs[0] - 3.0 * a * a * a / (2.0 * kPi)) > 1e-10) ok = false;
        if (std::abs(proj.coeffs[2] + a * a * a / (2.0 * kPi)) > 1e-10) ok = false;
        if (!ok && why == "all checks") why = "sin^3 projection";
    }
    h.record("spectral-suite", ok, why, timer.seconds());
}

void criterion_region_classifier(Harness& h) {
    Timer timer;
    const bool ok = exponent_region(2.0, 0.0, 3.0).region == ExponentRegion::RegionI &&
                    exponent_region(2.0, 2.0, 5.0).region == ExponentRegion::RegionII &&
                    exponent_region(4.0, 4.0, 7.0).region == ExponentRegion::Outside &&
                    exponent_region(4.0, 4.0, 7.0).k == 0.0;
    h.record("region-classifier", ok, "figure corner cases (I, II, Outside)", timer.seconds());
}

void smoke_3d(Harness& h) {
    Timer timer;
    const Domain d(3, {kPi, kPi, kPi}, 8, 2);
    const ModelSpec model(d, DampingSpec::power(1.0, 2.0), NonlinearitySpec::power(1.0, 3.0),
                          ModalField::mode(d, {1, 1, 1}, 0.5));
    const PhaseState init(0.0, ModalField::mode(d, {1, 1, 1}, 0.5), ModalField(d));
    const Trajectory traj = simulate(model, init, 5e-3, 0.5, 10);
    const AuditReport report = energy_equality_audit(traj, 1e-8);
    h.record("smoke-3d", !traj.diverged() && report.pass(),
             fmt("N=8 box, energy residual %.2e (tol 1e-8)", report.max_residual),
             timer.seconds());
}

}  // namespace

int main() {
    std::printf("wavebox acceptance suite\n");
    Harness h;
    criterion_linear_oracle(h);
    criterion_energy_equality(h);
    criterion_perturbed_identity(h);
    criterion_spacetime_bound(h);
    criterion_continuous_dependence(h);
    criterion_equilibrium(h);
    criterion_decomposition(h);
    criterion_strong_audit(h);
    criterion_dissipative_sweep(h);
    criterion_spectral_suite(h);
    criterion_region_classifier(h);
    smoke_3d(h);
    std::printf("%d/%d criteria passed\n", h.index - h.failures, h.index);
    return h.failures == 0 ? 0 : 1;
}
