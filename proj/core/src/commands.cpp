#include "wavebox/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <ostream>

#include "wavebox/errors.hpp"
#include "wavebox/experiments.hpp"
#include "wavebox/io.hpp"

namespace fs = std::filesystem;

namespace wavebox {

namespace {

std::string out_path(const Config& cfg, const std::string& name) {
    fs::create_directories(cfg.output_dir);
    return (fs::path(cfg.output_dir) / name).string();
}

int exit_code(const std::vector<AuditReport>& reports) {
    for (const auto& r : reports)
        if (!r.pass()) return kExitAuditFail;
    return kExitPass;
}

void log_reports(std::ostream& log, const std::vector<AuditReport>& reports) {
    for (const auto& r : reports)
        log << "  " << r.name << ": max_residual = " << format_double(r.max_residual)
            << ", tolerance = " << format_double(r.tolerance) << " -> " << r.verdict() << "\n";
}

AuditReport series_report(std::string name, const std::vector<double>& ts,
                          const std::vector<double>& values, double tolerance) {
    AuditReport report;
    report.name = std::move(name);
    report.tolerance = tolerance;
    for (std::size_t i = 0; i < values.size(); ++i) {
        report.samples.push_back({ts[i], values[i], tolerance});
        report.max_residual = std::max(report.max_residual, values[i]);
    }
    return report;
}

int cmd_validate(const Config& cfg, std::ostream& log) {
    const Domain domain = make_domain(cfg);
    const DampingSpec damping = make_damping(cfg);
    const NonlinearitySpec nonlin = make_nonlinearity(cfg, domain);
    if (nonlin.lambda_margin >= domain.lambda1())
        throw ValidationError("nonlinearity.lambda_margin", "must be < lambda_1 of the domain");

    const AssumptionReport report = check_assumptions(damping, nonlin, cfg.s_range, cfg.samples);
    std::vector<AuditReport> rows;
    for (const auto& c : report.checks) {
        AuditReport row;
        row.name = c.name;
        row.max_residual = std::max(0.0, -c.margin);
        row.tolerance = 1e-9 * std::max(1.0, std::abs(c.rhs));
        row.samples.push_back({c.witness_s, c.lhs, c.rhs});
        if (c.pass) row.max_residual = 0.0;
        rows.push_back(row);
        log << "  " << c.name << ": " << (c.pass ? "pass" : "fail");
        if (!c.pass)
            log << " (witness s = " << format_double(c.witness_s) << ", lhs "
                << format_double(c.lhs) << " vs rhs " << format_double(c.rhs) << ")";
        if (c.min_c > 0.0) log << ", min c = " << format_double(c.min_c);
        log << "\n";
    }
    log << "  exponent region: " << region_name(report.region) << ", k = " << report.k << "\n";
    write_report_summary(out_path(cfg, "assumptions.csv"), rows);
    return exit_code(rows);
}

int cmd_simulate(const Config& cfg, std::ostream& log) {
    const ModelSpec model = make_model(cfg);
    const Trajectory traj =
        simulate(model, make_initial(cfg, model), cfg.dt, cfg.t_end, cfg.stride,
                 make_integrator(cfg));
    save_trajectory(out_path(cfg, "snapshots.bin"), traj);
    write_energy_csv(out_path(cfg, "energy.csv"), traj);
    if (traj.diverged())
        throw NonFiniteState(*traj.blowup_time);
    log << "  " << traj.snapshots.size() << " snapshots to t = "
        << format_double(traj.t_final()) << "\n";
    return kExitPass;
}

// A run that blew up cannot satisfy any identity; report it as a failed
// audit rather than an error.
AuditReport divergence_report(std::string name, const Trajectory& traj, double tolerance) {
    AuditReport report;
    report.name = std::move(name);
    report.tolerance = tolerance;
    report.max_residual = std::numeric_limits<double>::infinity();
    report.samples.push_back({*traj.blowup_time, report.max_residual, tolerance});
    return report;
}

int cmd_audit_energy(const Config& cfg, std::ostream& log) {
    const ModelSpec model = make_model(cfg);
    const Trajectory traj =
        simulate(model, make_initial(cfg, model), cfg.dt, cfg.t_end, cfg.stride,
                 make_integrator(cfg));
    const double tol = cfg.tolerance.value_or(1e-6);
    const AuditReport report = traj.diverged()
                                   ? divergence_report("energy_equality", traj, tol)
                                   : energy_equality_audit(traj, tol);
    write_energy_csv(out_path(cfg, "energy.csv"), traj);
    write_audit_csv(out_path(cfg, "energy_audit.csv"), report);
    write_report_summary(out_path(cfg, "report.csv"), {report});
    log_reports(log, {report});
    return exit_code({report});
}

int cmd_audit_identity(const Config& cfg, std::ostream& log) {
    const ModelSpec model = make_model(cfg);
    const Trajectory traj =
        simulate(model, make_initial(cfg, model), cfg.dt, cfg.t_end, cfg.stride,
                 make_integrator(cfg));
    const double tol = cfg.tolerance.value_or(1e-5);
    const AuditReport report = traj.diverged()
                                   ? divergence_report("perturbed_identity", traj, tol)
                                   : perturbed_identity_audit(traj, cfg.alpha, tol);
    write_audit_csv(out_path(cfg, "identity_audit.csv"), report);
    write_report_summary(out_path(cfg, "report.csv"), {report});
    log_reports(log, {report});
    return exit_code({report});
}

int cmd_spacetime(const Config& cfg, std::ostream& log) {
    const ModelSpec model = make_model(cfg);
    const AuditReport report =
        spacetime_bound_audit(model, make_initial(cfg, model), model.exponent_k(), cfg.horizons,
                              cfg.dt, cfg.stride, cfg.bound_factor, make_integrator(cfg));
    write_audit_csv(out_path(cfg, "spacetime.csv"), report);
    write_report_summary(out_path(cfg, "report.csv"), {report});
    log << "  k = " << model.exponent_k() << " (L^" << format_double(model.exponent_k() + 2.0)
        << " in time, L^" << format_double(3.0 * model.exponent_k() + 6.0) << " in space)\n";
    log_reports(log, {report});
    return exit_code({report});
}

int cmd_equilibrium(const Config& cfg, std::ostream& log) {
    const ModelSpec model = make_model(cfg);
    const Equilibrium eq = solve_equilibrium(model, ModalField(model.domain()), cfg.newton_tol,
                                             cfg.newton_max_iters);
    Trajectory wrapper;
    wrapper.model = std::make_shared<ModelSpec>(model);
    wrapper.snapshots.push_back(PhaseState(0.0, eq.ubar, ModalField(model.domain())));
    wrapper.dissipation_cum.push_back(0.0);
    save_trajectory(out_path(cfg, "equilibrium.bin"), wrapper);

    AuditReport report;
    report.name = "equilibrium_newton";
    report.tolerance = cfg.newton_tol;
    report.max_residual = eq.residual;
    report.samples.push_back({static_cast<double>(eq.newton_iters), eq.residual, cfg.newton_tol});
    write_report_summary(out_path(cfg, "report.csv"), {report});
    log << "  newton iters = " << eq.newton_iters << ", residual = "
        << format_double(eq.residual) << ", |ubar|_H2 = " << format_double(eq.v_norm) << "\n";
    return exit_code({report});
}

int cmd_dependence(const Config& cfg, std::ostream& log) {
    const ModelSpec model = make_model(cfg);
    const AuditReport report =
        continuous_dependence(model, make_initial(cfg, model), cfg.deltas, cfg.t_end, cfg.dt,
                              cfg.stride, cfg.seed, cfg.agree_factor, make_integrator(cfg));
    write_audit_csv(out_path(cfg, "dependence.csv"), report);
    write_report_summary(out_path(cfg, "report.csv"), {report});
    log_reports(log, {report});
    return exit_code({report});
}

int cmd_sweep(const Config& cfg, std::ostream& log) {
    const ModelSpec model = make_model(cfg);
    const SweepResult result =
        dissipative_sweep(model, cfg.radii, cfg.t_end, cfg.samples_per_radius, cfg.dt,
                          cfg.stride, cfg.seed, cfg.agree_factor);
    std::vector<AuditReport> reports{result.report};
    for (const auto& run : result.runs) {
        char name[64];
        std::snprintf(name, sizeof name, "sweep_r%g_s%d.csv", run.radius, run.sample);
        write_energy_csv(out_path(cfg, name), run.traj);
        if (run.traj.diverged()) {
            log << "  radius " << run.radius << " sample " << run.sample << ": diverged at t = "
                << format_double(*run.traj.blowup_time) << "\n";
            continue;
        }
        AuditReport lyap = lyapunov_monotone_audit(run.traj);
        std::snprintf(name, sizeof name, "lyapunov_r%g_s%d", run.radius, run.sample);
        lyap.name = name;
        reports.push_back(std::move(lyap));
    }
    write_report_summary(out_path(cfg, "report.csv"), reports);
    log_reports(log, reports);
    return exit_code(reports);
}

int cmd_decompose(const Config& cfg, std::ostream& log) {
    const ModelSpec model = make_model(cfg);
    const Equilibrium eq = solve_equilibrium(model, ModalField(model.domain()), cfg.newton_tol,
                                             cfg.newton_max_iters);
    const PhaseState initial = make_initial(cfg, model);
    const double recon_tol = cfg.tolerance.value_or(1e-6);

    std::vector<AuditReport> reports;
    std::vector<DecompositionRun> runs;
    for (int n : cfg.ns) {
        DecompositionRun run = decompose(model, eq, initial, n, cfg.t_end, cfg.dt, cfg.stride);
        std::vector<double> ts;
        for (const auto& s : run.w_snapshots) ts.push_back(s.t);
        char name[64];
        std::snprintf(name, sizeof name, "reconstruction_n%d", n);
        AuditReport recon = series_report(name, ts, run.reconstruction_residual, recon_tol);
        std::snprintf(name, sizeof name, "reconstruction_n%d.csv", n);
        write_audit_csv(out_path(cfg, name), recon);
        reports.push_back(std::move(recon));

        AuditReport l53 = lemma53_audit(run);
        std::snprintf(name, sizeof name, "lemma53_n%d.csv", n);
        write_audit_csv(out_path(cfg, name), l53);
        runs.push_back(std::move(run));
    }
    reports.push_back(lemma53_family_audit(runs, cfg.bound_factor));

    if (!cfg.offsets.empty()) {
        FieldSampler sampler(cfg.seed);
        const auto [du, dv] = sampler.phase_sample(model.domain(), 1.0);
        std::vector<DecompositionRun> offset_runs;
        for (std::size_t i = 0; i < cfg.offsets.size(); ++i) {
            PhaseState start(0.0, eq.ubar, ModalField(model.domain()));
            for (std::size_t j = 0; j < start.u.coeffs.size(); ++j) {
                start.u.coeffs[j] += cfg.offsets[i] * du.coeffs[j];
                start.v.coeffs[j] += cfg.offsets[i] * dv.coeffs[j];
            }
            DecompositionRun run =
                decompose(model, eq, start, cfg.ns.front(), cfg.t_end, cfg.dt, cfg.stride);
            std::vector<double> ts;
            for (const auto& s : run.v_snapshots) ts.push_back(s.t);
            char name[64];
            std::snprintf(name, sizeof name, "vn_energy_off%zu.csv", i);
            write_audit_csv(out_path(cfg, name),
                            series_report("vn_energy", ts, run.vn_energy, 0.0));
            offset_runs.push_back(std::move(run));
        }
        reports.push_back(lemma54_audit(cfg.offsets, offset_runs));
    }

    write_report_summary(out_path(cfg, "report.csv"), reports);
    log << "  equilibrium residual = " << format_double(eq.residual) << " ("
        << eq.newton_iters << " iters)\n";
    log_reports(log, reports);
    return exit_code(reports);
}

int cmd_strong_audit(const Config& cfg, std::ostream& log) {
    const ModelSpec model = make_model(cfg);
    const Trajectory traj =
        strong_simulate(model, make_initial(cfg, model), cfg.dt, cfg.t_end, cfg.stride,
                        make_integrator(cfg));
    const double tol = cfg.tolerance.value_or(1e-5);
    const AuditReport report = traj.diverged() ? divergence_report("strong_identity", traj, tol)
                                               : strong_audit(traj, tol);
    write_audit_csv(out_path(cfg, "strong_audit.csv"), report);
    write_report_summary(out_path(cfg, "report.csv"), {report});
    log_reports(log, {report});
    return exit_code({report});
}

int cmd_converge(const Config& cfg, std::ostream& log) {
    const ModelSpec model = make_model(cfg);
    const AuditReport report =
        galerkin_convergence(model, make_initial(cfg, model), cfg.resolutions, cfg.t_end,
                             cfg.dt, cfg.stride, 1e-8, make_integrator(cfg));
    write_audit_csv(out_path(cfg, "converge.csv"), report);
    write_report_summary(out_path(cfg, "report.csv"), {report});
    log_reports(log, {report});
    return exit_code({report});
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {
        "validate", "simulate",    "audit-energy", "audit-identity", "spacetime", "equilibrium",
        "dependence", "sweep",     "decompose",    "strong-audit",   "converge"};
    return names;
}

namespace {

int dispatch(const std::string& command, const Config& cfg, std::ostream& log);

}  // namespace

int run_command(const std::string& command, const Config& cfg, std::ostream& log) {
    log << command << ":\n";
    const bool is_audit = command != "validate" && command != "simulate" &&
                          command != "equilibrium";
    try {
        return dispatch(command, cfg, log);
    } catch (const NonFiniteState& e) {
        if (!is_audit) throw;
        log << "  " << e.what() << "\n";
        return kExitAuditFail;
    }
}

namespace {

int dispatch(const std::string& command, const Config& cfg, std::ostream& log) {
    if (command == "validate") return cmd_validate(cfg, log);
    if (command == "simulate") return cmd_simulate(cfg, log);
    if (command == "audit-energy") return cmd_audit_energy(cfg, log);
    if (command == "audit-identity") return cmd_audit_identity(cfg, log);
    if (command == "spacetime") return cmd_spacetime(cfg, log);
    if (command == "equilibrium") return cmd_equilibrium(cfg, log);
    if (command == "dependence") return cmd_dependence(cfg, log);
    if (command == "sweep") return cmd_sweep(cfg, log);
    if (command == "decompose") return cmd_decompose(cfg, log);
    if (command == "strong-audit") return cmd_strong_audit(cfg, log);
    if (command == "converge") return cmd_converge(cfg, log);
    throw std::invalid_argument("unknown command: " + command);
}

}  // namespace

}  // namespace wavebox
