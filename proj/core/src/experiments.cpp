#include "wavebox/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "ode_step.hpp"
#include "wavebox/errors.hpp"

namespace wavebox {

namespace {

double l2(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

// Modal residual of the discrete equilibrium equation:
// r_i = lambda_i a_i + <f(u), e_i> - phi_i.
std::vector<double> equilibrium_residual(const ModelSpec& model, const ModalField& u) {
    const auto& plan = model.plan();
    const auto& lam = plan.eigenvalues();
    const NodalField un = plan.to_nodal(u);
    NodalField fu(model.domain());
    for (std::size_t k = 0; k < un.values.size(); ++k)
        fu.values[k] = f_eval(model.nonlinearity(), un.values[k]);
    const ModalField pf = plan.to_modal(fu, model.domain().modes_per_dim);
    std::vector<double> r(u.coeffs.size());
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = lam[i] * u.coeffs[i] + pf.coeffs[i] - model.forcing().coeffs[i];
    return r;
}

}  // namespace

Equilibrium solve_equilibrium(const ModelSpec& model, const ModalField& guess, double tol,
                              int max_iters) {
    if (!(tol > 0.0)) throw std::invalid_argument("solve_equilibrium: tol must be > 0");
    if (!(guess.domain == model.domain()))
        throw std::invalid_argument("solve_equilibrium: guess on a different domain");

    const auto& plan = model.plan();
    const auto& lam = plan.eigenvalues();
    const double lambda1 = model.lambda1();
    const std::size_t M = guess.coeffs.size();

    ModalField u = guess;
    std::vector<double> history;
    for (int iter = 0; iter <= max_iters; ++iter) {
        std::vector<double> r = equilibrium_residual(model, u);
        const double rnorm = l2(r);
        history.push_back(rnorm);
        if (rnorm <= tol)
            return {u, rnorm, iter, norm(u, Norm::H2), std::move(history)};
        if (iter == max_iters) break;

        // Jacobian at u: J x = lambda x + P(f'(u) x), SPD while f'(u) > -lambda_1.
        const NodalField un = plan.to_nodal(u);
        NodalField fp(model.domain());
        double fp_min = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < un.values.size(); ++k) {
            fp.values[k] = f_prime(model.nonlinearity(), un.values[k]);
            fp_min = std::min(fp_min, fp.values[k]);
        }
        if (fp_min < -lambda1)
            throw IndefiniteJacobian("solve_equilibrium: f'(u) < -lambda_1 on the grid (min " +
                                     std::to_string(fp_min) + ")");

        auto apply_J = [&](const std::vector<double>& x, std::vector<double>& out) {
            ModalField xm(model.domain());
            xm.coeffs = x;
            NodalField xn = plan.to_nodal(xm);
            for (std::size_t k = 0; k < xn.values.size(); ++k) xn.values[k] *= fp.values[k];
            const ModalField px = plan.to_modal(xn, model.domain().modes_per_dim);
            for (std::size_t i = 0; i < M; ++i) out[i] = lam[i] * x[i] + px.coeffs[i];
        };

        // CG on J d = -r; inner tolerance tightens with the Newton residual so
        // the quadratic tail survives the inexact solve.
        std::vector<double> b(M), d(M, 0.0), res(M), p(M), Jp(M);
        for (std::size_t i = 0; i < M; ++i) b[i] = -r[i];
        res = b;
        p = res;
        double rr = 0.0;
        for (double v : res) rr += v * v;
        const double cg_tol = std::max(1e-14, std::min(0.1, rnorm)) * std::sqrt(rr);
        const int cg_max = 200 + 4 * static_cast<int>(M);
        for (int it = 0; it < cg_max && std::sqrt(rr) > cg_tol; ++it) {
            apply_J(p, Jp);
            double pJp = 0.0;
            for (std::size_t i = 0; i < M; ++i) pJp += p[i] * Jp[i];
            if (!(pJp > 0.0))
                throw IndefiniteJacobian("solve_equilibrium: CG found a non-positive curvature");
            const double alpha = rr / pJp;
            double rr_next = 0.0;
            for (std::size_t i = 0; i < M; ++i) {
                d[i] += alpha * p[i];
                res[i] -= alpha * Jp[i];
                rr_next += res[i] * res[i];
            }
            const double beta = rr_next / rr;
            rr = rr_next;
            for (std::size_t i = 0; i < M; ++i) p[i] = res[i] + beta * p[i];
        }
        for (std::size_t i = 0; i < M; ++i) u.coeffs[i] += d[i];
    }
    throw NoConvergence("solve_equilibrium: Newton did not reach tol in " +
                        std::to_string(max_iters) + " iterations");
}

AuditReport continuous_dependence(const ModelSpec& model, const PhaseState& initial,
                                  const std::vector<double>& perturb_sizes, double T, double dt,
                                  int stride, std::uint64_t seed, double agree_factor,
                                  Integrator method) {
    if (perturb_sizes.empty())
        throw std::invalid_argument("continuous_dependence: no perturbation sizes");
    for (double d : perturb_sizes)
        if (!(d > 0.0)) throw std::invalid_argument("continuous_dependence: sizes must be > 0");

    FieldSampler sampler(seed);
    const auto [du, dv] = sampler.phase_sample(model.domain(), 1.0);

    const Trajectory base = simulate(model, initial, dt, T, stride, method);
    if (base.diverged())
        throw NonFiniteState(*base.blowup_time);

    AuditReport report;
    report.name = "continuous_dependence";
    report.tolerance = agree_factor;
    report.metadata["T"] = T;
    report.metadata["dt"] = dt;

    std::vector<double> ratios;
    for (double delta : perturb_sizes) {
        PhaseState shifted = initial;
        for (std::size_t i = 0; i < shifted.u.coeffs.size(); ++i) {
            shifted.u.coeffs[i] += delta * du.coeffs[i];
            shifted.v.coeffs[i] += delta * dv.coeffs[i];
        }
        const Trajectory twin = simulate(model, shifted, dt, T, stride, method);
        if (twin.diverged()) throw NonFiniteState(*twin.blowup_time);

        double sup = 0.0;
        const std::size_t count = std::min(base.snapshots.size(), twin.snapshots.size());
        for (std::size_t k = 0; k < count; ++k) {
            ModalField diff = base.snapshots[k].u;
            for (std::size_t i = 0; i < diff.coeffs.size(); ++i)
                diff.coeffs[i] -= twin.snapshots[k].u.coeffs[i];
            sup = std::max(sup, norm(diff, Norm::L2));
        }
        ratios.push_back(sup / delta);
    }

    const double lo = *std::min_element(ratios.begin(), ratios.end());
    const double hi = *std::max_element(ratios.begin(), ratios.end());
    for (std::size_t i = 0; i < ratios.size(); ++i)
        report.samples.push_back({perturb_sizes[i], ratios[i], lo * agree_factor});
    report.max_residual = lo > 0.0 ? hi / lo : (hi > 0.0 ? agree_factor + 1.0 : 1.0);
    return report;
}

SweepResult dissipative_sweep(const ModelSpec& model, const std::vector<double>& radii, double T,
                              int samples_per_radius, double dt, int stride, std::uint64_t seed,
                              double agree_factor) {
    if (radii.empty()) throw std::invalid_argument("dissipative_sweep: no radii");
    if (samples_per_radius < 1)
        throw std::invalid_argument("dissipative_sweep: samples_per_radius must be >= 1");

    SweepResult result;
    result.runs.resize(radii.size() * static_cast<std::size_t>(samples_per_radius));

    // Seeds are fixed per (radius, sample) before fan-out, so the fields and
    // the outputs are independent of scheduling.
    std::vector<std::pair<std::size_t, std::uint64_t>> jobs;
    for (std::size_t ri = 0; ri < radii.size(); ++ri)
        for (int si = 0; si < samples_per_radius; ++si)
            jobs.emplace_back(ri * samples_per_radius + si,
                              seed + 1000 * ri + static_cast<std::uint64_t>(si));

    auto run_job = [&](std::size_t slot, std::uint64_t job_seed) {
        const std::size_t ri = slot / samples_per_radius;
        FieldSampler sampler(job_seed);
        auto [u0, v0] = sampler.phase_sample(model.domain(), radii[ri]);
        SweepRun run;
        run.radius = radii[ri];
        run.sample = static_cast<int>(slot % samples_per_radius);
        run.traj = simulate(model, PhaseState(0.0, std::move(u0), std::move(v0)), dt, T, stride);
        if (run.traj.diverged()) {
            run.tail = std::numeric_limits<double>::infinity();
        } else {
            for (const auto& s : run.traj.snapshots)
                if (s.t >= T / 2.0 - 1e-12) run.tail = std::max(run.tail, phase_norm(s.u, s.v));
        }
        result.runs[slot] = std::move(run);
    };

    const unsigned workers =
        std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                        static_cast<unsigned>(jobs.size())));
    std::vector<std::thread> pool;
    std::atomic_size_t next{0};
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t j = next.fetch_add(1);
                if (j >= jobs.size()) return;
                run_job(jobs[j].first, jobs[j].second);
            }
        });
    for (auto& th : pool) th.join();

    AuditReport& report = result.report;
    report.name = "dissipative_sweep";
    report.tolerance = agree_factor;
    report.metadata["T"] = T;

    // Tail per radius = worst over its samples.
    std::vector<double> tails(radii.size(), 0.0);
    for (std::size_t slot = 0; slot < result.runs.size(); ++slot)
        tails[slot / samples_per_radius] =
            std::max(tails[slot / samples_per_radius], result.runs[slot].tail);
    const double lo = *std::min_element(tails.begin(), tails.end());
    const double hi = *std::max_element(tails.begin(), tails.end());
    for (std::size_t ri = 0; ri < radii.size(); ++ri)
        report.samples.push_back({radii[ri], tails[ri], lo * agree_factor});
    report.max_residual = lo > 0.0 ? hi / lo : (hi > 0.0 ? agree_factor + 1.0 : 1.0);
    return result;
}

double DecompositionRun::sup_lemma53_ratio() const {
    return lemma53_ratio.empty() ? 0.0
                                 : *std::max_element(lemma53_ratio.begin(), lemma53_ratio.end());
}

double DecompositionRun::sup_vn_energy() const {
    return vn_energy.empty() ? 0.0 : *std::max_element(vn_energy.begin(), vn_energy.end());
}

double DecompositionRun::max_reconstruction_residual() const {
    return reconstruction_residual.empty()
               ? 0.0
               : *std::max_element(reconstruction_residual.begin(), reconstruction_residual.end());
}

namespace {

// Hermite evaluation of the recorded u-trajectory at node k + tau (tau in
// [0,1]); endpoint taus return the stored nodes exactly.
struct DriveTable {
    double dt = 0.0;
    const std::vector<MicroStep>* steps = nullptr;

    void eval(std::size_t k, double tau, std::vector<double>& u, std::vector<double>& v) const {
        const auto& nodes = *steps;
        if (tau < 1e-9) {
            u = nodes[k].u;
            v = nodes[k].v;
            return;
        }
        if (tau > 1.0 - 1e-9) {
            u = nodes[k + 1].u;
            v = nodes[k + 1].v;
            return;
        }
        const auto& n0 = nodes[k];
        const auto& n1 = nodes[k + 1];
        const double t2 = tau * tau, t3 = t2 * tau;
        const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + tau;
        const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
        const std::size_t M = n0.u.size();
        u.resize(M);
        v.resize(M);
        for (std::size_t i = 0; i < M; ++i) {
            u[i] = h00 * n0.u[i] + h10 * dt * n0.v[i] + h01 * n1.u[i] + h11 * dt * n1.v[i];
            v[i] = h00 * n0.v[i] + h10 * dt * n0.a[i] + h01 * n1.v[i] + h11 * dt * n1.a[i];
        }
    }
};

}  // namespace

DecompositionRun decompose(const ModelSpec& model, const Equilibrium& eq,
                           const PhaseState& initial, int n, double T, double dt, int stride,
                           DecomposeMode mode) {
    if (n < 1) throw std::invalid_argument("decompose: n must be >= 1");
    const auto& damping = model.damping();
    if (damping.family == DampingFamily::plateau) {
        if (damping.l < static_cast<double>(n))
            throw PlateauTooNarrow("decompose: plateau half-width l = " +
                                   std::to_string(damping.l) + " < n = " + std::to_string(n));
    } else if (damping.family != DampingFamily::constant) {
        throw PlateauTooNarrow("decompose: damping must be plateau (S3) or constant");
    }

    const auto& plan = model.plan();
    const auto& lam = plan.eigenvalues();
    const std::size_t M = eq.ubar.coeffs.size();
    const double gamma = damping.gamma;
    const auto& nonlin = model.nonlinearity();
    const double K = nonlin.K;

    DecompositionRun run;
    run.n = n;
    run.gamma = gamma;
    run.t_i = initial.t;
    run.ubar = eq.ubar;

    // f(ubar) on the grid once; it is time independent.
    const NodalField ubar_nodal = plan.to_nodal(eq.ubar);
    std::vector<double> f_ubar(ubar_nodal.values.size());
    for (std::size_t i = 0; i < f_ubar.size(); ++i)
        f_ubar[i] = f_eval(nonlin, ubar_nodal.values[i]);

    // Shared rhs of the (w, v) block given the drive fields (u, u_t) in modal
    // coordinates.  Layout: [w | w_t | v | v_t].
    std::vector<double> u_buf(M), v_buf(M);
    ModalField u_modal(model.domain()), udot_modal(model.domain());
    NodalField cw(model.domain()), cv(model.domain());
    auto wv_rhs = [&](const std::vector<double>& uc, const std::vector<double>& vc,
                      const double* y, double* dy) {
        u_modal.coeffs.assign(uc.begin(), uc.end());
        udot_modal.coeffs.assign(vc.begin(), vc.end());
        const NodalField un = plan.to_nodal(u_modal);
        const NodalField utn = plan.to_nodal(udot_modal);
        for (std::size_t i = 0; i < un.values.size(); ++i) {
            const double s = un.values[i];
            const double gn = cutoff_g(n, nonlin, s);
            const double g = f_eval(nonlin, s) + K * s;
            cw.values[i] = gn - f_ubar[i] - K * s;
            cv.values[i] = sigma_eval(damping, s) * utn.values[i] + (g - gn);
        }
        const ModalField pw = plan.to_modal(cw, model.domain().modes_per_dim);
        const ModalField pv = plan.to_modal(cv, model.domain().modes_per_dim);
        const double* w = y;
        const double* wt = y + M;
        const double* v = y + 2 * M;
        const double* vt = y + 3 * M;
        for (std::size_t i = 0; i < M; ++i) {
            dy[i] = wt[i];
            dy[M + i] = -lam[i] * w[i] - gamma * wt[i] - pw.coeffs[i];
            dy[2 * M + i] = vt[i];
            dy[3 * M + i] = -lam[i] * v[i] - pv.coeffs[i] + gamma * wt[i];
        }
    };

    const long long steps = std::max(1LL, std::llround(T / dt));
    detail::OdeWorkspace ws;

    std::vector<PhaseState> u_nodes;  // u at snapshot times, for the records
    auto snapshot_of = [&](const std::vector<double>& y, double t) {
        PhaseState w(t, ModalField(model.domain()), ModalField(model.domain()));
        std::copy(y.begin(), y.begin() + M, w.u.coeffs.begin());
        std::copy(y.begin() + M, y.begin() + 2 * M, w.v.coeffs.begin());
        PhaseState v(t, ModalField(model.domain()), ModalField(model.domain()));
        std::copy(y.begin() + 2 * M, y.begin() + 3 * M, v.u.coeffs.begin());
        std::copy(y.begin() + 3 * M, y.begin() + 4 * M, v.v.coeffs.begin());
        run.w_snapshots.push_back(std::move(w));
        run.v_snapshots.push_back(std::move(v));
    };

    if (mode == DecomposeMode::sequential) {
        std::vector<MicroStep> micro;
        run.u_traj = simulate_recording(model, initial, dt, T, stride, Integrator::rk4, micro);
        if (run.u_traj.diverged()) throw NonFiniteState(*run.u_traj.blowup_time);
        DriveTable drive{dt, &micro};

        std::vector<double> y(4 * M, 0.0);  // w_n starts from rest
        for (std::size_t i = 0; i < M; ++i) {
            y[2 * M + i] = initial.u.coeffs[i] - eq.ubar.coeffs[i];
            y[3 * M + i] = initial.v.coeffs[i];
        }
        std::size_t cur = 0;
        auto f = [&](double tt, const std::vector<double>& yy, std::vector<double>& dyy) {
            const double tau = (tt - micro[cur].t) / dt;
            drive.eval(cur, tau, u_buf, v_buf);
            wv_rhs(u_buf, v_buf, yy.data(), dyy.data());
        };
        snapshot_of(y, initial.t);
        u_nodes.push_back(PhaseState(initial.t, initial.u, initial.v));
        for (long long k = 0; k < steps; ++k) {
            cur = static_cast<std::size_t>(k);
            detail::rk4_step(f, micro[cur].t, dt, y, ws);
            if ((k + 1) % stride == 0 || k + 1 == steps) {
                const auto& node = micro[static_cast<std::size_t>(k + 1)];
                snapshot_of(y, node.t);
                PhaseState us(node.t, ModalField(model.domain()), ModalField(model.domain()));
                us.u.coeffs = node.u;
                us.v.coeffs = node.v;
                u_nodes.push_back(std::move(us));
            }
        }
    } else {
        // Stacked system [u | u_t | w | w_t | v | v_t | D]; the u block sees
        // exactly the same arithmetic as a standalone simulate().
        std::vector<double> y(6 * M + 1, 0.0);
        std::copy(initial.u.coeffs.begin(), initial.u.coeffs.end(), y.begin());
        std::copy(initial.v.coeffs.begin(), initial.v.coeffs.end(), y.begin() + M);
        for (std::size_t i = 0; i < M; ++i) {
            y[4 * M + i] = initial.u.coeffs[i] - eq.ubar.coeffs[i];
            y[5 * M + i] = initial.v.coeffs[i];
        }
        NodalField nl(model.domain());
        auto f = [&](double tt, const std::vector<double>& yy, std::vector<double>& dyy) {
            u_modal.coeffs.assign(yy.begin(), yy.begin() + M);
            udot_modal.coeffs.assign(yy.begin() + M, yy.begin() + 2 * M);
            const NodalField un = plan.to_nodal(u_modal);
            const NodalField utn = plan.to_nodal(udot_modal);
            double diss = 0.0;
            for (std::size_t i = 0; i < un.values.size(); ++i) {
                const double s = un.values[i];
                const double ut = utn.values[i];
                const double sig = sigma_eval(damping, s);
                nl.values[i] = sig * ut + f_eval(nonlin, s);
                diss += sig * ut * ut;
                const double gn = cutoff_g(n, nonlin, s);
                const double g = f_eval(nonlin, s) + K * s;
                cw.values[i] = gn - f_ubar[i] - K * s;
                cv.values[i] = sig * ut + (g - gn);
            }
            const ModalField pu = plan.to_modal(nl, model.domain().modes_per_dim);
            const ModalField pw = plan.to_modal(cw, model.domain().modes_per_dim);
            const ModalField pv = plan.to_modal(cv, model.domain().modes_per_dim);
            const auto& phi = model.forcing().coeffs;
            bool finite = true;
            for (std::size_t i = 0; i < M; ++i) {
                dyy[i] = yy[M + i];
                dyy[M + i] = phi[i] - lam[i] * yy[i] - pu.coeffs[i];
                dyy[2 * M + i] = yy[3 * M + i];
                dyy[3 * M + i] = -lam[i] * yy[2 * M + i] - gamma * yy[3 * M + i] - pw.coeffs[i];
                dyy[4 * M + i] = yy[5 * M + i];
                dyy[5 * M + i] = -lam[i] * yy[4 * M + i] - pv.coeffs[i] + gamma * yy[3 * M + i];
                finite = finite && std::isfinite(dyy[M + i]);
            }
            dyy[6 * M] = diss * model.domain().cell_volume();
            if (!finite) throw NonFiniteState(tt);
        };

        Trajectory& traj = run.u_traj;
        traj.model = std::make_shared<ModelSpec>(model);
        traj.dt = dt;
        traj.integrator = Integrator::rk4;
        auto record_all = [&](double t) {
            PhaseState us(t, ModalField(model.domain()), ModalField(model.domain()));
            std::copy(y.begin(), y.begin() + M, us.u.coeffs.begin());
            std::copy(y.begin() + M, y.begin() + 2 * M, us.v.coeffs.begin());
            traj.snapshots.push_back(us);
            traj.dissipation_cum.push_back(y[6 * M]);
            std::vector<double> wy(y.begin() + 2 * M, y.begin() + 6 * M);
            snapshot_of(wy, t);
            u_nodes.push_back(std::move(us));
        };
        record_all(initial.t);
        for (long long k = 0; k < steps; ++k) {
            detail::rk4_step(f, initial.t + static_cast<double>(k) * dt, dt, y, ws);
            if ((k + 1) % stride == 0 || k + 1 == steps)
                record_all(initial.t + static_cast<double>(k + 1) * dt);
        }
    }

    // Per-snapshot records.
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    for (std::size_t s = 0; s < run.w_snapshots.size(); ++s) {
        const auto& w = run.w_snapshots[s];
        const auto& v = run.v_snapshots[s];
        const auto& u = u_nodes[s];
        ModalField diff = u.u;
        for (std::size_t i = 0; i < M; ++i)
            diff.coeffs[i] -= w.u.coeffs[i] + v.u.coeffs[i] + eq.ubar.coeffs[i];
        run.reconstruction_residual.push_back(norm(diff, Norm::H1));
        run.lemma53_ratio.push_back((norm(w.v, Norm::H1) + norm(w.u, Norm::H2)) /
                                    (n2 * norm(v.u, Norm::H1) + 1.0));
        run.vn_energy.push_back(dot(v.v, v.v) + h1_dot(v.u, v.u));
    }
    return run;
}

AuditReport lemma53_audit(const DecompositionRun& run, double ratio_bound) {
    AuditReport report;
    report.name = "lemma53";
    report.tolerance = ratio_bound;
    report.metadata["n"] = run.n;
    for (std::size_t s = 0; s < run.lemma53_ratio.size(); ++s)
        report.samples.push_back(
            {run.w_snapshots[s].t, run.lemma53_ratio[s], ratio_bound});
    report.max_residual = run.sup_lemma53_ratio();
    return report;
}

AuditReport lemma53_family_audit(const std::vector<DecompositionRun>& runs, double agree_factor) {
    if (runs.empty()) throw std::invalid_argument("lemma53_family_audit: no runs");
    AuditReport report;
    report.name = "lemma53_family";
    report.tolerance = agree_factor;
    std::vector<double> sups;
    for (const auto& run : runs) sups.push_back(run.sup_lemma53_ratio());
    const double lo = *std::min_element(sups.begin(), sups.end());
    const double hi = *std::max_element(sups.begin(), sups.end());
    for (std::size_t i = 0; i < runs.size(); ++i)
        report.samples.push_back({static_cast<double>(runs[i].n), sups[i], lo * agree_factor});
    report.max_residual = lo > 0.0 ? hi / lo : (hi > 0.0 ? agree_factor + 1.0 : 1.0);
    return report;
}

AuditReport lemma54_audit(const std::vector<double>& offsets,
                          const std::vector<DecompositionRun>& runs, double scale_factor) {
    if (offsets.size() != runs.size() || offsets.empty())
        throw std::invalid_argument("lemma54_audit: offsets/runs size mismatch");

    // Sort by decreasing offset; energies must decrease along with it and
    // collapse quadratically.
    std::vector<std::size_t> order(offsets.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return offsets[a] > offsets[b]; });

    AuditReport report;
    report.name = "lemma54";
    report.tolerance = scale_factor;

    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    bool monotone = true;
    double prev_e = std::numeric_limits<double>::infinity();
    for (std::size_t j : order) {
        if (!(offsets[j] > 0.0)) throw std::invalid_argument("lemma54_audit: offsets must be > 0");
        const double e = runs[j].sup_vn_energy();
        if (e > prev_e) monotone = false;
        prev_e = e;
        const double scaled = e / (offsets[j] * offsets[j]);
        lo = std::min(lo, scaled);
        hi = std::max(hi, scaled);
        report.samples.push_back({offsets[j], e, offsets[j] * offsets[j] * hi});
    }
    report.metadata["monotone"] = monotone ? 1.0 : 0.0;
    report.max_residual = lo > 0.0 ? hi / lo : (hi > 0.0 ? scale_factor + 1.0 : 1.0);
    if (!monotone) report.max_residual = std::max(report.max_residual, scale_factor + 1.0);
    return report;
}

AuditReport strong_audit(const Trajectory& traj, double tolerance) {
    if (traj.diverged())
        throw std::invalid_argument("strong_audit: trajectory diverged");
    if (traj.snapshots.size() < 2)
        throw std::invalid_argument("strong_audit: need at least two snapshots");
    const ModelSpec& model = *traj.model;
    const auto& plan = model.plan();

    AuditReport report;
    report.name = "strong_identity";
    report.tolerance = tolerance;
    report.metadata["dt"] = traj.dt;

    auto K_of = [&](const PhaseState& s) {
        const double gv = norm(s.v, Norm::H1);
        const double lu = norm(s.u, Norm::H2);
        return 0.5 * gv * gv + 0.5 * lu * lu;
    };
    // G = int sigma(u) u_t Lap u_t + int f(u) Lap u_t - int phi Lap u_t.
    auto G_of = [&](const PhaseState& s) {
        const NodalField un = plan.to_nodal(s.u);
        const NodalField vn = plan.to_nodal(s.v);
        const NodalField lvn = plan.to_nodal(laplacian(s.v));
        double acc = 0.0;
        for (std::size_t i = 0; i < un.values.size(); ++i)
            acc += (sigma_eval(model.damping(), un.values[i]) * vn.values[i] +
                    f_eval(model.nonlinearity(), un.values[i])) *
                   lvn.values[i];
        acc *= model.domain().cell_volume();
        const auto& lam = plan.eigenvalues();
        double phi_term = 0.0;
        for (std::size_t i = 0; i < s.v.coeffs.size(); ++i)
            phi_term += model.forcing().coeffs[i] * lam[i] * s.v.coeffs[i];
        return acc + phi_term;  // -int phi Lap u_t = + sum phi_i lam_i v_i
    };

    const double K0 = K_of(traj.snapshots.front());
    double prev_G = G_of(traj.snapshots.front());
    double prev_t = traj.snapshots.front().t;
    double integral = 0.0;
    report.samples.push_back({prev_t, 0.0, tolerance});
    for (std::size_t k = 1; k < traj.snapshots.size(); ++k) {
        const double t = traj.snapshots[k].t;
        const double G = G_of(traj.snapshots[k]);
        integral += 0.5 * (t - prev_t) * (G + prev_G);
        const double residual = std::abs(K_of(traj.snapshots[k]) - K0 - integral);
        report.samples.push_back({t, residual, tolerance});
        report.max_residual = std::max(report.max_residual, residual);
        prev_G = G;
        prev_t = t;
    }
    return report;
}

AuditReport galerkin_convergence(const ModelSpec& model, const PhaseState& initial,
                                 const std::vector<int>& Ns, double T, double dt, int stride,
                                 double floor, Integrator method) {
    if (Ns.size() < 2) throw std::invalid_argument("galerkin_convergence: need >= 2 resolutions");
    for (std::size_t i = 1; i < Ns.size(); ++i)
        if (Ns[i] <= Ns[i - 1])
            throw std::invalid_argument("galerkin_convergence: resolutions must increase");

    std::vector<double> lengths(model.domain().lengths.begin(),
                                model.domain().lengths.begin() + model.domain().dim);

    std::vector<PhaseState> finals;
    std::vector<Domain> domains;
    for (int N : Ns) {
        const Domain dom(model.domain().dim, lengths, N, model.domain().oversample);
        const ModelSpec sub(dom, model.damping(), model.nonlinearity(),
                            embed(model.forcing(), dom));
        PhaseState init(initial.t, embed(initial.u, dom), embed(initial.v, dom));
        Trajectory traj = simulate(sub, init, dt, T, stride, method);
        if (traj.diverged()) throw NonFiniteState(*traj.blowup_time);
        finals.push_back(traj.snapshots.back());
        domains.push_back(dom);
    }

    AuditReport report;
    report.name = "galerkin_convergence";
    report.tolerance = 1.0;
    report.metadata["T"] = T;

    std::vector<double> diffs;
    for (std::size_t j = 0; j + 1 < finals.size(); ++j) {
        const ModalField du = embed(finals[j].u, domains[j + 1]);
        const ModalField dv = embed(finals[j].v, domains[j + 1]);
        ModalField eu = finals[j + 1].u, ev = finals[j + 1].v;
        for (std::size_t i = 0; i < eu.coeffs.size(); ++i) {
            eu.coeffs[i] -= du.coeffs[i];
            ev.coeffs[i] -= dv.coeffs[i];
        }
        diffs.push_back(phase_norm(eu, ev));
    }
    for (std::size_t j = 0; j < diffs.size(); ++j) {
        report.samples.push_back({static_cast<double>(Ns[j + 1]), diffs[j],
                                  j == 0 ? diffs[j] : diffs[j - 1]});
        if (j > 0 && diffs[j - 1] > floor) {
            const double ratio = diffs[j] / diffs[j - 1];
            report.max_residual = std::max(report.max_residual, ratio);
        }
    }
    return report;
}

}  // namespace wavebox
