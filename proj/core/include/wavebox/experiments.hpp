#ifndef WAVEBOX_EXPERIMENTS_HPP
#define WAVEBOX_EXPERIMENTS_HPP

// Composite experiment drivers: Newton-CG equilibrium solving, continuous
// dependence on initial data, dissipative radius sweeps, the cut-off
// decomposition u = w_n + v_n + ubar with its two lemma audits, the strong
// (H^2-level) identity audit, and Galerkin resolution convergence.

#include <cstdint>
#include <vector>

#include "wavebox/functionals.hpp"
#include "wavebox/galerkin.hpp"
#include "wavebox/sampling.hpp"

namespace wavebox {

struct Equilibrium {
    ModalField ubar;       // solves lambda_i a_i + (P f(u))_i = phi_i
    double residual = 0.0;  // l2 norm of the modal residual
    int newton_iters = 0;
    double v_norm = 0.0;   // |ubar|_{H^2}
    std::vector<double> residual_history;  // per Newton iterate, ending at `residual`
};

// Newton on the modal residual with a matrix-free CG inner solve (the
// Jacobian lambda_i d_ij + P f'(u) is SPD when f' >= 0).  Throws
// NoConvergence after max_iters and IndefiniteJacobian if f'(u) < -lambda_1
// is detected on the grid.
Equilibrium solve_equilibrium(const ModelSpec& model, const ModalField& guess, double tol = 1e-10,
                              int max_iters = 50);

// For each delta, integrates a perturbed twin (offset delta along a fixed
// seeded unit H-direction) and measures sup_{t<=T} |u1 - u2|_{L2} / delta.
// Pass iff the ratios agree within agree_factor across deltas.
AuditReport continuous_dependence(const ModelSpec& model, const PhaseState& initial,
                                  const std::vector<double>& perturb_sizes, double T,
                                  double dt = 1e-3, int stride = 10, std::uint64_t seed = 1234,
                                  double agree_factor = 2.0, Integrator method = Integrator::rk4);

struct SweepRun {
    double radius = 0.0;
    int sample = 0;
    Trajectory traj;
    double tail = 0.0;  // sup_{t in [T/2, T]} |(u, u_t)|_H
};

struct SweepResult {
    AuditReport report;
    std::vector<SweepRun> runs;
};

// Random data of H-norm radius (fixed seed per run, fanned out over worker
// threads).  Pass iff tails agree within agree_factor across radii.  Runs
// that blow up are recorded as "diverged at t" and fail the audit.
SweepResult dissipative_sweep(const ModelSpec& model, const std::vector<double>& radii, double T,
                              int samples_per_radius, double dt = 1e-3, int stride = 10,
                              std::uint64_t seed = 1234, double agree_factor = 2.0);

enum class DecomposeMode {
    sequential,    // integrate u first, drive (w_n, v_n) by Hermite-interpolated u
    co_integrated  // one stacked system; reference mode for validation
};

struct DecompositionRun {
    int n = 1;
    double gamma = 0.0;
    double t_i = 0.0;
    ModalField ubar;
    Trajectory u_traj;
    std::vector<PhaseState> w_snapshots;
    std::vector<PhaseState> v_snapshots;
    std::vector<double> reconstruction_residual;  // |u - w_n - v_n - ubar|_{H1}
    std::vector<double> lemma53_ratio;  // (|grad w_t| + |Lap w|) / (n^2 |grad v| + 1)
    std::vector<double> vn_energy;      // |v_t|^2 + |grad v|^2

    double sup_lemma53_ratio() const;
    double sup_vn_energy() const;
    double max_reconstruction_residual() const;
};

// w_n solves  w_tt + gamma w_t - Lap w + g_n(u) - f(ubar) - K u = 0  from rest;
// v_n carries the remainder and starts from (u(t_i) - ubar, u_t(t_i)).
// Requires plateau damping with l >= n (or constant damping); throws
// PlateauTooNarrow otherwise.
DecompositionRun decompose(const ModelSpec& model, const Equilibrium& eq,
                           const PhaseState& initial, int n, double T, double dt = 1e-3,
                           int stride = 10, DecomposeMode mode = DecomposeMode::sequential);

// Single-run boundedness of the Lemma 5.3 ratio against a declared cap.
AuditReport lemma53_audit(const DecompositionRun& run, double ratio_bound = 100.0);

// Cross-n comparison: sup ratios within agree_factor of each other.
AuditReport lemma53_family_audit(const std::vector<DecompositionRun>& runs,
                                 double agree_factor = 10.0);

// Offset family emulating z(t_i) -> z0: sup v_n-energy must decrease with the
// offset and match offset^2 scaling within scale_factor.
AuditReport lemma54_audit(const std::vector<double>& offsets,
                          const std::vector<DecompositionRun>& runs, double scale_factor = 3.0);

// Cumulative residual of
//   d/dt (1/2 |grad u_t|^2 + 1/2 |Lap u|^2)
//     = int sigma(u) u_t Lap u_t + int f(u) Lap u_t - int phi Lap u_t
// over a strong trajectory (exact difference left, trapezoid right).
AuditReport strong_audit(const Trajectory& traj, double tolerance = 1e-5);

// |xi^{N_{j+1}}(T) - xi^{N_j}(T)|_H for increasing resolutions, coarser state
// zero-padded.  Pass iff differences decrease monotonically (pairs with both
// values below `floor` are integrator-level noise and are not compared).
AuditReport galerkin_convergence(const ModelSpec& model, const PhaseState& initial,
                                 const std::vector<int>& Ns, double T, double dt = 1e-3,
                                 int stride = 10, double floor = 1e-8,
                                 Integrator method = Integrator::rk4);

}  // namespace wavebox

#endif
