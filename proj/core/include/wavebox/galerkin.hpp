#ifndef WAVEBOX_GALERKIN_HPP
#define WAVEBOX_GALERKIN_HPP

// The spectral Galerkin system for
//     u_tt + sigma(u) u_t - Lap u + f(u) = phi
// projected onto the first N^d Dirichlet eigenmodes, and its time
// integration.  Nonlinear terms are evaluated on the oversampled nodal grid
// and projected back (pseudo-spectral).  Dissipation int int sigma(u) u_t^2
// is accumulated as an extra integrated variable so the energy-equality
// residual is limited by the integrator order, not by output sampling.

#include <memory>
#include <optional>
#include <vector>

#include "wavebox/model.hpp"
#include "wavebox/spectral.hpp"

namespace wavebox {

class ModelSpec {
  public:
    // Throws ValidationError if the forcing is incompatible or non-finite,
    // if lambda_margin >= lambda_1, or if S1/F3 fail on the default range.
    ModelSpec(const Domain& domain, const DampingSpec& damping,
              const NonlinearitySpec& nonlinearity, ModalField forcing);

    const Domain& domain() const { return domain_; }
    const DampingSpec& damping() const { return damping_; }
    const NonlinearitySpec& nonlinearity() const { return nonlinearity_; }
    const ModalField& forcing() const { return forcing_; }
    const TransformPlan& plan() const { return *plan_; }

    double exponent_k() const { return region_.k; }
    ExponentRegion region() const { return region_.region; }
    double lambda1() const { return domain_.lambda1(); }

  private:
    Domain domain_;
    DampingSpec damping_;
    NonlinearitySpec nonlinearity_;
    ModalField forcing_;
    std::shared_ptr<const TransformPlan> plan_;
    RegionResult region_;
};

struct PhaseState {
    double t = 0.0;
    ModalField u;
    ModalField v;  // u_t

    PhaseState() = default;
    PhaseState(double t_, ModalField u_, ModalField v_);
};

enum class Integrator { rk4, implicit_midpoint };

struct Trajectory {
    std::shared_ptr<const ModelSpec> model;
    std::vector<PhaseState> snapshots;
    std::vector<double> dissipation_cum;  // D(t_k), aligned with snapshots
    double dt = 0.0;
    Integrator integrator = Integrator::rk4;
    std::optional<double> blowup_time;  // set when integration hit non-finite values

    // Extra records from strong_simulate: (|grad u_t|, |Lap u|) per snapshot.
    std::vector<double> grad_ut_norm;
    std::vector<double> lap_u_norm;

    bool diverged() const { return blowup_time.has_value(); }
    double t_final() const { return snapshots.empty() ? 0.0 : snapshots.back().t; }
};

struct RhsEval {
    ModalField du;
    ModalField dv;
    double dissipation_rate = 0.0;  // int_Omega sigma(u) u_t^2 at this state
};

// Right-hand side of the Galerkin system.  Throws NonFiniteState on blow-up.
RhsEval rhs(const ModelSpec& model, const PhaseState& state);

// One explicit/implicit step.  Throws NonFiniteState / NoConvergence.
PhaseState step(const ModelSpec& model, const PhaseState& state, double dt, Integrator method);

// Integrate over [initial.t, initial.t + t_end] with micro-step dt, keeping a
// snapshot every `stride` steps plus the first and last.  On blow-up the last
// finite state is retained and blowup_time is set.
Trajectory simulate(const ModelSpec& model, const PhaseState& initial, double dt, double t_end,
                    int stride, Integrator method = Integrator::rk4);

// Same dynamics, but refuses non-finite V-norm data and records the strong
// norms (|grad u_t|, |Lap u|) per snapshot.
Trajectory strong_simulate(const ModelSpec& model, const PhaseState& initial, double dt,
                           double t_end, int stride, Integrator method = Integrator::rk4);

// State and acceleration at one accepted micro step.
struct MicroStep {
    double t = 0.0;
    std::vector<double> u, v, a;  // a = u_tt at (t, u, v)
};

// simulate() that additionally records every accepted micro step (for
// experiments that re-integrate driven subsystems between the same nodes).
Trajectory simulate_recording(const ModelSpec& model, const PhaseState& initial, double dt,
                              double t_end, int stride, Integrator method,
                              std::vector<MicroStep>& record);

// Assumption report for a fully assembled model (default checker range).
AssumptionReport check_assumptions(const ModelSpec& model, double s_range = 10.0,
                                   int samples = 256);

}  // namespace wavebox

#endif
