#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wavebox/errors.hpp"
#include "wavebox/functionals.hpp"
#include "wavebox/sampling.hpp"

using namespace wavebox;

namespace {

constexpr double kPi = std::numbers::pi;

ModelSpec linear_model(double gamma, double phi1, int N = 4) {
    const Domain d(1, {kPi}, N);
    ModalField phi(d);
    phi.coeffs[0] = phi1;
    return ModelSpec(d, DampingSpec::constant(gamma), NonlinearitySpec::zero(), std::move(phi));
}

ModelSpec default_model(int N = 32) {
    const Domain d(1, {kPi}, N);
    return ModelSpec(d, DampingSpec::power(1.0, 2.0), NonlinearitySpec::power(1.0, 3.0),
                     ModalField::mode(d, {1, 1, 1}, 0.5));
}

PhaseState default_initial(const ModelSpec& model) {
    ModalField u = ModalField::mode(model.domain(), {1, 1, 1}, 1.0);
    if (model.domain().modes_per_dim >= 2) u.coeffs[1] = 0.25;
    return PhaseState(0.0, std::move(u), ModalField(model.domain()));
}

}  // namespace

TEST_CASE("energy functional") {
    SUBCASE("zero state with zero forcing has zero energy") {
        const Domain d(1, {kPi}, 8);
        const ModelSpec model(d, DampingSpec::constant(1.0), NonlinearitySpec::zero(),
                              ModalField(d));
        CHECK(energy_E(model, PhaseState(0.0, ModalField(d), ModalField(d))) == doctest::Approx(0.0));
    }
    SUBCASE("E(e_1, 0) = lambda_1/2 for the free linear model") {
        const Domain d(1, {kPi}, 8);
        const ModelSpec model(d, DampingSpec::constant(1.0), NonlinearitySpec::zero(),
                              ModalField(d));
        const PhaseState s(0.0, ModalField::mode(d, {1, 1, 1}, 1.0), ModalField(d));
        CHECK(energy_E(model, s) == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("cubic potential term matches the closed form int F = 3 a^4 / (8 pi)") {
        const Domain d(1, {kPi}, 8);
        const ModelSpec model(d, DampingSpec::constant(1.0), NonlinearitySpec::power(1.0, 3.0),
                              ModalField(d));
        const double a = 1.3;
        const PhaseState s(0.0, ModalField::mode(d, {1, 1, 1}, a), ModalField(d));
        const double expected = 0.5 * a * a + 3.0 * std::pow(a, 4.0) / (8.0 * kPi);
        CHECK(energy_E(model, s) == doctest::Approx(expected).epsilon(1e-11));
    }
}

TEST_CASE("energy equality audit") {
    SUBCASE("zero trajectory has zero residual") {
        const Domain d(1, {kPi}, 8);
        const ModelSpec model(d, DampingSpec::power(1.0, 2.0), NonlinearitySpec::power(1.0, 3.0),
                              ModalField(d));
        const Trajectory traj =
            simulate(model, PhaseState(0.0, ModalField(d), ModalField(d)), 1e-2, 0.5, 5);
        const AuditReport report = energy_equality_audit(traj);
        CHECK(report.max_residual == doctest::Approx(0.0));
        CHECK(report.pass());
    }
    SUBCASE("linear model against the closed-form run: residual < 1e-9") {
        const auto model = linear_model(1.0, 0.5);
        const PhaseState init(0.0, ModalField::mode(model.domain(), {1, 1, 1}, 1.0),
                              ModalField(model.domain()));
        const Trajectory traj = simulate(model, init, 1e-4, 1.0, 100);
        const AuditReport report = energy_equality_audit(traj, 1e-9);
        CHECK(report.max_residual < 1e-9);
        CHECK(report.pass());
    }
    SUBCASE("rk4 order: residual shrinks by >= 2^3.5 under dt halving") {
        const auto model = default_model(16);
        const PhaseState init = default_initial(model);
        const double r1 =
            energy_equality_audit(simulate(model, init, 2e-3, 1.0, 1)).max_residual;
        const double r2 =
            energy_equality_audit(simulate(model, init, 1e-3, 1.0, 1)).max_residual;
        CHECK(r1 / r2 >= std::pow(2.0, 3.5));
    }
}

TEST_CASE("perturbed functionals") {
    const auto model = default_model(16);
    SUBCASE("all four vanish on the zero state with phi = 0") {
        const Domain d(1, {kPi}, 8);
        const ModelSpec free(d, DampingSpec::power(1.0, 2.0), NonlinearitySpec::power(1.0, 3.0),
                             ModalField(d));
        const auto pf =
            perturbed_functionals(free, PhaseState(0.0, ModalField(d), ModalField(d)), 0.3);
        CHECK(pf.E_alpha == doctest::Approx(0.0));
        CHECK(pf.G_alpha == doctest::Approx(0.0));
        CHECK(pf.N_alpha == doctest::Approx(0.0));
        CHECK(pf.Phi_alpha == doctest::Approx(0.0));
    }
    SUBCASE("alpha = 0 collapses to (E, dissipation, 0, 0)") {
        FieldSampler sampler(42);
        auto [u, v] = sampler.phase_sample(model.domain(), 1.0);
        const PhaseState s(0.0, std::move(u), std::move(v));
        const auto pf = perturbed_functionals(model, s, 0.0);
        CHECK(pf.E_alpha == doctest::Approx(energy_E(model, s)).epsilon(1e-13));
        CHECK(pf.N_alpha == 0.0);
        CHECK(pf.Phi_alpha == 0.0);
        CHECK(pf.G_alpha == doctest::Approx(rhs(model, s).dissipation_rate).epsilon(1e-12));
    }
    SUBCASE("<u, u_t> modal dot agrees with nodal quadrature") {
        FieldSampler sampler(43);
        auto [u, v] = sampler.phase_sample(model.domain(), 2.0);
        const auto& plan = model.plan();
        const NodalField un = plan.to_nodal(u), vn = plan.to_nodal(v);
        NodalField prod(model.domain());
        for (std::size_t k = 0; k < prod.values.size(); ++k)
            prod.values[k] = un.values[k] * vn.values[k];
        CHECK(dot(u, v) == doctest::Approx(integrate(prod)).epsilon(1e-10));
    }
    SUBCASE("alpha outside [0,1) is rejected") {
        const PhaseState s(0.0, ModalField(model.domain()), ModalField(model.domain()));
        CHECK_THROWS_AS(perturbed_functionals(model, s, 1.0), InvalidRange);
        CHECK_THROWS_AS(perturbed_functionals(model, s, -0.1), InvalidRange);
    }
}

TEST_CASE("perturbed identity audit") {
    SUBCASE("zero trajectory") {
        const Domain d(1, {kPi}, 8);
        const ModelSpec free(d, DampingSpec::power(1.0, 2.0), NonlinearitySpec::power(1.0, 3.0),
                             ModalField(d));
        const Trajectory traj =
            simulate(free, PhaseState(0.0, ModalField(d), ModalField(d)), 1e-2, 0.5, 1);
        CHECK(perturbed_identity_audit(traj, 0.1).max_residual == doctest::Approx(0.0));
    }
    SUBCASE("linear model, alpha 0.1: residual < 1e-7 at dt = 1e-4 over [0, 1]") {
        const auto model = linear_model(1.0, 0.5);
        const PhaseState init(0.0, ModalField::mode(model.domain(), {1, 1, 1}, 1.0),
                              ModalField(model.domain()));
        const Trajectory traj = simulate(model, init, 1e-4, 1.0, 1);
        const AuditReport report = perturbed_identity_audit(traj, 0.1, 1e-7);
        CHECK(report.max_residual < 1e-7);
    }
    SUBCASE("trapezoid order: residual order >= 1.9 under halving") {
        const auto model = default_model(16);
        const PhaseState init = default_initial(model);
        const double r1 =
            perturbed_identity_audit(simulate(model, init, 2e-3, 1.0, 1), 0.1).max_residual;
        const double r2 =
            perturbed_identity_audit(simulate(model, init, 1e-3, 1.0, 1), 0.1).max_residual;
        CHECK(r1 / r2 >= std::pow(2.0, 1.9));
    }
}

TEST_CASE("space-time norm") {
    const auto model = default_model(8);
    SUBCASE("zero trajectory gives zero") {
        const Domain d(1, {kPi}, 8);
        const ModelSpec free(d, DampingSpec::power(1.0, 2.0), NonlinearitySpec::power(1.0, 3.0),
                             ModalField(d));
        const Trajectory traj =
            simulate(free, PhaseState(0.0, ModalField(d), ModalField(d)), 1e-2, 1.0, 1);
        CHECK(spacetime_norm(traj, 2.0) == doctest::Approx(0.0));
    }
    SUBCASE("frozen state: value = T^{1/(k+2)} |u|_{3k+6}") {
        // Hand-built constant-in-time trajectory.
        Trajectory traj;
        traj.model = std::make_shared<ModelSpec>(model);
        traj.dt = 0.1;
        const ModalField u = ModalField::mode(model.domain(), {1, 1, 1}, 0.9);
        for (int k = 0; k <= 20; ++k) {
            traj.snapshots.push_back(PhaseState(0.1 * k, u, ModalField(model.domain())));
            traj.dissipation_cum.push_back(0.0);
        }
        const double k = 2.0;
        const double expected = std::pow(2.0, 1.0 / 4.0) * lebesgue_norm(u, 12.0);
        CHECK(spacetime_norm(traj, k) == doctest::Approx(expected).epsilon(1e-10));
    }
    SUBCASE("monotone nondecreasing in T") {
        const PhaseState init = default_initial(model);
        const Trajectory traj = simulate(model, init, 1e-3, 2.0, 10);
        double prev = 0.0;
        for (double T : {0.5, 1.0, 1.5, 2.0}) {
            const double v = spacetime_norm(traj, 2.0, T);
            CHECK(v >= prev - 1e-13);
            prev = v;
        }
    }
}

TEST_CASE("space-time bound audit stays within the declared factor") {
    const auto model = default_model(16);
    SUBCASE("zero data, phi = 0: all ratios zero") {
        const Domain d(1, {kPi}, 16);
        const ModelSpec free(d, DampingSpec::power(1.0, 2.0), NonlinearitySpec::power(1.0, 3.0),
                             ModalField(d));
        const AuditReport report =
            spacetime_bound_audit(free, PhaseState(0.0, ModalField(d), ModalField(d)), 2.0,
                                  {1.0, 2.0}, 1e-2, 5);
        CHECK(report.max_residual == doctest::Approx(0.0));
        CHECK(report.pass());
    }
    SUBCASE("default config, short horizons") {
        const AuditReport report = spacetime_bound_audit(model, default_initial(model), 2.0,
                                                         {1.0, 2.0, 4.0}, 1e-3, 10);
        CHECK(report.pass());
        // R is nondecreasing in T by construction, so ratios cannot explode.
        CHECK(report.samples.size() == 3);
    }
}

TEST_CASE("nonlinear test functions M_eps and m_eps") {
    SUBCASE("both vanish at s = 0") {
        CHECK(test_function_M(0.5, 2.0, 0.0) == 0.0);
        CHECK(test_function_m(0.5, 2.0, 0.0) == 0.0);
    }
    SUBCASE("k=2, eps=0.5, s=1: M = 2/3") {
        CHECK(test_function_M(0.5, 2.0, 1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    }
    SUBCASE("eps -> 0: m collapses to 2 |s|^{(k+2)/2} / (k+2)") {
        CHECK(test_function_m(0.0, 2.0, 1.7) == doctest::Approx(1.7 * 1.7 / 2.0).epsilon(1e-14));
        for (double k : {0.0, 1.0, 2.0}) {
            const double s = 2.3;
            const double closed = 2.0 / (k + 2.0) * std::pow(s, 0.5 * (k + 2.0));
            CHECK(test_function_m(1e-12, k, s) == doctest::Approx(closed).epsilon(1e-9));
        }
    }
    SUBCASE("closed form at k = 2: m_eps(s) = (sqrt(1 + eps s^2) - 1) / eps") {
        for (double eps : {0.1, 0.3, 0.7})
            for (double s : {0.5, 1.0, 2.9}) {
                const double closed = (std::sqrt(1.0 + eps * s * s) - 1.0) / eps;
                CHECK(test_function_m(eps, 2.0, s) == doctest::Approx(closed).epsilon(1e-12));
            }
    }
    SUBCASE("adaptive quadrature against a dense Simpson oracle") {
        // Uniform Simpson loses accuracy at the tau^(k/2) endpoint; 1e-8 is
        // what the oracle itself is good for.
        const double eps = 0.3, k = 1.5, s = 3.1;
        const int steps = 40000;
        double acc = 0.0;
        for (int i = 0; i < steps; ++i) {
            const double a = s * i / steps, b = s * (i + 1) / steps, c = 0.5 * (a + b);
            auto h = [&](double tau) {
                return std::pow(tau, 0.5 * k) / std::sqrt(1.0 + eps * std::pow(tau, k));
            };
            acc += (b - a) / 6.0 * (h(a) + 4.0 * h(c) + h(b));
        }
        CHECK(test_function_m(eps, k, s) == doctest::Approx(acc).epsilon(1e-8));
    }
    SUBCASE("pointwise bounds on sampled s in [-100, 100]") {
        for (double k : {0.0, 1.0, 2.0})
            for (double eps : {0.1, 0.5, 0.9}) {
                for (double s = -100.0; s <= 100.0; s += 2.37) {
                    const double M = test_function_M(eps, k, s);
                    CHECK(std::abs(M) <= std::pow(std::abs(s), k + 1.0) + 1e-12);
                    CHECK(std::abs(M) <= std::abs(s) / eps + 1e-12);
                    const double h = 1e-6 * std::max(1.0, std::abs(s));
                    const double Mp =
                        (test_function_M(eps, k, s + h) - test_function_M(eps, k, s - h)) /
                        (2.0 * h);
                    CHECK(Mp >= -1e-7);
                    CHECK(Mp <= (k + 1.0) * std::pow(std::abs(s), k) * (1.0 + 1e-5) + 1e-6);
                }
            }
    }
}

TEST_CASE("Holder modulus audit") {
    SUBCASE("zero trajectory gives zero ratios") {
        const Domain d(1, {kPi}, 8);
        const ModelSpec free(d, DampingSpec::power(1.0, 2.0), NonlinearitySpec::power(1.0, 3.0),
                             ModalField(d));
        const Trajectory traj =
            simulate(free, PhaseState(0.0, ModalField(d), ModalField(d)), 1e-2, 1.0, 1);
        const AuditReport report = holder_modulus_audit(traj, {0.1, 0.05});
        CHECK(report.max_residual == doctest::Approx(0.0));
    }
    SUBCASE("constant damping (m = 0) keeps ratios bounded across lags") {
        const auto model = linear_model(1.0, 0.5, 16);
        const PhaseState init(0.0, ModalField::mode(model.domain(), {1, 1, 1}, 1.0),
                              ModalField(model.domain()));
        const Trajectory traj = simulate(model, init, 5e-4, 5.0, 25);
        const AuditReport report =
            holder_modulus_audit(traj, {0.1, 0.05, 0.025, 0.0125});
        CHECK(report.pass());
    }
    SUBCASE("default config ratios bounded within 10x of the smallest lag") {
        const auto model = default_model(16);
        const Trajectory traj = simulate(model, default_initial(model), 5e-4, 5.0, 25);
        const AuditReport report =
            holder_modulus_audit(traj, {0.1, 0.05, 0.025, 0.0125});
        CHECK(report.pass());
    }
}

TEST_CASE("Lyapunov functional") {
    const auto model = default_model(16);
    SUBCASE("coincides with the energy") {
        FieldSampler sampler(9);
        for (int i = 0; i < 5; ++i) {
            auto [u, v] = sampler.phase_sample(model.domain(), 1.0 + i);
            const PhaseState s(0.0, std::move(u), std::move(v));
            const double E = energy_E(model, s);
            CHECK(std::abs(lyapunov(model, s) - E) <= 1e-14 * (1.0 + std::abs(E)));
        }
    }
    SUBCASE("nonincreasing along a run, strictly while dissipation is active") {
        const Trajectory traj = simulate(model, default_initial(model), 1e-3, 2.0, 10);
        const AuditReport report = lyapunov_monotone_audit(traj);
        CHECK(report.pass());
        const double L0 = lyapunov(model, traj.snapshots.front());
        const double L1 = lyapunov(model, traj.snapshots.back());
        CHECK(L1 < L0);  // dissipation integral is positive on this run
    }
}
