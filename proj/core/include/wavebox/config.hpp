#ifndef WAVEBOX_CONFIG_HPP
#define WAVEBOX_CONFIG_HPP

// Line-based config parsing: `[section]` headers, `key = value` pairs,
// `#` comments.  Strict: unknown keys and duplicate definitions are parse
// errors with line numbers; range violations are ValidationErrors.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wavebox/galerkin.hpp"

namespace wavebox {

struct Config {
    // [domain]
    int dim = 0;
    std::vector<double> lengths;
    int modes = 0;
    int oversample = 4;

    // [damping]
    std::string damping_family;
    std::optional<double> sigma0, r, gamma, l;
    double c_growth = 10.0;

    // [nonlinearity]
    std::string nonlinearity_family;
    std::optional<double> a, p, b, K, lambda_margin;

    // [forcing]
    std::vector<int> forcing_mode;  // multi-index, defaults to (1,...,1)
    double forcing_amplitude = 0.0;

    // [run]
    double dt = 1e-3;
    double t_end = 10.0;
    int stride = 1;
    std::string integrator = "rk4";
    std::uint64_t seed = 1234;
    std::string output_dir = "out";
    std::string initial = "mode";  // zero | mode | random
    std::vector<int> initial_mode;
    double initial_amplitude = 1.0;
    double initial_velocity_amplitude = 0.0;
    double initial_radius = 1.0;

    // [experiment]
    std::optional<double> tolerance;  // audit tolerance override
    double alpha = 0.1;
    std::vector<double> horizons{5.0, 10.0, 20.0, 40.0};
    std::vector<double> deltas{1e-2, 1e-3, 1e-4};
    std::vector<double> radii{1.0, 5.0, 10.0};
    int samples_per_radius = 1;
    std::vector<int> ns{2, 4, 8};
    std::vector<double> offsets;  // lemma 5.4 proxy runs iff nonempty
    std::vector<int> resolutions{8, 16, 32, 64};
    double bound_factor = 10.0;
    double agree_factor = 2.0;
    double newton_tol = 1e-10;
    int newton_max_iters = 50;
    double s_range = 10.0;  // assumption checker sample range
    int samples = 256;
};

Config parse_config(const std::string& text);

// Builders from a validated Config.
Domain make_domain(const Config& cfg);
DampingSpec make_damping(const Config& cfg);
NonlinearitySpec make_nonlinearity(const Config& cfg, const Domain& domain);
ModalField make_forcing(const Config& cfg, const Domain& domain);
ModelSpec make_model(const Config& cfg);
PhaseState make_initial(const Config& cfg, const ModelSpec& model);
Integrator make_integrator(const Config& cfg);

}  // namespace wavebox

#endif
