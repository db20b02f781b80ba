#include "wavebox/config.hpp"

#include <cctype>
#include <cstdlib>
#include <map>
#include <set>

#include "wavebox/errors.hpp"
#include "wavebox/sampling.hpp"

namespace wavebox {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double to_double(const std::string& value, int line) {
    char* end = nullptr;
    const double x = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0' || !std::isfinite(x))
        throw ParseError(line, "expected a number, got '" + value + "'");
    return x;
}

long long to_int(const std::string& value, int line) {
    char* end = nullptr;
    const long long x = std::strtoll(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0')
        throw ParseError(line, "expected an integer, got '" + value + "'");
    return x;
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= value.size()) {
        const std::size_t comma = value.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(trim(value.substr(start)));
            break;
        }
        out.push_back(trim(value.substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

std::vector<double> to_double_list(const std::string& value, int line) {
    std::vector<double> out;
    for (const auto& item : split_list(value)) out.push_back(to_double(item, line));
    return out;
}

std::vector<int> to_int_list(const std::string& value, int line) {
    std::vector<int> out;
    for (const auto& item : split_list(value))
        out.push_back(static_cast<int>(to_int(item, line)));
    return out;
}

const std::set<std::string> kKnownSections = {"domain", "damping", "nonlinearity",
                                              "forcing", "run",     "experiment"};

}  // namespace

Config parse_config(const std::string& text) {
    Config cfg;
    std::string section;
    std::map<std::string, int> first_seen;  // "section.key" -> line

    bool dim_set = false, lengths_set = false, modes_set = false;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string line =
            nl == std::string::npos ? text.substr(pos) : text.substr(pos, nl - pos);
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!kKnownSections.count(section))
                throw ParseError(line_no, "unknown section [" + section + "]");
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
        if (section.empty()) throw ParseError(line_no, "key outside any [section]");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(line_no, "empty key");
        if (value.empty()) throw ParseError(line_no, "empty value for '" + key + "'");

        const std::string qual = section + "." + key;
        if (auto it = first_seen.find(qual); it != first_seen.end())
            throw ParseError(line_no, "duplicate key '" + qual + "' (first defined at line " +
                                          std::to_string(it->second) + ")");
        first_seen[qual] = line_no;

        if (qual == "domain.dim") {
            cfg.dim = static_cast<int>(to_int(value, line_no));
            dim_set = true;
        } else if (qual == "domain.lengths") {
            cfg.lengths = to_double_list(value, line_no);
            lengths_set = true;
        } else if (qual == "domain.modes") {
            cfg.modes = static_cast<int>(to_int(value, line_no));
            modes_set = true;
        } else if (qual == "domain.oversample") {
            cfg.oversample = static_cast<int>(to_int(value, line_no));
        } else if (qual == "damping.family") {
            cfg.damping_family = value;
        } else if (qual == "damping.sigma0") {
            cfg.sigma0 = to_double(value, line_no);
        } else if (qual == "damping.r") {
            cfg.r = to_double(value, line_no);
        } else if (qual == "damping.gamma") {
            cfg.gamma = to_double(value, line_no);
        } else if (qual == "damping.l") {
            cfg.l = to_double(value, line_no);
        } else if (qual == "damping.c_growth") {
            cfg.c_growth = to_double(value, line_no);
        } else if (qual == "nonlinearity.family") {
            cfg.nonlinearity_family = value;
        } else if (qual == "nonlinearity.a") {
            cfg.a = to_double(value, line_no);
        } else if (qual == "nonlinearity.p") {
            cfg.p = to_double(value, line_no);
        } else if (qual == "nonlinearity.b") {
            cfg.b = to_double(value, line_no);
        } else if (qual == "nonlinearity.K") {
            cfg.K = to_double(value, line_no);
        } else if (qual == "nonlinearity.lambda_margin") {
            cfg.lambda_margin = to_double(value, line_no);
        } else if (qual == "forcing.mode") {
            cfg.forcing_mode = to_int_list(value, line_no);
        } else if (qual == "forcing.amplitude") {
            cfg.forcing_amplitude = to_double(value, line_no);
        } else if (qual == "run.dt") {
            cfg.dt = to_double(value, line_no);
        } else if (qual == "run.t_end") {
            cfg.t_end = to_double(value, line_no);
        } else if (qual == "run.stride") {
            cfg.stride = static_cast<int>(to_int(value, line_no));
        } else if (qual == "run.integrator") {
            cfg.integrator = value;
        } else if (qual == "run.seed") {
            cfg.seed = static_cast<std::uint64_t>(to_int(value, line_no));
        } else if (qual == "run.output_dir") {
            cfg.output_dir = value;
        } else if (qual == "run.initial") {
            cfg.initial = value;
        } else if (qual == "run.initial_mode") {
            cfg.initial_mode = to_int_list(value, line_no);
        } else if (qual == "run.initial_amplitude") {
            cfg.initial_amplitude = to_double(value, line_no);
        } else if (qual == "run.initial_velocity_amplitude") {
            cfg.initial_velocity_amplitude = to_double(value, line_no);
        } else if (qual == "run.initial_radius") {
            cfg.initial_radius = to_double(value, line_no);
        } else if (qual == "experiment.tolerance") {
            cfg.tolerance = to_double(value, line_no);
        } else if (qual == "experiment.alpha") {
            cfg.alpha = to_double(value, line_no);
        } else if (qual == "experiment.horizons") {
            cfg.horizons = to_double_list(value, line_no);
        } else if (qual == "experiment.deltas") {
            cfg.deltas = to_double_list(value, line_no);
        } else if (qual == "experiment.radii") {
            cfg.radii = to_double_list(value, line_no);
        } else if (qual == "experiment.samples_per_radius") {
            cfg.samples_per_radius = static_cast<int>(to_int(value, line_no));
        } else if (qual == "experiment.ns") {
            cfg.ns = to_int_list(value, line_no);
        } else if (qual == "experiment.offsets") {
            cfg.offsets = to_double_list(value, line_no);
        } else if (qual == "experiment.resolutions") {
            cfg.resolutions = to_int_list(value, line_no);
        } else if (qual == "experiment.bound_factor") {
            cfg.bound_factor = to_double(value, line_no);
        } else if (qual == "experiment.agree_factor") {
            cfg.agree_factor = to_double(value, line_no);
        } else if (qual == "experiment.newton_tol") {
            cfg.newton_tol = to_double(value, line_no);
        } else if (qual == "experiment.newton_max_iters") {
            cfg.newton_max_iters = static_cast<int>(to_int(value, line_no));
        } else if (qual == "experiment.s_range") {
            cfg.s_range = to_double(value, line_no);
        } else if (qual == "experiment.samples") {
            cfg.samples = static_cast<int>(to_int(value, line_no));
        } else {
            throw ParseError(line_no, "unknown key '" + qual + "'");
        }
    }

    // Required keys.
    if (!dim_set) throw ValidationError("domain.dim", "required key missing");
    if (!lengths_set) throw ValidationError("domain.lengths", "required key missing");
    if (!modes_set) throw ValidationError("domain.modes", "required key missing");
    if (cfg.damping_family.empty())
        throw ValidationError("damping.family", "required key missing");
    if (cfg.nonlinearity_family.empty())
        throw ValidationError("nonlinearity.family", "required key missing");

    // Range checks on everything that has a documented constraint.
    if (cfg.dim < 1 || cfg.dim > 3) throw ValidationError("domain.dim", "must be 1, 2 or 3");
    if (static_cast<int>(cfg.lengths.size()) != cfg.dim)
        throw ValidationError("domain.lengths", "must list exactly dim values");
    for (double len : cfg.lengths)
        if (!(len > 0.0)) throw ValidationError("domain.lengths", "must be > 0");
    if (cfg.modes < 1) throw ValidationError("domain.modes", "must be >= 1");
    if (cfg.oversample < 2) throw ValidationError("domain.oversample", "must be >= 2");

    if (cfg.damping_family != "power" && cfg.damping_family != "plateau" &&
        cfg.damping_family != "constant")
        throw ValidationError("damping.family", "must be power, plateau or constant");
    if (cfg.r && !(*cfg.r >= 0.0 && *cfg.r <= 4.0))
        throw ValidationError("damping.r", "must be in [0, 4]");
    if (cfg.sigma0 && !(*cfg.sigma0 > 0.0)) throw ValidationError("damping.sigma0", "must be > 0");
    if (cfg.gamma && !(*cfg.gamma > 0.0)) throw ValidationError("damping.gamma", "must be > 0");
    if (cfg.l && !(*cfg.l > 0.0)) throw ValidationError("damping.l", "must be > 0");
    if (!(cfg.c_growth > 0.0)) throw ValidationError("damping.c_growth", "must be > 0");

    if (cfg.nonlinearity_family != "power" && cfg.nonlinearity_family != "power_minus_linear" &&
        cfg.nonlinearity_family != "zero")
        throw ValidationError("nonlinearity.family",
                              "must be power, power_minus_linear or zero");
    if (cfg.p && !(*cfg.p >= 2.0 && *cfg.p <= 7.0))
        throw ValidationError("nonlinearity.p", "must be in [2, 7]");
    if (cfg.a && !(*cfg.a >= 0.0)) throw ValidationError("nonlinearity.a", "must be >= 0");
    if (cfg.b && !(*cfg.b >= 0.0)) throw ValidationError("nonlinearity.b", "must be >= 0");
    if (cfg.K && !(*cfg.K >= 0.0)) throw ValidationError("nonlinearity.K", "must be >= 0");
    if (cfg.lambda_margin && !(*cfg.lambda_margin > 0.0))
        throw ValidationError("nonlinearity.lambda_margin", "must be > 0");

    if (!(cfg.dt > 0.0)) throw ValidationError("run.dt", "must be > 0");
    if (!(cfg.t_end > 0.0)) throw ValidationError("run.t_end", "must be > 0");
    if (cfg.stride < 1) throw ValidationError("run.stride", "must be >= 1");
    if (cfg.integrator != "rk4" && cfg.integrator != "implicit_midpoint")
        throw ValidationError("run.integrator", "must be rk4 or implicit_midpoint");
    if (cfg.initial != "zero" && cfg.initial != "mode" && cfg.initial != "random")
        throw ValidationError("run.initial", "must be zero, mode or random");
    if (cfg.samples_per_radius < 1)
        throw ValidationError("experiment.samples_per_radius", "must be >= 1");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
        throw ValidationError("experiment.alpha", "must be in (0, 1)");
    if (!(cfg.newton_tol > 0.0)) throw ValidationError("experiment.newton_tol", "must be > 0");
    if (cfg.newton_max_iters < 1)
        throw ValidationError("experiment.newton_max_iters", "must be >= 1");
    if (!(cfg.s_range > 1.0)) throw ValidationError("experiment.s_range", "must be > 1");
    if (cfg.samples < 100) throw ValidationError("experiment.samples", "must be >= 100");

    // Family-specific requirements.
    auto require = [](const std::optional<double>& v, const char* key) {
        if (!v) throw ValidationError(key, "required for the chosen family");
    };
    if (cfg.damping_family == "power") {
        require(cfg.sigma0, "damping.sigma0");
        require(cfg.r, "damping.r");
    } else if (cfg.damping_family == "plateau") {
        require(cfg.gamma, "damping.gamma");
        require(cfg.l, "damping.l");
        require(cfg.sigma0, "damping.sigma0");
        require(cfg.r, "damping.r");
    } else {
        require(cfg.gamma, "damping.gamma");
    }
    if (cfg.nonlinearity_family == "power") {
        require(cfg.a, "nonlinearity.a");
        require(cfg.p, "nonlinearity.p");
    } else if (cfg.nonlinearity_family == "power_minus_linear") {
        require(cfg.a, "nonlinearity.a");
        require(cfg.p, "nonlinearity.p");
        require(cfg.b, "nonlinearity.b");
    }
    return cfg;
}

Domain make_domain(const Config& cfg) {
    return Domain(cfg.dim, cfg.lengths, cfg.modes, cfg.oversample);
}

DampingSpec make_damping(const Config& cfg) {
    if (cfg.damping_family == "power")
        return DampingSpec::power(*cfg.sigma0, *cfg.r, cfg.c_growth);
    if (cfg.damping_family == "plateau")
        return DampingSpec::plateau(*cfg.gamma, *cfg.l, *cfg.sigma0, *cfg.r, cfg.c_growth);
    return DampingSpec::constant(*cfg.gamma, cfg.c_growth);
}

NonlinearitySpec make_nonlinearity(const Config& cfg, const Domain& domain) {
    NonlinearitySpec spec;
    if (cfg.nonlinearity_family == "power")
        spec = NonlinearitySpec::power(*cfg.a, *cfg.p, cfg.K.value_or(0.0));
    else if (cfg.nonlinearity_family == "power_minus_linear")
        spec = NonlinearitySpec::power_minus_linear(*cfg.a, *cfg.p, *cfg.b,
                                                    cfg.K.value_or(*cfg.b));
    else
        spec = NonlinearitySpec::zero();
    spec.lambda_margin = cfg.lambda_margin.value_or(domain.lambda1() / 2.0);
    spec.validate();
    return spec;
}

ModalField make_forcing(const Config& cfg, const Domain& domain) {
    ModalField phi(domain);
    if (cfg.forcing_amplitude != 0.0) {
        std::vector<int> mode = cfg.forcing_mode;
        if (mode.empty()) mode.assign(domain.dim, 1);
        if (static_cast<int>(mode.size()) != domain.dim)
            throw ValidationError("forcing.mode", "must list exactly dim indices");
        std::array<int, 3> multi{1, 1, 1};
        for (int j = 0; j < domain.dim; ++j) {
            if (mode[j] < 1 || mode[j] > domain.modes_per_dim)
                throw ValidationError("forcing.mode", "index outside [1, modes]");
            multi[j] = mode[j];
        }
        phi = ModalField::mode(domain, multi, cfg.forcing_amplitude);
    }
    return phi;
}

ModelSpec make_model(const Config& cfg) {
    const Domain domain = make_domain(cfg);
    return ModelSpec(domain, make_damping(cfg), make_nonlinearity(cfg, domain),
                     make_forcing(cfg, domain));
}

PhaseState make_initial(const Config& cfg, const ModelSpec& model) {
    const Domain& domain = model.domain();
    if (cfg.initial == "zero")
        return PhaseState(0.0, ModalField(domain), ModalField(domain));
    if (cfg.initial == "random") {
        FieldSampler sampler(cfg.seed);
        auto [u, v] = sampler.phase_sample(domain, cfg.initial_radius);
        return PhaseState(0.0, std::move(u), std::move(v));
    }
    std::vector<int> mode = cfg.initial_mode;
    if (mode.empty()) mode.assign(domain.dim, 1);
    if (static_cast<int>(mode.size()) != domain.dim)
        throw ValidationError("run.initial_mode", "must list exactly dim indices");
    std::array<int, 3> multi{1, 1, 1};
    for (int j = 0; j < domain.dim; ++j) {
        if (mode[j] < 1 || mode[j] > domain.modes_per_dim)
            throw ValidationError("run.initial_mode", "index outside [1, modes]");
        multi[j] = mode[j];
    }
    return PhaseState(0.0, ModalField::mode(domain, multi, cfg.initial_amplitude),
                      ModalField::mode(domain, multi, cfg.initial_velocity_amplitude));
}

Integrator make_integrator(const Config& cfg) {
    return cfg.integrator == "rk4" ? Integrator::rk4 : Integrator::implicit_midpoint;
}

}  // namespace wavebox
