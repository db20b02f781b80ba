#include "wavebox/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wavebox/errors.hpp"

namespace wavebox {

namespace {
double sgn(double s) { return s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0); }
}

DampingSpec DampingSpec::power(double sigma0, double r, double c_growth) {
    DampingSpec d;
    d.family = DampingFamily::power;
    d.sigma0 = sigma0;
    d.r = r;
    d.m = r;  // sigma' grows like |s|^(r-1)
    d.c_growth = c_growth;
    d.validate();
    return d;
}

DampingSpec DampingSpec::plateau(double gamma, double l, double sigma0, double r,
                                 double c_growth) {
    DampingSpec d;
    d.family = DampingFamily::plateau;
    d.gamma = gamma;
    d.l = l;
    d.sigma0 = sigma0;
    d.r = r;
    d.m = std::min(r + 1.0, 4.0);  // ramp derivative grows like |s|^r
    d.c_growth = c_growth;
    d.validate();
    return d;
}

DampingSpec DampingSpec::constant(double gamma, double c_growth) {
    DampingSpec d;
    d.family = DampingFamily::constant;
    d.gamma = gamma;
    d.sigma0 = gamma / 2.0;  // S1 with r = 0 reads sigma >= 2 sigma0
    d.r = 0.0;
    d.m = 0.0;
    d.c_growth = c_growth;
    d.validate();
    return d;
}

void DampingSpec::validate() const {
    if (!(sigma0 > 0.0)) throw ValidationError("damping.sigma0", "must be > 0");
    if (!(r >= 0.0 && r <= 4.0)) throw ValidationError("damping.r", "must be in [0, 4]");
    if (!(m >= r && m <= 4.0)) throw ValidationError("damping.m", "must be in [r, 4]");
    if (!(c_growth > 0.0)) throw ValidationError("damping.c_growth", "must be > 0");
    if (family != DampingFamily::power) {
        if (!(gamma > 0.0)) throw ValidationError("damping.gamma", "must be > 0");
    }
    if (family == DampingFamily::plateau) {
        if (!(l > 0.0)) throw ValidationError("damping.l", "must be > 0");
    }
}

double sigma_eval(const DampingSpec& spec, double s) {
    switch (spec.family) {
        case DampingFamily::power:
            return spec.sigma0 * (1.0 + std::pow(std::abs(s), spec.r));
        case DampingFamily::plateau: {
            const double y = std::abs(s) - spec.l;
            if (y <= 0.0) return spec.gamma;
            return spec.gamma + spec.sigma0 * std::pow(y, spec.r + 1.0) / (spec.r + 1.0);
        }
        case DampingFamily::constant: return spec.gamma;
    }
    return 0.0;
}

double sigma_prime(const DampingSpec& spec, double s) {
    switch (spec.family) {
        case DampingFamily::power: {
            if (spec.r == 0.0 || s == 0.0) return 0.0;
            return spec.sigma0 * spec.r * std::pow(std::abs(s), spec.r - 1.0) * sgn(s);
        }
        case DampingFamily::plateau: {
            const double y = std::abs(s) - spec.l;
            if (y <= 0.0) return 0.0;
            return spec.sigma0 * std::pow(y, spec.r) * sgn(s);
        }
        case DampingFamily::constant: return 0.0;
    }
    return 0.0;
}

double Sigma_primitive(const DampingSpec& spec, double s) {
    switch (spec.family) {
        case DampingFamily::power:
            return spec.sigma0 * (s + sgn(s) * std::pow(std::abs(s), spec.r + 1.0) / (spec.r + 1.0));
        case DampingFamily::plateau: {
            const double y = std::abs(s) - spec.l;
            if (y <= 0.0) return spec.gamma * s;
            const double ramp =
                spec.sigma0 * std::pow(y, spec.r + 2.0) / ((spec.r + 1.0) * (spec.r + 2.0));
            return spec.gamma * s + sgn(s) * ramp;
        }
        case DampingFamily::constant: return spec.gamma * s;
    }
    return 0.0;
}

NonlinearitySpec NonlinearitySpec::power(double a, double p, double K) {
    NonlinearitySpec f;
    f.family = NonlinearityFamily::power;
    f.a = a;
    f.p = p;
    f.K = K;
    f.validate();
    return f;
}

NonlinearitySpec NonlinearitySpec::power_minus_linear(double a, double p, double b, double K) {
    NonlinearitySpec f;
    f.family = NonlinearityFamily::power_minus_linear;
    f.a = a;
    f.p = p;
    f.b = b;
    f.K = std::max(K, b);  // f' >= -b, so the declared defect cannot be smaller
    f.validate();
    return f;
}

NonlinearitySpec NonlinearitySpec::zero() {
    NonlinearitySpec f;
    f.family = NonlinearityFamily::zero;
    f.validate();
    return f;
}

void NonlinearitySpec::validate() const {
    if (!(p >= 2.0 && p <= 7.0)) throw ValidationError("nonlinearity.p", "must be in [2, 7]");
    if (!(a >= 0.0)) throw ValidationError("nonlinearity.a", "must be >= 0");
    if (!(b >= 0.0)) throw ValidationError("nonlinearity.b", "must be >= 0");
    if (!(K >= 0.0)) throw ValidationError("nonlinearity.K", "must be >= 0");
    if (!(lambda_margin > 0.0)) throw ValidationError("nonlinearity.lambda_margin", "must be > 0");
}

double f_eval(const NonlinearitySpec& spec, double s) {
    switch (spec.family) {
        case NonlinearityFamily::power: return spec.a * std::pow(std::abs(s), spec.p - 1.0) * s;
        case NonlinearityFamily::power_minus_linear:
            return spec.a * std::pow(std::abs(s), spec.p - 1.0) * s - spec.b * s;
        case NonlinearityFamily::zero: return 0.0;
    }
    return 0.0;
}

double f_prime(const NonlinearitySpec& spec, double s) {
    switch (spec.family) {
        case NonlinearityFamily::power:
            return spec.a * spec.p * std::pow(std::abs(s), spec.p - 1.0);
        case NonlinearityFamily::power_minus_linear:
            return spec.a * spec.p * std::pow(std::abs(s), spec.p - 1.0) - spec.b;
        case NonlinearityFamily::zero: return 0.0;
    }
    return 0.0;
}

double f_second(const NonlinearitySpec& spec, double s) {
    switch (spec.family) {
        case NonlinearityFamily::power:
        case NonlinearityFamily::power_minus_linear:
            return spec.a * spec.p * (spec.p - 1.0) * std::pow(std::abs(s), spec.p - 2.0) * sgn(s);
        case NonlinearityFamily::zero: return 0.0;
    }
    return 0.0;
}

double F_primitive(const NonlinearitySpec& spec, double s) {
    switch (spec.family) {
        case NonlinearityFamily::power:
            return spec.a * std::pow(std::abs(s), spec.p + 1.0) / (spec.p + 1.0);
        case NonlinearityFamily::power_minus_linear:
            return spec.a * std::pow(std::abs(s), spec.p + 1.0) / (spec.p + 1.0) -
                   spec.b * s * s / 2.0;
        case NonlinearityFamily::zero: return 0.0;
    }
    return 0.0;
}

double G_primitive(const NonlinearitySpec& spec, double s) {
    return F_primitive(spec, s) + spec.K * s * s / 2.0;
}

namespace {
double g_eval(const NonlinearitySpec& spec, double s) { return f_eval(spec, s) + spec.K * s; }
}

double cutoff_g(int n, const NonlinearitySpec& spec, double s) {
    if (n < 1) throw InvalidRange("cutoff_g: n must be >= 1");
    const double nn = static_cast<double>(n);
    if (s >= nn) return g_eval(spec, nn);
    if (s <= -nn) return g_eval(spec, -nn);
    return g_eval(spec, s);
}

double cutoff_G(int n, const NonlinearitySpec& spec, double s) {
    if (n < 1) throw InvalidRange("cutoff_G: n must be >= 1");
    const double nn = static_cast<double>(n);
    if (s > nn) return G_primitive(spec, nn) + g_eval(spec, nn) * (s - nn);
    if (s < -nn) return G_primitive(spec, -nn) + g_eval(spec, -nn) * (s + nn);
    return G_primitive(spec, s);
}

RegionResult exponent_region(double m, double r, double p) {
    if (!(r >= 0.0 && r <= 4.0 && m >= 0.0 && m <= 4.0))
        throw InvalidExponents("exponent_region: r, m must lie in [0, 4]");
    if (r > m) throw InvalidExponents("exponent_region: r must not exceed m");
    if (!(p >= 2.0)) throw InvalidExponents("exponent_region: p must be >= 2");

    const double k = std::min(r, 4.0 - m);
    if (m <= 2.0 && p <= 3.0) return {ExponentRegion::RegionI, k};
    if (p <= k + 3.0) return {ExponentRegion::RegionII, k};
    return {ExponentRegion::Outside, k};
}

const char* region_name(ExponentRegion region) {
    switch (region) {
        case ExponentRegion::RegionI: return "I";
        case ExponentRegion::RegionII: return "II";
        case ExponentRegion::Outside: return "Outside";
    }
    return "?";
}

bool AssumptionReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

bool AssumptionReport::passes(const std::string& name) const { return find(name).pass; }

const AssumptionCheck& AssumptionReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return c;
    throw std::out_of_range("AssumptionReport: no check named " + name);
}

namespace {

// Log-spaced symmetric sample grid over [-s_range, s_range] plus the origin.
std::vector<double> sample_grid(double s_range, int samples) {
    const int half = samples / 2;
    const double s_min = std::min(1e-3, s_range * 1e-4);
    std::vector<double> grid;
    grid.reserve(2 * half + 1);
    for (int i = 0; i < half; ++i) {
        const double t = half == 1 ? 1.0 : static_cast<double>(i) / (half - 1);
        const double s = s_min * std::pow(s_range / s_min, t);
        grid.push_back(s);
        grid.push_back(-s);
    }
    grid.push_back(0.0);
    std::sort(grid.begin(), grid.end());
    return grid;
}

}  // namespace

AssumptionReport check_assumptions(const DampingSpec& damping, const NonlinearitySpec& nonlin,
                                   double s_range, int samples) {
    if (!(s_range > 1.0)) throw InvalidRange("check_assumptions: s_range must be > 1");
    if (samples < 100) throw InvalidRange("check_assumptions: samples must be >= 100");

    const auto grid = sample_grid(s_range, samples);
    const double tol = 1e-9;
    AssumptionReport report;

    {  // S1: sigma(s) >= sigma0 (1 + |s|^r)
        AssumptionCheck c{.name = "S1"};
        c.margin = std::numeric_limits<double>::infinity();
        for (double s : grid) {
            const double lhs = sigma_eval(damping, s);
            const double rhs = damping.sigma0 * (1.0 + std::pow(std::abs(s), damping.r));
            const double margin = lhs - rhs;
            if (margin < c.margin) {
                c.margin = margin;
                c.witness_s = s;
                c.lhs = lhs;
                c.rhs = rhs;
            }
        }
        c.pass = c.margin >= -tol * std::max(1.0, std::abs(c.rhs));
        report.checks.push_back(c);
    }
    {  // S2: |sigma'(s)| <= c m |s|^(m-1) for |s| >= 1
        AssumptionCheck c{.name = "S2"};
        c.margin = std::numeric_limits<double>::infinity();
        for (double s : grid) {
            if (std::abs(s) < 1.0) continue;
            const double lhs = std::abs(sigma_prime(damping, s));
            const double envelope =
                damping.m == 0.0 ? 0.0 : damping.m * std::pow(std::abs(s), damping.m - 1.0);
            if (envelope > 0.0) c.min_c = std::max(c.min_c, lhs / envelope);
            const double rhs = damping.c_growth * envelope;
            const double margin = rhs - lhs;
            if (margin < c.margin) {
                c.margin = margin;
                c.witness_s = s;
                c.lhs = lhs;
                c.rhs = rhs;
            }
        }
        c.pass = c.margin >= -tol * std::max(1.0, std::abs(c.rhs));
        report.checks.push_back(c);
    }
    {  // F1: |f''(s)| <= c (1 + |s|^(p-2))
        AssumptionCheck c{.name = "F1"};
        c.margin = std::numeric_limits<double>::infinity();
        for (double s : grid) {
            const double lhs = std::abs(f_second(nonlin, s));
            const double envelope = 1.0 + std::pow(std::abs(s), nonlin.p - 2.0);
            c.min_c = std::max(c.min_c, lhs / envelope);
            const double rhs = damping.c_growth * envelope;
            const double margin = rhs - lhs;
            if (margin < c.margin) {
                c.margin = margin;
                c.witness_s = s;
                c.lhs = lhs;
                c.rhs = rhs;
            }
        }
        c.pass = c.margin >= -tol * std::max(1.0, std::abs(c.rhs));
        report.checks.push_back(c);
    }
    {  // F2: f(s)/s > -lambda_margin for |s| >= s_range/2 (sampled liminf proxy)
        AssumptionCheck c{.name = "F2"};
        c.margin = std::numeric_limits<double>::infinity();
        for (double s : grid) {
            if (std::abs(s) < s_range / 2.0) continue;
            const double lhs = f_eval(nonlin, s) / s;
            const double rhs = -nonlin.lambda_margin;
            const double margin = lhs - rhs;
            if (margin < c.margin) {
                c.margin = margin;
                c.witness_s = s;
                c.lhs = lhs;
                c.rhs = rhs;
            }
        }
        c.pass = c.margin > 0.0;
        report.checks.push_back(c);
    }
    {  // F3: f'(s) >= -K
        AssumptionCheck c{.name = "F3"};
        c.margin = std::numeric_limits<double>::infinity();
        for (double s : grid) {
            const double lhs = f_prime(nonlin, s);
            const double rhs = -nonlin.K;
            const double margin = lhs - rhs;
            if (margin < c.margin) {
                c.margin = margin;
                c.witness_s = s;
                c.lhs = lhs;
                c.rhs = rhs;
            }
        }
        c.pass = c.margin >= -tol * std::max(1.0, nonlin.K);
        report.checks.push_back(c);
    }

    const auto rr = exponent_region(damping.m, damping.r, nonlin.p);
    report.k = rr.k;
    report.region = rr.region;
    return report;
}

}  // namespace wavebox
