#ifndef WAVEBOX_MODEL_HPP
#define WAVEBOX_MODEL_HPP

// Damping coefficient sigma, nonlinearity f, their primitives Sigma and F,
// the truncation family g_n/G_n, checks of the standing growth/dissipativity
// hypotheses on a sampled range, and the exponent-region classifier.

#include <string>
#include <vector>

namespace wavebox {

enum class DampingFamily { power, plateau, constant };

// sigma(s) families:
//   power:    sigma = sigma0 (1 + |s|^r)
//   plateau:  sigma = gamma on [-l, l], then gamma + sigma0 (|s|-l)^(r+1)/(r+1)
//   constant: sigma = gamma
// Declared exponents (r, m) are inputs the checker validates, not estimates.
struct DampingSpec {
    DampingFamily family = DampingFamily::constant;
    double sigma0 = 0.5;   // lower-bound constant in sigma >= sigma0 (1 + |s|^r)
    double r = 0.0;        // growth exponent in the lower bound, [0, 4]
    double m = 0.0;        // growth exponent of sigma', [r, 4]
    double gamma = 1.0;    // plateau value
    double l = 1.0;        // plateau half-width
    double c_growth = 10.0;  // declared constant for the |sigma'| and |f''| bounds

    static DampingSpec power(double sigma0, double r, double c_growth = 10.0);
    static DampingSpec plateau(double gamma, double l, double sigma0, double r,
                               double c_growth = 10.0);
    static DampingSpec constant(double gamma, double c_growth = 10.0);

    void validate() const;  // throws ValidationError
};

double sigma_eval(const DampingSpec& spec, double s);
double sigma_prime(const DampingSpec& spec, double s);
double Sigma_primitive(const DampingSpec& spec, double s);

enum class NonlinearityFamily { power, power_minus_linear, zero };

// f(s) families:
//   power:              f = a |s|^(p-1) s
//   power_minus_linear: f = a |s|^(p-1) s - b s
//   zero:               f = 0
// K is the declared monotonicity-defect constant (f' >= -K); lambda_margin is
// the dissipativity margin compared against lambda_1 when a model is built.
struct NonlinearitySpec {
    NonlinearityFamily family = NonlinearityFamily::zero;
    double p = 2.0;
    double a = 0.0;
    double b = 0.0;
    double K = 0.0;
    double lambda_margin = 0.5;

    static NonlinearitySpec power(double a, double p, double K = 0.0);
    static NonlinearitySpec power_minus_linear(double a, double p, double b, double K);
    static NonlinearitySpec zero();

    void validate() const;
};

double f_eval(const NonlinearitySpec& spec, double s);
double f_prime(const NonlinearitySpec& spec, double s);
double f_second(const NonlinearitySpec& spec, double s);
double F_primitive(const NonlinearitySpec& spec, double s);

// g(s) = f(s) + K s and its primitive G; level-n truncation freezes g outside
// [-n, n].  G - G_n >= 0 always.
double cutoff_g(int n, const NonlinearitySpec& spec, double s);
double cutoff_G(int n, const NonlinearitySpec& spec, double s);
double G_primitive(const NonlinearitySpec& spec, double s);

enum class ExponentRegion { RegionI, RegionII, Outside };

struct RegionResult {
    ExponentRegion region;
    double k;  // min(r, 4 - m)
};

// Region I: m <= 2 and p <= 3.  Region II: p <= k + 3 otherwise.
// Throws InvalidExponents outside 0 <= r <= m <= 4, p >= 2.
RegionResult exponent_region(double m, double r, double p);

const char* region_name(ExponentRegion region);

struct AssumptionCheck {
    std::string name;      // "S1", "S2", "F1", "F2", "F3"
    bool pass = true;
    double witness_s = 0.0;  // sample point with the smallest margin
    double lhs = 0.0;        // inequality sides evaluated at witness_s
    double rhs = 0.0;
    double margin = 0.0;     // min over samples of (admissible side - violating side)
    double min_c = 0.0;      // smallest constant making the c-dependent bounds hold
};

struct AssumptionReport {
    std::vector<AssumptionCheck> checks;
    double k = 0.0;
    ExponentRegion region = ExponentRegion::Outside;

    bool all_pass() const;
    bool passes(const std::string& name) const;
    const AssumptionCheck& find(const std::string& name) const;
};

// Evaluates S1, S2, F1, F2, F3 on a log-spaced grid over [-s_range, s_range].
// F2 is sampled for |s| >= s_range/2 only (it is an asymptotic condition).
// Throws InvalidRange unless s_range > 1 and samples >= 100.
AssumptionReport check_assumptions(const DampingSpec& damping, const NonlinearitySpec& nonlin,
                                   double s_range, int samples);

}  // namespace wavebox

#endif
