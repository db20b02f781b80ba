#include "wavebox/sampling.hpp"

#include <cmath>
#include <numbers>

namespace wavebox {

double FieldSampler::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // 53-bit uniforms straight from the generator output.
    auto uniform = [this] { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; };
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

ModalField FieldSampler::spectral_envelope(const Domain& d) {
    ModalField f(d);
    const auto lam = eigenvalues(d);
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) f.coeffs[i] = normal() / lam[i];
    return f;
}

std::pair<ModalField, ModalField> FieldSampler::phase_sample(const Domain& d, double h_norm) {
    ModalField u = spectral_envelope(d);
    ModalField v = spectral_envelope(d);
    const double cur = phase_norm(u, v);
    double scale = 0.0;
    if (h_norm > 0.0 && cur > 0.0) scale = h_norm / cur;
    for (auto& c : u.coeffs) c *= scale;
    for (auto& c : v.coeffs) c *= scale;
    return {std::move(u), std::move(v)};
}

double phase_norm(const ModalField& u, const ModalField& v) {
    return std::sqrt(h1_dot(u, u) + dot(v, v));
}

}  // namespace wavebox
