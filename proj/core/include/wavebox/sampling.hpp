#ifndef WAVEBOX_SAMPLING_HPP
#define WAVEBOX_SAMPLING_HPP

// Seeded random phase-space samples with the spectral envelope
// a_i ~ lambda_i^{-1} N(0,1): H^1-regular and stable under resolution
// changes.  Normals come from Box-Muller over the raw mt19937_64 stream so
// identical seeds give identical fields on every platform.

#include <cstdint>
#include <random>
#include <utility>

#include "wavebox/spectral.hpp"

namespace wavebox {

class FieldSampler {
  public:
    explicit FieldSampler(std::uint64_t seed) : rng_(seed) {}

    double normal();

    // Modal field with coefficients lambda_i^{-1} * N(0,1).
    ModalField spectral_envelope(const Domain& d);

    // Pair (u, v) with the envelope above, rescaled to |(u,v)|_H = h_norm
    // (zero fields if h_norm == 0).
    std::pair<ModalField, ModalField> phase_sample(const Domain& d, double h_norm);

  private:
    std::mt19937_64 rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// |(u,v)|_H = sqrt(|grad u|^2 + |v|^2), the phase-space norm.
double phase_norm(const ModalField& u, const ModalField& v);

}  // namespace wavebox

#endif
