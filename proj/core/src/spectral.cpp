#include "wavebox/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wavebox/errors.hpp"

namespace wavebox {

namespace {
constexpr double kPi = std::numbers::pi;
}

Domain::Domain(int dim_, const std::vector<double>& lengths_, int modes, int oversample_)
    : dim(dim_), modes_per_dim(modes), oversample(oversample_) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("Domain: dim must be 1, 2 or 3");
    if (static_cast<int>(lengths_.size()) != dim)
        throw std::invalid_argument("Domain: lengths size must equal dim");
    if (modes < 1) throw std::invalid_argument("Domain: modes_per_dim must be >= 1");
    if (oversample < 2) throw std::invalid_argument("Domain: oversample must be >= 2");
    for (int j = 0; j < dim; ++j) {
        if (!(lengths_[j] > 0.0)) throw std::invalid_argument("Domain: lengths must be > 0");
        lengths[j] = lengths_[j];
    }
}

std::int64_t Domain::modes_total() const {
    std::int64_t n = 1;
    for (int j = 0; j < dim; ++j) n *= modes_per_dim;
    return n;
}

std::int64_t Domain::grid_total() const {
    std::int64_t n = 1;
    for (int j = 0; j < dim; ++j) n *= grid_per_dim();
    return n;
}

double Domain::lambda1() const {
    double s = 0.0;
    for (int j = 0; j < dim; ++j) s += (kPi / lengths[j]) * (kPi / lengths[j]);
    return s;
}

double Domain::cell_volume() const {
    double w = 1.0;
    for (int j = 0; j < dim; ++j) w *= lengths[j] / grid_per_dim();
    return w;
}

bool Domain::operator==(const Domain& o) const {
    if (dim != o.dim || modes_per_dim != o.modes_per_dim || oversample != o.oversample)
        return false;
    for (int j = 0; j < dim; ++j)
        if (lengths[j] != o.lengths[j]) return false;
    return true;
}

std::vector<double> eigenvalues(const Domain& d) {
    const int N = d.modes_per_dim;
    std::vector<double> axis(static_cast<std::size_t>(d.dim) * N);
    for (int j = 0; j < d.dim; ++j)
        for (int i = 0; i < N; ++i) {
            const double w = (i + 1) * kPi / d.lengths[j];
            axis[static_cast<std::size_t>(j) * N + i] = w * w;
        }
    std::vector<double> lam(static_cast<std::size_t>(d.modes_total()));
    std::array<int, 3> idx{0, 0, 0};  // 0-based
    for (std::size_t f = 0; f < lam.size(); ++f) {
        double s = 0.0;
        for (int j = 0; j < d.dim; ++j) s += axis[static_cast<std::size_t>(j) * N + idx[j]];
        lam[f] = s;
        for (int j = d.dim - 1; j >= 0; --j) {  // lexicographic: last index fastest
            if (++idx[j] < N) break;
            idx[j] = 0;
        }
    }
    return lam;
}

std::int64_t flat_index(const Domain& d, const std::array<int, 3>& multi) {
    std::int64_t f = 0;
    for (int j = 0; j < d.dim; ++j) {
        const int i = multi[j];
        if (i < 1 || i > d.modes_per_dim) throw std::out_of_range("flat_index: mode out of range");
        f = f * d.modes_per_dim + (i - 1);
    }
    return f;
}

ModalField::ModalField(const Domain& d)
    : domain(d), coeffs(static_cast<std::size_t>(d.modes_total()), 0.0) {}

bool ModalField::all_finite() const {
    for (double c : coeffs)
        if (!std::isfinite(c)) return false;
    return true;
}

ModalField ModalField::mode(const Domain& d, const std::array<int, 3>& multi, double amplitude) {
    ModalField f(d);
    f.coeffs[static_cast<std::size_t>(flat_index(d, multi))] = amplitude;
    return f;
}

NodalField::NodalField(const Domain& d)
    : domain(d), values(static_cast<std::size_t>(d.grid_total()), 0.0) {}

bool NodalField::all_finite() const {
    for (double v : values)
        if (!std::isfinite(v)) return false;
    return true;
}

TransformPlan::TransformPlan(const Domain& d) : dom_(d), lambda_(wavebox::eigenvalues(d)) {
    const int N = d.modes_per_dim;
    const int G = d.grid_per_dim();
    for (int j = 0; j < d.dim; ++j) {
        synth_[j].resize(static_cast<std::size_t>(G) * N);
        const double L = d.lengths[j];
        const double scale = std::sqrt(2.0 / L);
        for (int k = 0; k < G; ++k) {
            const double x = (k + 0.5) * L / G;  // midpoint grid
            for (int i = 0; i < N; ++i)
                synth_[j][static_cast<std::size_t>(k) * N + i] =
                    scale * std::sin((i + 1) * kPi * x / L);
        }
    }
}

namespace {

// Contract one axis of a row-major tensor with a dense matrix:
// out[a, m, b] = sum_k mat(m, k) * in[a, k, b], with mat accessed through
// `entry(m, k)`.  Shapes are tiny (<= 256), so plain loops are fine.
template <typename Entry>
void contract_axis(const std::vector<double>& in, std::vector<double>& out,
                   std::int64_t outer, std::int64_t in_len, std::int64_t out_len,
                   std::int64_t inner, Entry entry) {
    out.assign(static_cast<std::size_t>(outer * out_len * inner), 0.0);
    for (std::int64_t a = 0; a < outer; ++a) {
        const double* src = in.data() + a * in_len * inner;
        double* dst = out.data() + a * out_len * inner;
        for (std::int64_t m = 0; m < out_len; ++m)
            for (std::int64_t k = 0; k < in_len; ++k) {
                const double w = entry(m, k);
                if (w == 0.0) continue;
                const double* s = src + k * inner;
                double* t = dst + m * inner;
                for (std::int64_t b = 0; b < inner; ++b) t[b] += w * s[b];
            }
    }
}

}  // namespace

NodalField TransformPlan::to_nodal(const ModalField& f) const {
    const int N = dom_.modes_per_dim;
    const int G = dom_.grid_per_dim();
    std::vector<double> cur = f.coeffs, next;
    // Shape starts as (N,...,N); axis j is expanded N -> G in order.
    for (int j = 0; j < dom_.dim; ++j) {
        std::int64_t outer = 1, inner = 1;
        for (int a = 0; a < j; ++a) outer *= G;
        for (int a = j + 1; a < dom_.dim; ++a) inner *= N;
        const double* mat = synth_[j].data();
        contract_axis(cur, next, outer, N, G, inner,
                      [mat, N](std::int64_t m, std::int64_t k) { return mat[m * N + k]; });
        cur.swap(next);
    }
    NodalField g(dom_);
    g.values = std::move(cur);
    return g;
}

ModalField TransformPlan::to_modal(const NodalField& g, int n_keep) const {
    const int N = dom_.modes_per_dim;
    const int G = dom_.grid_per_dim();
    if (n_keep < 0 || n_keep > N) throw std::invalid_argument("to_modal: n_keep must be in [0, N]");
    std::vector<double> cur = g.values, next;
    for (int j = 0; j < dom_.dim; ++j) {
        std::int64_t outer = 1, inner = 1;
        for (int a = 0; a < j; ++a) outer *= N;
        for (int a = j + 1; a < dom_.dim; ++a) inner *= G;
        const double* mat = synth_[j].data();
        const double h = dom_.lengths[j] / G;  // midpoint weight
        contract_axis(cur, next, outer, G, N, inner,
                      [mat, N, h, n_keep](std::int64_t m, std::int64_t k) {
                          return m < n_keep ? h * mat[k * N + m] : 0.0;
                      });
        cur.swap(next);
    }
    ModalField f(dom_);
    f.coeffs = std::move(cur);
    return f;
}

NodalField TransformPlan::to_nodal_direct(const ModalField& f) const {
    const int N = dom_.modes_per_dim;
    const int G = dom_.grid_per_dim();
    NodalField g(dom_);
    std::array<int, 3> kv{0, 0, 0};
    for (std::size_t p = 0; p < g.values.size(); ++p) {
        double acc = 0.0;
        std::array<int, 3> iv{0, 0, 0};
        for (std::size_t q = 0; q < f.coeffs.size(); ++q) {
            double phi = 1.0;
            for (int j = 0; j < dom_.dim; ++j)
                phi *= synth_[j][static_cast<std::size_t>(kv[j]) * N + iv[j]];
            acc += f.coeffs[q] * phi;
            for (int j = dom_.dim - 1; j >= 0; --j) {
                if (++iv[j] < N) break;
                iv[j] = 0;
            }
        }
        g.values[p] = acc;
        for (int j = dom_.dim - 1; j >= 0; --j) {
            if (++kv[j] < G) break;
            kv[j] = 0;
        }
    }
    return g;
}

ModalField TransformPlan::to_modal_direct(const NodalField& g, int n_keep) const {
    const int N = dom_.modes_per_dim;
    const int G = dom_.grid_per_dim();
    const double w = dom_.cell_volume();
    ModalField f(dom_);
    std::array<int, 3> iv{0, 0, 0};
    for (std::size_t q = 0; q < f.coeffs.size(); ++q) {
        bool kept = true;
        for (int j = 0; j < dom_.dim; ++j) kept = kept && (iv[j] < n_keep);
        if (kept) {
            double acc = 0.0;
            std::array<int, 3> kv{0, 0, 0};
            for (std::size_t p = 0; p < g.values.size(); ++p) {
                double phi = 1.0;
                for (int j = 0; j < dom_.dim; ++j)
                    phi *= synth_[j][static_cast<std::size_t>(kv[j]) * N + iv[j]];
                acc += g.values[p] * phi;
                for (int j = dom_.dim - 1; j >= 0; --j) {
                    if (++kv[j] < G) break;
                    kv[j] = 0;
                }
            }
            f.coeffs[q] = acc * w;
        }
        for (int j = dom_.dim - 1; j >= 0; --j) {
            if (++iv[j] < N) break;
            iv[j] = 0;
        }
    }
    return f;
}

NodalField modal_to_nodal(const ModalField& f) { return TransformPlan(f.domain).to_nodal(f); }

ModalField nodal_to_modal(const NodalField& g, int n_keep) {
    return TransformPlan(g.domain).to_modal(g, n_keep);
}

double norm(const ModalField& f, Norm which) {
    const auto lam = eigenvalues(f.domain);
    double s = 0.0;
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
        const double a2 = f.coeffs[i] * f.coeffs[i];
        switch (which) {
            case Norm::L2: s += a2; break;
            case Norm::H1: s += lam[i] * a2; break;
            case Norm::H2: s += lam[i] * lam[i] * a2; break;
            case Norm::Hminus1: s += a2 / lam[i]; break;
        }
    }
    return std::sqrt(s);
}

double lebesgue_norm(const TransformPlan& plan, const ModalField& f, double q) {
    if (!(q >= 1.0)) throw InvalidRange("lebesgue_norm: q must be >= 1");
    const NodalField g = plan.to_nodal(f);
    double s = 0.0;
    for (double v : g.values) s += std::pow(std::abs(v), q);
    return std::pow(s * f.domain.cell_volume(), 1.0 / q);
}

double lebesgue_norm(const ModalField& f, double q) {
    return lebesgue_norm(TransformPlan(f.domain), f, q);
}

double dot(const ModalField& a, const ModalField& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) s += a.coeffs[i] * b.coeffs[i];
    return s;
}

double h1_dot(const ModalField& a, const ModalField& b) {
    const auto lam = eigenvalues(a.domain);
    double s = 0.0;
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) s += lam[i] * a.coeffs[i] * b.coeffs[i];
    return s;
}

double integrate(const NodalField& g) {
    double s = 0.0;
    for (double v : g.values) s += v;
    return s * g.domain.cell_volume();
}

ModalField laplacian(const ModalField& f) {
    const auto lam = eigenvalues(f.domain);
    ModalField out = f;
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] *= -lam[i];
    return out;
}

ModalField embed(const ModalField& f, const Domain& target) {
    if (f.domain.dim != target.dim) throw std::invalid_argument("embed: dimension mismatch");
    for (int j = 0; j < target.dim; ++j)
        if (f.domain.lengths[j] != target.lengths[j])
            throw std::invalid_argument("embed: side lengths differ");
    ModalField out(target);
    const int Ns = f.domain.modes_per_dim;
    const int Nt = target.modes_per_dim;
    const int keep = Ns < Nt ? Ns : Nt;
    std::array<int, 3> iv{0, 0, 0};
    for (std::size_t q = 0; q < f.coeffs.size(); ++q) {
        bool inside = true;
        for (int j = 0; j < target.dim; ++j) inside = inside && (iv[j] < keep);
        if (inside) {
            std::int64_t t = 0;
            for (int j = 0; j < target.dim; ++j) t = t * Nt + iv[j];
            out.coeffs[static_cast<std::size_t>(t)] = f.coeffs[q];
        }
        for (int j = target.dim - 1; j >= 0; --j) {
            if (++iv[j] < Ns) break;
            iv[j] = 0;
        }
    }
    return out;
}

}  // namespace wavebox
