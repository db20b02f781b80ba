#ifndef WAVEBOX_SPECTRAL_HPP
#define WAVEBOX_SPECTRAL_HPP

// Dirichlet eigenbasis of -Laplace on a box (d = 1..3), modal <-> nodal
// transforms, quadrature and the Sobolev/Lebesgue norms used everywhere else.
//
// The basis is the tensor product of normalized sines
//     e_i(x) = prod_j sqrt(2/L_j) sin(i_j pi x_j / L_j),  i_j = 1..N,
// with eigenvalues lambda_i = sum_j (pi i_j / L_j)^2, stored in lexicographic
// multi-index order.  The nodal grid is the midpoint grid with oversample*N
// points per dimension; on it, quadrature of products of two basis functions
// is exact, so the round trip modal -> nodal -> modal is exact up to rounding.

#include <array>
#include <cstdint>
#include <vector>

namespace wavebox {

struct Domain {
    int dim = 1;                         // spatial dimension, 1..3
    std::array<double, 3> lengths{};     // side lengths L_j, first `dim` used
    int modes_per_dim = 1;               // N
    int oversample = 4;                  // nodal grid has oversample*N points per dim

    Domain() = default;
    Domain(int dim_, const std::vector<double>& lengths_, int modes, int oversample_ = 4);

    std::int64_t modes_total() const;    // N^d
    int grid_per_dim() const { return oversample * modes_per_dim; }
    std::int64_t grid_total() const;
    double lambda1() const;              // sum_j (pi/L_j)^2
    double cell_volume() const;          // prod_j L_j / G_j

    bool operator==(const Domain& o) const;
};

// Eigenvalues lambda_i in lexicographic multi-index order.
std::vector<double> eigenvalues(const Domain& d);

// Flat index of a 1-based multi-index (lexicographic, first index slowest).
std::int64_t flat_index(const Domain& d, const std::array<int, 3>& multi);

struct ModalField {
    Domain domain;
    std::vector<double> coeffs;          // size N^d, lexicographic order

    ModalField() = default;
    explicit ModalField(const Domain& d);

    bool all_finite() const;
    // Single-mode convenience: amplitude on mode `multi` (1-based per axis).
    static ModalField mode(const Domain& d, const std::array<int, 3>& multi, double amplitude);
};

struct NodalField {
    Domain domain;
    std::vector<double> values;          // size (oversample*N)^d, same ordering scheme

    NodalField() = default;
    explicit NodalField(const Domain& d);
    bool all_finite() const;
};

enum class Norm { L2, H1, H2, Hminus1 };

// Precomputed per-axis sine matrices for one Domain.  Pure; safe to share.
class TransformPlan {
  public:
    explicit TransformPlan(const Domain& d);

    const Domain& domain() const { return dom_; }

    NodalField to_nodal(const ModalField& f) const;
    // Quadrature projection <g, e_i> for modes with every i_j <= n_keep;
    // higher coefficients are zero.  Exact for band-limited g.
    ModalField to_modal(const NodalField& g, int n_keep) const;

    // Reference O((N*G)^d) summation; the contract the fast path must match.
    NodalField to_nodal_direct(const ModalField& f) const;
    ModalField to_modal_direct(const NodalField& g, int n_keep) const;

  private:
    Domain dom_;
    // synth_[j][k*N + i]: value of sqrt(2/L_j) sin((i+1) pi x_k / L_j)
    std::array<std::vector<double>, 3> synth_;
    std::vector<double> lambda_;

  public:
    const std::vector<double>& eigenvalues() const { return lambda_; }
};

// One-shot convenience wrappers (build a plan internally).
NodalField modal_to_nodal(const ModalField& f);
ModalField nodal_to_modal(const NodalField& g, int n_keep);

double norm(const ModalField& f, Norm which);
// Composite midpoint quadrature of (int |u|^q)^(1/q) on the oversampled grid.
double lebesgue_norm(const ModalField& f, double q);
double lebesgue_norm(const TransformPlan& plan, const ModalField& f, double q);

// L2 inner product (modal Parseval sum).
double dot(const ModalField& a, const ModalField& b);
// H1 inner product <grad a, grad b> = sum lambda_i a_i b_i.
double h1_dot(const ModalField& a, const ModalField& b);

// Quadrature of a nodal field: sum values * cell_volume.
double integrate(const NodalField& g);

// Coefficient map a_i -> -lambda_i a_i.
ModalField laplacian(const ModalField& f);

// Zero-pad / truncate to a domain with the same lengths but different N.
ModalField embed(const ModalField& f, const Domain& target);

}  // namespace wavebox

#endif
