// fock.hpp — the Bargmann-type space Lambda_0 of holomorphic-times-Gaussian
// fields, its orthonormal basis
//
//     phi_k(z) = (pi^{k/2} / sqrt(k!)) z^k e^{-pi |z|^2 / 2},   z = x1 + i x2,
//
// the orthogonal projection onto Lambda_0 (Fock expansion and direct kernel
// quadrature), and the two scalar diagnostics used by the energy analysis:
// Carlen's gradient identity and the x2^2 Rayleigh quotient.
//
// The normalization constant comes from the polar Gaussian moment
// ||z^k e^{-pi|z|^2/2}||_2^2 = k!/pi^k; it is evaluated through lgamma so
// large degrees stay finite.

#pragma once

#include "anisolll/grid.hpp"

#include <vector>

namespace lll {

// Truncated coefficient vector: u = sum_{k=0..N} c[k] phi_k.
struct FockCoefficients {
    std::vector<cplx> c;

    FockCoefficients() = default;
    explicit FockCoefficients(int N) : c(static_cast<size_t>(N) + 1, cplx(0.0)) {}

    int degree() const { return static_cast<int>(c.size()) - 1; }
    double norm_sq() const;     // Parseval: ||u||^2 = sum |c_k|^2
    double norm() const;
    void normalize();
    // |c_N| / max_k |c_k|; large values mean energy is leaking past the cap
    double tail_ratio() const;
};

// Default stability cap on basis degree; evaluation is log-domain so the cap
// is configurable upward where a scenario genuinely needs it.
inline constexpr int kDefaultDegreeCap = 512;

ComplexField fock_basis_eval(int k, const Grid& g, int degree_cap = kDefaultDegreeCap);

ComplexField fock_synthesize(const FockCoefficients& c, const Grid& g);

// Orthogonal projection onto the degree-N truncation of Lambda_0:
// c_k = <u, phi_k> by grid quadrature.
FockCoefficients project_lll(const ComplexField& u, int N,
                             int degree_cap = kDefaultDegreeCap);

// Direct quadrature of the projection kernel
//   (Pi_0 u)(x) = ∫ e^{-pi|x-y|^2/2 + i pi (x2 y1 - y2 x1)} u(y) dy.
// O(M^2); guarded to grids of at most `max_cells` total samples.
ComplexField project_kernel_oracle(const ComplexField& u, int max_cells = 64 * 64);

struct CarlenCheck {
    double lhs;            // ∫ |grad |u||^2, central differences, cores masked
    double rhs;            // pi ∫ |u|^2
    double excluded_mass;  // |u|^2 mass of the masked cells
};
CarlenCheck carlen_check(const FockCoefficients& c, const Grid& g,
                         double core_floor = 1e-6);

// ∫ x2^2 |u|^2 / ||u||^2 by grid quadrature; bounded below by 1/(4 pi) on
// Lambda_0.
double x2sq_rayleigh(const FockCoefficients& c, const Grid& g);

// Matrix element <x_axis^2 phi_k, phi_j> in the Fock basis (axis 1 or 2).
// Banded: nonzero only for |j - k| in {0, 2}.
double fock_xsq_element(int j, int k, int axis);

// y = X_axis c with X the banded x_axis^2 matrix.
FockCoefficients apply_xsq(const FockCoefficients& c, int axis);

double xsq_expectation(const FockCoefficients& c, int axis); // <X c, c>

// Coefficients of the normalized squeezed Gaussian exp(pi s z^2 / 2) e^{-pi|z|^2/2},
// s in [0, 1).  Only even degrees are populated; as s -> 1 these states form
// the minimizing (Weyl) sequence of the x2^2 quotient with
// <x2^2> = 1/(2 pi (1 + s)).
FockCoefficients squeezed_state_coefficients(double s, int N);

} // namespace lll
