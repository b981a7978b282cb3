// metaplectic.hpp — the unitary operator M quantizing the symplectic
// reduction map, applied to gridded fields as a Fourier-multiplier pipeline:
//
//   (M v)(x) = (l1 l2)^{-1/2} e^{2 i pi d ((l1 l2)^{-1} - c) x1 x2}
//              (e^{2 i pi d^{-1} D1 D2} v)(x1/l1, x2/l2),
//
// plus direct samplers for the anisotropic lowest-Landau-level functions and
// the annihilator residual that measures membership in that space.
//
// M is fixed only up to a global phase; compare phase-invariant quantities.

#pragma once

#include "anisolll/grid.hpp"
#include "anisolll/trap.hpp"

#include <vector>

namespace lll {

// Polynomial stand-in for the entire factor F; trailing zeros are trimmed.
struct EntirePoly {
    std::vector<cplx> coeffs; // a_0 .. a_m

    EntirePoly() : coeffs{cplx(0.0)} {}
    explicit EntirePoly(std::vector<cplx> a);
    static EntirePoly one() { return EntirePoly({cplx(1.0)}); }
    static EntirePoly monomial(int k);

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    cplx eval(cplx w) const;
};

// Forward/backward transforms with the continuous convention
// u_hat(xi) = ∫ e^{-2 i pi x.xi} u(x) dx; grids must be powers of two.
ComplexField fourier_forward(const ComplexField& u);
ComplexField fourier_inverse(const ComplexField& uhat);

// D_axis = partial_axis / (2 i pi) by spectral differentiation.
ComplexField spectral_derivative(const ComplexField& u, int axis);

// Apply M.  The multiplier step is exactly norm-preserving; the dilation
// resamples a spectrally oversampled copy with bicubic interpolation.
// Throws when the grid is not a power of two or when the field carries
// boundary mass above `boundary_tol` (relative to max |v|).
ComplexField apply_metaplectic(const DerivedParams& dp, const ComplexField& v,
                               int oversample = 4, double boundary_tol = 1e-8);

// Apply M^* (the inverse pipeline).
ComplexField apply_metaplectic_adjoint(const DerivedParams& dp, const ComplexField& u,
                                       int oversample = 4, double boundary_tol = 1e-8);

// Sample F(x1 + i beta2 x2) * Gaussian * unimodular phase on the grid.
// Throws if 2 alpha - nu^2 is not safely positive or deg F > degree_cap.
ComplexField anisotropic_lll_sample(const DerivedParams& dp, const EntirePoly& F,
                                    const Grid& g, int degree_cap = 64);

// || L u ||_2 / || u ||_2 with
//   L = (l2 c d - d/l1) x1 + l2 D2 - i mu2 (l1/d) D1 - i mu2 c l1 x2,
// derivatives by 4th-order central differences; norms over the interior.
double annihilator_residual(const DerivedParams& dp, const ComplexField& u);

// <q^w u, u> for the trap form with parameters (omega, nu), derivatives
// spectral.  Used by the Segal-correspondence checks.
double qw_expectation(double omega, double nu, const ComplexField& u);

// <(q o chi)^w v, v> = ∫ (mu1^2 y1^2 + mu2^2 y2^2)|v|^2 + ||D1 v||^2 + ||D2 v||^2.
double qw_chi_expectation(const DerivedParams& dp, const ComplexField& v);

} // namespace lll
