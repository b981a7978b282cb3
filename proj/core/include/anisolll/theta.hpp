// theta.hpp — Jacobi theta function, the lattice wavefunction u_tau, the
// Abrikosov lattice functional gamma(tau), its minimization over lattice
// shapes, and the Euler-Lagrange residual of the lattice state.
//
// Conventions:
//   Theta(z, tau) = (1/i) sum_n (-1)^n e^{i pi tau (n+1/2)^2} e^{(2n+1) i pi z}
//   u_tau(x1,x2)  = e^{pi/2 (z^2 - |z|^2)} Theta(sqrt(tau_I) z, tau), z = x1+i x2
//
// |u_tau| is periodic over the scaled lattice (1/sqrt(tau_I)) (Z + tau Z);
// each fundamental cell has unit area and carries exactly one zero.

#pragma once

#include "anisolll/fock.hpp"
#include "anisolll/grid.hpp"

#include <complex>

namespace lll {

struct LatticeTau {
    cplx tau;

    explicit LatticeTau(cplx t);
    double re() const { return tau.real(); }
    double im() const { return tau.imag(); }

    static LatticeTau hexagonal();   // e^{2 i pi / 3}
    static LatticeTau square();      // i
};

// Theta with analytic argument reduction; accurate for any z.
cplx theta_eval(cplx z, const LatticeTau& tau);

cplx u_tau_eval(double x1, double x2, const LatticeTau& tau);
ComplexField u_tau_field(const Grid& g, const LatticeTau& tau);

// gamma(tau) as the lattice sum  sum_{(j,k)} e^{-(pi/tau_I) |j tau - k|^2}.
double gamma_lattice_sum(const LatticeTau& tau);

// gamma(tau) as the cell-average quotient  avg|u|^4 / (avg|u|^2)^2 by
// quadrature over one fundamental cell (n x n midpoint samples).
double gamma_cell_average(const LatticeTau& tau, int n = 96);

// Euler-Lagrange multiplier of the lattice state: gamma(tau)/sqrt(2 tau_I).
double lambda_tau(const LatticeTau& tau);

struct TauOptimum {
    LatticeTau tau;
    double gamma;
    int evaluations;
};

// Coarse scan of the fundamental domain (|tau| >= 1, |Re tau| <= 1/2)
// followed by golden-section refinement on each coordinate.  Throws on
// non-convergence.
TauOptimum optimize_tau(int grid_n = 48, int refine_steps = 48);

// Same scan restricted to the imaginary axis Re tau = 0.
TauOptimum optimize_tau_imaginary_axis(int grid_n = 128, int refine_steps = 48);

// Residual || Pi_0(|w u_tau|^2 w u_tau) - lambda (w^3 u_tau) || / || w^3 u_tau ||
// on the core of a smooth plateau window of `window_cells` lattice cells
// across.  lambda defaults to lambda_tau(tau); pass lambda_override >= 0 to
// probe the scale (0 gives a residual of order lambda_tau, i.e. ~1).
// N = 0 picks the Fock degree from the window radius.
double abrikosov_el_residual(const LatticeTau& tau, int window_cells = 8,
                             int grid_n = 384, int N = 0,
                             double lambda_override = -1.0);

} // namespace lll
