// trap.hpp — rotating-trap quadratic form, its normal-mode frequencies,
// the derived scalar parameters, and the explicit symplectic reduction map.
//
// Phase-space convention: vectors are ordered (x1, x2, xi1, xi2) and the
// standard symplectic form is sigma = [[0, I2], [-I2, 0]].

#pragma once

#include <Eigen/Dense>

namespace lll {

using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;

// Dimensionless trap inputs with omega^2 + nu^2 + eps^2 = 1.
//   omega : rotation ratio Omega/omega_perp, in (0, 1]
//   nu    : trap anisotropy, >= 0
//   eps   : residual confinement, >= 0
//   g     : interaction coupling, > 0
struct TrapParams {
    double omega;
    double nu;
    double eps;
    double g;

    // Validating constructor; requires the constraint to hold to 1e-12 and
    // omega >= omega_floor (the reduction divides by omega).
    TrapParams(double omega_, double nu_, double eps_, double g_,
               double omega_floor = 1e-3);

    // Solve the third parameter from the other two.
    static TrapParams from_omega_nu(double omega, double nu, double g,
                                    double omega_floor = 1e-3);
    static TrapParams from_omega_eps(double omega, double eps, double g,
                                     double omega_floor = 1e-3);
    static TrapParams from_nu_eps(double nu, double eps, double g,
                                  double omega_floor = 1e-3);
};

// Scalar parameters derived from a TrapParams (closed forms; all
// dimensionless).  gamma is stored as gamma_par to avoid clashing with the
// lattice functional gamma(tau).
struct DerivedParams {
    TrapParams trap;

    double alpha;      // sqrt(nu^4 + 4 omega^2)
    double mu1, mu2;   // normal-mode frequencies, 0 <= mu1 <= mu2
    double beta1, beta2;
    double gamma_par;  // 2 alpha / omega
    double lambda1, lambda2;
    double c, d;       // generating-function scalars, c*d = (alpha+nu^2)/(2 omega)
    double kappa1;     // transverse confinement scale in the LLL
    double kappa;      // kappa1 / beta2
    double g0, g1;     // rescaled couplings
};

// The 4x4 symmetric matrix of the trap quadratic form
//   q = xi1^2 + xi2^2 + (1-nu^2) x1^2 + (1+nu^2) x2^2 - 2 omega (x1 xi2 - x2 xi1).
struct QuadraticForm4 {
    Mat4 Q;
};

// Symplectic reduction map chi with its inverse and the (A, B, C)
// generating-function factorization chi = [[I,0],[A,I]] [[B^-1,0],[0,B^T]] [[I,-C],[0,I]].
struct SymplecticMap {
    Mat4 chi;
    Mat4 chi_inv;
    Mat2 A, B, C;
};

struct WilliamsonFrequencies {
    double mu1, mu2;
};

// Standard block symplectic matrix.
Mat4 symplectic_sigma();

// Raw form builder; does not need the full constraint (Q is independent of eps).
Mat4 trap_quadratic_form(double omega, double nu);

QuadraticForm4 build_trap_quadratic_form(const TrapParams& p);

// Route (i): closed forms mu^2 = 1 + omega^2 -/+ alpha for a trap form.
WilliamsonFrequencies williamson_closed_route(double omega, double nu);

// Route (ii): imaginary parts of the eigenvalues of F = sigma*Q for any Q.
// Magnitudes below ~1e-8 * scale(Q) are reported as 0 (the eigensolver only
// resolves a defective zero eigenvalue to sqrt(machine epsilon)).  Throws
// std::domain_error if F has eigenvalues off the imaginary axis.
WilliamsonFrequencies williamson_eigensolver_route(const QuadraticForm4& qf);

// Both routes when Q matches the trap pattern (they must agree to
// max(xcheck_tol, eigensolver noise floor); the closed values are returned),
// route (ii) alone otherwise.
WilliamsonFrequencies williamson_frequencies(const QuadraticForm4& qf,
                                             double xcheck_tol = 1e-10);

DerivedParams derive_parameters(const TrapParams& p);

// Requires mu1 > 0 (i.e. eps > 0).  Throws std::domain_error when the
// B block would be singular.
SymplecticMap build_reduction_map(const DerivedParams& dp);

// Quadratic generating function S(x,eta) of the (A,B,C) factorization.
double generating_function(const SymplecticMap& m, const Vec2& x, const Vec2& eta);

// Max-norm residual of chi(dS/deta, eta) = (x, dS/dx) at one sample point.
double generating_relation_residual(const SymplecticMap& m, const Vec2& x, const Vec2& eta);

// The four scaled linear forms whose squares sum to q.  forms[i] holds the
// coefficients of (x1, x2, xi1, xi2); q(X) = sum_i coeff[i] * (forms[i].X)^2.
struct MasterForms {
    double coeff[4];
    Vec4 form[4];
};
MasterForms master_forms(const DerivedParams& dp);

// Poisson bracket of two linear forms a.(x,xi), b.(x,xi):
//   {a, b} = sum_j da/dxi_j db/dx_j - da/dx_j db/dxi_j.
double poisson_bracket(const Vec4& a, const Vec4& b);

} // namespace lll
