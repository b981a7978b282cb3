// energy.hpp — the reduced energy
//
//   E(u) = ∫ (eps^2 x1^2 + kappa^2 x2^2)/2 |u|^2 + (g0/2) ∫ |u|^4,
//
// its Thomas-Fermi (inverted-parabola) minimizer without the holomorphy
// constraint, regime classification in kappa/eps^{1/3}, the theta-lattice
// upper-bound ansatz for the weak regime, the 1D limit problem of the strong
// regime, and the affine maps back to the physical energies.

#pragma once

#include "anisolll/fock.hpp"
#include "anisolll/grid.hpp"
#include "anisolll/theta.hpp"
#include "anisolll/trap.hpp"

namespace lll {

struct ReducedParams {
    double eps;
    double kappa;
    double g0;
};

ReducedParams reduced_params(const DerivedParams& dp);
ReducedParams reduced_params(const TrapParams& p);

struct EnergyBreakdown {
    double pot_x1;   // (eps^2/2) ∫ x1^2 |u|^2
    double pot_x2;   // (kappa^2/2) ∫ x2^2 |u|^2
    double quartic;  // (g0/2) ∫ |u|^4
    double total;
};

// Both overloads require ||u|| = 1 to 1e-8.  The coefficient overload uses
// the exact banded matrix elements for the potential terms and grid
// quadrature for the quartic term (the minimizer's energy path).
EnergyBreakdown energy_E(const ComplexField& u, const ReducedParams& rp);
EnergyBreakdown energy_E(const FockCoefficients& c, const Grid& g, const ReducedParams& rp);

// Affine chain  E(v) -> E_LLL(u) -> E_GP(u):
//   E_LLL = (2 beta2 / gamma) E,   E_GP = gp_scale * E_LLL + gp_offset.
struct GpEnergyMap {
    double lll_scale;
    double gp_scale;
    double gp_offset;

    double lll_from_reduced(double E) const { return lll_scale * E; }
    double gp_from_reduced(double E) const { return gp_scale * lll_scale * E + gp_offset; }
    double reduced_from_gp(double egp) const {
        return (egp - gp_offset) / (gp_scale * lll_scale);
    }
};
GpEnergyMap gp_energy_map(const DerivedParams& dp);

// Thomas-Fermi profile and radii.  E_TF is the closed-form energy of the
// profile, (2/3) sqrt(g0 eps kappa / pi); quadrature on density() reproduces
// it to quadrature accuracy.
struct ThomasFermi {
    double R1, R2;
    double E_TF;
    double g0, eps, kappa;

    double density(double x1, double x2) const; // |u|^2, normalized to mass 1
};
ThomasFermi thomas_fermi(const ReducedParams& rp);

enum class RegimeTag { Weak, Intermediate, Strong };

struct Regime {
    RegimeTag tag;
    double ratio; // kappa / eps^{1/3}
};
Regime classify_regime(const ReducedParams& rp, double t_low = 0.3, double t_high = 3.0);
const char* regime_name(RegimeTag t);

// Reference energy bracket for the weak regime (acceptance form):
//   lower = (2/3) sqrt(2 g0 eps kappa / pi)
//   upper = (2/3) sqrt(2 g0 b eps kappa / pi) * (1 + slack).
struct WeakBracket {
    double lower;
    double upper;
    double slack;
};
WeakBracket weak_energy_bracket(const ReducedParams& rp, double b, double slack = 0.25);

// Theta-lattice ansatz v = normalize(Pi_0(u_tau rho)) with the inverted
// parabola rho scaled by gamma(tau).  Throws in the Strong regime or when
// the grid does not cover the Thomas-Fermi support.
struct WeakAnsatz {
    FockCoefficients coeffs;
    EnergyBreakdown energy;
    double gamma_tau;
};
WeakAnsatz weak_ansatz(const ReducedParams& rp, const LatticeTau& tau, const Grid& g, int N);

// 1D limit problem J = inf { ∫ t^2 p^2 / 2 + (g0/2) ∫ p^4 : ||p||_2 = 1 }.
// Minimizer p^2(t) = (3/(4R)) (1 - t^2/R^2)_+ with R = (3 g0 / 2)^{1/3} and
// J = (3/10) (3 g0 / 2)^{2/3}; the Euler-Lagrange multiplier is R^2/2.
struct OneDProblem {
    double R;
    double J;
    double g0;

    double p(double t) const;
    double multiplier() const { return 0.5 * R * R; }
};
OneDProblem strong_limit_1d(double g0);

// Strong-regime prediction kappa^2/(8 pi) + eps^{2/3} J(g0) and the rigorous
// floor kappa^2/(8 pi).  Throws unless classify_regime() says Strong.
struct StrongPrediction {
    double floor;
    double predicted;
    double J;
};
StrongPrediction strong_asymptote(const ReducedParams& rp,
                                  double t_low = 0.3, double t_high = 3.0);

} // namespace lll
