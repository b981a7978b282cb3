// minimize.hpp — constrained minimization of the reduced energy over the
// degree-N truncation of Lambda_0 by projected gradient descent on Fock
// coefficients, plus vortex detection and lattice statistics on the
// converged field.
//
// The quadratic part of the gradient uses the exact banded x1^2/x2^2
// matrices; the quartic part synthesizes |u|^2 u on the grid and projects it
// back.  Iterates stay on the unit sphere (renormalized each step) and the
// energy decreases monotonically under Armijo backtracking.

#pragma once

#include "anisolll/energy.hpp"
#include "anisolll/fock.hpp"

#include <cstdint>
#include <vector>

namespace lll {

enum class WarmStart { Auto, Theta, TransverseGaussian, Ground, Random };

struct MinimizeOptions {
    Grid grid = Grid::centered_square(10.0, 256);
    double tol = 1e-6;               // on ||projected gradient|| / max(1, E)
    int max_iter = 4000;
    int restarts = 3;                // random perturbations around the warm start
    std::uint64_t seed = 1;
    WarmStart start = WarmStart::Auto;
    double init_step = 1.0;
    bool barzilai_borwein = true;    // spectral initial step, Armijo safeguarded
    double armijo_slope = 1e-4;
    double armijo_factor = 0.5;
    int degree_cap = kDefaultDegreeCap;
};

struct MinimizerResult {
    FockCoefficients coeffs;
    EnergyBreakdown energy;
    int iterations = 0;
    double grad_norm = 0.0;
    bool converged = false;
    std::uint64_t seed = 0;
    double el_residual = 0.0;        // || P_N(H u + g0 |u|^2 u) - lambda u ||
    double tail_ratio = 0.0;
};

MinimizerResult minimize_energy(const ReducedParams& rp, int N, const MinimizeOptions& opts);

struct Vortex {
    double x1, x2;
    int winding;
    bool bulk;
};

struct VortexSet {
    std::vector<Vortex> zeros;
    bool merged_plaquettes = false;  // adjacent nonzero-winding cells detected

    int bulk_count() const;
    std::vector<Vortex> bulk() const;
};

// Plaquette winding numbers on cells where |u| stays above
// floor_ratio * max|u|; zeros refined by Newton on the polynomial factor and
// tagged bulk when inside the margin-scaled Thomas-Fermi ellipse.
VortexSet detect_vortices(const FockCoefficients& c, const Grid& g,
                          const ReducedParams& rp, double floor_ratio = 1e-6,
                          double bulk_margin = 0.8);

struct LatticeStats {
    int n_bulk = 0;
    double nn_mean = 0.0;     // nearest-neighbor distance mean
    double nn_cv = 0.0;       // and coefficient of variation
    double sixfold = 0.0;     // bond-orientational order over Delaunay bonds
};

// Throws when fewer than 6 bulk zeros are available.
LatticeStats lattice_stats(const VortexSet& vs);

// Delaunay neighbor pairs (Bowyer-Watson); exposed for the statistics tests.
std::vector<std::pair<int, int>> delaunay_edges(const std::vector<double>& x,
                                                const std::vector<double>& y);

} // namespace lll
