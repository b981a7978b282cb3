// grid.hpp — rectangular sampling grids and complex field samples with
// uniform midpoint quadrature.

#pragma once

#include <complex>
#include <vector>

namespace lll {

using cplx = std::complex<double>;

// Uniform rectangular grid.  Sample i along an axis sits at
// min + (i + 1/2) h, so a symmetric box never places a sample on the origin
// or the boundary.
struct Grid {
    double x1_min, x1_max;
    int n1;
    double x2_min, x2_max;
    int n2;

    static Grid centered(double half1, int n1, double half2, int n2) {
        return Grid{-half1, half1, n1, -half2, half2, n2};
    }
    static Grid centered_square(double half, int n) {
        return centered(half, n, half, n);
    }

    double h1() const { return (x1_max - x1_min) / n1; }
    double h2() const { return (x2_max - x2_min) / n2; }
    double x1(int i) const { return x1_min + (i + 0.5) * h1(); }
    double x2(int j) const { return x2_min + (j + 0.5) * h2(); }
    double cell_weight() const { return h1() * h2(); }
    int size() const { return n1 * n2; }
    bool same_as(const Grid& o) const;
};

bool is_power_of_two(int n);

// Complex samples on a grid; values are row-major with x2 fastest:
// v[i1 * n2 + i2] = u(x1(i1), x2(i2)).
struct ComplexField {
    Grid grid;
    std::vector<cplx> v;

    explicit ComplexField(const Grid& g) : grid(g), v(g.size(), cplx(0.0)) {}

    cplx& at(int i1, int i2) { return v[static_cast<size_t>(i1) * grid.n2 + i2]; }
    const cplx& at(int i1, int i2) const {
        return v[static_cast<size_t>(i1) * grid.n2 + i2];
    }

    double norm2_sq() const;              // quadrature of |u|^2
    double norm2() const;
    double max_abs() const;
    // ratio of the largest |u| on the boundary ring to max|u|
    double boundary_ratio() const;
    void scale(cplx s);
    void normalize();                     // L2 normalization, throws on zero field
};

cplx inner(const ComplexField& a, const ComplexField& b);   // <a, b> = ∫ a conj(b)
double quartic_integral(const ComplexField& u);             // ∫ |u|^4

} // namespace lll
