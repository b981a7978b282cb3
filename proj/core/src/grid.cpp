#include "anisolll/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace lll {

bool Grid::same_as(const Grid& o) const {
    return n1 == o.n1 && n2 == o.n2 && x1_min == o.x1_min && x1_max == o.x1_max &&
           x2_min == o.x2_min && x2_max == o.x2_max;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

double ComplexField::norm2_sq() const {
    double s = 0.0;
    for (const cplx& z : v) s += std::norm(z);
    return s * grid.cell_weight();
}

double ComplexField::norm2() const { return std::sqrt(norm2_sq()); }

double ComplexField::max_abs() const {
    double m = 0.0;
    for (const cplx& z : v) m = std::max(m, std::abs(z));
    return m;
}

double ComplexField::boundary_ratio() const {
    double m = max_abs();
    if (m == 0.0) return 0.0;
    double b = 0.0;
    for (int i = 0; i < grid.n1; ++i) {
        b = std::max(b, std::abs(at(i, 0)));
        b = std::max(b, std::abs(at(i, grid.n2 - 1)));
    }
    for (int j = 0; j < grid.n2; ++j) {
        b = std::max(b, std::abs(at(0, j)));
        b = std::max(b, std::abs(at(grid.n1 - 1, j)));
    }
    return b / m;
}

void ComplexField::scale(cplx s) {
    for (cplx& z : v) z *= s;
}

void ComplexField::normalize() {
    double n = norm2();
    if (n == 0.0) throw std::domain_error("ComplexField::normalize: zero field");
    scale(1.0 / n);
}

cplx inner(const ComplexField& a, const ComplexField& b) {
    if (!a.grid.same_as(b.grid))
        throw std::invalid_argument("inner: grids differ");
    cplx s(0.0);
    for (size_t i = 0; i < a.v.size(); ++i) s += a.v[i] * std::conj(b.v[i]);
    return s * a.grid.cell_weight();
}

double quartic_integral(const ComplexField& u) {
    double s = 0.0;
    for (const cplx& z : u.v) {
        double a = std::norm(z);
        s += a * a;
    }
    return s * u.grid.cell_weight();
}

} // namespace lll
