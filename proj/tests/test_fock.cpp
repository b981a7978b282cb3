#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "anisolll/fock.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

using namespace lll;

namespace {

const double kPi = 3.14159265358979323846;

FockCoefficients random_coeffs(int N, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    FockCoefficients c(N);
    for (auto& z : c.c) z = cplx(nd(rng), nd(rng));
    c.normalize();
    return c;
}

// radial Simpson quadrature of f(r) on [0, R]
double radial_simpson(const std::function<double(double)>& f, double R, int n) {
    double h = R / n, s = f(0.0) + f(R);
    for (int i = 1; i < n; ++i) s += f(i * h) * ((i % 2) ? 4.0 : 2.0);
    return s * h / 3.0;
}

} // namespace

TEST_CASE("basis normalization against radial quadrature") {
    // ||z^k e^{-pi|z|^2/2}||^2 = k!/pi^k; the basis divides it out.
    // Oracle: 2 pi ∫ r^{2k+1} e^{-pi r^2} dr evaluated by Simpson.
    for (int k : {0, 1, 2, 5, 9}) {
        double norm_sq = 2.0 * kPi *
            radial_simpson([k](double r) { return std::pow(r, 2 * k + 1) *
                                                  std::exp(-kPi * r * r); },
                           8.0, 4000);
        double expect = std::exp(std::lgamma(k + 1.0) - k * std::log(kPi));
        CHECK(norm_sq == doctest::Approx(expect).epsilon(1e-10));
    }

    Grid g = Grid::centered_square(7.0, 384);
    CHECK(fock_basis_eval(0, g).norm2() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(fock_basis_eval(1, g).norm2() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(fock_basis_eval(12, g).norm2() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS(fock_basis_eval(kDefaultDegreeCap + 1, g));
}

TEST_CASE("grid orthonormality of the basis") {
    // <phi_j, phi_k> = delta_jk to 1e-8 on a 512^2 grid for j,k <= 32
    const int N = 32;
    Grid g = Grid::centered_square(8.0, 512);
    std::vector<std::vector<cplx>> gram(N + 1, std::vector<cplx>(N + 1, cplx(0.0)));
    std::vector<cplx> phi(N + 1);
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            double x1 = g.x1(i), x2 = g.x2(j);
            cplx z(x1, x2);
            phi[0] = std::exp(-0.5 * kPi * (x1 * x1 + x2 * x2));
            for (int k = 0; k < N; ++k)
                phi[k + 1] = phi[k] * z * std::sqrt(kPi / (k + 1));
            for (int a = 0; a <= N; ++a)
                for (int b = a; b <= N; ++b) gram[a][b] += phi[a] * std::conj(phi[b]);
        }
    }
    double w = g.cell_weight();
    double worst = 0.0;
    for (int a = 0; a <= N; ++a)
        for (int b = a; b <= N; ++b) {
            cplx v = gram[a][b] * w;
            double err = std::abs(v - (a == b ? cplx(1.0) : cplx(0.0)));
            worst = std::max(worst, err);
        }
    CHECK(worst < 1e-8);
}

TEST_CASE("parseval and synthesis/projection round trip") {
    std::mt19937_64 rng(5);
    Grid g = Grid::centered_square(7.5, 384);
    for (int t = 0; t < 5; ++t) {
        FockCoefficients c = random_coeffs(32, rng);
        ComplexField u = fock_synthesize(c, g);
        CHECK(u.norm2_sq() == doctest::Approx(c.norm_sq()).epsilon(1e-8));

        // projecting the synthesis returns the same coefficients
        FockCoefficients c2 = project_lll(u, 32);
        double err = 0.0;
        for (int k = 0; k <= 32; ++k) err = std::max(err, std::abs(c2.c[k] - c.c[k]));
        CHECK(err < 1e-8);
    }
}

TEST_CASE("projection reproduces basis vectors and contracts outsiders") {
    Grid g = Grid::centered_square(7.0, 256);
    // u = phi_3 -> c = e_3
    ComplexField u = fock_basis_eval(3, g);
    FockCoefficients c = project_lll(u, 8);
    for (int k = 0; k <= 8; ++k) {
        double expect = (k == 3) ? 1.0 : 0.0;
        CHECK(std::abs(c.c[k]) == doctest::Approx(expect).epsilon(1e-8));
    }
    ComplexField back = fock_synthesize(c, g);
    double diff = 0.0;
    for (size_t i = 0; i < u.v.size(); ++i) diff += std::norm(back.v[i] - u.v[i]);
    CHECK(std::sqrt(diff * g.cell_weight()) < 1e-8);

    // shifted Gaussian is not holomorphic-times-Gaussian: strict contraction
    ComplexField sg(g);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            double d1 = g.x1(i) - 0.9, d2 = g.x2(j) - 0.4;
            sg.at(i, j) = std::exp(-kPi * (d1 * d1 + d2 * d2));
        }
    FockCoefficients cs = project_lll(sg, 64);
    CHECK(cs.norm() < sg.norm2() * 0.999);
}

TEST_CASE("kernel oracle agrees with the Fock expansion") {
    Grid g = Grid::centered_square(4.0, 64);

    SUBCASE("reproducing kernel fixes phi_0") {
        ComplexField u = fock_basis_eval(0, g);
        ComplexField p = project_kernel_oracle(u);
        double err = 0.0;
        for (size_t i = 0; i < u.v.size(); ++i) err += std::norm(p.v[i] - u.v[i]);
        CHECK(std::sqrt(err * g.cell_weight()) < 1e-6);
    }

    SUBCASE("two implementations of the same operator") {
        // smooth compact bump times the Gaussian, not in Lambda_0
        ComplexField u(g);
        for (int i = 0; i < g.n1; ++i)
            for (int j = 0; j < g.n2; ++j) {
                double x1 = g.x1(i), x2 = g.x2(j);
                double r2 = x1 * x1 + x2 * x2;
                double bump = (r2 < 4.0) ? std::exp(-1.0 / (1.0 - r2 / 4.0)) : 0.0;
                u.at(i, j) = bump * std::exp(-0.5 * kPi * r2) * cplx(1.0, 0.3 * x1);
            }
        ComplexField pk = project_kernel_oracle(u);
        ComplexField pf = fock_synthesize(project_lll(u, 80), g);
        double err = 0.0, ref = 0.0;
        for (size_t i = 0; i < u.v.size(); ++i) {
            err += std::norm(pk.v[i] - pf.v[i]);
            ref += std::norm(pk.v[i]);
        }
        CHECK(std::sqrt(err / ref) < 1e-6);

        // idempotence of the kernel path
        ComplexField pk2 = project_kernel_oracle(pk);
        double err2 = 0.0;
        for (size_t i = 0; i < pk.v.size(); ++i) err2 += std::norm(pk2.v[i] - pk.v[i]);
        CHECK(std::sqrt(err2 / ref) < 1e-6);
    }

    SUBCASE("size guard") {
        Grid big = Grid::centered_square(4.0, 128);
        CHECK_THROWS(project_kernel_oracle(ComplexField(big)));
    }
}

TEST_CASE("projector is idempotent and self-adjoint on grids") {
    std::mt19937_64 rng(17);
    Grid g = Grid::centered_square(7.0, 256);
    std::normal_distribution<double> nd;
    for (int t = 0; t < 4; ++t) {
        // random smooth fields built from random coefficients plus a
        // non-holomorphic contamination
        FockCoefficients a = random_coeffs(20, rng), b = random_coeffs(20, rng);
        ComplexField u = fock_synthesize(a, g), v = fock_synthesize(b, g);
        for (int i = 0; i < g.n1; ++i)
            for (int j = 0; j < g.n2; ++j) {
                double x1 = g.x1(i), x2 = g.x2(j);
                double gexp = std::exp(-0.5 * kPi * (x1 * x1 + x2 * x2));
                u.at(i, j) += 0.5 * cplx(x1 - x2, 0.2) * gexp;
                v.at(i, j) += 0.3 * cplx(x2, x1 * x2) * gexp;
            }
        int N = 48;
        ComplexField pu = fock_synthesize(project_lll(u, N), g);
        ComplexField pv = fock_synthesize(project_lll(v, N), g);
        ComplexField ppu = fock_synthesize(project_lll(pu, N), g);

        double idem = 0.0, ref = 0.0;
        for (size_t i = 0; i < pu.v.size(); ++i) {
            idem += std::norm(ppu.v[i] - pu.v[i]);
            ref += std::norm(pu.v[i]);
        }
        CHECK(std::sqrt(idem / ref) < 1e-8);
        CHECK(std::abs(inner(pu, v) - inner(u, pv)) < 1e-8);
    }
}

TEST_CASE("Carlen identity") {
    Grid g = Grid::centered_square(7.0, 512);

    SUBCASE("ground state, closed form") {
        // |u| = e^{-pi r^2/2}: ∫ |grad|u||^2 = pi^2 ∫ r^2 e^{-pi r^2} = pi
        double oracle = kPi * kPi * 2.0 * kPi *
            radial_simpson([](double r) { return r * r * r * std::exp(-kPi * r * r); },
                           7.0, 4000);
        CHECK(oracle == doctest::Approx(kPi).epsilon(1e-8));

        FockCoefficients c(0);
        c.c[0] = 1.0;
        CarlenCheck cc = carlen_check(c, g);
        CHECK(cc.rhs == doctest::Approx(kPi).epsilon(1e-6));
        CHECK(cc.lhs == doctest::Approx(cc.rhs).epsilon(0.01));
    }

    SUBCASE("vortex state with masked core") {
        FockCoefficients c(5);
        c.c[5] = 1.0;
        CarlenCheck cc = carlen_check(c, g);
        CHECK(cc.lhs == doctest::Approx(cc.rhs).epsilon(0.01));
        CHECK(cc.excluded_mass < 1e-4);

        // refinement halves the defect
        Grid g2 = Grid::centered_square(7.0, 1024);
        CarlenCheck cc2 = carlen_check(c, g2);
        CHECK(std::abs(cc2.lhs - cc2.rhs) < std::abs(cc.lhs - cc.rhs));
    }

    SUBCASE("random members of Lambda_0") {
        std::mt19937_64 rng(29);
        for (int t = 0; t < 6; ++t) {
            FockCoefficients c = random_coeffs(16, rng);
            CarlenCheck cc = carlen_check(c, g);
            CHECK(cc.lhs == doctest::Approx(cc.rhs).epsilon(0.02));
        }
    }
}

TEST_CASE("x2^2 quotient: banded matrix, grid, and the lower bound") {
    Grid g = Grid::centered_square(7.0, 256);

    SUBCASE("banded elements match quadrature") {
        // <x_a^2 phi_j, phi_k> by direct grid quadrature, j,k <= 10
        Grid fine = Grid::centered_square(7.5, 512);
        for (int axis : {1, 2}) {
            for (int j = 0; j <= 10; ++j) {
                ComplexField pj = fock_basis_eval(j, fine);
                for (int k = j; k <= 10; ++k) {
                    ComplexField pk = fock_basis_eval(k, fine);
                    cplx acc(0.0);
                    for (int a = 0; a < fine.n1; ++a)
                        for (int b = 0; b < fine.n2; ++b) {
                            double x = (axis == 1) ? fine.x1(a) : fine.x2(b);
                            acc += x * x * pj.at(a, b) * std::conj(pk.at(a, b));
                        }
                    acc *= fine.cell_weight();
                    CHECK(std::abs(acc - fock_xsq_element(j, k, axis)) < 1e-10);
                }
            }
        }
    }

    SUBCASE("ground state second moment") {
        FockCoefficients c(0);
        c.c[0] = 1.0;
        CHECK(x2sq_rayleigh(c, g) == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-8));
        CHECK(xsq_expectation(c, 2) == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-14));
    }

    SUBCASE("squeezed minimizing sequence approaches 1/(4 pi) from above") {
        // <x2^2> = 1/(2 pi (1+s)) for the squeezed family, both routes
        double prev = 1.0;
        for (double s : {0.0, 0.5, 0.8, 0.97}) {
            int N = (s > 0.9) ? 800 : 160; // coefficient tail decays like s^{2m}
            FockCoefficients c = squeezed_state_coefficients(s, N);
            double banded = xsq_expectation(c, 2) / c.norm_sq();
            double analytic = 1.0 / (2.0 * kPi * (1.0 + s));
            CHECK(banded == doctest::Approx(analytic).epsilon(s > 0.9 ? 1e-6 : 1e-8));
            CHECK(banded < prev);
            CHECK(banded > 1.0 / (4.0 * kPi) - 1e-4);
            prev = banded;
        }
        // final point lies within 2% of the bound
        CHECK(prev < 1.02 / (4.0 * kPi));

        // grid route agrees where the grid resolves the state
        FockCoefficients c = squeezed_state_coefficients(0.5, 160);
        Grid wide = Grid::centered_square(9.0, 384);
        CHECK(x2sq_rayleigh(c, wide) ==
              doctest::Approx(1.0 / (2.0 * kPi * 1.5)).epsilon(1e-6));
    }

    SUBCASE("random states never dip below the bound") {
        std::mt19937_64 rng(31);
        double lo = 1e9;
        for (int t = 0; t < 200; ++t) {
            FockCoefficients c = random_coeffs(24, rng);
            lo = std::min(lo, x2sq_rayleigh(c, g));
        }
        CHECK(lo > 1.0 / (4.0 * kPi) - 1e-4);
    }

    SUBCASE("Wick shift on transform images of 1D Gaussians") {
        // W maps the width-lambda Gaussian to the squeezed state with
        // s = (lambda-1)/(lambda+1); then <x2^2> = 1/(4 pi lambda) + 1/(4 pi)
        for (double lambda : {1.0, 2.0, 5.0}) {
            double s = (lambda - 1.0) / (lambda + 1.0);
            FockCoefficients c = squeezed_state_coefficients(s, 240);
            double got = xsq_expectation(c, 2) / c.norm_sq();
            double expect = 1.0 / (4.0 * kPi * lambda) + 1.0 / (4.0 * kPi);
            CHECK(got == doctest::Approx(expect).epsilon(1e-10));
        }
    }
}
