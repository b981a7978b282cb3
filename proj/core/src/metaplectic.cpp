#include "anisolll/metaplectic.hpp"

#include <fftw3.h>

#include <cmath>
#include <stdexcept>

namespace lll {

namespace {

const double kPi = 3.14159265358979323846;

double freq(int k, int n, double h) {
    int kk = (k < n / 2) ? k : k - n;
    return double(kk) / (n * h);
}

void require_fft_grid(const Grid& g) {
    if (!is_power_of_two(g.n1) || !is_power_of_two(g.n2) || g.n1 < 8 || g.n2 < 8)
        throw std::invalid_argument(
            "transform pipeline requires power-of-two grid sizes >= 8");
}

void fft2_raw(std::vector<cplx>& data, int n1, int n2, int sign) {
    fftw_plan plan = fftw_plan_dft_2d(
        n1, n2, reinterpret_cast<fftw_complex*>(data.data()),
        reinterpret_cast<fftw_complex*>(data.data()),
        sign, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

} // namespace

EntirePoly::EntirePoly(std::vector<cplx> a) : coeffs(std::move(a)) {
    while (coeffs.size() > 1 && coeffs.back() == cplx(0.0)) coeffs.pop_back();
    if (coeffs.empty()) coeffs.push_back(cplx(0.0));
}

EntirePoly EntirePoly::monomial(int k) {
    std::vector<cplx> a(static_cast<size_t>(k) + 1, cplx(0.0));
    a.back() = 1.0;
    return EntirePoly(std::move(a));
}

cplx EntirePoly::eval(cplx w) const {
    cplx acc(0.0);
    for (size_t i = coeffs.size(); i-- > 0;) acc = acc * w + coeffs[i];
    return acc;
}

ComplexField fourier_forward(const ComplexField& u) {
    require_fft_grid(u.grid);
    const Grid& g = u.grid;
    ComplexField out = u;
    fft2_raw(out.v, g.n1, g.n2, FFTW_FORWARD);
    const double h1 = g.h1(), h2 = g.h2();
    const double x10 = g.x1(0), x20 = g.x2(0);
    for (int k1 = 0; k1 < g.n1; ++k1) {
        double xi1 = freq(k1, g.n1, h1);
        for (int k2 = 0; k2 < g.n2; ++k2) {
            double xi2 = freq(k2, g.n2, h2);
            double ph = -2.0 * kPi * (x10 * xi1 + x20 * xi2);
            out.at(k1, k2) *= h1 * h2 * cplx(std::cos(ph), std::sin(ph));
        }
    }
    return out;
}

ComplexField fourier_inverse(const ComplexField& uhat) {
    require_fft_grid(uhat.grid);
    const Grid& g = uhat.grid;
    ComplexField out = uhat;
    const double h1 = g.h1(), h2 = g.h2();
    const double x10 = g.x1(0), x20 = g.x2(0);
    for (int k1 = 0; k1 < g.n1; ++k1) {
        double xi1 = freq(k1, g.n1, h1);
        for (int k2 = 0; k2 < g.n2; ++k2) {
            double xi2 = freq(k2, g.n2, h2);
            double ph = 2.0 * kPi * (x10 * xi1 + x20 * xi2);
            out.at(k1, k2) *= cplx(std::cos(ph), std::sin(ph));
        }
    }
    fft2_raw(out.v, g.n1, g.n2, FFTW_BACKWARD);
    const double scale = 1.0 / (g.n1 * h1 * g.n2 * h2);
    for (cplx& z : out.v) z *= scale;
    return out;
}

ComplexField spectral_derivative(const ComplexField& u, int axis) {
    if (axis != 1 && axis != 2)
        throw std::invalid_argument("spectral_derivative: axis must be 1 or 2");
    ComplexField uh = fourier_forward(u);
    const Grid& g = u.grid;
    for (int k1 = 0; k1 < g.n1; ++k1) {
        double xi1 = freq(k1, g.n1, g.h1());
        for (int k2 = 0; k2 < g.n2; ++k2) {
            double xi2 = freq(k2, g.n2, g.h2());
            uh.at(k1, k2) *= (axis == 1 ? xi1 : xi2);
        }
    }
    return fourier_inverse(uh);
}

namespace {

// zero-pad a spectrum by `os` in both axes and inverse-transform; the result
// samples the band-limited interpolant on an os-times finer grid over the
// same box
ComplexField oversampled_inverse(const ComplexField& uhat, int os) {
    const Grid& g = uhat.grid;
    Grid fine{g.x1_min, g.x1_max, g.n1 * os, g.x2_min, g.x2_max, g.n2 * os};
    ComplexField big(fine);
    for (int k1 = 0; k1 < g.n1; ++k1) {
        int kk1 = (k1 < g.n1 / 2) ? k1 : k1 - g.n1;
        int b1 = (kk1 + fine.n1) % fine.n1;
        for (int k2 = 0; k2 < g.n2; ++k2) {
            int kk2 = (k2 < g.n2 / 2) ? k2 : k2 - g.n2;
            int b2 = (kk2 + fine.n2) % fine.n2;
            big.at(b1, b2) = uhat.at(k1, k2);
        }
    }
    return fourier_inverse(big);
}

double cubic_kernel(double t) {
    // Catmull-Rom
    t = std::abs(t);
    if (t < 1.0) return 1.0 + t * t * (-2.5 + 1.5 * t);
    if (t < 2.0) return 2.0 - t * (4.0 - t * (2.5 - 0.5 * t));
    return 0.0;
}

cplx bicubic_sample(const ComplexField& f, double X1, double X2) {
    const Grid& g = f.grid;
    double t1 = (X1 - g.x1_min) / g.h1() - 0.5;
    double t2 = (X2 - g.x2_min) / g.h2() - 0.5;
    int i0 = static_cast<int>(std::floor(t1));
    int j0 = static_cast<int>(std::floor(t2));
    if (i0 < 1 || i0 + 2 >= g.n1 || j0 < 1 || j0 + 2 >= g.n2) return cplx(0.0);
    double f1 = t1 - i0, f2 = t2 - j0;
    double w1[4], w2[4];
    for (int s = -1; s <= 2; ++s) {
        w1[s + 1] = cubic_kernel(f1 - s);
        w2[s + 1] = cubic_kernel(f2 - s);
    }
    cplx acc(0.0);
    for (int a = 0; a < 4; ++a) {
        cplx row(0.0);
        const cplx* base = &f.at(i0 - 1 + a, j0 - 1);
        for (int b = 0; b < 4; ++b) row += w2[b] * base[b];
        acc += w1[a] * row;
    }
    return acc;
}

void require_resolved(const ComplexField& v, double tol) {
    if (v.boundary_ratio() > tol)
        throw std::domain_error(
            "metaplectic pipeline: field carries boundary mass above tolerance "
            "(enlarge the grid)");
}

} // namespace

ComplexField apply_metaplectic(const DerivedParams& dp, const ComplexField& v,
                               int oversample, double boundary_tol) {
    require_fft_grid(v.grid);
    require_resolved(v, boundary_tol);
    const Grid& g = v.grid;

    ComplexField vh = fourier_forward(v);
    const double inv_d = 1.0 / dp.d;
    for (int k1 = 0; k1 < g.n1; ++k1) {
        double xi1 = freq(k1, g.n1, g.h1());
        for (int k2 = 0; k2 < g.n2; ++k2) {
            double xi2 = freq(k2, g.n2, g.h2());
            double ph = 2.0 * kPi * inv_d * xi1 * xi2;
            vh.at(k1, k2) *= cplx(std::cos(ph), std::sin(ph));
        }
    }
    ComplexField w = oversampled_inverse(vh, oversample);

    ComplexField out(g);
    const double l1 = dp.lambda1, l2 = dp.lambda2;
    const double amp = 1.0 / std::sqrt(l1 * l2);
    const double pcoef = 2.0 * kPi * dp.d * (1.0 / (l1 * l2) - dp.c);
    for (int i = 0; i < g.n1; ++i) {
        double x1 = g.x1(i);
        for (int j = 0; j < g.n2; ++j) {
            double x2 = g.x2(j);
            cplx val = bicubic_sample(w, x1 / l1, x2 / l2);
            double ph = pcoef * x1 * x2;
            out.at(i, j) = amp * val * cplx(std::cos(ph), std::sin(ph));
        }
    }
    return out;
}

ComplexField apply_metaplectic_adjoint(const DerivedParams& dp, const ComplexField& u,
                                       int oversample, double boundary_tol) {
    require_fft_grid(u.grid);
    require_resolved(u, boundary_tol);
    const Grid& g = u.grid;

    // undo phase and dilation: t(y) = sqrt(l1 l2) * [u e^{-i phase}](l1 y1, l2 y2)
    ComplexField stripped = u;
    const double l1 = dp.lambda1, l2 = dp.lambda2;
    const double pcoef = 2.0 * kPi * dp.d * (1.0 / (l1 * l2) - dp.c);
    for (int i = 0; i < g.n1; ++i) {
        double x1 = g.x1(i);
        for (int j = 0; j < g.n2; ++j) {
            double x2 = g.x2(j);
            double ph = -pcoef * x1 * x2;
            stripped.at(i, j) *= cplx(std::cos(ph), std::sin(ph));
        }
    }
    ComplexField fine = oversampled_inverse(fourier_forward(stripped), oversample);

    ComplexField t(g);
    const double amp = std::sqrt(l1 * l2);
    for (int i = 0; i < g.n1; ++i) {
        double y1 = g.x1(i);
        for (int j = 0; j < g.n2; ++j) {
            double y2 = g.x2(j);
            t.at(i, j) = amp * bicubic_sample(fine, l1 * y1, l2 * y2);
        }
    }

    ComplexField th = fourier_forward(t);
    const double inv_d = 1.0 / dp.d;
    for (int k1 = 0; k1 < g.n1; ++k1) {
        double xi1 = freq(k1, g.n1, g.h1());
        for (int k2 = 0; k2 < g.n2; ++k2) {
            double xi2 = freq(k2, g.n2, g.h2());
            double ph = -2.0 * kPi * inv_d * xi1 * xi2;
            th.at(k1, k2) *= cplx(std::cos(ph), std::sin(ph));
        }
    }
    return fourier_inverse(th);
}

ComplexField anisotropic_lll_sample(const DerivedParams& dp, const EntirePoly& F,
                                    const Grid& g, int degree_cap) {
    if (F.degree() > degree_cap)
        throw std::invalid_argument("anisotropic_lll_sample: polynomial degree above cap");
    const double a = dp.alpha, nu2 = dp.trap.nu * dp.trap.nu;
    if (!(2.0 * a - nu2 > 1e-12))
        throw std::domain_error("anisotropic_lll_sample: Gaussian exponent not negative definite");

    const double b2 = dp.beta2, gam = dp.gamma_par;
    const double c1 = (gam * kPi / (4.0 * b2)) * (1.0 - nu2 / (2.0 * a));
    const double c2 = (gam * kPi / (4.0 * b2)) * (1.0 + nu2 / (2.0 * a)) * b2 * b2;
    const double pc = -kPi * nu2 * gam / (4.0 * a);

    ComplexField f(g);
    for (int i = 0; i < g.n1; ++i) {
        double x1 = g.x1(i);
        for (int j = 0; j < g.n2; ++j) {
            double x2 = g.x2(j);
            cplx w(x1, b2 * x2);
            double ph = pc * x1 * x2;
            double ex = -(c1 * x1 * x1 + c2 * x2 * x2);
            f.at(i, j) = F.eval(w) * std::exp(ex) * cplx(std::cos(ph), std::sin(ph));
        }
    }
    return f;
}

double annihilator_residual(const DerivedParams& dp, const ComplexField& u) {
    const Grid& g = u.grid;
    if (g.n1 < 8 || g.n2 < 8)
        throw std::invalid_argument("annihilator_residual: grid too small");
    const double ax1 = dp.lambda2 * dp.c * dp.d - dp.d / dp.lambda1;
    const double ax2 = dp.mu2 * dp.c * dp.lambda1;
    const double cd1 = dp.mu2 * dp.lambda1 / dp.d;
    const double cd2 = dp.lambda2;
    const cplx i_unit(0.0, 1.0);
    const double inv_12h1 = 1.0 / (12.0 * g.h1());
    const double inv_12h2 = 1.0 / (12.0 * g.h2());
    const cplx dscale(0.0, -1.0 / (2.0 * kPi)); // D = d/dx / (2 i pi)

    double num = 0.0, den = 0.0;
    for (int i = 2; i + 2 < g.n1; ++i) {
        double x1 = g.x1(i);
        for (int j = 2; j + 2 < g.n2; ++j) {
            double x2 = g.x2(j);
            cplx d1 = (-u.at(i + 2, j) + 8.0 * u.at(i + 1, j) - 8.0 * u.at(i - 1, j) +
                       u.at(i - 2, j)) * inv_12h1;
            cplx d2 = (-u.at(i, j + 2) + 8.0 * u.at(i, j + 1) - 8.0 * u.at(i, j - 1) +
                       u.at(i, j - 2)) * inv_12h2;
            cplx D1 = dscale * d1, D2 = dscale * d2;
            cplx val = ax1 * x1 * u.at(i, j) + cd2 * D2 - i_unit * cd1 * D1 -
                       i_unit * ax2 * x2 * u.at(i, j);
            num += std::norm(val);
            den += std::norm(u.at(i, j));
        }
    }
    if (den == 0.0) throw std::domain_error("annihilator_residual: zero field");
    return std::sqrt(num / den);
}

double qw_expectation(double omega, double nu, const ComplexField& u) {
    ComplexField d1 = spectral_derivative(u, 1);
    ComplexField d2 = spectral_derivative(u, 2);
    const Grid& g = u.grid;
    const double w = g.cell_weight();
    double kin = 0.0, pot = 0.0;
    cplx ang(0.0);
    for (int i = 0; i < g.n1; ++i) {
        double x1 = g.x1(i);
        for (int j = 0; j < g.n2; ++j) {
            double x2 = g.x2(j);
            kin += std::norm(d1.at(i, j)) + std::norm(d2.at(i, j));
            pot += ((1.0 - nu * nu) * x1 * x1 + (1.0 + nu * nu) * x2 * x2) *
                   std::norm(u.at(i, j));
            ang += (x1 * d2.at(i, j) - x2 * d1.at(i, j)) * std::conj(u.at(i, j));
        }
    }
    return (kin + pot - 2.0 * omega * ang.real()) * w;
}

double qw_chi_expectation(const DerivedParams& dp, const ComplexField& v) {
    ComplexField d1 = spectral_derivative(v, 1);
    ComplexField d2 = spectral_derivative(v, 2);
    const Grid& g = v.grid;
    const double w = g.cell_weight();
    const double m1s = dp.mu1 * dp.mu1, m2s = dp.mu2 * dp.mu2;
    double s = 0.0;
    for (int i = 0; i < g.n1; ++i) {
        double y1 = g.x1(i);
        for (int j = 0; j < g.n2; ++j) {
            double y2 = g.x2(j);
            s += (m1s * y1 * y1 + m2s * y2 * y2) * std::norm(v.at(i, j));
            s += std::norm(d1.at(i, j)) + std::norm(d2.at(i, j));
        }
    }
    return s * w;
}

} // namespace lll
