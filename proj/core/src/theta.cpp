#include "anisolll/theta.hpp"

#include <cmath>
#include <stdexcept>

namespace lll {

namespace {

const double kPi = 3.14159265358979323846;

int theta_terms(double tau_i) {
    // terms decay like e^{-pi tau_I (n^2 - 1/4)} after argument reduction
    int n = static_cast<int>(std::ceil(std::sqrt(44.0 / (kPi * tau_i)))) + 2;
    return std::max(n, 4);
}

// raw series at an argument already reduced to the fundamental cell
cplx theta_series(cplx z, cplx tau, int nmax) {
    cplx s(0.0);
    const cplx ipi(0.0, kPi);
    for (int n = nmax; n >= 0; --n) {
        double np = n + 0.5, nm = -n - 0.5; // pair n and -n-1
        double sgn = (n % 2 == 0) ? 1.0 : -1.0;
        cplx tp = sgn * std::exp(ipi * tau * (np * np) + cplx(0.0, (2.0 * n + 1.0) * kPi) * z);
        cplx tm = -sgn * std::exp(ipi * tau * (nm * nm) + cplx(0.0, (-2.0 * n - 1.0) * kPi) * z);
        s += tp + tm;
    }
    return s / cplx(0.0, 1.0);
}

} // namespace

LatticeTau::LatticeTau(cplx t) : tau(t) {
    if (!(t.imag() >= 1e-6))
        throw std::invalid_argument("LatticeTau: Im tau must be >= 1e-6");
}

LatticeTau LatticeTau::hexagonal() {
    return LatticeTau(cplx(-0.5, 0.5 * std::sqrt(3.0)));
}

LatticeTau LatticeTau::square() { return LatticeTau(cplx(0.0, 1.0)); }

cplx theta_eval(cplx z, const LatticeTau& lt) {
    const cplx tau = lt.tau;
    const double ti = tau.imag();
    // lattice coordinates z = a + b tau
    double b = z.imag() / ti;
    double a = z.real() - b * tau.real();
    long m = std::lround(a);
    long n = std::lround(b);
    cplx z0 = z - cplx(double(m), 0.0) - double(n) * tau;

    // Theta(z0 + m + n tau) = (-1)^{m+n} e^{-i pi tau n^2 - 2 i pi n z0} Theta(z0)
    cplx base = theta_series(z0, tau, theta_terms(ti));
    cplx phase = std::exp(cplx(0.0, -kPi) * tau * double(n) * double(n) +
                          cplx(0.0, -2.0 * kPi * double(n)) * z0);
    double sgn = ((m + n) % 2 == 0) ? 1.0 : -1.0;
    return sgn * phase * base;
}

cplx u_tau_eval(double x1, double x2, const LatticeTau& lt) {
    // e^{pi/2 (z^2-|z|^2)} = e^{-pi x2^2} e^{i pi x1 x2}
    cplx z(x1, x2);
    cplx gauss = std::exp(cplx(-kPi * x2 * x2, kPi * x1 * x2));
    return gauss * theta_eval(std::sqrt(lt.im()) * z, lt);
}

ComplexField u_tau_field(const Grid& g, const LatticeTau& lt) {
    ComplexField f(g);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j)
            f.at(i, j) = u_tau_eval(g.x1(i), g.x2(j), lt);
    return f;
}

double gamma_lattice_sum(const LatticeTau& lt) {
    const double tr = lt.re(), ti = lt.im();
    const int jmax = static_cast<int>(std::ceil(std::sqrt(44.0 / (kPi * ti)))) + 1;
    const double kreach = std::sqrt(44.0 * ti / kPi) + 1.0;
    double s = 0.0;
    for (int j = -jmax; j <= jmax; ++j) {
        double kc = j * tr;
        int klo = static_cast<int>(std::floor(kc - kreach));
        int khi = static_cast<int>(std::ceil(kc + kreach));
        for (int k = klo; k <= khi; ++k) {
            double d1 = j * tr - k;
            s += std::exp(-(kPi / ti) * (d1 * d1 + double(j) * j * ti * ti));
        }
    }
    return s;
}

double gamma_cell_average(const LatticeTau& lt, int n) {
    const double ti = lt.im(), tr = lt.re();
    const double inv_sqrt_ti = 1.0 / std::sqrt(ti);
    // scaled lattice vectors spanning one unit-area cell
    const double v1x = inv_sqrt_ti, v1y = 0.0;
    const double v2x = tr * inv_sqrt_ti, v2y = ti * inv_sqrt_ti;
    double s2 = 0.0, s4 = 0.0;
    for (int i = 0; i < n; ++i) {
        double a = (i + 0.5) / n;
        for (int j = 0; j < n; ++j) {
            double b = (j + 0.5) / n;
            double x1 = a * v1x + b * v2x;
            double x2 = a * v1y + b * v2y;
            double m2 = std::norm(u_tau_eval(x1, x2, lt));
            s2 += m2;
            s4 += m2 * m2;
        }
    }
    s2 /= double(n) * n;
    s4 /= double(n) * n;
    return s4 / (s2 * s2);
}

double lambda_tau(const LatticeTau& lt) {
    return gamma_lattice_sum(lt) / std::sqrt(2.0 * lt.im());
}

namespace {

double domain_lower_ti(double tr) {
    double s = 1.0 - tr * tr;
    return s > 0.0 ? std::sqrt(s) : 0.0;
}

double gamma_at(double tr, double ti) {
    return gamma_lattice_sum(LatticeTau(cplx(tr, ti)));
}

// golden-section minimization on [lo, hi]
double golden(double lo, double hi, int steps, const auto& f, int& evals) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    evals += 2;
    for (int it = 0; it < steps && (b - a) > 1e-12; ++it) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - gr * (b - a); f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + gr * (b - a); f2 = f(x2);
        }
        ++evals;
    }
    // compare interior best against the endpoints; boundary minima are
    // legitimate here (the hexagonal point sits on the domain corner)
    double xm = (f1 < f2) ? x1 : x2, fm = std::min(f1, f2);
    double fa = f(a), fb = f(b);
    evals += 2;
    if (fa < fm) { xm = a; fm = fa; }
    if (fb < fm) { xm = b; }
    return xm;
}

} // namespace

TauOptimum optimize_tau(int grid_n, int refine_steps) {
    const double ti_max = 2.0;
    int evals = 0;

    double best_tr = 0.0, best_ti = 1.0, best_g = gamma_at(0.0, 1.0);
    ++evals;
    for (int i = 0; i <= grid_n; ++i) {
        double tr = -0.5 + double(i) / grid_n;
        double lo = domain_lower_ti(tr);
        for (int j = 0; j <= grid_n; ++j) {
            double ti = lo + (ti_max - lo) * double(j) / grid_n;
            if (ti < 1e-3) continue;
            double g = gamma_at(tr, ti);
            ++evals;
            if (g < best_g) { best_g = g; best_tr = tr; best_ti = ti; }
        }
    }

    // coordinate refinement; the feasible tau_R set at fixed tau_I < 1 is a
    // pair of intervals, search the one containing the incumbent
    for (int round = 0; round < 8; ++round) {
        double tr0 = best_tr, ti0 = best_ti;
        double lo_r = -0.5, hi_r = 0.5;
        if (best_ti < 1.0) {
            double edge = std::sqrt(1.0 - best_ti * best_ti);
            if (best_tr < 0.0) { lo_r = -0.5; hi_r = -edge; }
            else               { lo_r = edge; hi_r = 0.5; }
        }
        best_tr = golden(lo_r, hi_r, refine_steps,
                         [&](double t) { return gamma_at(t, best_ti); }, evals);
        double lo_i = std::max(domain_lower_ti(best_tr), 1e-3);
        best_ti = golden(lo_i, ti_max, refine_steps,
                         [&](double t) { return gamma_at(best_tr, t); }, evals);
        if (std::abs(best_tr - tr0) < 1e-10 && std::abs(best_ti - ti0) < 1e-10) break;
    }
    best_g = gamma_at(best_tr, best_ti);

    // canonical representative: the tau_R = -1/2 edge rather than +1/2
    if (best_tr > 0.499) best_tr -= 1.0;

    TauOptimum out{LatticeTau(cplx(best_tr, best_ti)), best_g, evals};
    LatticeTau hex = LatticeTau::hexagonal();
    if (std::abs(out.tau.tau - hex.tau) > 1e-3 || std::abs(best_g - 1.1596) > 1e-3)
        throw std::runtime_error("optimize_tau: refinement did not converge to the hexagonal point");
    return out;
}

TauOptimum optimize_tau_imaginary_axis(int grid_n, int refine_steps) {
    int evals = 0;
    double best_ti = 1.0, best_g = gamma_at(0.0, 1.0);
    ++evals;
    for (int j = 0; j <= grid_n; ++j) {
        double ti = 1.0 + 1.0 * double(j) / grid_n;
        double g = gamma_at(0.0, ti);
        ++evals;
        if (g < best_g) { best_g = g; best_ti = ti; }
    }
    best_ti = golden(std::max(1.0, best_ti - 0.1), std::min(2.0, best_ti + 0.1),
                     refine_steps, [&](double t) { return gamma_at(0.0, t); }, evals);
    return TauOptimum{LatticeTau(cplx(0.0, best_ti)), gamma_at(0.0, best_ti), evals};
}

double abrikosov_el_residual(const LatticeTau& lt, int window_cells, int grid_n, int N,
                             double lambda_override) {
    if (window_cells < 6)
        throw std::invalid_argument("abrikosov_el_residual: window too small (need >= 6 cells)");
    const double ell = 1.0 / std::sqrt(lt.im());
    const double r_out = 0.5 * window_cells * ell;
    const double skirt = 1.5 * ell;
    const double r_plateau = r_out - skirt;
    // fixed comparison core: the projector kernel has unit-scale width, so
    // growing the window pushes the skirt away from the core and the
    // residual there must decrease
    const double r_cmp = std::min(2.0 * ell, r_plateau - 0.4);
    if (r_cmp <= 0.5 * ell)
        throw std::invalid_argument("abrikosov_el_residual: no plateau core at this window size");

    const double L = r_out + 0.75;
    Grid g = Grid::centered_square(L, grid_n);
    if (N <= 0) N = static_cast<int>(std::ceil(kPi * L * L)) + 40;

    ComplexField wu(g), w3u(g);
    const double lam = (lambda_override >= 0.0) ? lambda_override : lambda_tau(lt);
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            double x1 = g.x1(i), x2 = g.x2(j);
            double r = std::hypot(x1, x2);
            double w;
            if (r <= r_plateau) w = 1.0;
            else if (r >= r_out) w = 0.0;
            else {
                double t = (r - r_plateau) / skirt;
                double cth = std::cos(0.5 * kPi * t);
                w = cth * cth;
            }
            cplx u = u_tau_eval(x1, x2, lt);
            wu.at(i, j) = w * u;
            w3u.at(i, j) = w * w * w * u;
        }
    }

    ComplexField cube(g);
    for (size_t i = 0; i < cube.v.size(); ++i)
        cube.v[i] = std::norm(wu.v[i]) * wu.v[i];

    FockCoefficients pc = project_lll(cube, N, std::max(N, kDefaultDegreeCap));
    ComplexField proj = fock_synthesize(pc, g);

    double num = 0.0, den = 0.0;
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            double r = std::hypot(g.x1(i), g.x2(j));
            if (r > r_cmp) continue;
            num += std::norm(proj.at(i, j) - lam * w3u.at(i, j));
            den += std::norm(w3u.at(i, j));
        }
    }
    if (den == 0.0) throw std::runtime_error("abrikosov_el_residual: empty core region");
    return std::sqrt(num / den);
}

} // namespace lll
