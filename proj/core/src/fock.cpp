#include "anisolll/fock.hpp"

#include <cmath>
#include <stdexcept>

namespace lll {

namespace {

const double kPi = 3.14159265358979323846;

// phi_{k+1} = phi_k * z * sqrt(pi/(k+1)); the step factors are precomputed
// once per call so the per-sample loop is a chain of complex fmas.
std::vector<double> step_factors(int N) {
    std::vector<double> f(static_cast<size_t>(N) + 1);
    for (int k = 0; k <= N; ++k) f[k] = std::sqrt(kPi / (k + 1));
    return f;
}

} // namespace

double FockCoefficients::norm_sq() const {
    double s = 0.0;
    for (const cplx& z : c) s += std::norm(z);
    return s;
}

double FockCoefficients::norm() const { return std::sqrt(norm_sq()); }

void FockCoefficients::normalize() {
    double n = norm();
    if (n == 0.0) throw std::domain_error("FockCoefficients::normalize: zero vector");
    for (cplx& z : c) z /= n;
}

double FockCoefficients::tail_ratio() const {
    if (c.empty()) return 0.0;
    double m = 0.0;
    for (const cplx& z : c) m = std::max(m, std::abs(z));
    if (m == 0.0) return 0.0;
    return std::abs(c.back()) / m;
}

ComplexField fock_basis_eval(int k, const Grid& g, int degree_cap) {
    if (k < 0 || k > degree_cap)
        throw std::invalid_argument("fock_basis_eval: degree outside [0, cap]");
    ComplexField f(g);
    // log-domain amplitude, exact phase: phi_k = exp(k/2 log pi + k log|z|
    // - lgamma(k+1)/2 - pi|z|^2/2) e^{i k arg z}
    const double half_log_pi = 0.5 * std::log(kPi);
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            double x1 = g.x1(i), x2 = g.x2(j);
            double r2 = x1 * x1 + x2 * x2;
            if (k == 0) {
                f.at(i, j) = std::exp(-0.5 * kPi * r2);
                continue;
            }
            if (r2 == 0.0) {
                f.at(i, j) = 0.0;
                continue;
            }
            double lg = k * half_log_pi + 0.5 * k * std::log(r2) -
                        0.5 * std::lgamma(k + 1.0) - 0.5 * kPi * r2;
            double th = k * std::atan2(x2, x1);
            f.at(i, j) = std::exp(lg) * cplx(std::cos(th), std::sin(th));
        }
    }
    return f;
}

// The synthesis/analysis inner loops run the basis recurrence per sample
// with the degree innermost over cache-sized blocks of samples, in split
// real/imaginary form so the compiler can vectorize across the block.
namespace {

constexpr int kBlock = 1024;

} // namespace

ComplexField fock_synthesize(const FockCoefficients& c, const Grid& g) {
    const int N = c.degree();
    ComplexField f(g);
    auto fac = step_factors(N);
    const int M = g.size();

    std::vector<double> zr(kBlock), zi(kBlock), pr(kBlock), pim(kBlock),
        ar(kBlock), ai(kBlock);
    for (int base = 0; base < M; base += kBlock) {
        const int n = std::min(kBlock, M - base);
        const double c0r = c.c[0].real(), c0i = c.c[0].imag();
        for (int t = 0; t < n; ++t) {
            int i = (base + t) / g.n2, j = (base + t) % g.n2;
            double x1 = g.x1(i), x2 = g.x2(j);
            zr[t] = x1;
            zi[t] = x2;
            double e = std::exp(-0.5 * kPi * (x1 * x1 + x2 * x2));
            pr[t] = e;
            pim[t] = 0.0;
            ar[t] = c0r * e;
            ai[t] = c0i * e;
        }
        for (int k = 0; k < N; ++k) {
            const double s = fac[k];
            const double ckr = c.c[k + 1].real(), cki = c.c[k + 1].imag();
            for (int t = 0; t < n; ++t) {
                double nr = (pr[t] * zr[t] - pim[t] * zi[t]) * s;
                double ni = (pr[t] * zi[t] + pim[t] * zr[t]) * s;
                pr[t] = nr;
                pim[t] = ni;
                ar[t] += ckr * nr - cki * ni;
                ai[t] += ckr * ni + cki * nr;
            }
        }
        for (int t = 0; t < n; ++t) f.v[base + t] = cplx(ar[t], ai[t]);
    }
    return f;
}

FockCoefficients project_lll(const ComplexField& u, int N, int degree_cap) {
    if (N < 0 || N > degree_cap)
        throw std::invalid_argument("project_lll: degree outside [0, cap]");
    const Grid& g = u.grid;
    FockCoefficients c(N);
    auto fac = step_factors(N);
    const double w = g.cell_weight();
    const int M = g.size();

    std::vector<double> accr(static_cast<size_t>(N) + 1, 0.0),
        acci(static_cast<size_t>(N) + 1, 0.0);
    std::vector<double> zr(kBlock), zi(kBlock), pr(kBlock), pim(kBlock),
        ur(kBlock), ui(kBlock);
    for (int base = 0; base < M; base += kBlock) {
        const int n = std::min(kBlock, M - base);
        for (int t = 0; t < n; ++t) {
            int i = (base + t) / g.n2, j = (base + t) % g.n2;
            double x1 = g.x1(i), x2 = g.x2(j);
            zr[t] = x1;
            zi[t] = x2;
            pr[t] = std::exp(-0.5 * kPi * (x1 * x1 + x2 * x2));
            pim[t] = 0.0;
            ur[t] = u.v[base + t].real() * w;
            ui[t] = u.v[base + t].imag() * w;
        }
        // c_k = sum_t u_t conj(phi_k(t)); degree innermost
        double sr = 0.0, si = 0.0;
        for (int t = 0; t < n; ++t) {
            sr += ur[t] * pr[t] + ui[t] * pim[t];
            si += ui[t] * pr[t] - ur[t] * pim[t];
        }
        accr[0] += sr;
        acci[0] += si;
        for (int k = 0; k < N; ++k) {
            const double s = fac[k];
            double rr = 0.0, ri = 0.0;
            for (int t = 0; t < n; ++t) {
                double nr = (pr[t] * zr[t] - pim[t] * zi[t]) * s;
                double ni = (pr[t] * zi[t] + pim[t] * zr[t]) * s;
                pr[t] = nr;
                pim[t] = ni;
                rr += ur[t] * nr + ui[t] * ni;
                ri += ui[t] * nr - ur[t] * ni;
            }
            accr[k + 1] += rr;
            acci[k + 1] += ri;
        }
    }
    for (int k = 0; k <= N; ++k) c.c[k] = cplx(accr[k], acci[k]);
    return c;
}

ComplexField project_kernel_oracle(const ComplexField& u, int max_cells) {
    const Grid& g = u.grid;
    if (g.size() > max_cells)
        throw std::invalid_argument("project_kernel_oracle: grid too large for O(M^2) path");
    ComplexField out(g);
    const double w = g.cell_weight();
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            double x1 = g.x1(i), x2 = g.x2(j);
            cplx acc(0.0);
            for (int p = 0; p < g.n1; ++p) {
                for (int q = 0; q < g.n2; ++q) {
                    double y1 = g.x1(p), y2 = g.x2(q);
                    double d1 = x1 - y1, d2 = x2 - y2;
                    double re = -0.5 * kPi * (d1 * d1 + d2 * d2);
                    double im = kPi * (x2 * y1 - y2 * x1);
                    acc += std::exp(re) * cplx(std::cos(im), std::sin(im)) * u.at(p, q);
                }
            }
            out.at(i, j) = acc * w;
        }
    }
    return out;
}

CarlenCheck carlen_check(const FockCoefficients& c, const Grid& g, double core_floor) {
    ComplexField u = fock_synthesize(c, g);
    const int n1 = g.n1, n2 = g.n2;
    std::vector<double> mod(static_cast<size_t>(n1) * n2);
    double mmax = 0.0;
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            double a = std::abs(u.at(i, j));
            mod[static_cast<size_t>(i) * n2 + j] = a;
            mmax = std::max(mmax, a);
        }
    const double floor_abs = core_floor * mmax;
    const double w = g.cell_weight();
    const double inv_2h1 = 1.0 / (2.0 * g.h1()), inv_2h2 = 1.0 / (2.0 * g.h2());

    CarlenCheck out{0.0, 0.0, 0.0};
    for (int i = 1; i + 1 < n1; ++i) {
        for (int j = 1; j + 1 < n2; ++j) {
            double m = mod[static_cast<size_t>(i) * n2 + j];
            bool masked = m < floor_abs ||
                          mod[static_cast<size_t>(i - 1) * n2 + j] < floor_abs ||
                          mod[static_cast<size_t>(i + 1) * n2 + j] < floor_abs ||
                          mod[static_cast<size_t>(i) * n2 + j - 1] < floor_abs ||
                          mod[static_cast<size_t>(i) * n2 + j + 1] < floor_abs;
            if (masked) {
                out.excluded_mass += m * m * w;
                continue;
            }
            double g1 = (mod[static_cast<size_t>(i + 1) * n2 + j] -
                         mod[static_cast<size_t>(i - 1) * n2 + j]) * inv_2h1;
            double g2 = (mod[static_cast<size_t>(i) * n2 + j + 1] -
                         mod[static_cast<size_t>(i) * n2 + j - 1]) * inv_2h2;
            out.lhs += (g1 * g1 + g2 * g2) * w;
        }
    }
    out.rhs = kPi * u.norm2_sq();
    return out;
}

double x2sq_rayleigh(const FockCoefficients& c, const Grid& g) {
    ComplexField u = fock_synthesize(c, g);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            double a = std::norm(u.at(i, j));
            double x2 = g.x2(j);
            num += x2 * x2 * a;
            den += a;
        }
    if (den == 0.0) throw std::domain_error("x2sq_rayleigh: zero field");
    return num / den;
}

double fock_xsq_element(int j, int k, int axis) {
    if (axis != 1 && axis != 2)
        throw std::invalid_argument("fock_xsq_element: axis must be 1 or 2");
    if (j < 0 || k < 0) throw std::invalid_argument("fock_xsq_element: negative degree");
    const double sign = (axis == 1) ? 1.0 : -1.0;
    if (j == k) return (2.0 * k + 2.0) / (4.0 * kPi);
    int lo = std::min(j, k), hi = std::max(j, k);
    if (hi - lo == 2)
        return sign * std::sqrt(double(lo + 1) * double(lo + 2)) / (4.0 * kPi);
    return 0.0;
}

FockCoefficients apply_xsq(const FockCoefficients& c, int axis) {
    const int N = c.degree();
    const double sign = (axis == 1) ? 1.0 : -1.0;
    FockCoefficients out(N);
    for (int k = 0; k <= N; ++k) {
        cplx acc = (2.0 * k + 2.0) * c.c[k];
        if (k + 2 <= N)
            acc += sign * std::sqrt(double(k + 1) * double(k + 2)) * c.c[k + 2];
        if (k - 2 >= 0)
            acc += sign * std::sqrt(double(k - 1) * double(k)) * c.c[k - 2];
        out.c[k] = acc / (4.0 * kPi);
    }
    return out;
}

double xsq_expectation(const FockCoefficients& c, int axis) {
    FockCoefficients y = apply_xsq(c, axis);
    double s = 0.0;
    for (size_t i = 0; i < c.c.size(); ++i)
        s += (y.c[i] * std::conj(c.c[i])).real();
    return s;
}

FockCoefficients squeezed_state_coefficients(double s, int N) {
    if (!(s >= 0.0 && s < 1.0))
        throw std::invalid_argument("squeezed_state_coefficients: s must be in [0,1)");
    FockCoefficients c(N);
    // c_{2m} = (s/2)^m sqrt((2m)!)/m!, in log domain
    for (int m = 0; 2 * m <= N; ++m) {
        if (m == 0) {
            c.c[0] = 1.0;
            continue;
        }
        double lg = m * std::log(s / 2.0) + 0.5 * std::lgamma(2.0 * m + 1.0) -
                    std::lgamma(m + 1.0);
        c.c[2 * m] = std::exp(lg);
    }
    c.normalize();
    return c;
}

} // namespace lll
