#include "anisolll/trap.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace lll {

namespace {

constexpr double kConstraintTol = 1e-12;

void check_trap(double omega, double nu, double eps, double g, double omega_floor) {
    if (!(g > 0.0))
        throw std::invalid_argument("TrapParams: g must be > 0");
    if (nu < 0.0 || eps < 0.0)
        throw std::invalid_argument("TrapParams: nu and eps must be >= 0");
    if (!(omega >= omega_floor))
        throw std::invalid_argument("TrapParams: omega below floor " +
                                    std::to_string(omega_floor));
    double r = omega * omega + nu * nu + eps * eps;
    if (std::abs(r - 1.0) > kConstraintTol)
        throw std::invalid_argument(
            "TrapParams: omega^2 + nu^2 + eps^2 = " + std::to_string(r) +
            ", must equal 1 (the quadratic part is otherwise not the unit-normalized trap)");
}

double solve_third(double a, double b) {
    double s = 1.0 - a * a - b * b;
    if (s < -kConstraintTol)
        throw std::invalid_argument(
            "TrapParams: given pair already exceeds the constraint omega^2+nu^2+eps^2=1");
    return std::sqrt(std::max(s, 0.0));
}

} // namespace

TrapParams::TrapParams(double omega_, double nu_, double eps_, double g_,
                       double omega_floor)
    : omega(omega_), nu(nu_), eps(eps_), g(g_) {
    check_trap(omega, nu, eps, g, omega_floor);
}

TrapParams TrapParams::from_omega_nu(double omega, double nu, double g,
                                     double omega_floor) {
    return TrapParams(omega, nu, solve_third(omega, nu), g, omega_floor);
}

TrapParams TrapParams::from_omega_eps(double omega, double eps, double g,
                                      double omega_floor) {
    return TrapParams(omega, solve_third(omega, eps), eps, g, omega_floor);
}

TrapParams TrapParams::from_nu_eps(double nu, double eps, double g,
                                   double omega_floor) {
    return TrapParams(solve_third(nu, eps), nu, eps, g, omega_floor);
}

Mat4 symplectic_sigma() {
    Mat4 s = Mat4::Zero();
    s(0, 2) = 1.0;
    s(1, 3) = 1.0;
    s(2, 0) = -1.0;
    s(3, 1) = -1.0;
    return s;
}

Mat4 trap_quadratic_form(double omega, double nu) {
    Mat4 q = Mat4::Zero();
    q(0, 0) = 1.0 - nu * nu;
    q(1, 1) = 1.0 + nu * nu;
    q(2, 2) = 1.0;
    q(3, 3) = 1.0;
    q(0, 3) = q(3, 0) = -omega;
    q(1, 2) = q(2, 1) = omega;
    return q;
}

QuadraticForm4 build_trap_quadratic_form(const TrapParams& p) {
    return QuadraticForm4{trap_quadratic_form(p.omega, p.nu)};
}

WilliamsonFrequencies williamson_closed_route(double omega, double nu) {
    double alpha = std::sqrt(nu * nu * nu * nu + 4.0 * omega * omega);
    double mu2_sq = 1.0 + omega * omega + alpha;
    // 1 + omega^2 - alpha cancels catastrophically near the eps=0 circle;
    // route mu1 through the residual eps^2 = 1 - omega^2 - nu^2 instead,
    // which is exact algebra: mu1^2 mu2^2 = eps^2 (2 nu^2 + eps^2).
    double e2 = 1.0 - omega * omega - nu * nu;
    if (std::abs(e2) <= 1e-14) e2 = 0.0; // degenerate circle, a few ulps wide
    double mu1_sq;
    if (e2 >= -1e-12) {
        e2 = std::max(e2, 0.0);
        mu1_sq = e2 * (2.0 * nu * nu + e2) / mu2_sq;
    } else {
        mu1_sq = std::max(0.0, 1.0 + omega * omega - alpha);
    }
    return WilliamsonFrequencies{std::sqrt(mu1_sq), std::sqrt(mu2_sq)};
}

WilliamsonFrequencies williamson_eigensolver_route(const QuadraticForm4& qf) {
    const Mat4& Q = qf.Q;
    Mat4 F = symplectic_sigma() * Q;

    Eigen::EigenSolver<Mat4> es(F);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("williamson_frequencies: eigensolver failed");

    const double scale = std::max(1.0, Q.cwiseAbs().maxCoeff());
    const double snap = 1e-8 * scale; // defective-zero noise floor
    double mus[4];
    for (int i = 0; i < 4; ++i) {
        std::complex<double> ev = es.eigenvalues()(i);
        if (std::abs(ev) < snap) ev = 0.0;
        if (std::abs(ev.real()) > snap)
            throw std::domain_error(
                "williamson_frequencies: fundamental matrix has eigenvalues off the "
                "imaginary axis (form is indefinite)");
        mus[i] = std::abs(ev.imag());
    }
    // eigenvalues come in +/- i mu pairs; sort and take every other one
    std::sort(mus, mus + 4);
    if (std::abs(mus[0] - mus[1]) > snap || std::abs(mus[2] - mus[3]) > snap)
        throw std::runtime_error("williamson_frequencies: eigenvalues do not pair up");
    return WilliamsonFrequencies{mus[0], mus[2]};
}

WilliamsonFrequencies williamson_frequencies(const QuadraticForm4& qf,
                                             double xcheck_tol) {
    WilliamsonFrequencies w = williamson_eigensolver_route(qf);

    const Mat4& Q = qf.Q;
    double nu2 = 0.5 * (Q(1, 1) - Q(0, 0));
    double omega = Q(1, 2);
    if (nu2 >= 0.0 &&
        (Q - trap_quadratic_form(omega, std::sqrt(nu2))).cwiseAbs().maxCoeff() < 1e-12) {
        WilliamsonFrequencies c = williamson_closed_route(omega, std::sqrt(nu2));
        const double scale = std::max(1.0, Q.cwiseAbs().maxCoeff());
        const double tol = std::max(xcheck_tol, 2e-8 * scale);
        if (std::abs(c.mu1 - w.mu1) > tol || std::abs(c.mu2 - w.mu2) > tol)
            throw std::runtime_error(
                "williamson_frequencies: closed form and eigensolver disagree");
        return c; // closed forms carry no eigensolver noise
    }
    return w;
}

DerivedParams derive_parameters(const TrapParams& p) {
    const double w = p.omega, nu = p.nu, eps = p.eps;
    const double nu2 = nu * nu, w2 = w * w, eps2 = eps * eps;

    DerivedParams dp{p};
    dp.alpha = std::sqrt(nu2 * nu2 + 4.0 * w2);
    const double a = dp.alpha;

    // denomB = alpha + 2w^2 - nu^2 >= 2w^2 (no cancellation);
    // denomA = alpha - 2w^2 + nu^2 evaluated through the product identity
    // denomA * denomB = 4 w^2 (2 nu^2 + eps^2) to stay accurate near nu=0, omega->1.
    const double denomB = a + 2.0 * w2 - nu2;
    const double two_nu2_eps2 = 2.0 * nu2 + eps2;
    const double denomA = 4.0 * w2 * two_nu2_eps2 / denomB;
    if (!(denomA > 0.0))
        throw std::domain_error("derive_parameters: degenerate parameters (alpha - 2 omega^2 + nu^2 <= 0)");

    const double sumB = a + 2.0 * w2 + nu2;

    dp.mu2 = std::sqrt(1.0 + w2 + a);
    dp.mu1 = eps * std::sqrt(two_nu2_eps2) / dp.mu2;

    dp.beta1 = 2.0 * w * dp.mu1 / denomA;
    dp.beta2 = 2.0 * w * dp.mu2 / sumB;
    dp.gamma_par = 2.0 * a / w;

    dp.lambda1 = std::sqrt(denomA / (2.0 * a));
    dp.lambda2 = std::sqrt(sumB / (2.0 * a));
    dp.d = 0.5 * dp.gamma_par * dp.lambda1 * dp.lambda2;
    dp.c = (dp.lambda1 * dp.lambda1 + dp.lambda2 * dp.lambda2) /
           (2.0 * dp.lambda1 * dp.lambda2);

    dp.kappa1 = std::sqrt(sumB * two_nu2_eps2 / denomB);
    dp.kappa = dp.kappa1 / dp.beta2;
    dp.g1 = p.g * sumB / (2.0 * a);
    dp.g0 = dp.g1 * dp.gamma_par * dp.gamma_par / (4.0 * dp.beta2);
    return dp;
}

SymplecticMap build_reduction_map(const DerivedParams& dp) {
    const double l1 = dp.lambda1, l2 = dp.lambda2, c = dp.c, d = dp.d;
    if (!(dp.mu1 > 0.0))
        throw std::domain_error("build_reduction_map: requires mu1 > 0 (eps > 0)");
    if (!(l1 * l2 > 0.0))
        throw std::domain_error("build_reduction_map: singular B block (lambda1*lambda2 = 0)");

    SymplecticMap m;
    m.B = Mat2::Zero();
    m.B(0, 0) = 1.0 / l1;
    m.B(1, 1) = 1.0 / l2;
    m.C = Mat2::Zero();
    m.C(0, 1) = m.C(1, 0) = 1.0 / d;
    m.A = Mat2::Zero();
    const double a_off = d / (l1 * l2) - c * d;
    m.A(0, 1) = m.A(1, 0) = a_off;

    m.chi << l1, 0.0, 0.0, -l1 / d,
             0.0, l2, -l2 / d, 0.0,
             0.0, d / l1 - l2 * c * d, c * l2, 0.0,
             d / l2 - l1 * c * d, 0.0, 0.0, c * l1;

    m.chi_inv << c * l2, 0.0, 0.0, l2 / d,
                 0.0, c * l1, l1 / d, 0.0,
                 0.0, -d / l2 + l1 * c * d, l1, 0.0,
                 -d / l1 + l2 * c * d, 0.0, 0.0, l2;
    return m;
}

double generating_function(const SymplecticMap& m, const Vec2& x, const Vec2& eta) {
    return 0.5 * (x.dot(m.A * x) + 2.0 * eta.dot(m.B * x) + eta.dot(m.C * eta));
}

double generating_relation_residual(const SymplecticMap& m, const Vec2& x, const Vec2& eta) {
    Vec2 dS_deta = m.B * x + m.C * eta;
    Vec2 dS_dx = m.A * x + m.B.transpose() * eta;
    Vec4 lhs_in, rhs;
    lhs_in << dS_deta(0), dS_deta(1), eta(0), eta(1);
    rhs << x(0), x(1), dS_dx(0), dS_dx(1);
    return (m.chi * lhs_in - rhs).cwiseAbs().maxCoeff();
}

MasterForms master_forms(const DerivedParams& dp) {
    const double a = dp.alpha, w = dp.trap.omega, nu2 = dp.trap.nu * dp.trap.nu,
                 eps = dp.trap.eps;
    const double denomB = a + 2.0 * w * w - nu2;
    const double denomA = 4.0 * w * w * (2.0 * nu2 + eps * eps) / denomB;
    const double sumB = a + 2.0 * w * w + nu2;
    const double mu2_sq = dp.mu2 * dp.mu2;
    const double p_minus = (a - nu2) / (2.0 * w); // slope of the eta-type forms
    const double p_plus = (a + nu2) / (2.0 * w);  // slope of the y-type forms

    MasterForms f;
    // eta1^2
    f.coeff[0] = denomA / (2.0 * a);
    f.form[0] << 0.0, -p_minus, 1.0, 0.0;
    // mu1^2 y1^2
    f.coeff[1] = denomB * eps * eps / (2.0 * a * mu2_sq);
    f.form[1] << p_plus, 0.0, 0.0, 1.0;
    // mu2^2 y2^2
    f.coeff[2] = 2.0 * w * w * (1.0 + w * w + a) / (a * sumB);
    f.form[2] << 0.0, p_plus, 1.0, 0.0;
    // eta2^2
    f.coeff[3] = sumB / (2.0 * a);
    f.form[3] << -p_minus, 0.0, 0.0, 1.0;
    return f;
}

double poisson_bracket(const Vec4& a, const Vec4& b) {
    return a(2) * b(0) + a(3) * b(1) - a(0) * b(2) - a(1) * b(3);
}

} // namespace lll
