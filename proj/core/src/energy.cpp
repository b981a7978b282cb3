#include "anisolll/energy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lll {

namespace {
const double kPi = 3.14159265358979323846;

void require_normalized(double norm, const char* who) {
    if (std::abs(norm - 1.0) > 1e-8)
        throw std::invalid_argument(std::string(who) + ": input not L2-normalized");
}
} // namespace

ReducedParams reduced_params(const DerivedParams& dp) {
    return ReducedParams{dp.trap.eps, dp.kappa, dp.g0};
}

ReducedParams reduced_params(const TrapParams& p) {
    return reduced_params(derive_parameters(p));
}

EnergyBreakdown energy_E(const ComplexField& u, const ReducedParams& rp) {
    require_normalized(u.norm2(), "energy_E");
    const Grid& g = u.grid;
    double m1 = 0.0, m2 = 0.0, q = 0.0;
    for (int i = 0; i < g.n1; ++i) {
        double x1 = g.x1(i);
        for (int j = 0; j < g.n2; ++j) {
            double x2 = g.x2(j);
            double a = std::norm(u.at(i, j));
            m1 += x1 * x1 * a;
            m2 += x2 * x2 * a;
            q += a * a;
        }
    }
    const double w = g.cell_weight();
    EnergyBreakdown e;
    e.pot_x1 = 0.5 * rp.eps * rp.eps * m1 * w;
    e.pot_x2 = 0.5 * rp.kappa * rp.kappa * m2 * w;
    e.quartic = 0.5 * rp.g0 * q * w;
    e.total = e.pot_x1 + e.pot_x2 + e.quartic;
    return e;
}

EnergyBreakdown energy_E(const FockCoefficients& c, const Grid& g, const ReducedParams& rp) {
    require_normalized(c.norm(), "energy_E");
    EnergyBreakdown e;
    e.pot_x1 = 0.5 * rp.eps * rp.eps * xsq_expectation(c, 1);
    e.pot_x2 = 0.5 * rp.kappa * rp.kappa * xsq_expectation(c, 2);
    e.quartic = 0.5 * rp.g0 * quartic_integral(fock_synthesize(c, g));
    e.total = e.pot_x1 + e.pot_x2 + e.quartic;
    return e;
}

GpEnergyMap gp_energy_map(const DerivedParams& dp) {
    GpEnergyMap m;
    m.lll_scale = 2.0 * dp.beta2 / dp.gamma_par;
    const double sumB = dp.alpha + 2.0 * dp.trap.omega * dp.trap.omega +
                        dp.trap.nu * dp.trap.nu;
    m.gp_scale = 2.0 * dp.alpha / sumB;
    const double bb = dp.beta1 * dp.beta2;
    m.gp_offset = dp.mu2 / (4.0 * kPi) - dp.mu1 / (8.0 * kPi) * (bb + 1.0 / bb);
    return m;
}

double ThomasFermi::density(double x1, double x2) const {
    double s = 1.0 - (x1 * x1) / (R1 * R1) - (x2 * x2) / (R2 * R2);
    return s > 0.0 ? 2.0 / (kPi * R1 * R2) * s : 0.0;
}

ThomasFermi thomas_fermi(const ReducedParams& rp) {
    ThomasFermi tf;
    tf.g0 = rp.g0;
    tf.eps = rp.eps;
    tf.kappa = rp.kappa;
    tf.R1 = std::pow(4.0 * rp.g0 * rp.kappa / (kPi * rp.eps * rp.eps * rp.eps), 0.25);
    tf.R2 = std::pow(4.0 * rp.g0 * rp.eps / (kPi * rp.kappa * rp.kappa * rp.kappa), 0.25);
    tf.E_TF = (2.0 / 3.0) * std::sqrt(rp.g0 * rp.eps * rp.kappa / kPi);
    return tf;
}

Regime classify_regime(const ReducedParams& rp, double t_low, double t_high) {
    double ratio = rp.kappa / std::cbrt(rp.eps);
    RegimeTag tag = RegimeTag::Intermediate;
    if (ratio < t_low) tag = RegimeTag::Weak;
    else if (ratio > t_high) tag = RegimeTag::Strong;
    return Regime{tag, ratio};
}

const char* regime_name(RegimeTag t) {
    switch (t) {
        case RegimeTag::Weak: return "Weak";
        case RegimeTag::Intermediate: return "Intermediate";
        case RegimeTag::Strong: return "Strong";
    }
    return "?";
}

WeakBracket weak_energy_bracket(const ReducedParams& rp, double b, double slack) {
    WeakBracket wb;
    wb.slack = slack;
    wb.lower = (2.0 / 3.0) * std::sqrt(2.0 * rp.g0 * rp.eps * rp.kappa / kPi);
    wb.upper = (2.0 / 3.0) * std::sqrt(2.0 * rp.g0 * b * rp.eps * rp.kappa / kPi) *
               (1.0 + slack);
    return wb;
}

WeakAnsatz weak_ansatz(const ReducedParams& rp, const LatticeTau& tau, const Grid& g, int N) {
    Regime reg = classify_regime(rp);
    if (reg.tag == RegimeTag::Strong)
        throw std::domain_error("weak_ansatz: scenario is in the Strong regime");

    ThomasFermi tf = thomas_fermi(rp);
    const double gam = gamma_lattice_sum(tau);
    const double sg = std::sqrt(gam);
    const double support1 = tf.R1 * std::pow(gam, 0.25);
    const double support2 = tf.R2 * std::pow(gam, 0.25);
    if (support1 > std::max(std::abs(g.x1_min), g.x1_max) ||
        support2 > std::max(std::abs(g.x2_min), g.x2_max))
        throw std::invalid_argument("weak_ansatz: grid does not cover the profile support");

    ComplexField f(g);
    const double pref = 2.0 / (kPi * sg) / (tf.R1 * tf.R2);
    for (int i = 0; i < g.n1; ++i) {
        double t1 = g.x1(i) / tf.R1;
        for (int j = 0; j < g.n2; ++j) {
            double t2 = g.x2(j) / tf.R2;
            double s = 1.0 - (t1 * t1 + t2 * t2) / sg;
            if (s <= 0.0) continue;
            double rho = std::sqrt(pref * s);
            f.at(i, j) = rho * u_tau_eval(g.x1(i), g.x2(j), tau);
        }
    }

    WeakAnsatz out;
    out.gamma_tau = gam;
    out.coeffs = project_lll(f, N, std::max(N, kDefaultDegreeCap));
    out.coeffs.normalize();
    out.energy = energy_E(out.coeffs, g, rp);

    // the ansatz realizes the lattice-corrected Thomas-Fermi value up to a
    // projection correction; a large excess means the grid or N is too coarse
    double target = (2.0 / 3.0) * std::sqrt(rp.g0 * gam * rp.eps * rp.kappa / kPi);
    if (out.energy.total > target * 1.25)
        throw std::runtime_error("weak_ansatz: energy exceeds its budget; "
                                 "increase N or the grid resolution");
    return out;
}

double OneDProblem::p(double t) const {
    double s = 1.0 - (t * t) / (R * R);
    return s > 0.0 ? std::sqrt(0.75 / R * s) : 0.0;
}

OneDProblem strong_limit_1d(double g0) {
    if (!(g0 > 0.0)) throw std::invalid_argument("strong_limit_1d: g0 must be > 0");
    OneDProblem p;
    p.g0 = g0;
    p.R = std::cbrt(1.5 * g0);
    p.J = 0.3 * p.R * p.R;
    return p;
}

StrongPrediction strong_asymptote(const ReducedParams& rp, double t_low, double t_high) {
    Regime reg = classify_regime(rp, t_low, t_high);
    if (reg.tag != RegimeTag::Strong)
        throw std::domain_error("strong_asymptote: scenario is not in the Strong regime");
    StrongPrediction sp;
    sp.floor = rp.kappa * rp.kappa / (8.0 * kPi);
    sp.J = strong_limit_1d(rp.g0).J;
    sp.predicted = sp.floor + std::pow(rp.eps, 2.0 / 3.0) * sp.J;
    return sp;
}

} // namespace lll
