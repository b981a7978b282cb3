#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "anisolll/energy.hpp"

#include <cmath>
#include <random>

using namespace lll;

namespace {

const double kPi = 3.14159265358979323846;

TrapParams figure1() { return TrapParams(std::sqrt(0.9971), 0.03, std::sqrt(0.002), 1.0); }
TrapParams figure2() { return TrapParams::from_nu_eps(0.73, std::sqrt(0.002), 1.0); }

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    double h = (b - a) / n, s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
    return s * h / 3.0;
}

} // namespace

TEST_CASE("reduced parameters: pass-through and isotropic collapse") {
    ReducedParams r1 = reduced_params(figure1());
    CHECK(r1.eps == doctest::Approx(std::sqrt(0.002)).epsilon(1e-14));
    CHECK(r1.kappa == doctest::Approx(0.0616719).epsilon(2e-4));

    ReducedParams r2 = reduced_params(figure2());
    CHECK(r2.kappa == doctest::Approx(1.625).epsilon(1e-3));

    // nu = 0: kappa collapses to eps and g0 to g1 gamma^2/4 = 2 g (1+omega)
    TrapParams iso = TrapParams::from_omega_nu(0.8, 0.0, 1.0);
    ReducedParams ri = reduced_params(iso);
    CHECK(ri.kappa == doctest::Approx(iso.eps).epsilon(1e-13));
    CHECK(ri.g0 == doctest::Approx(2.0 * 1.0 * 1.8).epsilon(1e-13));
}

TEST_CASE("energy of the Gaussian ground state, closed-form oracle") {
    // ∫ x_i^2 |phi_0|^2 = 1/(2 pi), ∫ |phi_0|^4 = 1/2
    ReducedParams rp{0.3, 0.5, 2.0};
    Grid g = Grid::centered_square(6.0, 256);
    FockCoefficients c(0);
    c.c[0] = 1.0;

    EnergyBreakdown e = energy_E(c, g, rp);
    CHECK(e.pot_x1 == doctest::Approx(0.5 * rp.eps * rp.eps / (2.0 * kPi)).epsilon(1e-10));
    CHECK(e.pot_x2 == doctest::Approx(0.5 * rp.kappa * rp.kappa / (2.0 * kPi)).epsilon(1e-10));
    CHECK(e.quartic == doctest::Approx(rp.g0 / 4.0).epsilon(1e-10));
    CHECK(e.total == doctest::Approx(e.pot_x1 + e.pot_x2 + e.quartic).epsilon(1e-14));

    // the field overload agrees with the coefficient overload
    EnergyBreakdown ef = energy_E(fock_synthesize(c, g), rp);
    CHECK(ef.total == doctest::Approx(e.total).epsilon(1e-9));

    // doubling g0 doubles the quartic term exactly, leaves the rest alone
    ReducedParams rp2{rp.eps, rp.kappa, 2.0 * rp.g0};
    EnergyBreakdown e2 = energy_E(c, g, rp2);
    CHECK(e2.quartic == doctest::Approx(2.0 * e.quartic).epsilon(1e-14));
    CHECK(e2.pot_x1 == doctest::Approx(e.pot_x1).epsilon(1e-14));

    // non-normalized inputs are rejected
    FockCoefficients bad(0);
    bad.c[0] = 0.7;
    CHECK_THROWS(energy_E(bad, g, rp));
}

TEST_CASE("affine energy maps") {
    DerivedParams dp = derive_parameters(figure1());
    GpEnergyMap m = gp_energy_map(dp);

    // zero-point offset
    double off = dp.mu2 / (4.0 * kPi) -
                 dp.mu1 / (8.0 * kPi) * (dp.beta1 * dp.beta2 + 1.0 / (dp.beta1 * dp.beta2));
    CHECK(m.gp_from_reduced(0.0) == doctest::Approx(off).epsilon(1e-14));

    // isotropic consistency: the offset collapses to omega/(2 pi)
    DerivedParams di = derive_parameters(TrapParams::from_omega_nu(0.8, 0.0, 1.0));
    GpEnergyMap mi = gp_energy_map(di);
    CHECK(mi.gp_from_reduced(0.0) == doctest::Approx(0.8 / (2.0 * kPi)).epsilon(1e-12));
    CHECK(mi.lll_scale == doctest::Approx(0.5).epsilon(1e-12));

    // round trip to 1e-12
    for (double e : {0.0, 0.042, 1.7}) {
        CHECK(m.reduced_from_gp(m.gp_from_reduced(e)) == doctest::Approx(e).epsilon(1e-12));
    }
}

TEST_CASE("Thomas-Fermi radii, normalization, and energy") {
    SUBCASE("symmetric point") {
        ReducedParams rp{0.1, 0.1, 1.0};
        ThomasFermi tf = thomas_fermi(rp);
        double expect = std::pow(4.0 * 1.0 * 0.1 / (kPi * 1e-3), 0.25);
        CHECK(tf.R1 == doctest::Approx(expect).epsilon(1e-14));
        CHECK(tf.R2 == doctest::Approx(expect).epsilon(1e-14));
    }

    SUBCASE("profile mass and energy by quadrature") {
        ReducedParams rp = reduced_params(figure1());
        ThomasFermi tf = thomas_fermi(rp);

        // scaled elliptic coordinates make the integrands polynomial
        auto mass_r = [&](double r) {
            return 2.0 * kPi * r * (2.0 / kPi) * (1.0 - r * r);
        };
        CHECK(simpson(mass_r, 0.0, 1.0, 2000) == doctest::Approx(1.0).epsilon(1e-10));

        // E on the profile: each term in closed polar form
        double pot = 0.0;
        {
            // ∫ x1^2 rho = R1^2/6, same for x2
            pot = 0.5 * rp.eps * rp.eps * tf.R1 * tf.R1 / 6.0 +
                  0.5 * rp.kappa * rp.kappa * tf.R2 * tf.R2 / 6.0;
        }
        auto quart_r = [&](double r) {
            double rho = (2.0 / (kPi * tf.R1 * tf.R2)) * (1.0 - r * r);
            return 2.0 * kPi * r * tf.R1 * tf.R2 * rho * rho;
        };
        double quart = 0.5 * rp.g0 * simpson(quart_r, 0.0, 1.0, 2000);
        CHECK(pot + quart == doctest::Approx(tf.E_TF).epsilon(1e-6));

        // the reference bracket's lower endpoint is exactly sqrt(2) * E_TF
        WeakBracket wb = weak_energy_bracket(rp, 1.1596);
        CHECK(wb.lower == doctest::Approx(std::sqrt(2.0) * tf.E_TF).epsilon(1e-12));
    }

    SUBCASE("strong scenario shrinks R2 below one") {
        ThomasFermi tf = thomas_fermi(reduced_params(figure2()));
        CHECK(tf.R2 < 1.0);
    }
}

TEST_CASE("regime classification") {
    Regime r1 = classify_regime(reduced_params(figure1()));
    CHECK(r1.tag == RegimeTag::Weak);
    CHECK(r1.ratio == doctest::Approx(0.17376).epsilon(1e-3));

    Regime r2 = classify_regime(reduced_params(figure2()));
    CHECK(r2.tag == RegimeTag::Strong);
    CHECK(r2.ratio == doctest::Approx(4.588).epsilon(3e-3));

    // ratio exactly 1 sits in the open middle ground
    ReducedParams mid{1e-3, 0.1, 1.0};
    CHECK(classify_regime(mid).tag == RegimeTag::Intermediate);
    CHECK(classify_regime(mid).ratio == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("1D limit problem: closed forms against quadrature") {
    SUBCASE("frozen point g0 = 2/3") {
        OneDProblem p = strong_limit_1d(2.0 / 3.0);
        CHECK(p.R == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(p.J == doctest::Approx(0.3).epsilon(1e-14));
    }

    SUBCASE("mass, energy, and multiplier") {
        OneDProblem p = strong_limit_1d(5.779);
        auto mass = [&](double t) { return p.p(t) * p.p(t); };
        CHECK(simpson(mass, -p.R, p.R, 20000) == doctest::Approx(1.0).epsilon(1e-12));

        auto en = [&](double t) {
            double pp = p.p(t);
            return 0.5 * t * t * pp * pp + 0.5 * p.g0 * pp * pp * pp * pp;
        };
        CHECK(simpson(en, -p.R, p.R, 20000) == doctest::Approx(p.J).epsilon(1e-10));

        // Euler-Lagrange multiplier is constant on the support
        for (double t : {0.0, 0.3 * p.R, 0.7 * p.R, 0.95 * p.R}) {
            double lam = 0.5 * t * t + p.g0 * p.p(t) * p.p(t);
            CHECK(lam == doctest::Approx(p.multiplier()).epsilon(1e-8));
        }
    }

    SUBCASE("perturbations strictly increase the energy") {
        OneDProblem p = strong_limit_1d(3.1);
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> uc(-1.0, 1.0);
        for (int t = 0; t < 5; ++t) {
            double a = uc(rng), b = uc(rng), w = 0.4 + 0.3 * (uc(rng) + 1.0);
            auto pert = [&](double x) {
                return p.p(x) + 0.1 * (a * std::exp(-x * x / (2 * w * w)) +
                                        b * x * std::exp(-x * x / (2 * w * w)));
            };
            double nrm = std::sqrt(simpson([&](double x) { return pert(x) * pert(x); },
                                           -p.R - 4.0, p.R + 4.0, 20000));
            auto en = [&](double x) {
                double q = pert(x) / nrm;
                return 0.5 * x * x * q * q + 0.5 * p.g0 * q * q * q * q;
            };
            double e = simpson(en, -p.R - 4.0, p.R + 4.0, 20000);
            CHECK(e > p.J * (1.0 + 1e-6));
        }
    }
}

TEST_CASE("strong asymptote") {
    ReducedParams rp = reduced_params(figure2());
    StrongPrediction sp = strong_asymptote(rp);
    CHECK(sp.floor == doctest::Approx(rp.kappa * rp.kappa / (8.0 * kPi)).epsilon(1e-14));
    CHECK(sp.predicted >= sp.floor);
    CHECK(sp.predicted == doctest::Approx(sp.floor + std::pow(rp.eps, 2.0 / 3.0) * sp.J)
                              .epsilon(1e-14));
    // vanishing correction as eps -> 0 at fixed kappa
    ReducedParams tiny{1e-9, rp.kappa, rp.g0};
    CHECK(strong_asymptote(tiny).predicted == doctest::Approx(sp.floor).epsilon(1e-4));

    CHECK_THROWS_AS(strong_asymptote(reduced_params(figure1())), std::domain_error);
}

TEST_CASE("weak-regime theta ansatz") {
    ReducedParams rp = reduced_params(figure1());
    Grid g = Grid::centered_square(10.5, 320);
    LatticeTau hex = LatticeTau::hexagonal();

    WeakAnsatz wa = weak_ansatz(rp, hex, g, 150);
    ThomasFermi tf = thomas_fermi(rp);

    // strictly above the unconstrained minimum, close to the
    // lattice-corrected value (2/3) sqrt(g0 gamma eps kappa / pi)
    CHECK(wa.energy.total > tf.E_TF);
    double target = (2.0 / 3.0) *
                    std::sqrt(rp.g0 * wa.gamma_tau * rp.eps * rp.kappa / kPi);
    CHECK(wa.energy.total == doctest::Approx(target).epsilon(0.02));

    // hexagonal beats square, and the ordering follows gamma(tau)
    WeakAnsatz ws = weak_ansatz(rp, LatticeTau::square(), g, 150);
    CHECK(ws.energy.total > wa.energy.total);
    LatticeTau mid(cplx(0.2, 1.1));
    WeakAnsatz wm = weak_ansatz(rp, mid, g, 150);
    CHECK(gamma_lattice_sum(mid) > gamma_lattice_sum(LatticeTau::square()));
    CHECK(wm.energy.total > ws.energy.total);

    // the Strong scenario refuses the ansatz
    CHECK_THROWS_AS(weak_ansatz(reduced_params(figure2()), hex, g, 150),
                    std::domain_error);
    // undersized grid is caught
    CHECK_THROWS(weak_ansatz(rp, hex, Grid::centered_square(4.0, 128), 150));
}

TEST_CASE("energy floor over random truncated states") {
    ReducedParams rp = reduced_params(figure1());
    double floor = rp.kappa * rp.kappa / (8.0 * kPi);
    Grid g = Grid::centered_square(7.0, 192);
    std::mt19937_64 rng(9);
    std::normal_distribution<double> nd;
    for (int t = 0; t < 200; ++t) {
        FockCoefficients c(16);
        for (auto& z : c.c) z = cplx(nd(rng), nd(rng));
        c.normalize();
        CHECK(energy_E(c, g, rp).total >= floor - 1e-6);
    }
}
