#include "anisolll/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace lll {

namespace {

const double kPi = 3.14159265358979323846;

// quadratic part H c = (eps^2 X1 + kappa^2 X2) c / 2
FockCoefficients apply_quadratic(const FockCoefficients& c, const ReducedParams& rp) {
    FockCoefficients x1 = apply_xsq(c, 1);
    FockCoefficients x2 = apply_xsq(c, 2);
    FockCoefficients out(c.degree());
    const double a1 = 0.5 * rp.eps * rp.eps, a2 = 0.5 * rp.kappa * rp.kappa;
    for (size_t k = 0; k < out.c.size(); ++k) out.c[k] = a1 * x1.c[k] + a2 * x2.c[k];
    return out;
}

double real_inner(const FockCoefficients& a, const FockCoefficients& b) {
    double s = 0.0;
    for (size_t k = 0; k < a.c.size(); ++k) s += (a.c[k] * std::conj(b.c[k])).real();
    return s;
}

// state of one iterate: coefficients, synthesized field, energy pieces
struct Iterate {
    FockCoefficients c;
    ComplexField u;
    double equad;
    double equart;

    double energy() const { return equad + equart; }
};

Iterate make_iterate(FockCoefficients c, const ReducedParams& rp, const Grid& g) {
    c.normalize();
    ComplexField u = fock_synthesize(c, g);
    double equad = real_inner(apply_quadratic(c, rp), c);
    double equart = 0.5 * rp.g0 * quartic_integral(u);
    return Iterate{std::move(c), std::move(u), equad, equart};
}

// P_N(H u + g0 |u|^2 u), reusing the already synthesized field
FockCoefficients eval_gradient(const Iterate& it, const ReducedParams& rp, int cap) {
    FockCoefficients grad = apply_quadratic(it.c, rp);
    ComplexField cube(it.u.grid);
    for (size_t i = 0; i < it.u.v.size(); ++i)
        cube.v[i] = std::norm(it.u.v[i]) * it.u.v[i];
    FockCoefficients qc = project_lll(cube, it.c.degree(), cap);
    for (size_t k = 0; k < grad.c.size(); ++k) grad.c[k] += rp.g0 * qc.c[k];
    return grad;
}

FockCoefficients retract(const FockCoefficients& c, const FockCoefficients& dir,
                         double step) {
    FockCoefficients out(c.degree());
    for (size_t k = 0; k < out.c.size(); ++k) out.c[k] = c.c[k] - step * dir.c[k];
    out.normalize();
    return out;
}

struct DescentOutcome {
    FockCoefficients c;
    double energy;
    double grad_norm;
    int iterations;
    bool converged;
};

DescentOutcome descend(FockCoefficients c0, const ReducedParams& rp,
                       const MinimizeOptions& o) {
    Iterate cur = make_iterate(std::move(c0), rp, o.grid);
    FockCoefficients grad = eval_gradient(cur, rp, o.degree_cap);
    double step = o.init_step;
    FockCoefficients prev_c, prev_pg;
    bool prev_valid = false;

    DescentOutcome out{cur.c, cur.energy(), 0.0, 0, false};
    for (int it = 0; it < o.max_iter; ++it) {
        double lambda = real_inner(grad, cur.c);
        FockCoefficients pg(cur.c.degree());
        for (size_t k = 0; k < pg.c.size(); ++k)
            pg.c[k] = grad.c[k] - lambda * cur.c.c[k];
        double pgn = pg.norm();
        out.grad_norm = pgn;
        out.iterations = it;
        if (pgn <= o.tol * std::max(1.0, std::abs(cur.energy()))) {
            out.converged = true;
            break;
        }

        if (o.barzilai_borwein && prev_valid) {
            double num = 0.0, den = 0.0;
            for (size_t k = 0; k < cur.c.c.size(); ++k) {
                cplx s = cur.c.c[k] - prev_c.c[k];
                cplx y = pg.c[k] - prev_pg.c[k];
                num += std::norm(s);
                den += (s * std::conj(y)).real();
            }
            // clamp: runaway spectral steps only waste backtracking passes
            if (den > 0.0) step = std::clamp(num / den, 1e-8, 100.0);
        }
        prev_c = cur.c;
        prev_pg = pg;
        prev_valid = true;

        // Armijo backtracking on the renormalized step
        double trial = step;
        bool accepted = false;
        for (int bt = 0; bt < 40; ++bt) {
            Iterate cand = make_iterate(retract(cur.c, pg, trial), rp, o.grid);
            if (cand.energy() <=
                cur.energy() - o.armijo_slope * trial * 2.0 * pgn * pgn) {
                cur = std::move(cand);
                grad = eval_gradient(cur, rp, o.degree_cap);
                accepted = true;
                break;
            }
            trial *= o.armijo_factor;
        }
        if (!accepted) {
            // step collapsed: gradient is noise-limited, stop here
            break;
        }
    }
    out.c = cur.c;
    out.energy = cur.energy();
    return out;
}

FockCoefficients transverse_gaussian_start(const ReducedParams& rp, int N,
                                           const Grid& g, int cap) {
    // Pi_N( 2^{1/4} rho(x1) e^{-pi x2^2 + i pi x1 x2} ) with rho the
    // 1D inverted parabola, support capped to the reach of degree N
    OneDProblem one = strong_limit_1d(rp.g0);
    const double e23 = std::pow(rp.eps, 2.0 / 3.0);
    const double reach = 0.95 * std::sqrt(double(N) / kPi);
    double T = std::min(one.R, reach * e23);
    // support-constrained profile: p^2 = (lam - t^2/2)/g0 on [-T, T]
    double lam = (rp.g0 + T * T * T / 3.0) / (2.0 * T);
    ComplexField f(g);
    for (int i = 0; i < g.n1; ++i) {
        double t = g.x1(i) * e23;
        if (std::abs(t) >= T) continue;
        double p2 = (lam - 0.5 * t * t) / rp.g0;
        double rho = std::sqrt(e23 * p2); // = eps^{1/3} p(eps^{2/3} x1), squared mass 1
        for (int j = 0; j < g.n2; ++j) {
            double x2 = g.x2(j);
            double ph = kPi * g.x1(i) * x2;
            f.at(i, j) = std::pow(2.0, 0.25) * rho * std::exp(-kPi * x2 * x2) *
                         cplx(std::cos(ph), std::sin(ph));
        }
    }
    FockCoefficients c = project_lll(f, N, cap);
    c.normalize();
    return c;
}

FockCoefficients make_start(const ReducedParams& rp, int N, const MinimizeOptions& o) {
    WarmStart ws = o.start;
    if (ws == WarmStart::Auto) {
        Regime reg = classify_regime(rp);
        ws = (reg.tag == RegimeTag::Strong) ? WarmStart::TransverseGaussian
                                            : WarmStart::Theta;
    }
    switch (ws) {
        case WarmStart::Theta:
            try {
                return weak_ansatz(rp, LatticeTau::hexagonal(), o.grid, N).coeffs;
            } catch (const std::exception&) {
                break; // fall back to the ground state
            }
        case WarmStart::TransverseGaussian:
            return transverse_gaussian_start(rp, N, o.grid, o.degree_cap);
        case WarmStart::Random: {
            std::mt19937_64 rng(o.seed);
            std::normal_distribution<double> nd;
            FockCoefficients c(N);
            for (auto& z : c.c) z = cplx(nd(rng), nd(rng));
            c.normalize();
            return c;
        }
        case WarmStart::Ground:
        case WarmStart::Auto:
            break;
    }
    FockCoefficients c(N);
    c.c[0] = 1.0;
    return c;
}

} // namespace

MinimizerResult minimize_energy(const ReducedParams& rp, int N, const MinimizeOptions& opts) {
    if (N < 4) throw std::invalid_argument("minimize_energy: N must be >= 4");
    if (N > opts.degree_cap)
        throw std::invalid_argument("minimize_energy: N above degree cap");

    FockCoefficients base = make_start(rp, N, opts);
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> nd;

    DescentOutcome best;
    bool have = false;
    int total_iters = 0;
    for (int r = 0; r < std::max(1, opts.restarts); ++r) {
        FockCoefficients c0 = base;
        if (r > 0) {
            // deterministic perturbation around the warm start
            for (auto& z : c0.c) z += 0.05 * cplx(nd(rng), nd(rng)) / std::sqrt(double(N));
            c0.normalize();
        }
        DescentOutcome d = descend(c0, rp, opts);
        total_iters += d.iterations;
        bool better = !have || (d.converged && !best.converged) ||
                      (d.converged == best.converged && d.energy < best.energy);
        if (better) { best = d; have = true; }
    }

    MinimizerResult res;
    res.coeffs = best.c;
    res.energy = energy_E(best.c, opts.grid, rp);
    res.iterations = total_iters;
    res.grad_norm = best.grad_norm;
    res.converged = best.converged;
    res.seed = opts.seed;
    res.el_residual = best.grad_norm;
    res.tail_ratio = best.c.tail_ratio();
    return res;
}

int VortexSet::bulk_count() const {
    int n = 0;
    for (const auto& z : zeros) n += z.bulk ? 1 : 0;
    return n;
}

std::vector<Vortex> VortexSet::bulk() const {
    std::vector<Vortex> out;
    for (const auto& z : zeros)
        if (z.bulk) out.push_back(z);
    return out;
}

namespace {

double wrap_phase(double d) {
    while (d > kPi) d -= 2.0 * kPi;
    while (d <= -kPi) d += 2.0 * kPi;
    return d;
}

// Newton refinement on the polynomial factor; the shared Gaussian cancels in
// P/P', so both sums use the normalized basis recurrence.
cplx refine_zero(const FockCoefficients& c, cplx z0) {
    const int N = c.degree();
    cplx z = z0;
    for (int it = 0; it < 8; ++it) {
        if (std::abs(z) > 25.0) return z0;
        cplx phi = 1.0, s0 = c.c[0], s1 = 0.0;
        for (int k = 0; k < N; ++k) {
            phi *= z * std::sqrt(kPi / (k + 1));
            s0 += c.c[k + 1] * phi;
            if (z != cplx(0.0)) s1 += double(k + 1) * c.c[k + 1] * phi / z;
        }
        if (s1 == cplx(0.0)) break;
        cplx dz = s0 / s1;
        z -= dz;
        if (std::abs(dz) < 1e-12) break;
    }
    return z;
}

} // namespace

VortexSet detect_vortices(const FockCoefficients& c, const Grid& g,
                          const ReducedParams& rp, double floor_ratio,
                          double bulk_margin) {
    ComplexField u = fock_synthesize(c, g);
    const int n1 = g.n1, n2 = g.n2;
    std::vector<double> mod(u.v.size()), ph(u.v.size());
    double mmax = 0.0;
    for (size_t i = 0; i < u.v.size(); ++i) {
        mod[i] = std::abs(u.v[i]);
        ph[i] = std::arg(u.v[i]);
        mmax = std::max(mmax, mod[i]);
    }
    const double floor_abs = floor_ratio * mmax;
    auto idx = [n2](int i, int j) { return static_cast<size_t>(i) * n2 + j; };

    ThomasFermi tf = thomas_fermi(rp);
    const double r1 = bulk_margin * tf.R1, r2 = bulk_margin * tf.R2;

    std::vector<signed char> wind(static_cast<size_t>(n1) * n2, 0);
    VortexSet vs;
    for (int i = 0; i + 1 < n1; ++i) {
        for (int j = 0; j + 1 < n2; ++j) {
            if (mod[idx(i, j)] < floor_abs || mod[idx(i + 1, j)] < floor_abs ||
                mod[idx(i + 1, j + 1)] < floor_abs || mod[idx(i, j + 1)] < floor_abs)
                continue;
            double s = wrap_phase(ph[idx(i + 1, j)] - ph[idx(i, j)]) +
                       wrap_phase(ph[idx(i + 1, j + 1)] - ph[idx(i + 1, j)]) +
                       wrap_phase(ph[idx(i, j + 1)] - ph[idx(i + 1, j + 1)]) +
                       wrap_phase(ph[idx(i, j)] - ph[idx(i, j + 1)]);
            int w = static_cast<int>(std::lround(s / (2.0 * kPi)));
            if (w == 0) continue;
            wind[idx(i, j)] = static_cast<signed char>(w);

            cplx center(0.5 * (g.x1(i) + g.x1(i + 1)), 0.5 * (g.x2(j) + g.x2(j + 1)));
            cplx z = refine_zero(c, center);
            if (std::abs(z - center) > 2.0 * std::max(g.h1(), g.h2())) z = center;
            double e = (z.real() * z.real()) / (r1 * r1) + (z.imag() * z.imag()) / (r2 * r2);
            vs.zeros.push_back(Vortex{z.real(), z.imag(), w, e <= 1.0});
        }
    }
    for (int i = 0; i + 1 < n1 && !vs.merged_plaquettes; ++i)
        for (int j = 0; j + 1 < n2; ++j)
            if (wind[idx(i, j)] != 0 &&
                ((i > 0 && wind[idx(i - 1, j)] != 0) || (j > 0 && wind[idx(i, j - 1)] != 0))) {
                vs.merged_plaquettes = true;
                break;
            }
    return vs;
}

namespace {

struct Tri {
    int a, b, c;
};

// sign of the incircle determinant, long double to keep near-cocircular
// lattice configurations stable
bool in_circumcircle(double ax, double ay, double bx, double by, double cx,
                     double cy, double px, double py) {
    long double adx = ax - px, ady = ay - py;
    long double bdx = bx - px, bdy = by - py;
    long double cdx = cx - px, cdy = cy - py;
    long double ad = adx * adx + ady * ady;
    long double bd = bdx * bdx + bdy * bdy;
    long double cd = cdx * cdx + cdy * cdy;
    long double det = adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) +
                      ad * (bdx * cdy - bdy * cdx);
    // det > 0 iff p inside, for counterclockwise (a,b,c)
    long double orient = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
    if (orient < 0) det = -det;
    return det > 0;
}

} // namespace

std::vector<std::pair<int, int>> delaunay_edges(const std::vector<double>& x,
                                                const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    if (n < 3) return {};
    double xmin = x[0], xmax = x[0], ymin = y[0], ymax = y[0];
    for (int i = 1; i < n; ++i) {
        xmin = std::min(xmin, x[i]); xmax = std::max(xmax, x[i]);
        ymin = std::min(ymin, y[i]); ymax = std::max(ymax, y[i]);
    }
    double span = std::max(xmax - xmin, ymax - ymin) + 1.0;
    double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);

    std::vector<double> px(x), py(y);
    px.push_back(cx - 30.0 * span); py.push_back(cy - span);
    px.push_back(cx + 30.0 * span); py.push_back(cy - span);
    px.push_back(cx);               py.push_back(cy + 30.0 * span);

    std::vector<Tri> tris{{n, n + 1, n + 2}};
    for (int p = 0; p < n; ++p) {
        std::vector<Tri> bad, keep;
        for (const Tri& t : tris) {
            if (in_circumcircle(px[t.a], py[t.a], px[t.b], py[t.b], px[t.c], py[t.c],
                                px[p], py[p]))
                bad.push_back(t);
            else
                keep.push_back(t);
        }
        // boundary of the bad region = edges appearing exactly once
        std::vector<std::pair<int, int>> edges;
        auto add_edge = [&edges](int u, int v) {
            if (u > v) std::swap(u, v);
            for (auto it = edges.begin(); it != edges.end(); ++it)
                if (it->first == u && it->second == v) {
                    edges.erase(it);
                    return;
                }
            edges.emplace_back(u, v);
        };
        for (const Tri& t : bad) {
            add_edge(t.a, t.b);
            add_edge(t.b, t.c);
            add_edge(t.c, t.a);
        }
        tris = std::move(keep);
        for (const auto& e : edges) tris.push_back(Tri{e.first, e.second, p});
    }

    std::vector<std::pair<int, int>> out;
    auto push_unique = [&out](int u, int v) {
        if (u > v) std::swap(u, v);
        for (const auto& e : out)
            if (e.first == u && e.second == v) return;
        out.emplace_back(u, v);
    };
    for (const Tri& t : tris) {
        if (t.a >= n || t.b >= n || t.c >= n) continue; // touches super-triangle
        push_unique(t.a, t.b);
        push_unique(t.b, t.c);
        push_unique(t.c, t.a);
    }
    return out;
}

LatticeStats lattice_stats(const VortexSet& vs) {
    std::vector<Vortex> b = vs.bulk();
    if (static_cast<int>(b.size()) < 6)
        throw std::invalid_argument("lattice_stats: fewer than 6 bulk zeros");

    LatticeStats st;
    st.n_bulk = static_cast<int>(b.size());

    // nearest-neighbor distances
    std::vector<double> nn(b.size(), 0.0);
    for (size_t i = 0; i < b.size(); ++i) {
        double best = 1e300;
        for (size_t j = 0; j < b.size(); ++j) {
            if (i == j) continue;
            double d = std::hypot(b[i].x1 - b[j].x1, b[i].x2 - b[j].x2);
            best = std::min(best, d);
        }
        nn[i] = best;
    }
    double mean = 0.0;
    for (double d : nn) mean += d;
    mean /= nn.size();
    double var = 0.0;
    for (double d : nn) var += (d - mean) * (d - mean);
    var /= nn.size();
    st.nn_mean = mean;
    st.nn_cv = (mean > 0.0) ? std::sqrt(var) / mean : 0.0;

    // bond-orientational order: per-site average of e^{6 i theta} over
    // Delaunay neighbors, then the magnitude of the site average
    std::vector<double> xs, ys;
    xs.reserve(b.size());
    ys.reserve(b.size());
    for (const auto& z : b) {
        xs.push_back(z.x1);
        ys.push_back(z.x2);
    }
    auto edges = delaunay_edges(xs, ys);
    std::vector<cplx> psi(b.size(), cplx(0.0));
    std::vector<int> deg(b.size(), 0);
    for (const auto& e : edges) {
        double th = std::atan2(ys[e.second] - ys[e.first], xs[e.second] - xs[e.first]);
        cplx f = std::exp(cplx(0.0, 6.0 * th));
        psi[e.first] += f;
        psi[e.second] += f; // bond angle + pi gives the same 6-fold factor
        ++deg[e.first];
        ++deg[e.second];
    }
    cplx acc(0.0);
    int cnt = 0;
    for (size_t i = 0; i < psi.size(); ++i) {
        if (deg[i] < 3) continue;
        acc += psi[i] / double(deg[i]);
        ++cnt;
    }
    st.sixfold = (cnt > 0) ? std::abs(acc) / cnt : 0.0;
    return st;
}

} // namespace lll
