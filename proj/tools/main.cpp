// anisolll command-line front-end.  Subcommands:
//   derive-params  closed-form parameter chain for one trap configuration
//   reduce         reduced energy parameters and regime classification
//   gamma-scan     minimize the lattice functional over lattice shapes
//   bounds         Thomas-Fermi data plus regime-specific energy bounds
//   minimize       run the solver, print a JSON summary to stdout
//   run            full pipeline with artifact emission
// Exit codes: 0 ok, 2 invalid config, 3 solver non-convergence, 4 I/O failure.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "anisolll/energy.hpp"
#include "anisolll/minimize.hpp"
#include "anisolll/pipeline.hpp"
#include "anisolll/theta.hpp"
#include "anisolll/trap.hpp"

#include <clocale>
#include <cstdio>
#include <iostream>
#include <optional>

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNoConverge = 3;
constexpr int kExitIo = 4;

struct TrapArgs {
    std::optional<double> omega, nu, eps;
    double g = 1.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--omega", omega, "rotation ratio");
        cmd->add_option("--nu", nu, "anisotropy");
        cmd->add_option("--eps", eps, "residual confinement");
        cmd->add_option("--g", g, "coupling constant");
    }

    lll::TrapParams resolve() const {
        lll::ScenarioConfig cfg;
        cfg.omega = omega;
        cfg.nu = nu;
        cfg.eps = eps;
        cfg.g = g;
        return lll::resolve_trap(cfg);
    }
};

ordered_json derived_json(const lll::DerivedParams& dp) {
    return ordered_json{
        {"omega", dp.trap.omega}, {"nu", dp.trap.nu},     {"eps", dp.trap.eps},
        {"g", dp.trap.g},         {"alpha", dp.alpha},    {"mu1", dp.mu1},
        {"mu2", dp.mu2},          {"beta1", dp.beta1},    {"beta2", dp.beta2},
        {"gamma", dp.gamma_par},  {"lambda1", dp.lambda1},{"lambda2", dp.lambda2},
        {"c", dp.c},              {"d", dp.d},            {"kappa1", dp.kappa1},
        {"kappa", dp.kappa},      {"g1", dp.g1},          {"g0", dp.g0}};
}

int emit(const ordered_json& j) {
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");

    CLI::App app{"anisotropic rotating-trap LLL energy toolkit"};
    app.require_subcommand(1);

    TrapArgs dp_args, red_args, bounds_args;
    auto* cmd_derive = app.add_subcommand("derive-params", "print the derived parameter set");
    dp_args.attach(cmd_derive);
    auto* cmd_reduce = app.add_subcommand("reduce", "print reduced parameters and regime");
    red_args.attach(cmd_reduce);
    auto* cmd_bounds = app.add_subcommand("bounds", "print Thomas-Fermi data and energy bounds");
    bounds_args.attach(cmd_bounds);

    int scan_grid = 48, scan_refine = 48;
    auto* cmd_gamma = app.add_subcommand("gamma-scan", "minimize gamma(tau) over lattice shapes");
    cmd_gamma->add_option("--grid", scan_grid, "coarse scan resolution");
    cmd_gamma->add_option("--refine", scan_refine, "golden-section steps per coordinate");

    std::string cfg_path, out_override;
    std::optional<std::uint64_t> seed_override;
    auto* cmd_min = app.add_subcommand("minimize", "run the solver, print a JSON summary");
    cmd_min->add_option("--config", cfg_path, "scenario config file")->required();
    cmd_min->add_option("--seed", seed_override, "override solver seed");

    std::string run_cfg_path, run_out;
    std::optional<std::uint64_t> run_seed;
    auto* cmd_run = app.add_subcommand("run", "full pipeline with artifact emission");
    cmd_run->add_option("--config", run_cfg_path, "scenario config file")->required();
    cmd_run->add_option("--seed", run_seed, "override solver seed");
    cmd_run->add_option("--out", run_out, "override output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_derive->parsed()) {
            return emit(derived_json(lll::derive_parameters(dp_args.resolve())));
        }
        if (cmd_reduce->parsed()) {
            lll::DerivedParams dp = lll::derive_parameters(red_args.resolve());
            lll::ReducedParams rp = lll::reduced_params(dp);
            lll::Regime reg = lll::classify_regime(rp);
            return emit(ordered_json{{"eps", rp.eps},
                                     {"kappa", rp.kappa},
                                     {"g0", rp.g0},
                                     {"regime", lll::regime_name(reg.tag)},
                                     {"ratio_kappa_eps13", reg.ratio}});
        }
        if (cmd_bounds->parsed()) {
            lll::DerivedParams dp = lll::derive_parameters(bounds_args.resolve());
            lll::ReducedParams rp = lll::reduced_params(dp);
            lll::Regime reg = lll::classify_regime(rp);
            lll::ThomasFermi tf = lll::thomas_fermi(rp);
            ordered_json j{{"regime", lll::regime_name(reg.tag)},
                           {"ratio_kappa_eps13", reg.ratio},
                           {"R1", tf.R1},
                           {"R2", tf.R2},
                           {"E_TF", tf.E_TF}};
            if (reg.tag == lll::RegimeTag::Weak) {
                double b = lll::gamma_lattice_sum(lll::LatticeTau::hexagonal());
                lll::WeakBracket wb = lll::weak_energy_bracket(rp, b);
                j["weak_lower_bound"] = wb.lower;
                j["weak_upper_bound"] = wb.upper;
            }
            if (reg.tag == lll::RegimeTag::Strong) {
                lll::StrongPrediction sp = lll::strong_asymptote(rp);
                j["strong_floor"] = sp.floor;
                j["strong_predicted"] = sp.predicted;
                j["strong_J"] = sp.J;
            }
            return emit(j);
        }
        if (cmd_gamma->parsed()) {
            lll::TauOptimum opt = lll::optimize_tau(scan_grid, scan_refine);
            return emit(ordered_json{{"tau_re", opt.tau.re()},
                                     {"tau_im", opt.tau.im()},
                                     {"gamma_min", opt.gamma},
                                     {"evaluations", opt.evaluations}});
        }
        if (cmd_min->parsed() || cmd_run->parsed()) {
            bool full = cmd_run->parsed();
            lll::ScenarioConfig cfg =
                lll::parse_config_file(full ? run_cfg_path : cfg_path);
            if (full && run_seed) cfg.solver.seed = *run_seed;
            if (!full && seed_override) cfg.solver.seed = *seed_override;
            if (full && !run_out.empty()) cfg.out_dir = run_out;
            if (!full) cfg.formats.clear(); // no artifacts for bare minimize

            lll::RunOutcome oc = lll::run_scenario(cfg);
            ordered_json j{{"name", oc.manifest.name},
                           {"regime", oc.manifest.regime},
                           {"converged", oc.manifest.converged},
                           {"energy_total", oc.manifest.energy_total},
                           {"iterations", oc.minimizer.iterations},
                           {"grad_norm", oc.minimizer.grad_norm},
                           {"bulk_vortices", oc.vortices.bulk_count()}};
            if (oc.has_stats) j["sixfold_order"] = oc.stats.sixfold;
            if (full) j["out_dir"] = cfg.out_dir;
            emit(j);
            return oc.manifest.converged ? kExitOk : kExitNoConverge;
        }
    } catch (const lll::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const lll::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}
