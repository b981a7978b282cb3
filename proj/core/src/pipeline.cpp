#include "anisolll/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace lll {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

const char* library_version() { return "0.1.0"; }

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, const std::string& key) {
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing junk");
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for '" + key + "': " + v);
    }
}

long long parse_int(const std::string& v, const std::string& key) {
    try {
        size_t pos = 0;
        long long d = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing junk");
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer value for '" + key + "': " + v);
    }
}

} // namespace

ScenarioConfig parse_config_text(const std::string& text) {
    ScenarioConfig cfg;
    cfg.echo = text;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        size_t hash = s.find('#');
        if (hash != std::string::npos) s = trim(s.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": malformed section header");
            section = trim(s.substr(1, s.size() - 2));
            continue;
        }
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        std::string full = section.empty() ? key : section + "." + key;

        if (full == "name") cfg.name = val;
        else if (full == "trap.omega") cfg.omega = parse_double(val, full);
        else if (full == "trap.nu") cfg.nu = parse_double(val, full);
        else if (full == "trap.eps") cfg.eps = parse_double(val, full);
        else if (full == "trap.g") cfg.g = parse_double(val, full);
        else if (full == "trap.omega_floor") cfg.omega_floor = parse_double(val, full);
        else if (full == "solver.n") cfg.solver.n = static_cast<int>(parse_int(val, full));
        else if (full == "solver.grid_n1") cfg.solver.grid_n1 = static_cast<int>(parse_int(val, full));
        else if (full == "solver.grid_n2") cfg.solver.grid_n2 = static_cast<int>(parse_int(val, full));
        else if (full == "solver.grid_l1") cfg.solver.grid_l1 = parse_double(val, full);
        else if (full == "solver.grid_l2") cfg.solver.grid_l2 = parse_double(val, full);
        else if (full == "solver.tol") cfg.solver.tol = parse_double(val, full);
        else if (full == "solver.max_iter") cfg.solver.max_iter = static_cast<int>(parse_int(val, full));
        else if (full == "solver.seed") cfg.solver.seed = static_cast<std::uint64_t>(parse_int(val, full));
        else if (full == "solver.restarts") cfg.solver.restarts = static_cast<int>(parse_int(val, full));
        else if (full == "solver.degree_cap") cfg.solver.degree_cap = static_cast<int>(parse_int(val, full));
        else if (full == "solver.warm_start") cfg.solver.warm_start = val;
        else if (full == "outputs.dir") cfg.out_dir = val;
        else if (full == "outputs.formats") {
            cfg.formats.clear();
            std::istringstream fs_(val);
            std::string tok;
            while (std::getline(fs_, tok, ',')) {
                tok = trim(tok);
                if (!tok.empty()) cfg.formats.push_back(tok);
            }
        } else {
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": unknown key '" + full + "'");
        }
    }
    return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

TrapParams resolve_trap(const ScenarioConfig& cfg) {
    int given = int(cfg.omega.has_value()) + int(cfg.nu.has_value()) + int(cfg.eps.has_value());
    if (given < 2)
        throw ConfigError("trap: need at least two of omega, nu, eps");
    try {
        if (given == 3) {
            double r = *cfg.omega * *cfg.omega + *cfg.nu * *cfg.nu + *cfg.eps * *cfg.eps;
            if (std::abs(r - 1.0) > 1e-9)
                throw ConfigError(
                    "trap: over-determined inputs violate omega^2+nu^2+eps^2=1 "
                    "(got " + std::to_string(r) + "); the quadratic part would not "
                    "be positive semi-definite as normalized");
            return TrapParams(*cfg.omega, *cfg.nu, *cfg.eps, cfg.g, cfg.omega_floor);
        }
        if (!cfg.omega.has_value())
            return TrapParams::from_nu_eps(*cfg.nu, *cfg.eps, cfg.g, cfg.omega_floor);
        if (!cfg.nu.has_value())
            return TrapParams::from_omega_eps(*cfg.omega, *cfg.eps, cfg.g, cfg.omega_floor);
        return TrapParams::from_omega_nu(*cfg.omega, *cfg.nu, cfg.g, cfg.omega_floor);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("trap: ") + e.what());
    }
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    return h;
}

std::string fnv1a64_hex(const std::string& bytes) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

namespace {

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file(const fs::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for write: " + p.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write: " + p.string());
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot open: " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool wants(const ScenarioConfig& cfg, const std::string& f) {
    for (const auto& s : cfg.formats)
        if (s == f) return true;
    return false;
}

std::string density_csv(const ComplexField& u) {
    std::string out = "x1,x2,density\n";
    const Grid& g = u.grid;
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            out += fmt17(g.x1(i));
            out += ',';
            out += fmt17(g.x2(j));
            out += ',';
            out += fmt17(std::norm(u.at(i, j)));
            out += '\n';
        }
    return out;
}

// gnuplot "nonuniform matrix": first row is <n1> then the x1 coordinates;
// each following row is x2 then the densities along x1
std::string density_gpmat(const ComplexField& u) {
    const Grid& g = u.grid;
    std::string out = std::to_string(g.n1);
    for (int i = 0; i < g.n1; ++i) {
        out += ' ';
        out += fmt17(g.x1(i));
    }
    out += '\n';
    for (int j = 0; j < g.n2; ++j) {
        out += fmt17(g.x2(j));
        for (int i = 0; i < g.n1; ++i) {
            out += ' ';
            out += fmt17(std::norm(u.at(i, j)));
        }
        out += '\n';
    }
    return out;
}

} // namespace

RunOutcome run_scenario(const ScenarioConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();

    TrapParams trap = resolve_trap(cfg);
    DerivedParams dp = derive_parameters(trap);
    ReducedParams rp = reduced_params(dp);
    Regime reg = classify_regime(rp);

    MinimizeOptions mo;
    mo.grid = Grid::centered(cfg.solver.grid_l1, cfg.solver.grid_n1,
                             cfg.solver.grid_l2, cfg.solver.grid_n2);
    mo.tol = cfg.solver.tol;
    mo.max_iter = cfg.solver.max_iter;
    mo.seed = cfg.solver.seed;
    mo.restarts = cfg.solver.restarts;
    mo.degree_cap = std::max(cfg.solver.degree_cap, cfg.solver.n);
    if (cfg.solver.warm_start == "auto") mo.start = WarmStart::Auto;
    else if (cfg.solver.warm_start == "theta") mo.start = WarmStart::Theta;
    else if (cfg.solver.warm_start == "gaussian") mo.start = WarmStart::TransverseGaussian;
    else if (cfg.solver.warm_start == "ground") mo.start = WarmStart::Ground;
    else if (cfg.solver.warm_start == "random") mo.start = WarmStart::Random;
    else throw ConfigError("solver.warm_start: unknown value " + cfg.solver.warm_start);

    RunOutcome oc;
    oc.minimizer = minimize_energy(rp, cfg.solver.n, mo);
    oc.vortices = detect_vortices(oc.minimizer.coeffs, mo.grid, rp);
    if (oc.vortices.bulk_count() >= 6) {
        oc.stats = lattice_stats(oc.vortices);
        oc.has_stats = true;
    }

    ThomasFermi tf = thomas_fermi(rp);
    GpEnergyMap gpmap = gp_energy_map(dp);

    // report
    ordered_json report;
    report["name"] = cfg.name;
    report["version"] = library_version();
    report["trap"] = {{"omega", trap.omega}, {"nu", trap.nu}, {"eps", trap.eps}, {"g", trap.g}};
    report["derived"] = {
        {"alpha", dp.alpha},   {"mu1", dp.mu1},       {"mu2", dp.mu2},
        {"beta1", dp.beta1},   {"beta2", dp.beta2},   {"gamma", dp.gamma_par},
        {"lambda1", dp.lambda1}, {"lambda2", dp.lambda2}, {"c", dp.c},
        {"d", dp.d},           {"kappa1", dp.kappa1}, {"kappa", dp.kappa},
        {"g1", dp.g1},         {"g0", dp.g0}};
    report["regime"] = regime_name(reg.tag);
    report["ratio_kappa_eps13"] = reg.ratio;
    report["energy"] = {{"total", oc.minimizer.energy.total},
                        {"pot_x1", oc.minimizer.energy.pot_x1},
                        {"pot_x2", oc.minimizer.energy.pot_x2},
                        {"quartic", oc.minimizer.energy.quartic}};
    report["energy_gp"] = gpmap.gp_from_reduced(oc.minimizer.energy.total);
    report["thomas_fermi"] = {{"R1", tf.R1}, {"R2", tf.R2}, {"E_TF", tf.E_TF}};
    if (reg.tag == RegimeTag::Weak) {
        WeakBracket wb = weak_energy_bracket(rp, gamma_lattice_sum(LatticeTau::hexagonal()));
        report["weak_lower_bound"] = wb.lower;
        report["weak_upper_bound"] = wb.upper;
    }
    if (reg.tag == RegimeTag::Strong) {
        StrongPrediction sp = strong_asymptote(rp);
        report["strong_floor"] = sp.floor;
        report["strong_predicted"] = sp.predicted;
        report["strong_J"] = sp.J;
    }
    report["solver"] = {{"n", cfg.solver.n},
                        {"iterations", oc.minimizer.iterations},
                        {"grad_norm", oc.minimizer.grad_norm},
                        {"el_residual", oc.minimizer.el_residual},
                        {"converged", oc.minimizer.converged},
                        {"tail_ratio", oc.minimizer.tail_ratio},
                        {"seed", oc.minimizer.seed},
                        {"restarts", cfg.solver.restarts}};
    report["vortices"] = {{"total", static_cast<int>(oc.vortices.zeros.size())},
                          {"bulk", oc.vortices.bulk_count()},
                          {"merged_plaquettes", oc.vortices.merged_plaquettes}};
    if (oc.has_stats) {
        report["lattice"] = {{"nn_mean", oc.stats.nn_mean},
                             {"nn_cv", oc.stats.nn_cv},
                             {"sixfold_order", oc.stats.sixfold}};
    }

    // artifacts
    try {
        fs::create_directories(cfg.out_dir);
    } catch (const std::exception& e) {
        throw IoError(std::string("cannot create output directory: ") + e.what());
    }
    ComplexField u = fock_synthesize(oc.minimizer.coeffs, mo.grid);
    std::vector<std::pair<std::string, std::string>> files;
    if (wants(cfg, "csv")) files.emplace_back("density.csv", density_csv(u));
    if (wants(cfg, "gpmat")) files.emplace_back("density.gpmat", density_gpmat(u));
    if (wants(cfg, "json")) {
        ordered_json zeros = ordered_json::array();
        for (const auto& z : oc.vortices.zeros)
            zeros.push_back({{"x1", z.x1}, {"x2", z.x2}, {"winding", z.winding}, {"bulk", z.bulk}});
        files.emplace_back("zeros.json", zeros.dump(2) + "\n");
        files.emplace_back("report.json", report.dump(2) + "\n");
    }

    RunManifest& m = oc.manifest;
    m.name = cfg.name;
    m.version = library_version();
    m.regime = regime_name(reg.tag);
    m.ratio = reg.ratio;
    m.converged = oc.minimizer.converged;
    m.energy_total = oc.minimizer.energy.total;
    m.config_echo = cfg.echo;

    for (const auto& [name, bytes] : files) {
        write_file(fs::path(cfg.out_dir) / name, bytes);
        m.artifacts.push_back(ArtifactRecord{name, fnv1a64_hex(bytes)});
    }

    auto t1 = std::chrono::steady_clock::now();
    m.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

    ordered_json mj;
    mj["name"] = m.name;
    mj["version"] = m.version;
    mj["regime"] = m.regime;
    mj["ratio_kappa_eps13"] = m.ratio;
    mj["converged"] = m.converged;
    mj["energy_total"] = m.energy_total;
    mj["derived"] = report["derived"];
    mj["energies"] = report["energy"];
    mj["thomas_fermi"] = report["thomas_fermi"];
    if (report.contains("weak_lower_bound")) {
        mj["weak_lower_bound"] = report["weak_lower_bound"];
        mj["weak_upper_bound"] = report["weak_upper_bound"];
    }
    if (report.contains("strong_predicted")) {
        mj["strong_floor"] = report["strong_floor"];
        mj["strong_predicted"] = report["strong_predicted"];
    }
    ordered_json arts = ordered_json::array();
    for (const auto& a : m.artifacts)
        arts.push_back({{"file", a.file}, {"fnv1a64", a.fnv1a64}});
    mj["artifacts"] = arts;
    mj["config"] = m.config_echo;
    mj["wall_ms"] = m.wall_ms;
    write_file(fs::path(cfg.out_dir) / "manifest.json", mj.dump(2) + "\n");

    return oc;
}

bool verify_manifest(const std::string& manifest_path) {
    fs::path mp(manifest_path);
    ordered_json mj = ordered_json::parse(read_file(mp));
    fs::path dir = mp.parent_path();
    for (const auto& a : mj.at("artifacts")) {
        fs::path f = dir / a.at("file").get<std::string>();
        if (!fs::exists(f)) return false;
        if (fnv1a64_hex(read_file(f)) != a.at("fnv1a64").get<std::string>()) return false;
    }
    return true;
}

} // namespace lll
