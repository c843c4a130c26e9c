#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "oqhn/classical.hpp"
#include "oqhn/fixedpoint.hpp"
#include "oqhn/lindblad.hpp"
#include "oqhn/meanfield.hpp"
#include "oqhn/phasemap.hpp"
#include "oqhn/util.hpp"
#include "oqhn/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace oqhn;

namespace {

using Clock = std::chrono::steady_clock;

void write_run_json(const fs::path& primary_output, const std::string& command,
                    const json& config, Clock::time_point started,
                    const std::vector<std::string>& outputs) {
    fs::path dir = primary_output.parent_path();
    if (dir.empty()) dir = ".";
    const double secs =
        std::chrono::duration<double>(Clock::now() - started).count();
    json j;
    j["command"] = command;
    j["config"] = config;
    j["toolkit_version"] = version;
    j["duration_seconds"] = secs;
    j["outputs"] = outputs;
    std::ofstream os(dir / "run.json");
    os << j.dump(2) << '\n';
}

void summary(const json& j) { std::cout << j.dump() << std::endl; }

void warn_ignored_seed(const std::optional<std::uint64_t>& seed, const char* cmd) {
    if (seed)
        std::cerr << "warning: " << cmd << " is deterministic; --seed is ignored\n";
}

std::vector<double> parse_init(const std::string& text, int p) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
    if (static_cast<int>(vals.size()) != 2 * p)
        throw CLI::ValidationError("--init",
                                   "expected " + std::to_string(2 * p) +
                                       " comma-separated values (m_z_1..m_z_p,m_y_1..m_y_p)");
    return vals;
}

struct SimulateArgs {
    int x = 4;
    int p = 1;
    double temp = 0.5;
    double omega = 0.0;
    std::string init = "3,-3";
    double dt = 1e-2;
    double t_max = 500.0;
    int stride = 10;
    std::string out = "trajectory.csv";
    std::string image;
    std::optional<std::uint64_t> seed;
};

int run_simulate(const SimulateArgs& a) {
    const auto started = Clock::now();
    warn_ignored_seed(a.seed, "simulate");
    const auto params = ModelParams::from_temperature(a.x, a.p, a.temp, a.omega);
    const auto vals = parse_init(a.init, a.p);
    meanfield::OverlapState s0;
    s0.m_z = Eigen::Map<const Eigen::VectorXd>(vals.data(), a.p);
    s0.m_y = Eigen::Map<const Eigen::VectorXd>(vals.data() + a.p, a.p);

    const auto traj = meanfield::integrate(s0, params, a.dt, a.t_max, a.stride);
    const auto verdict = meanfield::classify_trajectory(traj);

    std::ofstream os(a.out, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + a.out);
    meanfield::write_trajectory_csv(traj, os);
    std::vector<std::string> outputs{a.out};

    if (!a.image.empty()) {
        const auto fps = a.p == 1 ? fixedpoint::find_fixed_points(params)
                                  : std::vector<fixedpoint::FixedPointReport>{};
        phasemap::emit_trajectory_image({traj}, fps, a.image);
        outputs.push_back(a.image);
    }

    json cfg{{"x", a.x},       {"p", a.p},   {"temp", a.temp},   {"omega", a.omega},
             {"init", a.init}, {"dt", a.dt}, {"t_max", a.t_max}, {"stride", a.stride},
             {"out", a.out}};
    write_run_json(a.out, "simulate", cfg, started, outputs);
    summary(json{{"command", "simulate"},
                 {"verdict", json::parse(meanfield::verdict_to_json(verdict))},
                 {"out", a.out}});
    return 0;
}

struct FixedPointArgs {
    int x = 4;
    double temp = 0.5;
    double omega = 0.0;
    std::string out;
    std::optional<std::uint64_t> seed;
};

int run_fixed_points(const FixedPointArgs& a) {
    const auto started = Clock::now();
    warn_ignored_seed(a.seed, "fixed-points");
    const auto params = ModelParams::from_temperature(a.x, 1, a.temp, a.omega);
    const auto reports = fixedpoint::find_fixed_points(params);

    std::ostringstream lines;
    for (const auto& r : reports) lines << fixedpoint::report_to_json(r) << '\n';
    std::vector<std::string> outputs;
    if (!a.out.empty()) {
        std::ofstream os(a.out, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + a.out);
        os << lines.str();
        outputs.push_back(a.out);
        json cfg{{"x", a.x}, {"temp", a.temp}, {"omega", a.omega}, {"out", a.out}};
        write_run_json(a.out, "fixed-points", cfg, started, outputs);
    } else {
        std::cout << lines.str();
    }
    summary(json{{"command", "fixed-points"},
                 {"n_fixed_points", reports.size()},
                 {"beta_c", fixedpoint::beta_c(a.omega)},
                 {"out", a.out}});
    return 0;
}

struct PhaseArgs {
    std::string config_path;
    std::string out_dir = ".";
    int threads = 0;  // 0 = keep the config value
    std::optional<std::uint64_t> seed;
};

int run_phase_diagram(const PhaseArgs& a) {
    const auto started = Clock::now();
    warn_ignored_seed(a.seed, "phase-diagram");
    auto cfg = phasemap::SweepConfig::from_json_file(a.config_path);
    if (a.threads > 0) cfg.threads = a.threads;

    fs::create_directories(a.out_dir);
    const auto map = phasemap::sweep(cfg);
    const fs::path csv = fs::path(a.out_dir) / "phase.csv";
    const fs::path png = fs::path(a.out_dir) / "phase.png";
    const fs::path bcsv = fs::path(a.out_dir) / "boundary.csv";
    phasemap::emit_phase_csv(map, csv.string());
    phasemap::emit_phase_image(map, png.string());
    {
        std::ofstream os(bcsv, std::ios::binary);
        fixedpoint::write_boundary_csv(map.boundary, os);
    }

    int counts[6] = {0, 0, 0, 0, 0, 0};
    for (const auto& c : map.cells) counts[static_cast<int>(c.phase)]++;
    json phases;
    for (int i = 0; i < 6; ++i)
        phases[phasemap::to_string(static_cast<phasemap::Phase>(i))] = counts[i];

    write_run_json(csv, "phase-diagram", json::parse(cfg.to_json()), started,
                   {csv.string(), png.string(), bcsv.string()});
    summary(json{{"command", "phase-diagram"},
                 {"cells", map.cells.size()},
                 {"phases", phases},
                 {"out", csv.string()}});
    return 0;
}

struct LindbladArgs {
    int n = 4;
    int x = 4;
    int p = 1;
    double temp = 0.5;
    double omega = 0.1;
    std::uint64_t seed = 1;
    double t_max = 5.0;
    double dt = 1e-3;
    int stride = 100;
    std::string init = "pattern";
    std::string out = "overlaps.csv";
    std::string dump_rho;
};

int run_lindblad(const LindbladArgs& a) {
    const auto started = Clock::now();
    const auto params = ModelParams::from_temperature(a.x, a.p, a.temp, a.omega);
    std::mt19937_64 rng(a.seed);
    const auto patterns = PatternSet::random(a.p, a.n, rng);
    const auto ops = lindblad::build_operator_set(patterns, params);

    lindblad::CMat rho0;
    if (a.init == "pattern")
        rho0 = lindblad::pattern_state(patterns);
    else if (a.init == "mixed")
        rho0 = lindblad::maximally_mixed(a.n);
    else if (a.init == "plus")
        rho0 = lindblad::plus_state(a.n);
    else
        throw CLI::ValidationError("--init", "expected pattern, mixed or plus");

    lindblad::EvolveOptions opts;
    opts.dt = a.dt;
    opts.t_max = a.t_max;
    opts.record_stride = a.stride;
    opts.record_rho = !a.dump_rho.empty();
    const auto series = lindblad::evolve(rho0, ops, opts);

    std::ofstream os(a.out, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + a.out);
    lindblad::write_overlaps_csv(series, os);
    std::vector<std::string> outputs{a.out};
    if (!a.dump_rho.empty()) {
        std::ofstream bs(a.dump_rho, std::ios::binary);
        if (!bs) throw std::runtime_error("cannot write " + a.dump_rho);
        lindblad::dump_rho_binary(series.rho_snapshots, a.n, bs);
        outputs.push_back(a.dump_rho);
    }

    json cfg{{"n", a.n},         {"x", a.x},     {"p", a.p},
             {"temp", a.temp},   {"omega", a.omega}, {"seed", a.seed},
             {"t_max", a.t_max}, {"dt", a.dt},   {"stride", a.stride},
             {"init", a.init},   {"out", a.out}};
    write_run_json(a.out, "lindblad", cfg, started, outputs);
    summary(json{{"command", "lindblad"},
                 {"records", series.times.size()},
                 {"final_m_z", series.m_z(series.m_z.rows() - 1, 0)},
                 {"out", a.out}});
    return 0;
}

struct CapacityArgs {
    int n = 100;
    int x = 2;
    double noise = 0.05;
    double threshold = 0.01;
    double success = 0.9;
    int trials = 3;
    int max_probes = 0;
    int threads = 1;
    std::uint64_t seed = 0;
    std::vector<int> p_list;
    int p_min = 0, p_max = 0, p_step = 1;
    std::string out = "capacity.csv";
};

int run_capacity(const CapacityArgs& a) {
    const auto started = Clock::now();
    classical::CapacityConfig cfg;
    cfg.n_spins = a.n;
    cfg.x = a.x;
    cfg.noise_fraction = a.noise;
    cfg.error_threshold = a.threshold;
    cfg.success_threshold = a.success;
    cfg.trials = a.trials;
    cfg.max_probes = a.max_probes;
    cfg.threads = a.threads;
    cfg.seed = a.seed;
    if (!a.p_list.empty()) {
        cfg.p_schedule = a.p_list;
    } else if (a.p_min >= 1 && a.p_max >= a.p_min) {
        for (int p = a.p_min; p <= a.p_max; p += a.p_step) cfg.p_schedule.push_back(p);
    } else {
        throw CLI::ValidationError("--p-min/--p-max", "no load schedule given");
    }

    const auto report = classical::capacity_experiment(cfg);
    std::ofstream os(a.out, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + a.out);
    classical::write_capacity_csv(report, os);

    json jcfg{{"n", a.n},           {"x", a.x},
              {"noise", a.noise},   {"threshold", a.threshold},
              {"success", a.success}, {"trials", a.trials},
              {"max_probes", a.max_probes}, {"threads", a.threads},
              {"seed", a.seed},     {"p_schedule", cfg.p_schedule},
              {"out", a.out}};
    write_run_json(a.out, "capacity", jcfg, started, {a.out});
    summary(json{{"command", "capacity"},
                 {"estimated_capacity", report.estimated_capacity},
                 {"capacity_per_n", static_cast<double>(report.estimated_capacity) / a.n},
                 {"out", a.out}});
    return 0;
}

// ---- figure presets -------------------------------------------------------

phasemap::SweepConfig fig_sweep_base(int threads) {
    phasemap::SweepConfig cfg;
    cfg.threads = threads;
    cfg.dt = 1e-2;
    cfg.t_horizon = 500.0;
    return cfg;
}

int run_repro(const std::string& figure, const std::string& out_dir, int threads) {
    const auto started = Clock::now();
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    std::vector<std::string> outputs;
    json cfg;

    auto emit_map = [&](const phasemap::SweepConfig& sc, const std::string& stem) {
        const auto map = phasemap::sweep(sc);
        const auto csv = (dir / (stem + ".csv")).string();
        const auto png = (dir / (stem + ".png")).string();
        const auto bnd = (dir / (stem + "_boundary.csv")).string();
        phasemap::emit_phase_csv(map, csv);
        phasemap::emit_phase_image(map, png);
        std::ofstream os(bnd, std::ios::binary);
        fixedpoint::write_boundary_csv(map.boundary, os);
        outputs.insert(outputs.end(), {csv, png, bnd});
        return map;
    };

    if (figure == "fig1") {
        auto sc = fig_sweep_base(threads);
        sc.x = 2;
        sc.t_min = 0.05;
        sc.t_max = 1.5;
        sc.omega_min = 0.0;
        sc.omega_max = 1.5;
        sc.n_t = 50;
        sc.n_omega = 50;
        emit_map(sc, "fig1_phase_x2");
        cfg = json::parse(sc.to_json());
    } else if (figure == "fig2") {
        auto sc = fig_sweep_base(threads);
        sc.x = 4;
        sc.t_min = 0.02;
        sc.t_max = 0.8;
        sc.omega_min = 0.0;
        sc.omega_max = 1.2;
        sc.n_t = 50;
        sc.n_omega = 50;
        emit_map(sc, "fig2_phase_x4");
        cfg = json::parse(sc.to_json());
    } else if (figure == "fig3") {
        auto sc = fig_sweep_base(threads);
        sc.x = 4;
        sc.t_min = 0.02;
        sc.t_max = 0.2;
        sc.omega_min = 0.3;
        sc.omega_max = 1.2;
        sc.n_t = 40;
        sc.n_omega = 40;
        emit_map(sc, "fig3_lc_region_x4");
        cfg = json::parse(sc.to_json());
    } else if (figure == "fig4") {
        // orbit portraits at representative (T, Omega) points of each phase
        struct Panel {
            const char* name;
            double temp, omega;
        };
        const Panel panels[] = {{"fm", 0.2, 0.05},
                                {"pm", 1.0, 0.5},
                                {"pm_lc", 0.08, 0.7},
                                {"fm_lc", 0.04, 0.4}};
        for (const auto& pn : panels) {
            const auto params = ModelParams::from_temperature(4, 1, pn.temp, pn.omega);
            std::vector<meanfield::Trajectory> trajs;
            for (double r : {3.0, 1.0, 0.3, 0.05}) {
                meanfield::OverlapState s0;
                s0.m_z = Eigen::VectorXd::Constant(1, r);
                s0.m_y = Eigen::VectorXd::Constant(1, -r);
                trajs.push_back(meanfield::integrate(s0, params, 1e-2, 120.0, 10));
                const auto csv =
                    (dir / ("fig4_" + std::string(pn.name) + "_r" + util::fmt_g(r) + ".csv"))
                        .string();
                std::ofstream os(csv, std::ios::binary);
                meanfield::write_trajectory_csv(trajs.back(), os);
                outputs.push_back(csv);
            }
            const auto fps = fixedpoint::find_fixed_points(params);
            const auto png = (dir / ("fig4_" + std::string(pn.name) + ".png")).string();
            phasemap::emit_trajectory_image(trajs, fps, png);
            outputs.push_back(png);
        }
        cfg = json{{"figure", "fig4"}};
    } else if (figure == "fig5") {
        // basin of the origin grows with x
        const auto csv = (dir / "fig5_basin_radius.csv").string();
        std::ofstream os(csv, std::ios::binary);
        os << "x,radius,saturated\n";
        for (int x : {4, 6, 8, 10}) {
            const auto params = ModelParams::from_beta(x, 1, 3.0, 0.0);
            const auto r = meanfield::basin_radius(params);
            os << x << ',' << util::fmt_g(r.radius) << ',' << (r.saturated ? 1 : 0) << '\n';
            meanfield::OverlapState s0;
            s0.m_z = Eigen::VectorXd::Constant(1, 0.99 / std::sqrt(2.0));
            s0.m_y = Eigen::VectorXd::Constant(1, -0.99 / std::sqrt(2.0));
            const auto traj =
                meanfield::integrate(s0, params, 1e-2, 60.0, 10);
            const auto tcsv = (dir / ("fig5_traj_x" + std::to_string(x) + ".csv")).string();
            std::ofstream ts(tcsv, std::ios::binary);
            meanfield::write_trajectory_csv(traj, ts);
            outputs.push_back(tcsv);
        }
        outputs.push_back(csv);
        cfg = json{{"figure", "fig5"}, {"beta", 3.0}, {"omega", 0.0}};
    } else {
        throw CLI::ValidationError("figure", "expected fig1..fig5");
    }

    write_run_json(dir / "run.json", "repro " + figure, cfg, started, outputs);
    summary(json{{"command", "repro"}, {"figure", figure}, {"out_dir", out_dir}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"open quantum (modern) Hopfield network toolkit"};
    app.set_version_flag("--version", version);
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "integrate the mean-field overlap ODEs");
    c_sim->add_option("--x", sim.x, "interaction exponent (even)");
    c_sim->add_option("--p", sim.p, "number of stored patterns");
    c_sim->add_option("--temp", sim.temp, "temperature T = 1/beta");
    c_sim->add_option("--omega", sim.omega, "transverse drive");
    c_sim->add_option("--init", sim.init, "initial state m_z_1..m_z_p,m_y_1..m_y_p");
    c_sim->add_option("--dt", sim.dt, "integration step");
    c_sim->add_option("--t-max", sim.t_max, "horizon");
    c_sim->add_option("--stride", sim.stride, "record every k-th step");
    c_sim->add_option("--out", sim.out, "trajectory CSV path");
    c_sim->add_option("--image", sim.image, "optional phase-plane PNG");
    c_sim->add_option("--seed", sim.seed, "ignored; simulate is deterministic");

    FixedPointArgs fpa;
    auto* c_fp = app.add_subcommand("fixed-points", "solve the p=1 self-consistency equation");
    c_fp->add_option("--x", fpa.x, "interaction exponent (even)");
    c_fp->add_option("--temp", fpa.temp, "temperature");
    c_fp->add_option("--omega", fpa.omega, "transverse drive");
    c_fp->add_option("--out", fpa.out, "JSON-lines output path (default stdout)");
    c_fp->add_option("--seed", fpa.seed, "ignored; solver is deterministic");

    PhaseArgs pha;
    auto* c_ph = app.add_subcommand("phase-diagram", "sweep the (T, Omega) plane");
    c_ph->add_option("--config", pha.config_path, "JSON sweep config")->required();
    c_ph->add_option("--out-dir", pha.out_dir, "output directory");
    c_ph->add_option("--threads", pha.threads, "override config threads");
    c_ph->add_option("--seed", pha.seed, "ignored; the sweep is deterministic");

    LindbladArgs lba;
    auto* c_lb = app.add_subcommand("lindblad", "exact small-N quantum master equation");
    c_lb->add_option("--n", lba.n, "number of spins (<= 10)");
    c_lb->add_option("--x", lba.x, "interaction exponent (even)");
    c_lb->add_option("--p", lba.p, "number of stored patterns");
    c_lb->add_option("--temp", lba.temp, "temperature");
    c_lb->add_option("--omega", lba.omega, "transverse drive");
    c_lb->add_option("--seed", lba.seed, "pattern-draw seed (recorded)");
    c_lb->add_option("--t-max", lba.t_max, "horizon");
    c_lb->add_option("--dt", lba.dt, "integration step");
    c_lb->add_option("--stride", lba.stride, "record every k-th step");
    c_lb->add_option("--init", lba.init, "pattern | mixed | plus");
    c_lb->add_option("--out", lba.out, "overlaps CSV path");
    c_lb->add_option("--dump-rho", lba.dump_rho, "optional binary snapshot dump");

    CapacityArgs cpa;
    auto* c_cp = app.add_subcommand("capacity", "storage-capacity experiment");
    c_cp->add_option("--n", cpa.n, "network size (>= 10)");
    c_cp->add_option("--x", cpa.x, "interaction exponent (even)");
    c_cp->add_option("--noise", cpa.noise, "probe noise fraction");
    c_cp->add_option("--threshold", cpa.threshold, "final-distance threshold (fraction of N)");
    c_cp->add_option("--success", cpa.success, "success-rate threshold");
    c_cp->add_option("--trials", cpa.trials, "trials per load");
    c_cp->add_option("--max-probes", cpa.max_probes, "probes per trial (0 = all patterns)");
    c_cp->add_option("--threads", cpa.threads, "worker threads");
    c_cp->add_option("--seed", cpa.seed, "base RNG seed")->required();
    c_cp->add_option("--p-list", cpa.p_list, "explicit load schedule");
    c_cp->add_option("--p-min", cpa.p_min, "schedule start");
    c_cp->add_option("--p-max", cpa.p_max, "schedule end");
    c_cp->add_option("--p-step", cpa.p_step, "schedule step");
    c_cp->add_option("--out", cpa.out, "CSV path");

    std::string figure, repro_dir = "repro";
    int repro_threads = 2;
    auto* c_rp = app.add_subcommand("repro", "canonical figure presets");
    c_rp->add_option("figure", figure, "fig1 | fig2 | fig3 | fig4 | fig5")->required();
    c_rp->add_option("--out-dir", repro_dir, "output directory");
    c_rp->add_option("--threads", repro_threads, "worker threads");

    try {
        app.parse(argc, argv);
        if (*c_sim) return run_simulate(sim);
        if (*c_fp) return run_fixed_points(fpa);
        if (*c_ph) return run_phase_diagram(pha);
        if (*c_lb) return run_lindblad(lba);
        if (*c_cp) return run_capacity(cpa);
        if (*c_rp) return run_repro(figure, repro_dir, repro_threads);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        app.exit(e);
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
