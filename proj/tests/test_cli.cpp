// Exercises the installed binary end to end: exit codes, stdout summaries,
// output files. Uses std::system, so it stays a separate ctest entry.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int failures = 0;

#define CHECK_MSG(cond, msg)                                        \
    do {                                                            \
        if (!(cond)) {                                              \
            std::cerr << "FAIL: " << msg << " (" #cond ")\n";       \
            ++failures;                                             \
        }                                                           \
    } while (0)

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string out_file = "cli_stdout.txt";
    const std::string cmd =
        std::string(OQHN_CLI_PATH) + " " + args + " > " + out_file + " 2> cli_stderr.txt";
    const int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(rc);
    std::ifstream in(out_file);
    std::ostringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main() {
    const fs::path dir = fs::temp_directory_path() / "oqhn_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto traj = (dir / "traj.csv").string();

    {
        const auto r = run("simulate --x 2 --temp 0.5 --omega 0.6 --init 3,-3 --out " + traj);
        CHECK_MSG(r.exit_code == 0, "simulate exits 0");
        CHECK_MSG(r.out.find("\"LimitCycle\"") != std::string::npos,
                  "condition-3 point reports a limit cycle");
        CHECK_MSG(fs::exists(traj), "trajectory CSV written");
        CHECK_MSG(fs::exists(dir / "run.json"), "run.json written next to the output");
        const auto runjson = slurp(dir / "run.json");
        CHECK_MSG(runjson.find("toolkit_version") != std::string::npos, "run.json has version");
        const auto csv = slurp(traj);
        CHECK_MSG(csv.rfind("t,m_z_1,m_y_1\n", 0) == 0, "trajectory CSV header");
    }
    {
        const auto r = run("simulate --x 3 --temp 1 --init 1,0 --out " + traj);
        CHECK_MSG(r.exit_code == 2, "odd x exits 2");
    }
    {
        const auto r = run("simulate --x 4 --p 1 --temp 0.5 --omega 0.6 --init 3,-3 --out " + traj);
        CHECK_MSG(r.exit_code == 0, "x=4 simulate exits 0");
        CHECK_MSG(r.out.find("\"verdict\"") != std::string::npos, "summary carries a verdict");
    }
    {
        // determinism of the primary CSV across reruns
        const auto a = run("simulate --x 2 --temp 0.5 --omega 0.6 --init 3,-3 --out " + traj);
        const std::string csv1 = slurp(traj);
        const auto b = run("simulate --x 2 --temp 0.5 --omega 0.6 --init 3,-3 --out " + traj);
        const std::string csv2 = slurp(traj);
        CHECK_MSG(a.exit_code == 0 && b.exit_code == 0, "simulate reruns exit 0");
        CHECK_MSG(csv1 == csv2, "identical config gives byte-identical CSV");
    }
    {
        const auto r = run("fixed-points --x 4 --temp 0.333333 --omega 0");
        CHECK_MSG(r.exit_code == 0, "fixed-points exits 0");
        CHECK_MSG(r.out.find("\"n_fixed_points\":5") != std::string::npos,
                  "x=4 beta=3 has five fixed points");
    }
    {
        const auto r = run("fixed-points --x 4 --temp -1");
        CHECK_MSG(r.exit_code == 2, "negative temperature exits 2");
    }
    {
        const auto cfg = dir / "sweep.json";
        std::ofstream os(cfg);
        os << R"({"x":4,"t_min":0.1,"t_max":0.4,"n_t":3,"omega_min":0.0,"omega_max":0.6,)"
           << R"("n_omega":3,"t_horizon":120.0,"threads":2})";
        os.close();
        const auto r = run("phase-diagram --config " + cfg.string() + " --out-dir " +
                           (dir / "sweep_out").string());
        CHECK_MSG(r.exit_code == 0, "phase-diagram exits 0");
        CHECK_MSG(fs::exists(dir / "sweep_out" / "phase.csv"), "phase.csv written");
        CHECK_MSG(fs::exists(dir / "sweep_out" / "phase.png"), "phase.png written");
        CHECK_MSG(fs::exists(dir / "sweep_out" / "boundary.csv"), "boundary.csv written");
        CHECK_MSG(fs::exists(dir / "sweep_out" / "run.json"), "run.json written");
    }
    {
        const auto r = run("phase-diagram --config " + (dir / "missing.json").string());
        CHECK_MSG(r.exit_code != 0, "missing config fails");
    }
    {
        const auto out = (dir / "overlaps.csv").string();
        const auto rho = (dir / "rho.bin").string();
        const auto r = run("lindblad --n 3 --x 4 --p 1 --temp 0.5 --omega 0.2 --seed 7 "
                           "--t-max 0.5 --dt 1e-3 --stride 100 --out " +
                           out + " --dump-rho " + rho);
        CHECK_MSG(r.exit_code == 0, "lindblad exits 0");
        CHECK_MSG(slurp(out).rfind("t,m_x_1,m_y_1,m_z_1\n", 0) == 0, "overlaps CSV header");
        CHECK_MSG(fs::exists(rho), "snapshot dump written");
        CHECK_MSG(slurp(rho).compare(0, 7, "OQHNRHO") == 0, "snapshot magic");
    }
    {
        const auto r = run("lindblad --n 12 --x 2 --seed 1");
        CHECK_MSG(r.exit_code == 2, "N over the exact-simulation cap exits 2");
    }
    {
        const auto out = (dir / "capacity.csv").string();
        const auto r = run("capacity --n 30 --x 2 --p-list 1 2 --trials 2 --seed 5 --out " + out);
        CHECK_MSG(r.exit_code == 0, "capacity exits 0");
        CHECK_MSG(slurp(out).rfind("p,success_rate,mean_final_distance\n", 0) == 0,
                  "capacity CSV header");
        CHECK_MSG(r.out.find("\"estimated_capacity\"") != std::string::npos,
                  "capacity summary on stdout");
    }
    {
        const auto r = run("capacity --n 30 --x 2 --p-list 1");
        CHECK_MSG(r.exit_code == 2, "capacity without --seed exits 2");
    }
    {
        const auto r = run("repro fig5 --out-dir " + (dir / "fig5").string());
        CHECK_MSG(r.exit_code == 0, "repro fig5 exits 0");
        CHECK_MSG(fs::exists(dir / "fig5" / "fig5_basin_radius.csv"), "fig5 CSV written");
    }
    {
        const auto r = run("repro fig9 --out-dir " + (dir / "x").string());
        CHECK_MSG(r.exit_code == 2, "unknown figure exits 2");
    }

    fs::remove_all(dir);
    std::remove("cli_stdout.txt");
    std::remove("cli_stderr.txt");
    if (failures == 0) std::cout << "cli tests passed\n";
    return failures == 0 ? 0 : 1;
}
