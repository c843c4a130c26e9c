#include "oqhn/phasemap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "oqhn/png_writer.hpp"
#include "oqhn/util.hpp"

namespace oqhn::phasemap {

using nlohmann::json;

const char* to_string(Phase p) {
    switch (p) {
        case Phase::PM: return "PM";
        case Phase::FM: return "FM";
        case Phase::LC: return "LC";
        case Phase::PM_LC: return "PM+LC";
        case Phase::FM_LC: return "FM+LC";
        default: return "Undecided";
    }
}

void SweepConfig::validate() const {
    if (p != 1) throw std::invalid_argument("phase sweep supports p = 1 only");
    if (x < 2 || x % 2 != 0) throw std::invalid_argument("x must be an even integer >= 2");
    if (n_t < 2 || n_omega < 2) throw std::invalid_argument("grid resolutions must be >= 2");
    if (!(t_min > 0.0) || !(t_max > t_min))
        throw std::invalid_argument("need 0 < t_min < t_max");
    if (omega_min < 0.0 || !(omega_max > omega_min))
        throw std::invalid_argument("need 0 <= omega_min < omega_max");
    if (!(dt > 0.0) || !(t_horizon > dt)) throw std::invalid_argument("bad dt / t_horizon");
    if (probes.empty()) throw std::invalid_argument("at least one probe required");
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
}

SweepConfig SweepConfig::from_json_text(const std::string& text) {
    const json j = json::parse(text);
    SweepConfig cfg;
    cfg.x = j.value("x", cfg.x);
    cfg.p = j.value("p", cfg.p);
    cfg.t_min = j.value("t_min", cfg.t_min);
    cfg.t_max = j.value("t_max", cfg.t_max);
    cfg.n_t = j.value("n_t", cfg.n_t);
    cfg.omega_min = j.value("omega_min", cfg.omega_min);
    cfg.omega_max = j.value("omega_max", cfg.omega_max);
    cfg.n_omega = j.value("n_omega", cfg.n_omega);
    cfg.dt = j.value("dt", cfg.dt);
    cfg.t_horizon = j.value("t_horizon", cfg.t_horizon);
    cfg.lc_eps = j.value("lc_eps", cfg.lc_eps);
    cfg.conv_eps = j.value("conv_eps", cfg.conv_eps);
    cfg.threads = j.value("threads", cfg.threads);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("probes")) {
        cfg.probes.clear();
        for (const auto& pr : j.at("probes")) {
            if (!pr.is_array() || pr.size() != 2)
                throw std::invalid_argument("probes must be [m_z, m_y] pairs");
            cfg.probes.emplace_back(pr[0].get<double>(), pr[1].get<double>());
        }
    }
    cfg.validate();
    return cfg;
}

SweepConfig SweepConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string SweepConfig::to_json() const {
    json j;
    j["x"] = x;
    j["p"] = p;
    j["t_min"] = t_min;
    j["t_max"] = t_max;
    j["n_t"] = n_t;
    j["omega_min"] = omega_min;
    j["omega_max"] = omega_max;
    j["n_omega"] = n_omega;
    j["dt"] = dt;
    j["t_horizon"] = t_horizon;
    j["probes"] = json::array();
    for (const auto& pr : probes) j["probes"].push_back({pr[0], pr[1]});
    j["lc_eps"] = lc_eps;
    j["conv_eps"] = conv_eps;
    j["threads"] = threads;
    j["seed"] = seed;
    return j.dump();
}

namespace {

bool is_stable(fixedpoint::StabilityClass c) {
    return c == fixedpoint::StabilityClass::StableNode ||
           c == fixedpoint::StabilityClass::StableSpiral;
}

}  // namespace

PhaseCell classify_cell(double temperature, double omega, const SweepConfig& cfg) {
    const auto params = ModelParams::from_temperature(cfg.x, 1, temperature, omega);

    PhaseCell cell;
    cell.temperature = temperature;
    cell.omega = omega;

    const auto roots = fixedpoint::find_fixed_points(params);
    cell.n_fixed_points = static_cast<int>(roots.size());
    bool fm = false;
    for (const auto& r : roots) {
        if (r.m_z == 0.0) cell.origin_stable = is_stable(r.cls);
        if (r.m_z > 0.0) {
            cell.largest_root_class = r.cls;  // roots sorted ascending: last wins
            if (is_stable(r.cls)) fm = true;
        }
    }

    meanfield::ClassifySettings cls;
    cls.lc_eps = cfg.lc_eps;
    cls.conv_eps = cfg.conv_eps;
    auto probe_verdict = [&](const Eigen::Vector2d& pr) {
        meanfield::OverlapState s0;
        s0.m_z = Eigen::VectorXd::Constant(1, pr[0]);
        s0.m_y = Eigen::VectorXd::Constant(1, pr[1]);
        const auto traj = meanfield::integrate(s0, params, cfg.dt, cfg.t_horizon, 10);
        return meanfield::classify_trajectory(traj, cls).kind;
    };
    cell.far_verdict = probe_verdict(cfg.probes.front());
    cell.near_verdict =
        cfg.probes.size() > 1 ? probe_verdict(cfg.probes[1]) : cell.far_verdict;

    using meanfield::VerdictKind;
    const bool lc = cell.far_verdict == VerdictKind::LimitCycle ||
                    cell.near_verdict == VerdictKind::LimitCycle;
    const bool undecided = cell.far_verdict == VerdictKind::Undecided ||
                           cell.near_verdict == VerdictKind::Undecided;
    if (!lc && undecided)
        cell.phase = Phase::Undecided;
    else if (lc && fm)
        cell.phase = Phase::FM_LC;
    else if (lc)
        cell.phase = cell.origin_stable ? Phase::PM_LC : Phase::LC;
    else if (fm)
        cell.phase = Phase::FM;
    else
        cell.phase = Phase::PM;
    return cell;
}

PhaseMap sweep(const SweepConfig& cfg) {
    cfg.validate();
    PhaseMap map;
    map.config = cfg;
    for (int i = 0; i < cfg.n_t; ++i)
        map.t_grid.push_back(cfg.t_min + (cfg.t_max - cfg.t_min) * i / (cfg.n_t - 1));
    for (int i = 0; i < cfg.n_omega; ++i)
        map.omega_grid.push_back(cfg.omega_min +
                                 (cfg.omega_max - cfg.omega_min) * i / (cfg.n_omega - 1));

    map.cells.resize(static_cast<std::size_t>(cfg.n_t) * cfg.n_omega);
    util::parallel_for_index(map.cells.size(), cfg.threads, [&](std::size_t idx) {
        const int it = static_cast<int>(idx) / cfg.n_omega;
        const int iw = static_cast<int>(idx) % cfg.n_omega;
        map.cells[idx] = classify_cell(map.t_grid[it], map.omega_grid[iw], cfg);
    });

    map.boundary = fixedpoint::sample_boundary(cfg.x, map.omega_grid);
    return map;
}

void emit_phase_csv(const PhaseMap& map, const std::string& path) {
    std::ofstream os(path, std::ios::binary);  // binary: byte-identical across runs
    if (!os) throw std::runtime_error("cannot write " + path);
    os << "T,omega,n_fixed_points,origin_stable,phase,far_verdict,near_verdict\n";
    for (const auto& c : map.cells)
        os << util::fmt_g(c.temperature) << ',' << util::fmt_g(c.omega) << ','
           << c.n_fixed_points << ',' << (c.origin_stable ? 1 : 0) << ','
           << to_string(c.phase) << ',' << meanfield::to_string(c.far_verdict) << ','
           << meanfield::to_string(c.near_verdict) << '\n';
    if (!os) throw std::runtime_error("write failed: " + path);
}

namespace {

struct Rgb {
    std::uint8_t r, g, b;
};

Rgb phase_color(Phase p) {
    switch (p) {
        case Phase::PM: return {235, 235, 235};
        case Phase::FM: return {235, 130, 50};
        case Phase::LC: return {70, 180, 80};
        case Phase::PM_LC: return {70, 110, 225};
        case Phase::FM_LC: return {150, 60, 200};
        default: return {250, 225, 70};
    }
}

}  // namespace

void emit_phase_image(const PhaseMap& map, const std::string& path) {
    const int nt = static_cast<int>(map.t_grid.size());
    const int nw = static_cast<int>(map.omega_grid.size());
    const int legend_h = 6;
    img::Image im(nt, nw + 1 + legend_h);

    // cells: T rightward, omega upward
    for (int it = 0; it < nt; ++it)
        for (int iw = 0; iw < nw; ++iw) {
            const auto col = phase_color(map.cells[it * nw + iw].phase);
            im.set(it, nw - 1 - iw, col.r, col.g, col.b);
        }

    // root-count boundary overlay
    const double t0 = map.t_grid.front(), t1 = map.t_grid.back();
    for (const auto& bs : map.boundary) {
        const auto itw = std::find(map.omega_grid.begin(), map.omega_grid.end(), bs.omega);
        if (itw == map.omega_grid.end()) continue;
        const int iw = static_cast<int>(itw - map.omega_grid.begin());
        if (bs.t_boundary < t0 || bs.t_boundary > t1) continue;
        const int it = static_cast<int>(std::lround((bs.t_boundary - t0) / (t1 - t0) * (nt - 1)));
        im.set(it, nw - 1 - iw, 0, 0, 0);
    }

    // legend strip: one swatch per phase, separated by white
    const Phase all[] = {Phase::PM,    Phase::FM,    Phase::LC,
                         Phase::PM_LC, Phase::FM_LC, Phase::Undecided};
    const int sw = std::max(1, nt / 7);
    for (int i = 0; i < 6; ++i) {
        const auto col = phase_color(all[i]);
        im.fill_rect(i * (sw + 1), nw + 1, sw, legend_h, col.r, col.g, col.b);
    }

    img::write_png(im, path);
}

void emit_trajectory_image(const std::vector<meanfield::Trajectory>& trajectories,
                           const std::vector<fixedpoint::FixedPointReport>& fixed_points,
                           const std::string& path) {
    if (trajectories.empty()) throw std::invalid_argument("no trajectories to draw");
    double zmin = -1.0, zmax = 1.0, ymin = -1.0, ymax = 1.0;
    for (const auto& tr : trajectories)
        for (const auto& s : tr.states) {
            zmin = std::min(zmin, s.m_z[0]);
            zmax = std::max(zmax, s.m_z[0]);
            ymin = std::min(ymin, s.m_y[0]);
            ymax = std::max(ymax, s.m_y[0]);
        }
    const double mz = 0.08 * (zmax - zmin), my = 0.08 * (ymax - ymin);
    zmin -= mz;
    zmax += mz;
    ymin -= my;
    ymax += my;

    const int side = 600;
    img::Image im(side, side);
    auto px = [&](double z) { return static_cast<int>((z - zmin) / (zmax - zmin) * (side - 1)); };
    auto py = [&](double y) {
        return static_cast<int>((ymax - y) / (ymax - ymin) * (side - 1));
    };

    // axes through the origin
    im.draw_line(px(0.0), 0, px(0.0), side - 1, 210, 210, 210);
    im.draw_line(0, py(0.0), side - 1, py(0.0), 210, 210, 210);

    const Rgb palette[] = {{40, 90, 200},  {40, 160, 90},  {200, 140, 40},
                           {120, 60, 180}, {60, 170, 180}, {120, 120, 120}};
    for (std::size_t k = 0; k < trajectories.size(); ++k) {
        const auto& tr = trajectories[k];
        const auto col = palette[k % 6];
        for (std::size_t i = 1; i < tr.states.size(); ++i)
            im.draw_line(px(tr.states[i - 1].m_z[0]), py(tr.states[i - 1].m_y[0]),
                         px(tr.states[i].m_z[0]), py(tr.states[i].m_y[0]), col.r, col.g,
                         col.b);
    }

    for (const auto& fp : fixed_points)
        if (is_stable(fp.cls)) im.draw_disc(px(fp.m_z), py(fp.m_y), 4, 220, 30, 30);

    img::write_png(im, path);
}

}  // namespace oqhn::phasemap
