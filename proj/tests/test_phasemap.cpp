#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "oqhn/phasemap.hpp"

using namespace oqhn;
using namespace oqhn::phasemap;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string temp_path(const char* name) {
    return std::string("oqhn_test_") + name;
}

}  // namespace

TEST_SUITE_BEGIN("phasemap");

TEST_CASE("classify_cell worked examples") {
    SUBCASE("x=2 unstable-spiral point is an LC cell") {
        SweepConfig cfg;
        cfg.x = 2;
        const auto cell = classify_cell(0.5, 0.6, cfg);
        CHECK(cell.phase == Phase::LC);
        CHECK_FALSE(cell.origin_stable);
        CHECK(cell.far_verdict == meanfield::VerdictKind::LimitCycle);
        CHECK(cell.near_verdict == meanfield::VerdictKind::LimitCycle);
    }
    SUBCASE("x=4 high temperature is PM") {
        SweepConfig cfg;
        cfg.x = 4;
        const auto cell = classify_cell(2.0, 1.0, cfg);
        CHECK(cell.phase == Phase::PM);
        CHECK(cell.n_fixed_points == 1);
        CHECK(cell.origin_stable);
    }
    SUBCASE("x=4 cold, weak drive is FM with five roots") {
        SweepConfig cfg;
        cfg.x = 4;
        const auto cell = classify_cell(0.2, 0.05, cfg);
        CHECK(cell.phase == Phase::FM);
        CHECK(cell.n_fixed_points == 5);
        CHECK(cell.origin_stable);  // the x=4 origin is always stable
        REQUIRE(cell.largest_root_class.has_value());
        CHECK((cell.largest_root_class == fixedpoint::StabilityClass::StableNode ||
               cell.largest_root_class == fixedpoint::StabilityClass::StableSpiral));
    }
}

TEST_CASE("sweep") {
    SweepConfig cfg;
    cfg.x = 4;
    cfg.t_min = 0.08;
    cfg.t_max = 0.5;
    cfg.n_t = 4;
    cfg.omega_min = 0.0;
    cfg.omega_max = 0.9;
    cfg.n_omega = 4;
    cfg.t_horizon = 200.0;

    SUBCASE("deterministic across thread counts, origin stable everywhere") {
        auto c1 = cfg, c8 = cfg;
        c1.threads = 1;
        c8.threads = 8;
        const auto m1 = sweep(c1);
        const auto m8 = sweep(c8);
        const auto p1 = temp_path("sweep1.csv"), p8 = temp_path("sweep8.csv");
        emit_phase_csv(m1, p1);
        emit_phase_csv(m8, p8);
        CHECK(slurp(p1) == slurp(p8));
        std::remove(p1.c_str());
        std::remove(p8.c_str());
        for (const auto& cell : m1.cells) CHECK(cell.origin_stable);
        CHECK(m1.cells.size() == 16);
        CHECK(m1.boundary.size() <= 4);
    }
    SUBCASE("CSV has one row per cell plus a header") {
        auto small = cfg;
        small.n_t = 2;
        small.n_omega = 2;
        const auto m = sweep(small);
        const auto path = temp_path("sweep_2x2.csv");
        emit_phase_csv(m, path);
        std::istringstream is(slurp(path));
        std::remove(path.c_str());
        std::string line;
        std::getline(is, line);
        CHECK(line == "T,omega,n_fixed_points,origin_stable,phase,far_verdict,near_verdict");
        int rows = 0;
        while (std::getline(is, line)) ++rows;
        CHECK(rows == 4);
    }
    SUBCASE("root-count boundary consistency") {
        const auto m = sweep(cfg);
        // cells with five roots must lie at T below the sampled tangency curve
        for (int it = 0; it < cfg.n_t; ++it)
            for (int iw = 0; iw < cfg.n_omega; ++iw) {
                const auto& cell = m.cells[it * cfg.n_omega + iw];
                if (cell.n_fixed_points != 5) continue;
                for (const auto& bs : m.boundary)
                    if (bs.omega == cell.omega)
                        CHECK(cell.temperature <=
                              bs.t_boundary + (cfg.t_max - cfg.t_min) / (cfg.n_t - 1));
            }
    }
    SUBCASE("invalid grid is rejected before any work") {
        auto bad = cfg;
        bad.n_t = 1;
        CHECK_THROWS_AS(sweep(bad), std::invalid_argument);
        auto badp = cfg;
        badp.p = 2;
        CHECK_THROWS_AS(sweep(badp), std::invalid_argument);
    }
}

TEST_CASE("golden 20x20 x=4 sweep CSV is stable byte-for-byte") {
    SweepConfig cfg;
    cfg.x = 4;
    cfg.p = 1;
    cfg.t_min = 0.05;
    cfg.t_max = 0.6;
    cfg.n_t = 20;
    cfg.omega_min = 0.0;
    cfg.omega_max = 1.2;
    cfg.n_omega = 20;
    cfg.dt = 1e-2;
    cfg.t_horizon = 200.0;
    cfg.threads = 2;
    const auto m = sweep(cfg);
    const auto path = temp_path("golden_check.csv");
    emit_phase_csv(m, path);
    const std::string fresh = slurp(path);
    std::remove(path.c_str());
    const std::string frozen = slurp(std::string(OQHN_TEST_DATA_DIR) + "/golden_phase_20x20_x4.csv");
    CHECK(fresh == frozen);
}

TEST_CASE("refinement keeps interior phases") {
    SweepConfig coarse;
    coarse.x = 2;
    coarse.t_min = 0.2;
    coarse.t_max = 1.2;
    coarse.n_t = 9;
    coarse.omega_min = 0.0;
    coarse.omega_max = 1.0;
    coarse.n_omega = 9;
    coarse.t_horizon = 200.0;
    coarse.threads = 2;
    auto fine = coarse;
    fine.n_t = 17;
    fine.n_omega = 17;
    const auto mc = sweep(coarse);
    const auto mf = sweep(fine);
    // shared grid points: fine(2i, 2j) == coarse(i, j); compare away from
    // phase boundaries of the coarse map
    auto coarse_phase = [&](int i, int j) { return mc.cells[i * 9 + j].phase; };
    for (int i = 1; i < 8; ++i)
        for (int j = 1; j < 8; ++j) {
            const Phase ph = coarse_phase(i, j);
            bool interior = true;
            for (int di = -1; di <= 1; ++di)
                for (int dj = -1; dj <= 1; ++dj)
                    interior &= coarse_phase(i + di, j + dj) == ph;
            if (!interior) continue;
            CHECK(mf.cells[(2 * i) * 17 + 2 * j].phase == ph);
        }
}

TEST_CASE("images") {
    SUBCASE("phase map PNG") {
        SweepConfig cfg;
        cfg.x = 4;
        cfg.t_min = 0.1;
        cfg.t_max = 0.5;
        cfg.n_t = 6;
        cfg.omega_min = 0.0;
        cfg.omega_max = 0.8;
        cfg.n_omega = 5;
        cfg.t_horizon = 120.0;
        cfg.threads = 2;
        const auto m = sweep(cfg);
        const auto path = temp_path("map.png");
        emit_phase_image(m, path);
        const std::string blob = slurp(path);
        std::remove(path.c_str());
        REQUIRE(blob.size() > 60);
        const unsigned char sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
        CHECK(std::equal(sig, sig + 8, reinterpret_cast<const unsigned char*>(blob.data())));
        // IHDR width at offset 16, height at 20 (big endian)
        auto be32 = [&](int off) {
            return (static_cast<unsigned>(static_cast<unsigned char>(blob[off])) << 24) |
                   (static_cast<unsigned>(static_cast<unsigned char>(blob[off + 1])) << 16) |
                   (static_cast<unsigned>(static_cast<unsigned char>(blob[off + 2])) << 8) |
                   static_cast<unsigned>(static_cast<unsigned char>(blob[off + 3]));
        };
        CHECK(be32(16) == 6u);
        CHECK(be32(20) == 5u + 1u + 6u);
    }
    SUBCASE("trajectory PNG") {
        const auto prm = ModelParams::from_temperature(2, 1, 0.5, 0.6);
        meanfield::OverlapState s0;
        s0.m_z = Eigen::VectorXd::Constant(1, 3.0);
        s0.m_y = Eigen::VectorXd::Constant(1, -3.0);
        const auto traj = meanfield::integrate(s0, prm, 1e-2, 60.0, 10);
        const auto fps = fixedpoint::find_fixed_points(prm);
        const auto path = temp_path("traj.png");
        emit_trajectory_image({traj}, fps, path);
        const std::string blob = slurp(path);
        std::remove(path.c_str());
        CHECK(blob.size() > 100);
    }
}

TEST_CASE("config JSON round trip") {
    SweepConfig cfg;
    cfg.x = 2;
    cfg.n_t = 7;
    cfg.probes = {{2.0, -1.0}};
    const auto text = cfg.to_json();
    const auto back = SweepConfig::from_json_text(text);
    CHECK(back.x == 2);
    CHECK(back.n_t == 7);
    REQUIRE(back.probes.size() == 1);
    CHECK(back.probes[0][0] == 2.0);
    CHECK_THROWS(SweepConfig::from_json_text("{\"x\": 3}"));
    CHECK_THROWS(SweepConfig::from_json_text("{\"probes\": [[1]]}"));
}

TEST_SUITE_END();
