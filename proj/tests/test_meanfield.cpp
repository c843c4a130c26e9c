#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oqhn/fixedpoint.hpp"
#include "oqhn/meanfield.hpp"
#include "oqhn/util.hpp"

using namespace oqhn;
using namespace oqhn::meanfield;

namespace {

OverlapState state1(double mz, double my) {
    OverlapState s;
    s.m_z = Eigen::VectorXd::Constant(1, mz);
    s.m_y = Eigen::VectorXd::Constant(1, my);
    return s;
}

// independent enumeration oracle for the pattern-averaged drive
Eigen::VectorXd oracle_drive(const Eigen::VectorXd& m_z, const ModelParams& prm) {
    const int p = prm.p;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(p);
    std::vector<int> xi(p, -1);
    for (int conf = 0; conf < (1 << p); ++conf) {
        for (int nu = 0; nu < p; ++nu) xi[nu] = (conf >> nu) & 1 ? 1 : -1;
        double arg = 0.0;
        for (int nu = 0; nu < p; ++nu) arg += xi[nu] * std::pow(m_z[nu], prm.x - 1);
        for (int mu = 0; mu < p; ++mu) out[mu] += xi[mu] * std::tanh(prm.beta * arg);
    }
    return out / std::pow(2.0, p);
}

// scalar bisection oracle for M = tanh(beta M), beta > 1
double oracle_tanh_root(double beta) {
    double lo = 1e-6, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (std::tanh(beta * mid) - mid > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE_BEGIN("meanfield");

TEST_CASE("drive term") {
    SUBCASE("p=1 collapses to tanh(beta M^{x-1})") {
        for (int x : {2, 4}) {
            const auto prm = ModelParams::from_beta(x, 1, 1.3, 0.2);
            for (double m : {-0.8, -0.1, 0.0, 0.4, 0.9}) {
                const auto d = drive_term(Eigen::VectorXd::Constant(1, m), prm);
                CHECK(d[0] ==
                      doctest::Approx(std::tanh(1.3 * util::ipow(m, x - 1))).epsilon(1e-14));
            }
        }
    }
    SUBCASE("p=2 closed form") {
        const auto prm = ModelParams::from_beta(4, 2, 0.9, 0.0);
        Eigen::VectorXd m(2);
        m << 0.7, -0.3;
        const double a1 = std::pow(0.7, 3), a2 = std::pow(-0.3, 3);
        const auto d = drive_term(m, prm);
        CHECK(d[0] == doctest::Approx(0.5 * (std::tanh(0.9 * (a1 + a2)) +
                                             std::tanh(0.9 * (a1 - a2)))).epsilon(1e-14));
    }
    SUBCASE("p=3 random m matches the 8-term enumeration oracle") {
        const auto prm = ModelParams::from_beta(4, 3, 1.3, 0.1);
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int rep = 0; rep < 25; ++rep) {
            Eigen::VectorXd m(3);
            m << u(rng), u(rng), u(rng);
            const auto d = drive_term(m, prm);
            const auto o = oracle_drive(m, prm);
            for (int mu = 0; mu < 3; ++mu)
                CHECK(d[mu] == doctest::Approx(o[mu]).epsilon(1e-14));
        }
    }
    SUBCASE("p above the enumeration cap is rejected") {
        const auto prm = ModelParams{2, drive_p_max + 1, 1.0, 0.0};
        CHECK_THROWS_AS(drive_term(Eigen::VectorXd::Zero(drive_p_max + 1), prm),
                        std::invalid_argument);
    }
}

TEST_CASE("rhs") {
    SUBCASE("origin is always a fixed point") {
        for (int x : {2, 4, 6}) {
            const auto prm = ModelParams::from_beta(x, 2, 2.0, 0.7);
            const auto d = rhs(OverlapState::zero(2), prm);
            CHECK(d.m_z.cwiseAbs().maxCoeff() == 0.0);
            CHECK(d.m_y.cwiseAbs().maxCoeff() == 0.0);
        }
    }
    SUBCASE("direct substitution: p=1, x=4, Omega=0, beta=1 at (1, 0)") {
        const auto prm = ModelParams::from_beta(4, 1, 1.0, 0.0);
        const auto d = rhs(state1(1.0, 0.0), prm);
        CHECK(d.m_z[0] == doctest::Approx(-1.0 + std::tanh(1.0)).epsilon(1e-14));
        CHECK(d.m_z[0] == doctest::Approx(-0.23840).epsilon(1e-4));
        CHECK(d.m_y[0] == 0.0);
    }
    SUBCASE("vanishes at every solver fixed point (m_y = -4 Omega m_z)") {
        for (double omega : {0.0, 0.3}) {
            const auto prm = ModelParams::from_beta(4, 1, 3.0, omega);
            for (const auto& fp : fixedpoint::find_fixed_points(prm)) {
                const auto d = rhs(state1(fp.m_z, fp.m_y), prm);
                CHECK(std::abs(d.m_z[0]) < 1e-9);
                CHECK(std::abs(d.m_y[0]) < 1e-9);
            }
        }
    }
}

TEST_CASE("integrate") {
    SUBCASE("origin stays at the origin") {
        const auto prm = ModelParams::from_beta(4, 1, 2.0, 0.5);
        const auto traj = integrate(OverlapState::zero(1), prm, 1e-2, 10.0, 10);
        for (const auto& s : traj.states) {
            CHECK(s.m_z[0] == 0.0);
            CHECK(s.m_y[0] == 0.0);
        }
    }
    SUBCASE("x=2, Omega=0, beta=2 relaxes to the tanh fixed point") {
        const auto prm = ModelParams::from_beta(2, 1, 2.0, 0.0);
        const auto traj = integrate(state1(0.5, 0.0), prm, 1e-2, 50.0, 10);
        CHECK(traj.states.back().m_z[0] == doctest::Approx(oracle_tanh_root(2.0)).epsilon(1e-4));
        CHECK(traj.states.back().m_z[0] == doctest::Approx(0.95750).epsilon(1e-4));
    }
    SUBCASE("halving dt changes the endpoint by less than 1e-6") {
        const auto prm = ModelParams::from_beta(2, 1, 2.0, 0.0);
        const auto a = integrate(state1(0.5, 0.0), prm, 1e-2, 50.0, 1000000);
        const auto b = integrate(state1(0.5, 0.0), prm, 5e-3, 50.0, 1000000);
        CHECK(std::abs(a.states.back().m_z[0] - b.states.back().m_z[0]) < 1e-6);
    }
    SUBCASE("global error scales as dt^4") {
        // mid-transient endpoint, where the error signal is well above rounding
        const auto prm = ModelParams::from_beta(2, 1, 2.0, 0.4);
        auto endpoint = [&](double dt) {
            return integrate(state1(0.5, 0.0), prm, dt, 5.0, 1000000).states.back().m_z[0];
        };
        const double y1 = endpoint(0.05), y2 = endpoint(0.025), y4 = endpoint(0.0125);
        const double ratio = (y1 - y2) / (y2 - y4);
        CHECK(ratio > 12.0);
        CHECK(ratio < 20.0);
    }
    SUBCASE("inversion symmetry: trajectory from -s0 is the exact negation") {
        for (int p : {1, 2}) {
            const auto prm = ModelParams::from_beta(4, p, 2.5, 0.6);
            OverlapState s0;
            s0.m_z = Eigen::VectorXd::LinSpaced(p, 0.7, 0.9);
            s0.m_y = Eigen::VectorXd::LinSpaced(p, -0.4, -0.2);
            OverlapState n0;
            n0.m_z = -s0.m_z;
            n0.m_y = -s0.m_y;
            const auto a = integrate(s0, prm, 1e-2, 20.0, 10);
            const auto b = integrate(n0, prm, 1e-2, 20.0, 10);
            for (std::size_t i = 0; i < a.states.size(); ++i) {
                CHECK((a.states[i].m_z + b.states[i].m_z).cwiseAbs().maxCoeff() < 1e-12);
                CHECK((a.states[i].m_y + b.states[i].m_y).cwiseAbs().maxCoeff() < 1e-12);
            }
        }
    }
    SUBCASE("bounded on a stress grid") {
        for (double beta : {0.1, 1.0, 10.0})
            for (double omega : {0.0, 1.0, 10.0}) {
                const auto prm = ModelParams::from_beta(4, 1, beta, omega);
                const auto traj = integrate(state1(3.0, -3.0), prm, 1e-2, 50.0, 50);
                for (const auto& s : traj.states) {
                    CHECK(std::abs(s.m_z[0]) < 50.0);
                    CHECK(std::abs(s.m_y[0]) < 50.0);
                }
            }
    }
    SUBCASE("argument validation") {
        const auto prm = ModelParams::from_beta(2, 1, 1.0, 0.0);
        CHECK_THROWS_AS(integrate(state1(0, 0), prm, 0.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(integrate(state1(0, 0), prm, 1.0, 0.5), std::invalid_argument);
    }
}

TEST_CASE("classify_trajectory") {
    SUBCASE("limit cycle in the x=2 unstable-spiral region") {
        const auto prm = ModelParams::from_temperature(2, 1, 0.5, 0.6);
        const auto traj = integrate(state1(3.0, -3.0), prm, 1e-2, 500.0, 10);
        const auto v = classify_trajectory(traj);
        CHECK(v.kind == VerdictKind::LimitCycle);
        CHECK(v.amplitude > 1e-3);
        CHECK(v.period > 0.0);
    }
    SUBCASE("convergence to the origin in the stable-node region") {
        const auto prm = ModelParams::from_beta(2, 1, 0.5, 0.1);
        const auto traj = integrate(state1(3.0, -3.0), prm, 1e-2, 500.0, 10);
        const auto v = classify_trajectory(traj);
        CHECK(v.kind == VerdictKind::ConvergedToPoint);
        CHECK(std::abs(v.terminal_point.m_z[0]) < 1e-8);
        CHECK(std::abs(v.terminal_point.m_y[0]) < 1e-8);
    }
    SUBCASE("x=4 near-origin probes always fall back to the origin") {
        for (double temp : {0.3, 1.0, 2.0})
            for (double omega : {0.0, 0.5, 1.5}) {
                const auto prm = ModelParams::from_temperature(4, 1, temp, omega);
                const auto traj = integrate(state1(1e-3, -1e-3), prm, 1e-2, 500.0, 10);
                const auto v = classify_trajectory(traj);
                CHECK(v.kind == VerdictKind::ConvergedToPoint);
                CHECK(std::abs(v.terminal_point.m_z[0]) < 1e-8);
            }
    }
    SUBCASE("too-short trajectory is rejected") {
        const auto prm = ModelParams::from_beta(2, 1, 1.0, 0.0);
        const auto traj = integrate(state1(0.5, 0.0), prm, 1e-2, 0.5, 1);
        CHECK_THROWS_AS(classify_trajectory(traj), std::invalid_argument);
    }
    SUBCASE("verdict JSON is a single line") {
        const auto prm = ModelParams::from_beta(2, 1, 0.5, 0.1);
        const auto traj = integrate(state1(1.0, 0.0), prm, 1e-2, 200.0, 10);
        const auto js = verdict_to_json(classify_trajectory(traj));
        CHECK(js.find("ConvergedToPoint") != std::string::npos);
        CHECK(js.find('\n') == std::string::npos);
    }
}

TEST_CASE("basin_radius") {
    SUBCASE("x=2 saddle origin has an empty basin") {
        const auto prm = ModelParams::from_beta(2, 1, 2.0, 0.0);
        BasinSettings bs;
        bs.t_max = 200.0;
        const auto r = basin_radius(prm, Eigen::Vector2d(1.0, -1.0).normalized(), bs);
        CHECK_FALSE(r.saturated);
        CHECK(r.radius < 2e-3);
    }
    SUBCASE("basin grows with x and tracks the unstable root (Omega = 0)") {
        // at Omega = 0 the M_Z flow decouples, so the escape threshold along
        // (1,-1)/sqrt(2) sits exactly at m_z = M_a, the smaller positive root
        BasinSettings bs;
        bs.t_max = 300.0;
        const double r4 = basin_radius(ModelParams::from_beta(4, 1, 3.0, 0.0), Eigen::Vector2d(1.0, -1.0), bs).radius;
        const double r6 = basin_radius(ModelParams::from_beta(6, 1, 3.0, 0.0), Eigen::Vector2d(1.0, -1.0), bs).radius;
        const double r8 = basin_radius(ModelParams::from_beta(8, 1, 3.0, 0.0), Eigen::Vector2d(1.0, -1.0), bs).radius;
        CHECK(r4 < r6);
        CHECK(r6 < r8);

        const auto roots = fixedpoint::find_fixed_points(ModelParams::from_beta(4, 1, 3.0, 0.0));
        double smallest_pos = 1e9;
        for (const auto& fp : roots)
            if (fp.m_z > 1e-9) smallest_pos = std::min(smallest_pos, fp.m_z);
        CHECK(r4 > 0.0);
        CHECK(r4 / std::sqrt(2.0) == doctest::Approx(smallest_pos).epsilon(5e-3));
    }
    SUBCASE("saturation flag when nothing escapes") {
        const auto prm = ModelParams::from_beta(4, 1, 0.5, 0.1);  // deep PM
        BasinSettings bs;
        bs.t_max = 200.0;
        bs.r_max = 2.0;
        const auto r = basin_radius(prm, Eigen::Vector2d(1.0, -1.0), bs);
        CHECK(r.saturated);
        CHECK(r.radius == doctest::Approx(2.0));
    }
}

TEST_CASE("trajectory CSV") {
    const auto prm = ModelParams::from_beta(2, 2, 1.0, 0.0);
    OverlapState s0;
    s0.m_z = Eigen::VectorXd::Constant(2, 0.3);
    s0.m_y = Eigen::VectorXd::Zero(2);
    const auto traj = integrate(s0, prm, 0.1, 1.0, 5);
    std::ostringstream os;
    write_trajectory_csv(traj, os);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "t,m_z_1,m_z_2,m_y_1,m_y_2");
    int rows = 0;
    for (std::string line; std::getline(is, line);) ++rows;
    CHECK(rows == static_cast<int>(traj.times.size()));
}

TEST_SUITE_END();
