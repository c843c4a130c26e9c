#include "oqhn/meanfield.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "oqhn/util.hpp"

namespace oqhn::meanfield {

Eigen::VectorXd drive_term(const Eigen::VectorXd& m_z, const ModelParams& params) {
    params.validate();
    const int p = params.p;
    if (m_z.size() != p) throw std::invalid_argument("drive_term: m_z size != p");
    if (p > drive_p_max)
        throw std::invalid_argument("drive_term: p exceeds the exact-enumeration cap");

    Eigen::VectorXd a(p);
    for (int nu = 0; nu < p; ++nu) a[nu] = util::ipow(m_z[nu], params.x - 1);

    Eigen::VectorXd drive = Eigen::VectorXd::Zero(p);
    const unsigned long n_conf = 1UL << p;
    for (unsigned long bits = 0; bits < n_conf; ++bits) {
        double arg = 0.0;
        for (int nu = 0; nu < p; ++nu)
            arg += ((bits >> nu) & 1UL) ? a[nu] : -a[nu];
        const double t = std::tanh(params.beta * arg);
        for (int mu = 0; mu < p; ++mu)
            drive[mu] += ((bits >> mu) & 1UL) ? t : -t;
    }
    return drive / static_cast<double>(n_conf);
}

OverlapState rhs(const OverlapState& state, const ModelParams& params) {
    const Eigen::VectorXd drive = drive_term(state.m_z, params);
    OverlapState d;
    d.m_z = -state.m_z + 2.0 * params.omega * state.m_y + drive;
    d.m_y = -2.0 * params.omega * state.m_z - 0.5 * state.m_y;
    return d;
}

namespace {

void axpy(OverlapState& y, double a, const OverlapState& x) {
    y.m_z += a * x.m_z;
    y.m_y += a * x.m_y;
}

bool finite(const OverlapState& s) {
    return s.m_z.allFinite() && s.m_y.allFinite();
}

}  // namespace

Trajectory integrate(const OverlapState& state0, const ModelParams& params,
                     double dt, double t_max, int record_stride) {
    params.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be > 0");
    if (!(t_max > dt)) throw std::invalid_argument("integrate: t_max must exceed dt");
    if (record_stride < 1) throw std::invalid_argument("integrate: stride must be >= 1");
    if (state0.m_z.size() != params.p || state0.m_y.size() != params.p)
        throw std::invalid_argument("integrate: state size != p");

    const long n_steps = static_cast<long>(std::ceil(t_max / dt - 1e-12));
    Trajectory traj;
    traj.params = params;
    traj.times.reserve(n_steps / record_stride + 2);
    traj.states.reserve(n_steps / record_stride + 2);
    traj.times.push_back(0.0);
    traj.states.push_back(state0);

    OverlapState y = state0;
    for (long i = 1; i <= n_steps; ++i) {
        const OverlapState k1 = rhs(y, params);
        OverlapState y2 = y;
        axpy(y2, 0.5 * dt, k1);
        const OverlapState k2 = rhs(y2, params);
        OverlapState y3 = y;
        axpy(y3, 0.5 * dt, k2);
        const OverlapState k3 = rhs(y3, params);
        OverlapState y4 = y;
        axpy(y4, dt, k3);
        const OverlapState k4 = rhs(y4, params);

        axpy(y, dt / 6.0, k1);
        axpy(y, dt / 3.0, k2);
        axpy(y, dt / 3.0, k3);
        axpy(y, dt / 6.0, k4);

        if (!finite(y))
            throw std::runtime_error("integrate: state diverged (non-finite value)");
        if (i % record_stride == 0 || i == n_steps) {
            traj.times.push_back(i * dt);
            traj.states.push_back(y);
        }
    }
    return traj;
}

const char* to_string(VerdictKind k) {
    switch (k) {
        case VerdictKind::ConvergedToPoint: return "ConvergedToPoint";
        case VerdictKind::LimitCycle: return "LimitCycle";
        default: return "Undecided";
    }
}

namespace {

struct WindowStats {
    double amp = 0.0;       // peak-to-peak of m_z[0]
    Eigen::VectorXd mean_z, mean_y;
    double diameter = 0.0;  // inf-norm diameter over all components
};

WindowStats window_stats(const Trajectory& traj, std::size_t lo, std::size_t hi) {
    const int p = traj.params.p;
    WindowStats w;
    w.mean_z = Eigen::VectorXd::Zero(p);
    w.mean_y = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd zmin = traj.states[lo].m_z, zmax = traj.states[lo].m_z;
    Eigen::VectorXd ymin = traj.states[lo].m_y, ymax = traj.states[lo].m_y;
    for (std::size_t i = lo; i < hi; ++i) {
        const auto& s = traj.states[i];
        zmin = zmin.cwiseMin(s.m_z);
        zmax = zmax.cwiseMax(s.m_z);
        ymin = ymin.cwiseMin(s.m_y);
        ymax = ymax.cwiseMax(s.m_y);
        w.mean_z += s.m_z;
        w.mean_y += s.m_y;
    }
    const double cnt = static_cast<double>(hi - lo);
    w.mean_z /= cnt;
    w.mean_y /= cnt;
    w.amp = zmax[0] - zmin[0];
    w.diameter = std::max((zmax - zmin).maxCoeff(), (ymax - ymin).maxCoeff());
    return w;
}

double estimate_period(const Trajectory& traj, std::size_t lo, std::size_t hi, double mean) {
    // crossings of m_z[0] through its window mean; one period = two crossings
    int crossings = 0;
    double first = -1.0, last = -1.0;
    for (std::size_t i = lo + 1; i < hi; ++i) {
        const double a = traj.states[i - 1].m_z[0] - mean;
        const double b = traj.states[i].m_z[0] - mean;
        if ((a <= 0.0 && b > 0.0) || (a >= 0.0 && b < 0.0)) {
            ++crossings;
            if (first < 0.0) first = traj.times[i];
            last = traj.times[i];
        }
    }
    if (crossings < 3) return 0.0;
    return 2.0 * (last - first) / (crossings - 1);
}

}  // namespace

TrajectoryVerdict classify_trajectory(const Trajectory& traj, const ClassifySettings& cfg) {
    const std::size_t n = traj.states.size();
    const std::size_t start = static_cast<std::size_t>(cfg.transient_fraction * n);
    const std::size_t m = n - start;
    const int nw = std::max(cfg.n_windows, 2);
    if (m < static_cast<std::size_t>(8 * nw))
        throw std::invalid_argument("classify_trajectory: trajectory too short");

    const std::size_t wlen = m / nw;
    const std::size_t lo_prev = start + (nw - 2) * wlen;
    const std::size_t lo_last = start + (nw - 1) * wlen;
    const WindowStats prev = window_stats(traj, lo_prev, lo_last);
    const WindowStats last = window_stats(traj, lo_last, n);

    TrajectoryVerdict v;
    v.amplitude = last.amp;
    v.diagnostics.window_span = traj.times[n - 1] - traj.times[lo_last];
    v.diagnostics.amp_prev = prev.amp;
    v.diagnostics.amp_last = last.amp;
    v.diagnostics.terminal_diameter = last.diameter;
    v.diagnostics.drift = std::max((last.mean_z - prev.mean_z).cwiseAbs().maxCoeff(),
                                   (last.mean_y - prev.mean_y).cwiseAbs().maxCoeff());

    if (last.diameter < cfg.conv_eps) {
        v.kind = VerdictKind::ConvergedToPoint;
        v.terminal_point = traj.states[n - 1];
        return v;
    }
    const double amp_ref = std::max(prev.amp, last.amp);
    const bool amp_stable = std::abs(last.amp - prev.amp) <= cfg.amp_rel_tol * amp_ref;
    const bool drift_free = v.diagnostics.drift <= cfg.amp_rel_tol * amp_ref;
    if (last.amp > cfg.lc_eps && amp_stable && drift_free) {
        v.kind = VerdictKind::LimitCycle;
        v.period = estimate_period(traj, lo_last, n, last.mean_z[0]);
        return v;
    }
    v.kind = VerdictKind::Undecided;
    return v;
}

std::string verdict_to_json(const TrajectoryVerdict& v) {
    std::ostringstream os;
    os << "{\"kind\":\"" << to_string(v.kind) << "\"";
    if (v.kind == VerdictKind::ConvergedToPoint) {
        os << ",\"terminal_m_z\":[";
        for (int i = 0; i < v.terminal_point.m_z.size(); ++i)
            os << (i ? "," : "") << util::fmt_g(v.terminal_point.m_z[i]);
        os << "],\"terminal_m_y\":[";
        for (int i = 0; i < v.terminal_point.m_y.size(); ++i)
            os << (i ? "," : "") << util::fmt_g(v.terminal_point.m_y[i]);
        os << "]";
    }
    if (v.kind == VerdictKind::LimitCycle)
        os << ",\"amplitude\":" << util::fmt_g(v.amplitude)
           << ",\"period\":" << util::fmt_g(v.period);
    os << ",\"diagnostics\":{\"amp_prev\":" << util::fmt_g(v.diagnostics.amp_prev)
       << ",\"amp_last\":" << util::fmt_g(v.diagnostics.amp_last)
       << ",\"drift\":" << util::fmt_g(v.diagnostics.drift)
       << ",\"terminal_diameter\":" << util::fmt_g(v.diagnostics.terminal_diameter) << "}}";
    return os.str();
}

namespace {

bool converges_to_origin(double r, const Eigen::Vector2d& dir, const ModelParams& params,
                         const BasinSettings& cfg) {
    OverlapState s0;
    s0.m_z = Eigen::VectorXd::Constant(1, r * dir[0]);
    s0.m_y = Eigen::VectorXd::Constant(1, r * dir[1]);
    const auto traj = integrate(s0, params, cfg.dt, cfg.t_max, 10);
    const auto verdict = classify_trajectory(traj, cfg.classify);
    if (verdict.kind != VerdictKind::ConvergedToPoint) return false;
    return std::abs(verdict.terminal_point.m_z[0]) < cfg.origin_eps &&
           std::abs(verdict.terminal_point.m_y[0]) < cfg.origin_eps;
}

}  // namespace

BasinResult basin_radius(const ModelParams& params, Eigen::Vector2d direction,
                         const BasinSettings& settings) {
    params.validate();
    if (params.p != 1) throw std::invalid_argument("basin_radius: p must be 1");
    if (direction.norm() == 0.0) throw std::invalid_argument("basin_radius: zero direction");
    direction.normalize();

    // The set of radii converging to the origin need not be an interval
    // (distant starts can spiral back in), so scan upward for the first
    // escape before bisecting the bracket.
    const int n_scan = 64;
    double lo = 0.0, hi = -1.0;
    for (int i = 1; i <= n_scan; ++i) {
        const double r = settings.r_max * i / n_scan;
        if (converges_to_origin(r, direction, params, settings)) {
            lo = r;
        } else {
            hi = r;
            break;
        }
    }
    if (hi < 0.0) return {settings.r_max, true};  // no escape found

    while (hi - lo > settings.tol) {
        const double mid = 0.5 * (lo + hi);
        if (converges_to_origin(mid, direction, params, settings))
            lo = mid;
        else
            hi = mid;
    }
    return {0.5 * (lo + hi), false};
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& os) {
    const int p = traj.params.p;
    os << 't';
    for (int mu = 1; mu <= p; ++mu) os << ",m_z_" << mu;
    for (int mu = 1; mu <= p; ++mu) os << ",m_y_" << mu;
    os << '\n';
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        os << util::fmt_g(traj.times[i]);
        for (int mu = 0; mu < p; ++mu) os << ',' << util::fmt_g(traj.states[i].m_z[mu]);
        for (int mu = 0; mu < p; ++mu) os << ',' << util::fmt_g(traj.states[i].m_y[mu]);
        os << '\n';
    }
}

}  // namespace oqhn::meanfield
