#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "oqhn/params.hpp"

namespace oqhn::meanfield {

/// Mean-field overlap state: (M_Z^mu, M_Y^mu) for mu = 1..p.
struct OverlapState {
    Eigen::VectorXd m_z;
    Eigen::VectorXd m_y;

    static OverlapState zero(int p) {
        return {Eigen::VectorXd::Zero(p), Eigen::VectorXd::Zero(p)};
    }
};

/// Pattern-averaged drive, component mu:
///   2^{-p} sum_{xi in {+-1}^p} xi^mu tanh(beta sum_nu xi^nu (M_Z^nu)^{x-1}).
/// The average enumerates all 2^p sign vectors exactly; p is capped at
/// drive_p_max to keep the enumeration bounded.
inline constexpr int drive_p_max = 16;
Eigen::VectorXd drive_term(const Eigen::VectorXd& m_z, const ModelParams& params);

/// dM_Z^mu/dt = -M_Z^mu + 2 Omega M_Y^mu + drive_mu(M_Z)
/// dM_Y^mu/dt = -2 Omega M_Z^mu - (1/2) M_Y^mu
OverlapState rhs(const OverlapState& state, const ModelParams& params);

struct Trajectory {
    std::vector<double> times;
    std::vector<OverlapState> states;
    ModelParams params;
};

/// Fixed-step classic RK4. Records the initial state and every
/// record_stride-th step (plus the final step). Deterministic; throws on a
/// non-finite state.
Trajectory integrate(const OverlapState& state0, const ModelParams& params,
                     double dt, double t_max, int record_stride = 1);

enum class VerdictKind { ConvergedToPoint, LimitCycle, Undecided };

const char* to_string(VerdictKind k);

struct ClassifySettings {
    double transient_fraction = 0.5;
    int n_windows = 4;        // analysis windows on the post-transient segment
    double conv_eps = 1e-6;   // terminal-window state diameter for convergence
    double lc_eps = 1e-3;     // minimum peak-to-peak amplitude of a limit cycle
    double amp_rel_tol = 0.05;  // consecutive-window amplitude agreement
};

struct TrajectoryVerdict {
    VerdictKind kind = VerdictKind::Undecided;
    OverlapState terminal_point;  // meaningful when ConvergedToPoint
    double amplitude = 0.0;       // peak-to-peak of M_Z^1, last window
    double period = 0.0;          // rough estimate, limit cycles only
    struct Diagnostics {
        double window_span = 0.0;
        double amp_prev = 0.0, amp_last = 0.0;
        double drift = 0.0;           // window-mean shift, inf norm
        double terminal_diameter = 0.0;
    } diagnostics;
};

/// Discards the leading transient, then judges the remainder window-by-window:
/// a terminal window collapsed to a point is ConvergedToPoint; a persistent
/// oscillation with stable amplitude and drift-free mean is LimitCycle;
/// anything else is Undecided.
TrajectoryVerdict classify_trajectory(const Trajectory& traj,
                                      const ClassifySettings& settings = {});

/// One-line JSON record for a verdict.
std::string verdict_to_json(const TrajectoryVerdict& v);

struct BasinSettings {
    double r_max = 5.0;
    double tol = 1e-3;
    double t_max = 500.0;
    double dt = 1e-2;
    double origin_eps = 1e-4;  // terminal distance from the origin that still counts
    ClassifySettings classify;
};

struct BasinResult {
    double radius = 0.0;
    bool saturated = false;  // no escape found up to r_max
};

/// Bisects along r * direction (p = 1 only) for the smallest r whose
/// trajectory no longer converges to the origin.
BasinResult basin_radius(const ModelParams& params,
                         Eigen::Vector2d direction = Eigen::Vector2d(1.0, -1.0).normalized(),
                         const BasinSettings& settings = {});

/// CSV columns: t, m_z_1..m_z_p, m_y_1..m_y_p.
void write_trajectory_csv(const Trajectory& traj, std::ostream& os);

}  // namespace oqhn::meanfield
