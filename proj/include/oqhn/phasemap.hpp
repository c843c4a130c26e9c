#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "oqhn/fixedpoint.hpp"
#include "oqhn/meanfield.hpp"

namespace oqhn::phasemap {

enum class Phase { PM, FM, LC, PM_LC, FM_LC, Undecided };

const char* to_string(Phase p);

struct SweepConfig {
    int x = 4;
    int p = 1;
    double t_min = 0.05, t_max = 1.5;
    int n_t = 50;
    double omega_min = 0.0, omega_max = 1.5;
    int n_omega = 50;
    double dt = 1e-2;
    double t_horizon = 500.0;
    // probes[0] is the far probe, probes[1] the near probe
    std::vector<Eigen::Vector2d> probes{{3.0, -3.0}, {0.05, -0.05}};
    double lc_eps = 1e-3;
    double conv_eps = 1e-6;
    int threads = 1;
    std::uint64_t seed = 0;  // accepted for config parity; the sweep is deterministic

    void validate() const;
    static SweepConfig from_json_file(const std::string& path);
    static SweepConfig from_json_text(const std::string& text);
    std::string to_json() const;
};

struct PhaseCell {
    double temperature = 0.0;
    double omega = 0.0;
    int n_fixed_points = 0;
    bool origin_stable = false;
    std::optional<fixedpoint::StabilityClass> largest_root_class;
    meanfield::VerdictKind far_verdict = meanfield::VerdictKind::Undecided;
    meanfield::VerdictKind near_verdict = meanfield::VerdictKind::Undecided;
    Phase phase = Phase::Undecided;
};

/// Classifies one grid point: analytic fixed points and stability via the
/// self-consistency solver, LC presence via the trajectory probes.
/// LC iff any probe settles on a limit cycle; FM iff some root with M_Z > 0
/// is linearly stable. An Undecided probe with no LC elsewhere makes the
/// cell Undecided.
PhaseCell classify_cell(double temperature, double omega, const SweepConfig& cfg);

struct PhaseMap {
    SweepConfig config;
    std::vector<double> t_grid;
    std::vector<double> omega_grid;
    std::vector<PhaseCell> cells;  // row-major: cells[it * n_omega + iw]
    std::vector<fixedpoint::BoundarySample> boundary;
};

/// Parallel map of classify_cell over the grid; per-cell results are
/// gathered by index so the map is independent of thread count. The
/// root-count boundary is sampled along the omega axis for overlay.
PhaseMap sweep(const SweepConfig& cfg);

/// CSV rows: T, omega, n_fixed_points, origin_stable, phase, far_verdict,
/// near_verdict (one per cell, grid order).
void emit_phase_csv(const PhaseMap& map, const std::string& path);

/// Color raster, one pixel per cell plus a legend strip; the analytic
/// boundary is overlaid in black. CSV is the contract, images are for humans.
void emit_phase_image(const PhaseMap& map, const std::string& path);

/// Phase-plane orbit plot (M_Z vs M_Y) with stable fixed points as red dots.
void emit_trajectory_image(const std::vector<meanfield::Trajectory>& trajectories,
                           const std::vector<fixedpoint::FixedPointReport>& fixed_points,
                           const std::string& path);

}  // namespace oqhn::phasemap
