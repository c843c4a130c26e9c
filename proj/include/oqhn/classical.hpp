#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "oqhn/patterns.hpp"

namespace oqhn::classical {

/// Hebb couplings J_ij = (1/N) sum_mu xi_i^mu xi_j^mu. The diagonal is
/// stored as defined; update rules never read it (they sum over j != i).
Eigen::MatrixXd hebbian_couplings(const PatternSet& patterns);

/// E = -(1/2) sum_{i,j} J_ij s_i s_j, full double sum, diagonal included.
double hopfield_energy(const Eigen::MatrixXd& J, const SpinConfig& s);

/// E = -(1/(2 N^{x-1})) sum_mu (sum_j xi_j^mu s_j)^x. Only even x >= 2 is
/// accepted: odd exponents break the spin-inversion symmetry of the energy.
double modern_energy(const PatternSet& patterns, const SpinConfig& s, int x);

/// Local field (1/N^{x-1}) sum_mu xi_i^mu (sum_{j != i} xi_j^mu s_j)^{x-1};
/// the spin update is s_i <- sgn(delta_e). The inner sum excludes j = i.
double delta_e(const PatternSet& patterns, const SpinConfig& s, int i, int x);

enum class UpdateOrder { Sequential, RandomPermutation };

/// One asynchronous sweep: visits every site once (sequential order, or a
/// permutation drawn from rng), setting s_i <- sgn(delta_e_i). An exact zero
/// leaves the spin unchanged, so stored patterns are exact fixed points.
SpinConfig update_async(const PatternSet& patterns, SpinConfig s, int x,
                        UpdateOrder order = UpdateOrder::Sequential,
                        std::mt19937_64* rng = nullptr);

struct RetrievalResult {
    SpinConfig state;
    int sweeps_used = 0;
    bool converged = false;
};

/// Repeats sweeps until no spin changes or max_sweeps is reached.
RetrievalResult retrieve(const PatternSet& patterns, const SpinConfig& s0, int x,
                         int max_sweeps, UpdateOrder order = UpdateOrder::Sequential,
                         std::mt19937_64* rng = nullptr);

struct CapacityConfig {
    int n_spins = 100;
    int x = 2;
    double noise_fraction = 0.05;   // fraction of probe bits flipped
    double error_threshold = 0.01;  // max final Hamming distance, fraction of N
    double success_threshold = 0.9;
    int trials = 3;                 // independent pattern draws per load
    int max_probes = 0;             // probes per trial; 0 = probe every pattern
    int max_sweeps = 20;
    int threads = 1;
    std::uint64_t seed = 1;
    std::vector<int> p_schedule;
};

struct LoadPoint {
    int p = 0;
    double success_rate = 0.0;
    double mean_final_distance = 0.0;  // fraction of N
};

struct CapacityReport {
    int n_spins = 0;
    int x = 0;
    double noise_fraction = 0.0;
    double error_threshold = 0.0;
    int trials = 0;
    int estimated_capacity = 0;  // largest p in the schedule passing the threshold
    std::vector<LoadPoint> load_curve;
};

/// For each p in the schedule: draw p fresh patterns per trial, probe stored
/// patterns corrupted by noise_fraction, and record the fraction retrieved to
/// within error_threshold * N. Trials run in parallel on independent seeded
/// streams, so the report is identical for any thread count.
CapacityReport capacity_experiment(const CapacityConfig& cfg);

/// CSV with header `p,success_rate,mean_final_distance`.
void write_capacity_csv(const CapacityReport& report, std::ostream& os);

}  // namespace oqhn::classical
