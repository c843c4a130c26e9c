#pragma once

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "oqhn/params.hpp"
#include "oqhn/patterns.hpp"

namespace oqhn::lindblad {

using CMat = Eigen::MatrixXcd;

inline constexpr int n_max = 10;  // 2^N <= 1024; exact dense simulation only

/// Diagonals of the energy-difference operators, one row per site k:
/// DeltaE_k(z) = (1/N^{x-1}) sum_mu xi_k^mu (sum_j xi_j^mu z_j)^{x-1},
/// evaluated on every computational basis state z. The j-sum includes j = k
/// (the multi-index operator form carries no exclusion).
Eigen::MatrixXd build_delta_e_ops(const PatternSet& patterns, int x);

/// Dense jump operators L_{k+-} = f_{+-}(DeltaE_k) sigma_k^{+-} with
/// f_{+-}(d) = exp(+-beta d / 2) / sqrt(2 cosh(beta d)), the diagonal factor
/// applied on the left. Ordered [L_{0+}, L_{0-}, L_{1+}, L_{1-}, ...].
std::vector<CMat> build_lindblads(const Eigen::MatrixXd& delta_e, double beta);

/// Everything needed to evolve one parameter point. The density matrix stays
/// dense; site operators are kept in factored form (diagonals plus the bit
/// action of sigma_k^{+-}) so one master_rhs costs O(N 4^N) instead of
/// O(8^N). Dense materializations are available for cross-checks.
struct OperatorSet {
    int n_spins = 0;
    ModelParams params;
    PatternSet patterns;
    Eigen::MatrixXd delta_e;   // N x 2^N
    Eigen::MatrixXd f_plus;    // f_+(DeltaE_k(z))
    Eigen::MatrixXd f_minus;   // f_-(DeltaE_k(z))
    Eigen::VectorXd loss;      // sum_k diag(L_{k+}^+ L_{k+} + L_{k-}^+ L_{k-})

    int dim() const { return 1 << n_spins; }

    CMat hamiltonian_dense() const;          // Omega sum_i sigma_i^X
    CMat lindblad_dense(int k, int tau) const;  // tau = +1 / -1
};

OperatorSet build_operator_set(const PatternSet& patterns, const ModelParams& params);

/// drho/dt = -i[H, rho] + sum_{k,tau} (L rho L^+ - 1/2 {L^+ L, rho}).
CMat master_rhs(const CMat& rho, const OperatorSet& ops);

struct DensityCheck {
    double trace_error = 0.0;
    double hermiticity_error = 0.0;
};

DensityCheck check_density(const CMat& rho);

struct Overlaps {
    Eigen::VectorXd m_x, m_y, m_z;  // one entry per pattern
};

/// M_a^mu = tr(rho (1/N) sum_i xi_i^mu sigma_i^a), a = X, Y, Z.
Overlaps overlap_expectation(const CMat& rho, const PatternSet& patterns);

struct EvolveOptions {
    double dt = 1e-3;
    double t_max = 5.0;
    int record_stride = 100;
    bool record_rho = false;
    double trace_tol = 1e-8;
    double herm_tol = 1e-10;
};

struct OverlapSeries {
    std::vector<double> times;
    Eigen::MatrixXd m_x, m_y, m_z;  // rows = recorded times, cols = patterns
    std::vector<CMat> rho_snapshots;  // filled when record_rho
};

/// Fixed-step RK4 on the master equation. Trace and Hermiticity are
/// re-checked at every recorded step; a violation aborts with a step-size
/// diagnostic.
OverlapSeries evolve(const CMat& rho0, const OperatorSet& ops, const EvolveOptions& opts);

/// |xi^mu><xi^mu| for stored pattern mu.
CMat pattern_state(const PatternSet& patterns, int mu = 0);
CMat maximally_mixed(int n_spins);
/// |+>^(x) N, the sigma^X eigenstate product.
CMat plus_state(int n_spins);

/// CSV columns: t, m_x_1.., m_y_1.., m_z_1..
void write_overlaps_csv(const OverlapSeries& series, std::ostream& os);

/// Flat little-endian binary dump: 16-byte header (8-byte magic "OQHNRHO\0",
/// uint32 N, uint32 record count) followed by row-major complex doubles.
void dump_rho_binary(const std::vector<CMat>& snapshots, int n_spins, std::ostream& os);

}  // namespace oqhn::lindblad
