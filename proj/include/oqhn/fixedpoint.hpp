#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "oqhn/params.hpp"

namespace oqhn::fixedpoint {

/// beta_c = 1 + 8 Omega^2; the slope of the linear side of the
/// self-consistency equation beta_c M_Z = tanh(beta M_Z^{x-1}).
double beta_c(double omega);

/// Effective linearization coefficient at a fixed point:
/// beta' = beta (x-1) M_Z^{x-2} / cosh^2(beta M_Z^{x-1}).
/// For x = 2 at M_Z = 0 this is beta itself.
double beta_prime(double m_z, const ModelParams& params);

/// Eigenvalues of the stability matrix [[beta'-1, 2 Omega], [-2 Omega, -1/2]].
std::pair<std::complex<double>, std::complex<double>>
stability_eigenvalues(double beta_prime, double omega);

enum class StabilityClass { Saddle, UnstableNode, UnstableSpiral, StableSpiral, StableNode };

const char* to_string(StabilityClass c);

StabilityClass classify_stability(double beta_prime, double omega);

struct FixedPointReport {
    double m_z = 0.0;
    double m_y = 0.0;  // always -4 Omega m_z
    double beta_prime = 0.0;
    std::complex<double> lambda_plus, lambda_minus;
    StabilityClass cls = StabilityClass::StableNode;
};

/// All real roots of tanh(beta M^{x-1}) - beta_c M on [-1/beta_c, 1/beta_c],
/// by dense sign-change scan refined with bisection to ~1e-12. M = 0 is
/// always included; roots come in +- pairs for even x.
std::vector<FixedPointReport> find_fixed_points(const ModelParams& params,
                                                int scan_cells = 10000);

/// The unique condition (1-5) describing the x=2 origin:
///  1: beta > beta_c                          (saddle)
///  2: beta < beta_c, beta > 3/2, beta > 4 Omega + 1/2   (unstable node)
///  3: beta < beta_c, beta > 3/2, beta < 4 Omega + 1/2   (unstable spiral)
///  4: beta < beta_c, beta < 3/2, |beta - 1/2| < 4 Omega (stable spiral)
///  5: beta < beta_c, beta < 3/2, |beta - 1/2| > 4 Omega (stable node)
/// Boundary equalities are assigned to the lower-numbered condition.
int classify_origin_x2(double beta, double omega);

/// x = 2 root-count boundary: T = 1 / (1 + 8 Omega^2).
double boundary_x2_temperature(double omega);

struct TangencyOptions {
    int scan_cells = 10000;
    double beta_tol = 1e-8;   // relative bisection tolerance on beta
    double beta_max = 1e6;    // search ceiling; beyond it report no solution
};

struct TangencyResult {
    bool found = false;
    double beta_star = 0.0;
    double t_star = 0.0;
    double m_star = 0.0;  // double root of the tangency system
    int branch = 0;       // +1 / -1: branch of the closed-form M^2 quadratic (x=4)
};

/// Largest T (smallest beta) at which the line beta_c M and the curve
/// tanh(beta M^{x-1}) are tangent for some M > 0: outer bisection on beta
/// over the predicate "max of tanh(beta M^{x-1}) - beta_c M on (0, 1/beta_c]
/// is >= 0", dense-scanned in M. For x = 2 this reproduces beta = beta_c.
TangencyResult solve_tangency(int x, double omega, const TangencyOptions& opts = {});

struct BoundarySample {
    double omega = 0.0;
    double t_boundary = 0.0;
    int branch = 0;
};

/// Samples the root-count boundary over an omega grid (analytic for x = 2,
/// numeric tangency otherwise). Omegas with no tangency are skipped.
std::vector<BoundarySample> sample_boundary(int x, const std::vector<double>& omegas,
                                            const TangencyOptions& opts = {});

/// CSV columns: omega, T_boundary, branch.
void write_boundary_csv(const std::vector<BoundarySample>& samples, std::ostream& os);

/// One JSON object per fixed point, one per line.
std::string report_to_json(const FixedPointReport& r);

}  // namespace oqhn::fixedpoint
