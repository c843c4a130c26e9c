#include "oqhn/fixedpoint.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "oqhn/util.hpp"

namespace oqhn::fixedpoint {

double beta_c(double omega) { return 1.0 + 8.0 * omega * omega; }

double beta_prime(double m_z, const ModelParams& params) {
    params.validate();
    const double c = std::cosh(params.beta * util::ipow(m_z, params.x - 1));
    return params.beta * (params.x - 1) * util::ipow(m_z, params.x - 2) / (c * c);
}

std::pair<std::complex<double>, std::complex<double>>
stability_eigenvalues(double beta_prime, double omega) {
    // S = [[beta'-1, 2w], [-2w, -1/2]]
    const double tr = beta_prime - 1.5;
    const double det = -0.5 * (beta_prime - 1.0) + 4.0 * omega * omega;
    const double disc = tr * tr - 4.0 * det;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        return {std::complex<double>(0.5 * (tr + s), 0.0),
                std::complex<double>(0.5 * (tr - s), 0.0)};
    }
    const double s = std::sqrt(-disc);
    return {std::complex<double>(0.5 * tr, 0.5 * s), std::complex<double>(0.5 * tr, -0.5 * s)};
}

const char* to_string(StabilityClass c) {
    switch (c) {
        case StabilityClass::Saddle: return "Saddle";
        case StabilityClass::UnstableNode: return "UnstableNode";
        case StabilityClass::UnstableSpiral: return "UnstableSpiral";
        case StabilityClass::StableSpiral: return "StableSpiral";
        default: return "StableNode";
    }
}

StabilityClass classify_stability(double beta_prime, double omega) {
    const double tr = beta_prime - 1.5;
    const double det = -0.5 * (beta_prime - 1.0) + 4.0 * omega * omega;
    const double disc = tr * tr - 4.0 * det;
    if (det < 0.0) return StabilityClass::Saddle;
    if (disc >= 0.0)
        return tr > 0.0 ? StabilityClass::UnstableNode : StabilityClass::StableNode;
    return tr > 0.0 ? StabilityClass::UnstableSpiral : StabilityClass::StableSpiral;
}

namespace {

double self_consistency(double m, double beta, double bc, int x) {
    return std::tanh(beta * util::ipow(m, x - 1)) - bc * m;
}

double refine_root(double lo, double hi, double flo, double beta, double bc, int x) {
    for (int it = 0; it < 100 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = self_consistency(mid, beta, bc, x);
        if (fm == 0.0) return mid;
        if ((flo > 0.0) == (fm > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

FixedPointReport make_report(double m, const ModelParams& params) {
    FixedPointReport r;
    r.m_z = m;
    r.m_y = -4.0 * params.omega * m;
    r.beta_prime = beta_prime(m, params);
    std::tie(r.lambda_plus, r.lambda_minus) = stability_eigenvalues(r.beta_prime, params.omega);
    r.cls = classify_stability(r.beta_prime, params.omega);
    return r;
}

}  // namespace

std::vector<FixedPointReport> find_fixed_points(const ModelParams& params, int scan_cells) {
    params.validate();
    if (params.p != 1) throw std::invalid_argument("find_fixed_points: p must be 1");
    if (scan_cells < 10) throw std::invalid_argument("find_fixed_points: scan too coarse");

    const double bc = beta_c(params.omega);
    const double bound = 1.0 / bc;
    std::vector<double> roots{0.0};  // g(0) = 0 identically

    double prev_m = -bound;
    double prev_f = self_consistency(prev_m, params.beta, bc, params.x);
    for (int i = 1; i <= scan_cells; ++i) {
        const double m = -bound + 2.0 * bound * i / scan_cells;
        const double f = self_consistency(m, params.beta, bc, params.x);
        if (prev_f == 0.0) {
            roots.push_back(prev_m);
        } else if ((prev_f > 0.0) != (f > 0.0)) {
            roots.push_back(refine_root(prev_m, m, prev_f, params.beta, bc, params.x));
        }
        prev_m = m;
        prev_f = f;
    }

    // snap near-zero roots onto the exact origin root, then dedup
    for (double& r : roots)
        if (std::abs(r) < 1e-9) r = 0.0;
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-9; }),
                roots.end());

    std::vector<FixedPointReport> out;
    out.reserve(roots.size());
    for (double m : roots) out.push_back(make_report(m, params));
    return out;
}

int classify_origin_x2(double beta, double omega) {
    const double bc = beta_c(omega);
    if (beta >= bc) return 1;
    if (beta >= 1.5) return beta >= 4.0 * omega + 0.5 ? 2 : 3;
    return std::abs(beta - 0.5) <= 4.0 * omega ? 4 : 5;
}

double boundary_x2_temperature(double omega) { return 1.0 / beta_c(omega); }

namespace {

// max over a dense M grid on (0, 1/beta_c] of tanh(beta M^{x-1}) - beta_c M;
// also reports the argmax.
std::pair<double, double> scan_max(double beta, double bc, int x, int cells) {
    double best = -1e300, arg = 0.0;
    const double bound = 1.0 / bc;
    for (int i = 1; i <= cells; ++i) {
        const double m = bound * i / cells;
        const double g = self_consistency(m, beta, bc, x);
        if (g > best) {
            best = g;
            arg = m;
        }
    }
    return {best, arg};
}

}  // namespace

TangencyResult solve_tangency(int x, double omega, const TangencyOptions& opts) {
    if (x < 2 || x % 2 != 0) throw std::invalid_argument("solve_tangency: even x >= 2");
    const double bc = beta_c(omega);

    TangencyResult res;
    double lo = 1e-3;
    if (scan_max(lo, bc, x, opts.scan_cells).first >= 0.0) lo = 1e-9;
    double hi = std::max(1.0, lo * 2.0);
    while (scan_max(hi, bc, x, opts.scan_cells).first < 0.0) {
        hi *= 2.0;
        if (hi > opts.beta_max) return res;  // no tangency in range
    }
    while (hi - lo > opts.beta_tol * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        if (scan_max(mid, bc, x, opts.scan_cells).first >= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    res.found = true;
    res.beta_star = 0.5 * (lo + hi);
    res.t_star = 1.0 / res.beta_star;
    res.m_star = scan_max(hi, bc, x, opts.scan_cells).second;

    if (x == 4) {
        // match M*^2 against the two branches of the closed-form quadratic
        const double rad = 1.0 - 4.0 * bc * bc * bc / (3.0 * res.beta_star);
        if (rad >= 0.0) {
            const double s = std::sqrt(rad);
            const double up = (1.0 + s) / (2.0 * bc * bc);
            const double um = (1.0 - s) / (2.0 * bc * bc);
            const double u = res.m_star * res.m_star;
            res.branch = std::abs(u - up) <= std::abs(u - um) ? +1 : -1;
        }
    }
    return res;
}

std::vector<BoundarySample> sample_boundary(int x, const std::vector<double>& omegas,
                                            const TangencyOptions& opts) {
    std::vector<BoundarySample> out;
    for (double w : omegas) {
        if (x == 2) {
            out.push_back({w, boundary_x2_temperature(w), 0});
            continue;
        }
        const auto t = solve_tangency(x, w, opts);
        if (t.found) out.push_back({w, t.t_star, t.branch});
    }
    return out;
}

void write_boundary_csv(const std::vector<BoundarySample>& samples, std::ostream& os) {
    os << "omega,T_boundary,branch\n";
    for (const auto& s : samples)
        os << util::fmt_g(s.omega) << ',' << util::fmt_g(s.t_boundary) << ',' << s.branch
           << '\n';
}

std::string report_to_json(const FixedPointReport& r) {
    std::ostringstream os;
    os << "{\"m_z\":" << util::fmt_g(r.m_z) << ",\"m_y\":" << util::fmt_g(r.m_y)
       << ",\"beta_prime\":" << util::fmt_g(r.beta_prime) << ",\"eigenvalues\":[["
       << util::fmt_g(r.lambda_plus.real()) << ',' << util::fmt_g(r.lambda_plus.imag())
       << "],[" << util::fmt_g(r.lambda_minus.real()) << ','
       << util::fmt_g(r.lambda_minus.imag()) << "]],\"class\":\"" << to_string(r.cls)
       << "\"}";
    return os.str();
}

}  // namespace oqhn::fixedpoint
