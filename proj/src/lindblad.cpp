#include "oqhn/lindblad.hpp"

#include <cmath>
#include <cstring>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "oqhn/pauli.hpp"
#include "oqhn/util.hpp"

namespace oqhn::lindblad {

namespace {

void require_size(const PatternSet& patterns, int x) {
    patterns.validate();
    if (patterns.n_spins() > n_max)
        throw std::invalid_argument("lindblad: N exceeds the exact-simulation cap");
    if (x < 2 || x % 2 != 0) throw std::invalid_argument("lindblad: even x >= 2 required");
}

// f_+(d) = 1/sqrt(1+exp(-2 b d)), f_-(d) = 1/sqrt(1+exp(+2 b d));
// algebraically exp(+-b d/2)/sqrt(2 cosh(b d)), stable for large |b d|.
double f_plus_of(double beta, double d) { return 1.0 / std::sqrt(1.0 + std::exp(-2.0 * beta * d)); }
double f_minus_of(double beta, double d) { return 1.0 / std::sqrt(1.0 + std::exp(2.0 * beta * d)); }

}  // namespace

Eigen::MatrixXd build_delta_e_ops(const PatternSet& patterns, int x) {
    require_size(patterns, x);
    const int n = patterns.n_spins();
    const int p = patterns.n_patterns();
    const int dim = 1 << n;
    const double norm = util::ipow(static_cast<double>(n), x - 1);

    Eigen::MatrixXd de(n, dim);
    std::vector<double> overlap(p);
    for (int z = 0; z < dim; ++z) {
        for (int mu = 0; mu < p; ++mu) {
            long long o = 0;
            for (int j = 0; j < n; ++j) o += patterns.xi(mu, j) * pauli::spin_of(z, j);
            overlap[mu] = util::ipow(static_cast<double>(o), x - 1);
        }
        for (int k = 0; k < n; ++k) {
            double acc = 0.0;
            for (int mu = 0; mu < p; ++mu) acc += patterns.xi(mu, k) * overlap[mu];
            de(k, z) = acc / norm;
        }
    }
    return de;
}

std::vector<CMat> build_lindblads(const Eigen::MatrixXd& delta_e, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("build_lindblads: beta must be > 0");
    const int n = static_cast<int>(delta_e.rows());
    const int dim = static_cast<int>(delta_e.cols());
    if (dim != (1 << n)) throw std::invalid_argument("build_lindblads: bad diagonal shape");

    std::vector<CMat> out;
    out.reserve(2 * n);
    for (int k = 0; k < n; ++k) {
        for (int tau : {+1, -1}) {
            CMat L = CMat::Zero(dim, dim);
            for (int z = 0; z < dim; ++z) {
                if (pauli::spin_of(z, k) == tau) continue;  // sigma^tau annihilates
                const int zp = z ^ (1 << k);
                const double f = tau > 0 ? f_plus_of(beta, delta_e(k, zp))
                                         : f_minus_of(beta, delta_e(k, zp));
                L(zp, z) = f;  // diagonal factor applied after the flip
            }
            out.push_back(std::move(L));
        }
    }
    return out;
}

CMat OperatorSet::hamiltonian_dense() const {
    const int d = dim();
    CMat h = CMat::Zero(d, d);
    for (int i = 0; i < n_spins; ++i)
        h += params.omega * pauli::site_operator(n_spins, i, pauli::Op::X);
    return h;
}

CMat OperatorSet::lindblad_dense(int k, int tau) const {
    const int d = dim();
    CMat L = CMat::Zero(d, d);
    const int bit = 1 << k;
    for (int z = 0; z < d; ++z) {
        if (pauli::spin_of(z, k) == tau) continue;
        const int zp = z ^ bit;
        L(zp, z) = tau > 0 ? f_plus(k, zp) : f_minus(k, zp);
    }
    return L;
}

OperatorSet build_operator_set(const PatternSet& patterns, const ModelParams& params) {
    params.validate();
    require_size(patterns, params.x);
    if (patterns.n_patterns() != params.p)
        throw std::invalid_argument("operator set: pattern count != params.p");

    OperatorSet ops;
    ops.n_spins = patterns.n_spins();
    ops.params = params;
    ops.patterns = patterns;
    ops.delta_e = build_delta_e_ops(patterns, params.x);

    const int dim = ops.dim();
    ops.f_plus.resize(ops.n_spins, dim);
    ops.f_minus.resize(ops.n_spins, dim);
    for (int k = 0; k < ops.n_spins; ++k)
        for (int z = 0; z < dim; ++z) {
            ops.f_plus(k, z) = f_plus_of(params.beta, ops.delta_e(k, z));
            ops.f_minus(k, z) = f_minus_of(params.beta, ops.delta_e(k, z));
        }

    // total loss diagonal sum_k diag(L_{k+}^+L_{k+} + L_{k-}^+L_{k-}):
    // from state z, site k flips up with rate f_+(DeltaE_k(z^))^2 when down,
    // down with rate f_-(DeltaE_k(z_))^2 when up (rates taken at the target).
    ops.loss = Eigen::VectorXd::Zero(dim);
    for (int k = 0; k < ops.n_spins; ++k) {
        const int bit = 1 << k;
        for (int z = 0; z < dim; ++z) {
            const int zf = z ^ bit;
            const double f = (z & bit) ? ops.f_minus(k, zf) : ops.f_plus(k, zf);
            ops.loss[z] += f * f;
        }
    }
    return ops;
}

CMat master_rhs(const CMat& rho, const OperatorSet& ops) {
    const int dim = ops.dim();
    if (rho.rows() != dim || rho.cols() != dim)
        throw std::invalid_argument("master_rhs: dimension mismatch");

    CMat out(dim, dim);
    const std::complex<double>* src = rho.data();
    std::complex<double>* dst = out.data();
    const double* loss = ops.loss.data();

    // anticommutator part: -1/2 (loss(r) + loss(c)) rho(r,c)
    for (int c = 0; c < dim; ++c)
        for (int r = 0; r < dim; ++r)
            dst[c * dim + r] = -0.5 * (loss[r] + loss[c]) * src[c * dim + r];

    // coherent part: -i Omega sum_i (rho(r^b, c) - rho(r, c^b))
    if (ops.params.omega != 0.0) {
        const std::complex<double> miw(0.0, -ops.params.omega);
        for (int i = 0; i < ops.n_spins; ++i) {
            const int bit = 1 << i;
            for (int c = 0; c < dim; ++c)
                for (int r = 0; r < dim; ++r)
                    dst[c * dim + r] +=
                        miw * (src[c * dim + (r ^ bit)] - src[(c ^ bit) * dim + r]);
        }
    }

    // jump gains: L rho L^+ for each site, both flip directions
    for (int k = 0; k < ops.n_spins; ++k) {
        const int bit = 1 << k;
        const double* fp = ops.f_plus.data();
        const double* fm = ops.f_minus.data();
        const int nk = ops.n_spins;
        for (int c = 0; c < dim; ++c) {
            const bool cup = (c & bit) != 0;
            const int c0 = c ^ bit;
            for (int r = 0; r < dim; ++r) {
                if (((r & bit) != 0) != cup) continue;
                const int r0 = r ^ bit;
                const double f = cup ? fp[r * nk + k] * fp[c * nk + k]
                                     : fm[r * nk + k] * fm[c * nk + k];
                dst[c * dim + r] += f * src[c0 * dim + r0];
            }
        }
    }
    return out;
}

DensityCheck check_density(const CMat& rho) {
    DensityCheck c;
    c.trace_error = std::abs(rho.trace() - std::complex<double>(1.0, 0.0));
    c.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    return c;
}

Overlaps overlap_expectation(const CMat& rho, const PatternSet& patterns) {
    const int n = patterns.n_spins();
    const int dim = 1 << n;
    if (rho.rows() != dim || rho.cols() != dim)
        throw std::invalid_argument("overlap_expectation: dimension mismatch");
    const int p = patterns.n_patterns();

    // per-site expectations first, then project onto the patterns
    Eigen::VectorXd sx(n), sy(n), sz(n);
    for (int i = 0; i < n; ++i) {
        const int bit = 1 << i;
        double vx = 0.0, vy = 0.0, vz = 0.0;
        for (int z = 0; z < dim; ++z) {
            vz += pauli::spin_of(z, i) * rho(z, z).real();
            const std::complex<double> off = rho(z, z ^ bit);
            vx += off.real();
            // sigma^Y(z^b, z) is +i when z has bit i set, -i otherwise;
            // Re[off * (+-i)] = -+ Im(off)
            vy += (z & bit) ? -off.imag() : off.imag();
        }
        sx[i] = vx;
        sy[i] = vy;
        sz[i] = vz;
    }

    Overlaps o;
    o.m_x.resize(p);
    o.m_y.resize(p);
    o.m_z.resize(p);
    for (int mu = 0; mu < p; ++mu) {
        double ax = 0.0, ay = 0.0, az = 0.0;
        for (int i = 0; i < n; ++i) {
            ax += patterns.xi(mu, i) * sx[i];
            ay += patterns.xi(mu, i) * sy[i];
            az += patterns.xi(mu, i) * sz[i];
        }
        o.m_x[mu] = ax / n;
        o.m_y[mu] = ay / n;
        o.m_z[mu] = az / n;
    }
    return o;
}

OverlapSeries evolve(const CMat& rho0, const OperatorSet& ops, const EvolveOptions& opts) {
    const int dim = ops.dim();
    if (rho0.rows() != dim || rho0.cols() != dim)
        throw std::invalid_argument("evolve: dimension mismatch");
    if (!(opts.dt > 0.0) || !(opts.t_max > opts.dt))
        throw std::invalid_argument("evolve: need dt > 0 and t_max > dt");
    {
        const auto c = check_density(rho0);
        if (c.trace_error > opts.trace_tol || c.hermiticity_error > opts.herm_tol)
            throw std::invalid_argument("evolve: rho0 is not a valid density matrix");
    }

    const long n_steps = static_cast<long>(std::ceil(opts.t_max / opts.dt - 1e-12));
    const int p = ops.patterns.n_patterns();
    std::vector<double> times;
    std::vector<Overlaps> recs;

    CMat rho = rho0;
    auto record = [&](long step) {
        const double t = step * opts.dt;
        const auto c = check_density(rho);
        if (c.trace_error > opts.trace_tol || c.hermiticity_error > opts.herm_tol) {
            std::ostringstream msg;
            msg << "evolve: invariant violated at t=" << t
                << " (trace err " << c.trace_error << ", herm err " << c.hermiticity_error
                << "); reduce dt below " << opts.dt;
            throw std::runtime_error(msg.str());
        }
        times.push_back(t);
        recs.push_back(overlap_expectation(rho, ops.patterns));
        return c;
    };

    OverlapSeries series;
    record(0);
    if (opts.record_rho) series.rho_snapshots.push_back(rho);

    for (long i = 1; i <= n_steps; ++i) {
        const CMat k1 = master_rhs(rho, ops);
        const CMat k2 = master_rhs(rho + 0.5 * opts.dt * k1, ops);
        const CMat k3 = master_rhs(rho + 0.5 * opts.dt * k2, ops);
        const CMat k4 = master_rhs(rho + opts.dt * k3, ops);
        rho += (opts.dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (i % opts.record_stride == 0 || i == n_steps) {
            record(i);
            if (opts.record_rho) series.rho_snapshots.push_back(rho);
        }
    }

    series.times = std::move(times);
    series.m_x.resize(series.times.size(), p);
    series.m_y.resize(series.times.size(), p);
    series.m_z.resize(series.times.size(), p);
    for (std::size_t i = 0; i < recs.size(); ++i) {
        series.m_x.row(i) = recs[i].m_x.transpose();
        series.m_y.row(i) = recs[i].m_y.transpose();
        series.m_z.row(i) = recs[i].m_z.transpose();
    }
    return series;
}

CMat pattern_state(const PatternSet& patterns, int mu) {
    patterns.validate();
    if (mu < 0 || mu >= patterns.n_patterns())
        throw std::out_of_range("pattern_state: bad pattern index");
    const int n = patterns.n_spins();
    int z = 0;
    for (int i = 0; i < n; ++i)
        if (patterns.xi(mu, i) > 0) z |= 1 << i;
    const int dim = 1 << n;
    CMat rho = CMat::Zero(dim, dim);
    rho(z, z) = 1.0;
    return rho;
}

CMat maximally_mixed(int n_spins) {
    const int dim = 1 << n_spins;
    return CMat::Identity(dim, dim) / static_cast<double>(dim);
}

CMat plus_state(int n_spins) {
    const int dim = 1 << n_spins;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(dim, 1.0 / std::sqrt(dim));
    return psi * psi.adjoint();
}

void write_overlaps_csv(const OverlapSeries& series, std::ostream& os) {
    const int p = static_cast<int>(series.m_z.cols());
    os << 't';
    for (int mu = 1; mu <= p; ++mu) os << ",m_x_" << mu;
    for (int mu = 1; mu <= p; ++mu) os << ",m_y_" << mu;
    for (int mu = 1; mu <= p; ++mu) os << ",m_z_" << mu;
    os << '\n';
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        os << util::fmt_g(series.times[i]);
        for (int mu = 0; mu < p; ++mu) os << ',' << util::fmt_g(series.m_x(i, mu));
        for (int mu = 0; mu < p; ++mu) os << ',' << util::fmt_g(series.m_y(i, mu));
        for (int mu = 0; mu < p; ++mu) os << ',' << util::fmt_g(series.m_z(i, mu));
        os << '\n';
    }
}

void dump_rho_binary(const std::vector<CMat>& snapshots, int n_spins, std::ostream& os) {
    char magic[8] = {'O', 'Q', 'H', 'N', 'R', 'H', 'O', '\0'};
    os.write(magic, 8);
    const std::uint32_t n = static_cast<std::uint32_t>(n_spins);
    const std::uint32_t count = static_cast<std::uint32_t>(snapshots.size());
    os.write(reinterpret_cast<const char*>(&n), 4);
    os.write(reinterpret_cast<const char*>(&count), 4);
    for (const auto& rho : snapshots) {
        for (Eigen::Index r = 0; r < rho.rows(); ++r)
            for (Eigen::Index c = 0; c < rho.cols(); ++c) {
                const double re = rho(r, c).real(), im = rho(r, c).imag();
                os.write(reinterpret_cast<const char*>(&re), 8);
                os.write(reinterpret_cast<const char*>(&im), 8);
            }
    }
}

}  // namespace oqhn::lindblad
