#include "oqhn/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "oqhn/util.hpp"

namespace oqhn::classical {

namespace {

void require_even_x(int x) {
    if (x < 2 || (x % 2) != 0)
        throw std::invalid_argument("x must be an even integer >= 2");
}

// (x-1)-th power with an integer-exact accumulator; overlaps can reach N and
// N^{x-1} exceeds 2^53 already for N=500, x=8.
long double lpow(long double base, int exp) {
    long double r = 1.0L;
    for (int k = 0; k < exp; ++k) r *= base;
    return r;
}

}  // namespace

Eigen::MatrixXd hebbian_couplings(const PatternSet& patterns) {
    patterns.validate();
    const int n = patterns.n_spins();
    Eigen::MatrixXd xi = patterns.xi.cast<double>();
    return (xi.transpose() * xi) / static_cast<double>(n);
}

double hopfield_energy(const Eigen::MatrixXd& J, const SpinConfig& s) {
    if (J.rows() != J.cols() || J.rows() != s.size())
        throw std::invalid_argument("hopfield_energy: dimension mismatch");
    const Eigen::VectorXd sd = s.cast<double>();
    return -0.5 * sd.dot(J * sd);
}

double modern_energy(const PatternSet& patterns, const SpinConfig& s, int x) {
    require_even_x(x);
    patterns.validate();
    if (s.size() != patterns.n_spins())
        throw std::invalid_argument("modern_energy: dimension mismatch");
    const int n = patterns.n_spins();
    long double acc = 0.0L;
    for (int mu = 0; mu < patterns.n_patterns(); ++mu) {
        long long overlap = 0;
        for (int j = 0; j < n; ++j) overlap += patterns.xi(mu, j) * s[j];
        acc += lpow(static_cast<long double>(overlap), x);
    }
    return static_cast<double>(-acc / (2.0L * lpow(n, x - 1)));
}

double delta_e(const PatternSet& patterns, const SpinConfig& s, int i, int x) {
    require_even_x(x);
    if (i < 0 || i >= patterns.n_spins())
        throw std::out_of_range("delta_e: site index out of range");
    if (s.size() != patterns.n_spins())
        throw std::invalid_argument("delta_e: dimension mismatch");
    const int n = patterns.n_spins();
    long double acc = 0.0L;
    for (int mu = 0; mu < patterns.n_patterns(); ++mu) {
        long long a = 0;
        for (int j = 0; j < n; ++j)
            if (j != i) a += patterns.xi(mu, j) * s[j];
        acc += patterns.xi(mu, i) * lpow(static_cast<long double>(a), x - 1);
    }
    return static_cast<double>(acc / lpow(n, x - 1));
}

namespace {

// Sweep with incrementally maintained overlaps o_mu = sum_j xi_j^mu s_j;
// mathematically identical to calling delta_e at every site, O(N p) per sweep.
// Returns the number of spins that changed.
int sweep_inplace(const PatternSet& patterns, SpinConfig& s, int x,
                  std::vector<long long>& overlaps, const std::vector<int>& order) {
    const int p = patterns.n_patterns();
    int changed = 0;
    for (int site : order) {
        long double acc = 0.0L;
        for (int mu = 0; mu < p; ++mu) {
            const long long a = overlaps[mu] - patterns.xi(mu, site) * s[site];
            acc += patterns.xi(mu, site) * lpow(static_cast<long double>(a), x - 1);
        }
        const int old = s[site];
        const int next = acc > 0.0L ? 1 : (acc < 0.0L ? -1 : old);
        if (next != old) {
            s[site] = next;
            for (int mu = 0; mu < p; ++mu) overlaps[mu] += 2LL * patterns.xi(mu, site) * next;
            ++changed;
        }
    }
    return changed;
}

std::vector<long long> initial_overlaps(const PatternSet& patterns, const SpinConfig& s) {
    std::vector<long long> o(patterns.n_patterns(), 0);
    for (int mu = 0; mu < patterns.n_patterns(); ++mu)
        for (int j = 0; j < patterns.n_spins(); ++j) o[mu] += patterns.xi(mu, j) * s[j];
    return o;
}

std::vector<int> make_order(int n, UpdateOrder order, std::mt19937_64* rng) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    if (order == UpdateOrder::RandomPermutation) {
        if (!rng) throw std::invalid_argument("random update order requires an rng");
        std::shuffle(idx.begin(), idx.end(), *rng);
    }
    return idx;
}

}  // namespace

SpinConfig update_async(const PatternSet& patterns, SpinConfig s, int x,
                        UpdateOrder order, std::mt19937_64* rng) {
    require_even_x(x);
    patterns.validate();
    validate_spins(s);
    if (s.size() != patterns.n_spins())
        throw std::invalid_argument("update_async: dimension mismatch");
    auto overlaps = initial_overlaps(patterns, s);
    sweep_inplace(patterns, s, x, overlaps, make_order(patterns.n_spins(), order, rng));
    return s;
}

RetrievalResult retrieve(const PatternSet& patterns, const SpinConfig& s0, int x,
                         int max_sweeps, UpdateOrder order, std::mt19937_64* rng) {
    require_even_x(x);
    if (max_sweeps < 1) throw std::invalid_argument("max_sweeps must be >= 1");
    patterns.validate();
    validate_spins(s0);

    RetrievalResult res;
    res.state = s0;
    auto overlaps = initial_overlaps(patterns, res.state);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        const auto idx = make_order(patterns.n_spins(), order, rng);
        const int changed = sweep_inplace(patterns, res.state, x, overlaps, idx);
        ++res.sweeps_used;
        if (changed == 0) {
            res.converged = true;
            break;
        }
    }
    return res;
}

namespace {

struct TrialOutcome {
    int successes = 0;
    int probes = 0;
    double total_distance = 0.0;  // fraction of N, summed over probes
};

TrialOutcome run_trial(const CapacityConfig& cfg, int p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto patterns = PatternSet::random(p, cfg.n_spins, rng);
    const int max_dist = static_cast<int>(cfg.error_threshold * cfg.n_spins);

    int n_probes = (cfg.max_probes > 0) ? std::min(cfg.max_probes, p) : p;
    std::vector<int> which(p);
    std::iota(which.begin(), which.end(), 0);
    if (n_probes < p) std::shuffle(which.begin(), which.end(), rng);

    TrialOutcome out;
    for (int q = 0; q < n_probes; ++q) {
        const int mu = which[q];
        SpinConfig probe = flip_fraction(patterns.pattern(mu), cfg.noise_fraction, rng);
        const auto res = retrieve(patterns, probe, cfg.x, cfg.max_sweeps);
        const int d = hamming_distance(res.state, patterns.pattern(mu));
        out.successes += (d <= max_dist);
        out.total_distance += static_cast<double>(d) / cfg.n_spins;
        ++out.probes;
    }
    return out;
}

}  // namespace

CapacityReport capacity_experiment(const CapacityConfig& cfg) {
    if (cfg.n_spins < 10) throw std::invalid_argument("capacity: N must be >= 10");
    if (cfg.trials < 1) throw std::invalid_argument("capacity: trials must be >= 1");
    if (cfg.p_schedule.empty()) throw std::invalid_argument("capacity: empty p schedule");
    for (int p : cfg.p_schedule)
        if (p < 1) throw std::invalid_argument("capacity: p values must be >= 1");

    const std::size_t n_jobs = cfg.p_schedule.size() * static_cast<std::size_t>(cfg.trials);
    std::vector<TrialOutcome> outcomes(n_jobs);
    util::parallel_for_index(n_jobs, cfg.threads, [&](std::size_t job) {
        const std::size_t pi = job / cfg.trials;
        const std::size_t trial = job % cfg.trials;
        const std::uint64_t seed = util::derive_seed(cfg.seed, pi, trial);
        outcomes[job] = run_trial(cfg, cfg.p_schedule[pi], seed);
    });

    CapacityReport report;
    report.n_spins = cfg.n_spins;
    report.x = cfg.x;
    report.noise_fraction = cfg.noise_fraction;
    report.error_threshold = cfg.error_threshold;
    report.trials = cfg.trials;
    for (std::size_t pi = 0; pi < cfg.p_schedule.size(); ++pi) {
        int succ = 0, probes = 0;
        double dist = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            const auto& o = outcomes[pi * cfg.trials + t];
            succ += o.successes;
            probes += o.probes;
            dist += o.total_distance;
        }
        LoadPoint lp;
        lp.p = cfg.p_schedule[pi];
        lp.success_rate = probes > 0 ? static_cast<double>(succ) / probes : 0.0;
        lp.mean_final_distance = probes > 0 ? dist / probes : 0.0;
        report.load_curve.push_back(lp);
        if (lp.success_rate >= cfg.success_threshold)
            report.estimated_capacity = std::max(report.estimated_capacity, lp.p);
    }
    return report;
}

void write_capacity_csv(const CapacityReport& report, std::ostream& os) {
    os << "p,success_rate,mean_final_distance\n";
    for (const auto& lp : report.load_curve)
        os << lp.p << ',' << util::fmt_g(lp.success_rate) << ','
           << util::fmt_g(lp.mean_final_distance) << '\n';
}

}  // namespace oqhn::classical
