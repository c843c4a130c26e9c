#pragma once

#include <Eigen/Dense>
#include <random>
#include <stdexcept>

namespace oqhn {

/// A spin configuration: length-N vector with entries +1 or -1.
using SpinConfig = Eigen::VectorXi;

inline void validate_spins(const SpinConfig& s) {
    if (s.size() < 1) throw std::invalid_argument("spin config must be non-empty");
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s[i] != 1 && s[i] != -1)
            throw std::invalid_argument("spin entries must be +1 or -1");
}

/// p stored binary patterns over N spins (rows = patterns).
struct PatternSet {
    Eigen::MatrixXi xi;  // p x N, entries +-1

    int n_patterns() const { return static_cast<int>(xi.rows()); }
    int n_spins() const { return static_cast<int>(xi.cols()); }

    SpinConfig pattern(int mu) const { return xi.row(mu).transpose(); }

    void validate() const {
        if (xi.rows() < 1 || xi.cols() < 1)
            throw std::invalid_argument("pattern set must have p >= 1, N >= 1");
        for (Eigen::Index m = 0; m < xi.rows(); ++m)
            for (Eigen::Index i = 0; i < xi.cols(); ++i)
                if (xi(m, i) != 1 && xi(m, i) != -1)
                    throw std::invalid_argument("pattern entries must be +1 or -1");
    }

    static PatternSet random(int p, int n, std::mt19937_64& rng) {
        if (p < 1 || n < 1) throw std::invalid_argument("need p >= 1 and N >= 1");
        PatternSet ps;
        ps.xi.resize(p, n);
        std::bernoulli_distribution coin(0.5);
        for (int m = 0; m < p; ++m)
            for (int i = 0; i < n; ++i) ps.xi(m, i) = coin(rng) ? 1 : -1;
        return ps;
    }

    /// All-ones patterns are occasionally handy as a deterministic fixture.
    static PatternSet all_ones(int p, int n) {
        PatternSet ps;
        ps.xi = Eigen::MatrixXi::Ones(p, n);
        return ps;
    }
};

/// Flips round(noise_fraction * N) distinct spins of s, chosen by rng.
inline SpinConfig flip_fraction(SpinConfig s, double noise_fraction, std::mt19937_64& rng) {
    const int n = static_cast<int>(s.size());
    const int k = static_cast<int>(std::lround(noise_fraction * n));
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    for (int i = 0; i < k; ++i) {
        std::uniform_int_distribution<int> pick(i, n - 1);
        std::swap(idx[i], idx[pick(rng)]);
        s[idx[i]] = -s[idx[i]];
    }
    return s;
}

inline int hamming_distance(const SpinConfig& a, const SpinConfig& b) {
    if (a.size() != b.size()) throw std::invalid_argument("hamming: size mismatch");
    int d = 0;
    for (Eigen::Index i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
    return d;
}

}  // namespace oqhn
