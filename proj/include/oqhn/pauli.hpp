#pragma once

#include <Eigen/Dense>
#include <complex>

namespace oqhn::pauli {

using CMat = Eigen::MatrixXcd;

/// Basis convention: computational (Z) basis states are indexed by
/// z in [0, 2^N); bit i of z set means spin i is up (+1). Site i acts on
/// bit i, i.e. sigma_i^A = I_{2^{N-1-i}} (x) A (x) I_{2^i}.
enum class Op { I, X, Y, Z, Plus, Minus };

CMat single_site(Op op);

CMat kron(const CMat& a, const CMat& b);

/// Dense N-spin operator with `op` at `site` and identity elsewhere.
CMat site_operator(int n_spins, int site, Op op);

/// Spin value (+-1) of site i in basis state z.
inline int spin_of(unsigned long z, int site) { return (z >> site) & 1UL ? 1 : -1; }

}  // namespace oqhn::pauli
