#include "oqhn/pauli.hpp"

#include <stdexcept>

namespace oqhn::pauli {

namespace {
constexpr std::complex<double> I{0.0, 1.0};
}

CMat single_site(Op op) {
    CMat m = CMat::Zero(2, 2);
    // basis order (down, up): index 0 = spin -1, index 1 = spin +1
    switch (op) {
        case Op::I: m(0, 0) = 1; m(1, 1) = 1; break;
        case Op::X: m(0, 1) = 1; m(1, 0) = 1; break;
        case Op::Y: m(0, 1) = I; m(1, 0) = -I; break;
        case Op::Z: m(0, 0) = -1; m(1, 1) = 1; break;
        case Op::Plus: m(1, 0) = 1; break;   // |up><down|
        case Op::Minus: m(0, 1) = 1; break;  // |down><up|
    }
    return m;
}

CMat kron(const CMat& a, const CMat& b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

CMat site_operator(int n_spins, int site, Op op) {
    if (site < 0 || site >= n_spins) throw std::out_of_range("site_operator: bad site");
    CMat out = CMat::Identity(1, 1);
    for (int i = n_spins - 1; i >= 0; --i)
        out = kron(out, i == site ? single_site(op) : single_site(Op::I));
    return out;
}

}  // namespace oqhn::pauli
