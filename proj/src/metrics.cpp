#include "mdof/metrics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace mdof {

Operator pauli(PauliAxis axis, Dof dof) {
    Mat m(2, 2);
    switch (axis) {
        case PauliAxis::X: m << 0, 1, 1, 0; break;
        case PauliAxis::Y: m << Cx(0, 0), Cx(0, -1), Cx(0, 1), Cx(0, 0); break;
        case PauliAxis::Z: m << 1, 0, 0, -1; break;
    }
    return Operator(HilbertLabel::single(dof, 2), std::move(m));
}

Operator identity_op(const HilbertLabel& label) {
    return Operator(label, Mat::Identity(label.dim(), label.dim()));
}

double fidelity(const DensityMatrix& rho, const StateVector& target) {
    if (rho.label.dim() != target.label.dim())
        throw DimensionMismatch("fidelity: state and density matrix dimensions differ");
    Cx val = target.amplitudes.adjoint() * rho.entries * target.amplitudes;
    if (std::abs(val.imag()) > kMatrixTol)
        throw NonHermitianObservable("fidelity: imaginary residue " + std::to_string(val.imag()));
    return val.real();
}

double expectation(const DensityMatrix& rho, const Operator& obs) {
    if (rho.label.dim() != obs.label.dim())
        throw DimensionMismatch("expectation: dimensions differ");
    if (!obs.is_hermitian())
        throw NonHermitianObservable("expectation: observable is not Hermitian");
    Cx val = (rho.entries * obs.entries).trace();
    if (std::abs(val.imag()) > kMatrixTol)
        throw NonHermitianObservable("expectation: imaginary residue " +
                                     std::to_string(val.imag()));
    return val.real();
}

namespace {

Cx unit_i_pow(int n) {
    switch (((n % 4) + 4) % 4) {
        case 0: return {1, 0};
        case 1: return {0, 1};
        case 2: return {-1, 0};
        default: return {0, -1};
    }
}

// sigma_y^{x n} |psi> without building the 2^n x 2^n matrix: bit-flip every
// qubit and attach the exact i^n (-1)^popcount phases
// (sigma_y|0> = i|1>, sigma_y|1> = -i|0>).
Vec spin_flip(const Vec& v, int n) {
    const Eigen::Index dim = v.size();
    Vec out(dim);
    const Eigen::Index mask = dim - 1;
    const Cx in_phase = unit_i_pow(n);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const Eigen::Index j = (~i) & mask;
        int ones = 0;
        for (int b = 0; b < n; ++b) ones += static_cast<int>((i >> b) & 1);
        out(j) = in_phase * ((ones % 2 == 0) ? 1.0 : -1.0) * v(i);
    }
    return out;
}

} // namespace

double concurrence_pure(const StateVector& psi, ConcurrenceMode mode) {
    if (!psi.label.all_qubits())
        throw NonQubitSpace("concurrence_pure: every factor must be two-level");
    const int n = psi.label.factor_count();
    Vec flipped = spin_flip(psi.amplitudes, n);
    if (mode == ConcurrenceMode::standard) {
        // <psi*|flipped> = sum_k psi_k * flipped_k
        Cx overlap = psi.amplitudes.transpose() * flipped;
        return std::min(1.0, std::abs(overlap));
    }
    Cx overlap = psi.amplitudes.adjoint() * flipped;
    double c = std::abs(overlap);
    return std::min(1.0, c * c);
}

double concurrence_mixed(const DensityMatrix& rho) {
    if (!rho.label.all_qubits())
        throw NonQubitSpace("concurrence_mixed: every factor must be two-level");
    const int n = rho.label.factor_count();
    const Eigen::Index dim = rho.entries.rows();
    const Eigen::Index mask = dim - 1;

    // rho_tilde = sigma_y^n rho* sigma_y^n, assembled entrywise: the flip takes
    // index i -> ~i with phase i^n (-1)^popcount(i); pairwise the phases reduce
    // to (-1)^(n + popcount(i) + popcount(j)).
    Mat tilde(dim, dim);
    auto parity = [&](Eigen::Index x) {
        int ones = 0;
        for (int b = 0; b < n; ++b) ones += static_cast<int>((x >> b) & 1);
        return ones % 2;
    };
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) {
            double sign = ((n + parity(i) + parity(j)) % 2 == 0) ? 1.0 : -1.0;
            tilde((~i) & mask, (~j) & mask) = sign * std::conj(rho.entries(i, j));
        }

    Eigen::ComplexEigenSolver<Mat> es(rho.entries * tilde, /*computeEigenvectors=*/false);
    std::vector<double> lambdas;
    lambdas.reserve(static_cast<size_t>(dim));
    for (Eigen::Index i = 0; i < dim; ++i)
        lambdas.push_back(std::max(0.0, es.eigenvalues()(i).real()));
    std::sort(lambdas.begin(), lambdas.end(), std::greater<>());

    double c = std::sqrt(lambdas[0]);
    for (size_t i = 1; i < lambdas.size(); ++i) c -= std::sqrt(lambdas[i]);
    return std::clamp(c, 0.0, 1.0);
}

} // namespace mdof
