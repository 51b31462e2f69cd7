#pragma once

#include <random>

#include <Eigen/Dense>

#include "mdof/hilbert.hpp"

namespace testutil {

using mdof::Cx;
using mdof::Mat;
using mdof::Vec;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Vec random_state_vec(int dim, std::mt19937_64& gen) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = Cx(g(gen), g(gen));
    return v / v.norm();
}

inline mdof::StateVector random_qubit_state(int n, std::mt19937_64& gen,
                                            mdof::Dof dof = mdof::Dof::polarization) {
    mdof::HilbertLabel label = mdof::HilbertLabel::qubits(dof, n);
    return mdof::StateVector(label, random_state_vec(label.dim(), gen));
}

// Haar-ish random unitary via QR of a Ginibre matrix.
inline Mat random_unitary(int dim, std::mt19937_64& gen) {
    std::normal_distribution<double> g(0.0, 1.0);
    Mat a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = Cx(g(gen), g(gen));
    Eigen::HouseholderQR<Mat> qr(a);
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim; ++i) {
        Cx d = r(i, i);
        q.col(i) *= (d == Cx(0.0)) ? 1.0 : d / std::abs(d);
    }
    return q;
}

// Random full-rank density matrix (Ginibre ensemble).
inline mdof::DensityMatrix random_density(int n_qubits, std::mt19937_64& gen,
                                          mdof::Dof dof = mdof::Dof::polarization) {
    mdof::HilbertLabel label = mdof::HilbertLabel::qubits(dof, n_qubits);
    const int dim = label.dim();
    std::normal_distribution<double> g(0.0, 1.0);
    Mat a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = Cx(g(gen), g(gen));
    Mat rho = a * a.adjoint();
    rho /= rho.trace().real();
    return mdof::DensityMatrix(label, std::move(rho));
}

} // namespace testutil
