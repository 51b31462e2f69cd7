#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "helpers.hpp"
#include "mdof/metrics.hpp"

using namespace mdof;

namespace {

// Independent Wootters route: eigenvalues of sqrt(rho) rho_tilde sqrt(rho)
// with rho_tilde assembled from the explicit sigma_y x sigma_y matrix.
double wootters_oracle(const DensityMatrix& rho) {
    Mat sy(2, 2);
    sy << Cx(0, 0), Cx(0, -1), Cx(0, 1), Cx(0, 0);
    Mat syy = kron(sy, sy);
    Mat tilde = syy * rho.entries.conjugate() * syy;

    Eigen::SelfAdjointEigenSolver<Mat> es(rho.entries);
    Mat sqrt_rho = Mat::Zero(4, 4);
    for (int i = 0; i < 4; ++i) {
        double ev = std::max(0.0, es.eigenvalues()(i));
        sqrt_rho += std::sqrt(ev) * es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    }
    Eigen::SelfAdjointEigenSolver<Mat> es2(sqrt_rho * tilde * sqrt_rho);
    std::vector<double> lam;
    for (int i = 0; i < 4; ++i) lam.push_back(std::sqrt(std::max(0.0, es2.eigenvalues()(i))));
    std::sort(lam.begin(), lam.end(), std::greater<>());
    return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

StateVector bell_state() {
    HilbertLabel q2 = HilbertLabel::qubits(Dof::polarization, 2);
    Vec v = Vec::Zero(4);
    v(0) = v(3) = 1.0 / std::sqrt(2.0);
    return StateVector(q2, v);
}

} // namespace

TEST_CASE("pauli matrices") {
    Operator x = pauli(PauliAxis::X), y = pauli(PauliAxis::Y), z = pauli(PauliAxis::Z);
    CHECK(x.entries(0, 1) == Cx(1.0));
    CHECK(x.entries(1, 0) == Cx(1.0));
    CHECK(y.entries(0, 1) == Cx(0, -1));
    CHECK(y.entries(1, 0) == Cx(0, 1));
    CHECK(z.entries(0, 0) == Cx(1.0));
    CHECK(z.entries(1, 1) == Cx(-1.0));
    for (const Operator& p : {x, y, z}) {
        CHECK(p.is_hermitian());
        CHECK((p.entries * p.entries - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("fidelity basics") {
    auto gen = testutil::rng(21);
    StateVector psi = testutil::random_qubit_state(2, gen);
    CHECK(fidelity(density_from_pure(psi), psi) == doctest::Approx(1.0).epsilon(1e-12));

    HilbertLabel q1 = HilbertLabel::qubits(Dof::polarization, 1);
    Vec zero(2);
    zero << 1, 0;
    DensityMatrix mixed(q1, Mat::Identity(2, 2) / 2.0);
    CHECK(fidelity(mixed, StateVector(q1, zero)) == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(fidelity(mixed, psi), DimensionMismatch);
}

TEST_CASE("fidelity reaches 1 only on the matching rank-1 state") {
    auto gen = testutil::rng(22);
    for (int trial = 0; trial < 20; ++trial) {
        StateVector psi = testutil::random_qubit_state(2, gen);
        StateVector phi = testutil::random_qubit_state(2, gen);
        DensityMatrix rho = density_from_pure(phi);
        double f = fidelity(rho, psi);
        double overlap = std::norm(Cx(psi.amplitudes.adjoint() * phi.amplitudes));
        CHECK(f == doctest::Approx(overlap).epsilon(1e-9));
        if (f > 1.0 - 1e-9)
            CHECK((rho.entries - density_from_pure(psi).entries).cwiseAbs().maxCoeff() < 1e-4);
    }
}

TEST_CASE("expectation values") {
    HilbertLabel q1 = HilbertLabel::qubits(Dof::polarization, 1);
    Vec zero(2);
    zero << 1, 0;
    DensityMatrix rho0 = density_from_pure(StateVector(q1, zero));
    CHECK(expectation(rho0, pauli(PauliAxis::Z)) == doctest::Approx(1.0));
    CHECK(expectation(rho0, pauli(PauliAxis::X)) == doctest::Approx(0.0));

    DensityMatrix bell = density_from_pure(bell_state());
    Operator xx = tensor(pauli(PauliAxis::X), pauli(PauliAxis::X));
    CHECK(expectation(bell, xx) == doctest::Approx(1.0));

    Mat skew(2, 2);
    skew << 0, 1, 2, 0;
    CHECK_THROWS_AS(expectation(rho0, Operator(q1, skew)), NonHermitianObservable);
}

TEST_CASE("expectation is linear in rho and O") {
    auto gen = testutil::rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        DensityMatrix r1 = testutil::random_density(2, gen);
        DensityMatrix r2 = testutil::random_density(2, gen);
        Mat h = testutil::random_unitary(4, gen);
        Mat herm1 = (h + h.adjoint()) / 2.0;
        Mat h2 = testutil::random_unitary(4, gen);
        Mat herm2 = (h2 + h2.adjoint()) / 2.0;
        HilbertLabel lbl = r1.label;

        double mixed_rho =
            expectation(DensityMatrix(lbl, 0.3 * r1.entries + 0.7 * r2.entries),
                        Operator(lbl, herm1));
        CHECK(mixed_rho == doctest::Approx(0.3 * expectation(r1, Operator(lbl, herm1)) +
                                           0.7 * expectation(r2, Operator(lbl, herm1)))
                               .epsilon(1e-12));
        double sum_obs = expectation(r1, Operator(lbl, herm1 + herm2));
        CHECK(sum_obs == doctest::Approx(expectation(r1, Operator(lbl, herm1)) +
                                         expectation(r1, Operator(lbl, herm2)))
                             .epsilon(1e-12));
    }
}

TEST_CASE("pure concurrence on known states") {
    CHECK(concurrence_pure(bell_state()) == doctest::Approx(1.0).epsilon(1e-12));

    HilbertLabel q2 = HilbertLabel::qubits(Dof::polarization, 2);
    Vec prod = Vec::Zero(4);
    prod(0) = 1.0;
    CHECK(concurrence_pure(StateVector(q2, prod)) == doctest::Approx(0.0));

    Vec schmidt = Vec::Zero(4);
    schmidt(0) = 0.8;
    schmidt(3) = 0.6;
    CHECK(concurrence_pure(StateVector(q2, schmidt)) == doctest::Approx(0.96).epsilon(1e-12));

    StateVector qutrit(HilbertLabel::single(Dof::oam, 3), Vec::Ones(3) / std::sqrt(3.0));
    CHECK_THROWS_AS(concurrence_pure(qutrit), NonQubitSpace);
}

TEST_CASE("pure concurrence is invariant under local unitaries") {
    auto gen = testutil::rng(24);
    for (int trial = 0; trial < 20; ++trial) {
        StateVector psi = testutil::random_qubit_state(3, gen);
        double c0 = concurrence_pure(psi);
        Vec v = psi.amplitudes;
        for (int q = 0; q < 3; ++q)
            v = apply_factor(testutil::random_unitary(2, gen), v, psi.label, q);
        double c1 = concurrence_pure(StateVector(psi.label, v));
        CHECK(std::abs(c0 - c1) < 1e-9);
    }
}

TEST_CASE("mixed concurrence on known states") {
    DensityMatrix bell = density_from_pure(bell_state());
    CHECK(concurrence_mixed(bell) == doctest::Approx(1.0).epsilon(1e-9));

    HilbertLabel q2 = HilbertLabel::qubits(Dof::polarization, 2);
    DensityMatrix mixed(q2, Mat::Identity(4, 4) / 4.0);
    CHECK(concurrence_mixed(mixed) == doctest::Approx(0.0));

    // Werner state p |Bell><Bell| + (1-p) I/4 at p = 0.8 has C = (3p-1)/2
    double p = 0.8;
    DensityMatrix werner(q2, p * bell.entries + (1.0 - p) * Mat::Identity(4, 4) / 4.0);
    CHECK(concurrence_mixed(werner) == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("mixed concurrence agrees with pure concurrence on rank-1 states") {
    auto gen = testutil::rng(25);
    for (int trial = 0; trial < 10; ++trial) {
        StateVector psi = testutil::random_qubit_state(2, gen);
        CHECK(concurrence_mixed(density_from_pure(psi)) ==
              doctest::Approx(concurrence_pure(psi)).epsilon(1e-8));
    }
}

TEST_CASE("mixed concurrence matches the independent Wootters route") {
    auto gen = testutil::rng(26);
    for (int trial = 0; trial < 40; ++trial) {
        DensityMatrix rho = testutil::random_density(2, gen);
        CHECK(std::abs(concurrence_mixed(rho) - wootters_oracle(rho)) < 1e-9);
    }
}
