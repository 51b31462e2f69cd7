#include <doctest.h>

#include "helpers.hpp"
#include "mdof/fiber.hpp"
#include "mdof/states.hpp"

using namespace mdof;

namespace {

FiberParams flat_params() {
    FiberParams fp;
    fp.delta_n = 0.0;
    fp.theta1 = 0.0;
    fp.phi1 = 0.0;
    return fp;
}

} // namespace

TEST_CASE("propagation constant") {
    CHECK(beta(1.448, 1.55e-6) == doctest::Approx(5.8699e6).epsilon(1e-4));
    CHECK(beta(1.0, 2.0 * M_PI) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(beta(1.448, 0.0), NonPositiveInput);
    CHECK_THROWS_AS(beta(-1.0, 1.0e-6), NonPositiveInput);
}

TEST_CASE("propagation at z = 0 with no phase shifts is the identity") {
    StateVector s = add_frequency_dof(hybrid_state(0.8, 1));
    PropagationResult r = propagate(s, 0.0, flat_params());
    CHECK(r.fidelity_vs_input == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.survival_probability == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(r.state.norm() - 1.0) < 1e-12);
}

TEST_CASE("degenerate indices give a global phase only") {
    StateVector s = add_frequency_dof(hybrid_state(0.8, 1));
    FiberParams fp = flat_params();
    fp.theta1 = 0.4;
    fp.phi1 = 0.4;
    for (double z : {1.0, 37.5, 120.0}) {
        PropagationResult r = propagate(s, z, fp);
        CHECK(r.fidelity_vs_input == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::abs(r.state.norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("opposite branch phases hit the trough overlap") {
    StateVector s = add_frequency_dof(hybrid_state(0.8, 1));
    FiberParams fp = flat_params();
    fp.theta1 = M_PI;  // branch phase difference pi at z = 0
    PropagationResult r = propagate(s, 0.0, fp);
    CHECK(r.fidelity_vs_input == doctest::Approx(0.0784).epsilon(1e-10));
}

TEST_CASE("phase shifts alone reduce the z = 0 fidelity below 1") {
    const double alpha = 0.8, b2 = 1.0 - alpha * alpha;
    StateVector s = add_frequency_dof(hybrid_state(alpha, 1));
    FiberParams fp;  // defaults: theta1 = 1.02 pi, phi1 = 0.98 pi
    fp.delta_n = 0.0;
    PropagationResult r = propagate(s, 0.0, fp);
    const double expected = alpha * alpha * alpha * alpha + b2 * b2 +
                            2.0 * alpha * alpha * b2 * std::cos(0.04 * M_PI);
    CHECK(r.fidelity_vs_input == doctest::Approx(expected).epsilon(1e-12));
    CHECK(r.fidelity_vs_input < 1.0);
}

TEST_CASE("loss is tracked as survival, never in amplitudes") {
    StateVector s = add_frequency_dof(hybrid_state(0.707, 1));
    FiberParams fp;
    PropagationResult r = propagate(s, 95.0, fp);
    CHECK(r.survival_probability == doctest::Approx(std::pow(10.0, -0.36 * 95.0 / 10.0))
                                        .epsilon(1e-12));
    CHECK(std::abs(r.state.norm() - 1.0) < 1e-12);
}

TEST_CASE("mixed-sign OAM amplitudes are rejected") {
    HilbertLabel label =
        HilbertLabel::qubits(Dof::polarization, 2).concat(HilbertLabel::qubits(Dof::oam, 2));
    Vec v = Vec::Zero(16);
    v(1) = 1.0;  // oam digits (0, 1)
    CHECK_THROWS_AS(propagate(StateVector(label, v), 1.0, FiberParams{}), UnsupportedStateShape);
}

TEST_CASE("flat sweep when delta_n vanishes and shifts agree") {
    auto rows = fidelity_vs_distance_sweep(0.8, flat_params(), 10.0, 0.5);
    CHECK(rows.size() == 21);
    for (const auto& r : rows) CHECK(std::abs(r.fidelity - 1.0) < 1e-12);
}

TEST_CASE("autocorrelation finds the analytic period within one step") {
    FiberParams fp;
    fp.delta_n = 2e-11;
    const double period = analytic_period_km(fp);
    CHECK(period == doctest::Approx(M_PI / (2.0 * M_PI * fp.delta_n / fp.lambda_photon) / 1000.0)
                        .epsilon(1e-12));

    const double dz = 0.1;
    auto rows = fidelity_vs_distance_sweep(0.8, fp, 200.0, dz);
    std::vector<double> series;
    for (const auto& r : rows) series.push_back(r.fidelity);
    int steps = autocorrelation_period_steps(series);
    CHECK(std::abs(steps * dz - period) <= dz);
}

TEST_CASE("single-beta branch phases double the period") {
    FiberParams fp;
    fp.delta_n = 2e-11;
    double two_photon = analytic_period_km(fp);
    fp.per_photon_phase = false;
    CHECK(analytic_period_km(fp) == doctest::Approx(2.0 * two_photon).epsilon(1e-12));
}

TEST_CASE("alpha = 0.8 keeps fidelity above 1/2 over more of the period") {
    FiberParams fp;
    fp.delta_n = 2e-11;
    double frac_hi = favorable_fraction(0.8, fp);
    double frac_bell = favorable_fraction(0.707, fp);
    CHECK(frac_hi > frac_bell);
    // analytic fractions: arccos(-0.0851)/pi vs exactly 1/2
    CHECK(frac_hi == doctest::Approx(0.5271).epsilon(2e-3));
    CHECK(frac_bell == doctest::Approx(0.5).epsilon(2e-3));
}
