#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "mdof/tomography.hpp"

using namespace mdof;

namespace {

const double kWaist = 9.5e-6;

GridSpec test_grid(int n = 256) { return GridSpec{n, 4.0 * kWaist}; }

// winding number of the field phase on a circle of the given radius
int phase_winding(const FieldGrid& field, double radius) {
    GridSpec g{field.n, field.extent_m};
    const int samples = 720;
    double total = 0.0, prev = 0.0;
    for (int k = 0; k <= samples; ++k) {
        const double ang = 2.0 * M_PI * k / samples;
        const int ix = static_cast<int>(std::lround((radius * std::cos(ang) + g.extent_m) /
                                                    g.step()));
        const int iy = static_cast<int>(std::lround((radius * std::sin(ang) + g.extent_m) /
                                                    g.step()));
        const double ph = std::arg(field.values(iy, ix));
        if (k > 0) {
            double d = ph - prev;
            while (d > M_PI) d -= 2.0 * M_PI;
            while (d < -M_PI) d += 2.0 * M_PI;
            total += d;
        }
        prev = ph;
    }
    return static_cast<int>(std::lround(total / (2.0 * M_PI)));
}

OamSpectrum random_spectrum(std::mt19937_64& gen) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_int_distribution<int> pick(0, 1);
    OamSpectrum spec;
    for (int l = -3; l <= 3; ++l)
        if (pick(gen)) spec.coefficients[l] = Cx(g(gen), g(gen));
    if (spec.coefficients.empty()) spec.coefficients[1] = 1.0;
    spec.normalize();
    return spec;
}

double roundtrip_fidelity(const OamSpectrum& spec, double noise, std::uint64_t seed,
                          int n = 256) {
    FieldGrid field = synthesize_field(spec, test_grid(n));
    ReferenceSpec ref = reference_for(field);
    IntensityGrid i1 = project_intensity(field, ref, Projection::first);
    IntensityGrid i2 = project_intensity(field, ref, Projection::second);
    add_intensity_noise(i1, noise, seed);
    add_intensity_noise(i2, noise, seed + 1);
    FieldGrid rec = reconstruct_two_measurement(i1, i2, ref);
    return mode_overlap_fidelity(field, rec);
}

} // namespace

TEST_CASE("LG modes are normalized and orthogonal on the grid") {
    GridSpec g = test_grid();
    for (int l = 0; l <= 4; ++l) {
        FieldGrid m = lg_mode(l, kWaist, g);
        CHECK(m.power() == doctest::Approx(1.0).epsilon(1e-6));
    }
    // Gram matrix of l in [-4, 4] deviates from identity below 1e-4
    std::vector<FieldGrid> modes;
    for (int l = -4; l <= 4; ++l) modes.push_back(lg_mode(l, kWaist, g));
    for (size_t a = 0; a < modes.size(); ++a)
        for (size_t b = 0; b < modes.size(); ++b) {
            Cx ip = (modes[a].values.conjugate().cwiseProduct(modes[b].values)).sum() *
                    g.cell_area();
            double expect = (a == b) ? 1.0 : 0.0;
            CHECK(std::abs(ip - Cx(expect)) < 1e-4);
        }
}

TEST_CASE("vortex null and Gaussian peak") {
    GridSpec g = test_grid();
    FieldGrid gauss = lg_mode(0, kWaist, g);
    FieldGrid vortex = lg_mode(1, kWaist, g);
    const int c = g.n / 2;  // r = 0 lies on the grid

    double g_peak = gauss.values.cwiseAbs2().maxCoeff();
    CHECK(std::norm(gauss.values(c, c)) == doctest::Approx(g_peak).epsilon(1e-12));

    double v_peak = vortex.values.cwiseAbs2().maxCoeff();
    CHECK(std::norm(vortex.values(c, c)) < 1e-6 * v_peak);
}

TEST_CASE("two-lobe interference of opposite charges") {
    OamSpectrum spec;
    spec.coefficients[+1] = 0.8;
    spec.coefficients[-1] = 0.6;
    FieldGrid f = synthesize_field(spec, test_grid());
    GridSpec g = test_grid();
    const int c = g.n / 2;
    const int off = static_cast<int>(std::lround(kWaist / std::sqrt(2.0) / g.step()));
    // |0.8 e^{i phi} + 0.6 e^{-i phi}|^2 is 1.96 at phi = 0 and 0.04 at phi = pi/2
    double lobe = std::norm(f.values(c, c + off));
    double valley = std::norm(f.values(c + off, c));
    CHECK(lobe / valley == doctest::Approx(49.0).epsilon(0.05));

    OamSpectrum empty;
    CHECK_THROWS_AS(synthesize_field(empty, test_grid()), EmptySpectrum);
}

TEST_CASE("projection intensities") {
    GridSpec g = test_grid(64);
    FieldGrid zero;
    zero.n = g.n;
    zero.extent_m = g.extent_m;
    zero.values = Mat::Zero(g.n, g.n);
    ReferenceSpec ref;
    ref.amplitude = 2.0;
    IntensityGrid i0 = project_intensity(zero, ref, Projection::first);
    CHECK(i0.values.maxCoeff() == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(i0.values.minCoeff() == doctest::Approx(4.0).epsilon(1e-12));

    FieldGrid flat = zero;
    flat.values = Mat::Constant(g.n, g.n, Cx(2.0, 0.0));
    IntensityGrid i1 = project_intensity(flat, ref, Projection::first);
    CHECK(i1.values.maxCoeff() == doctest::Approx(16.0).epsilon(1e-12));  // 4x reference
}

TEST_CASE("vortex fringes carry one dislocation") {
    GridSpec g = test_grid();
    FieldGrid vortex = lg_mode(1, kWaist, g);
    ReferenceSpec ref = reference_for(vortex);
    IntensityGrid i1 = project_intensity(vortex, ref, Projection::first);
    IntensityGrid i2 = project_intensity(vortex, ref, Projection::second);
    FieldGrid rec = reconstruct_two_measurement(i1, i2, ref);
    CHECK(phase_winding(rec, kWaist) == 1);
    CHECK(phase_winding(lg_mode(-2, kWaist, g), kWaist) == -2);
}

TEST_CASE("noiseless roundtrip is essentially exact") {
    auto gen = testutil::rng(61);
    for (int trial = 0; trial < 10; ++trial) {
        OamSpectrum spec = random_spectrum(gen);
        CHECK(roundtrip_fidelity(spec, 0.0, 0) >= 0.999);
    }
}

TEST_CASE("reconstruction recovers the 0.64 : 0.36 power split") {
    OamSpectrum spec;
    spec.coefficients[+1] = 0.8;
    spec.coefficients[-1] = 0.6;
    FieldGrid f = synthesize_field(spec, test_grid());
    ReferenceSpec ref = reference_for(f);
    FieldGrid rec = reconstruct_two_measurement(project_intensity(f, ref, Projection::first),
                                                project_intensity(f, ref, Projection::second),
                                                ref);
    CHECK(std::norm(project_onto_mode(rec, +1, kWaist)) == doctest::Approx(0.64).epsilon(1e-3));
    CHECK(std::norm(project_onto_mode(rec, -1, kWaist)) == doctest::Approx(0.36).epsilon(1e-3));
}

TEST_CASE("reconstruction degrades monotonically with noise") {
    OamSpectrum spec;
    spec.coefficients[+1] = 0.8;
    spec.coefficients[-1] = 0.6;
    double prev = 1.1;
    for (double noise : {0.0, 0.005, 0.01, 0.02}) {
        double f = roundtrip_fidelity(spec, noise, 7);
        CHECK(f < prev);
        prev = f;
    }
}

TEST_CASE("default noise lands near the reported reconstruction quality") {
    OamSpectrum spec;
    spec.coefficients[+1] = 0.8;
    spec.coefficients[-1] = 0.6;
    double f = roundtrip_fidelity(spec, 0.01, 0);
    CHECK(f >= 0.96);
    CHECK(f <= 0.995);
}

TEST_CASE("fidelity converges with grid resolution") {
    OamSpectrum spec;
    spec.coefficients[+1] = Cx(0.8, 0.0);
    spec.coefficients[-1] = Cx(0.0, 0.6);
    double f256 = roundtrip_fidelity(spec, 0.01, 3, 256);
    double f512 = roundtrip_fidelity(spec, 0.01, 3, 512);
    CHECK(std::abs(f256 - f512) < 1e-3);
}

TEST_CASE("overlap fidelity properties") {
    GridSpec g = test_grid(128);
    FieldGrid a = lg_mode(1, kWaist, g);
    CHECK(mode_overlap_fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-9));

    FieldGrid b = lg_mode(2, kWaist, g);
    CHECK(mode_overlap_fidelity(a, b) < 1e-6);

    // 0.99 |LG1> + sqrt(0.0199) |LG2> overlaps |LG1> at 0.9801
    FieldGrid mix = a;
    mix.values = 0.99 * a.values + std::sqrt(0.0199) * b.values;
    CHECK(mode_overlap_fidelity(a, mix) == doctest::Approx(0.9801).epsilon(1e-4));

    FieldGrid other = lg_mode(1, kWaist, test_grid(64));
    CHECK_THROWS_AS(mode_overlap_fidelity(a, other), DimensionMismatch);
}

TEST_CASE("inconsistent intensities are rejected") {
    GridSpec g = test_grid(32);
    ReferenceSpec ref;
    ref.amplitude = 2.0;
    IntensityGrid i1, i2;
    i1.n = i2.n = g.n;
    i1.extent_m = i2.extent_m = g.extent_m;
    i1.values = Eigen::MatrixXd::Zero(g.n, g.n);
    i2.values = Eigen::MatrixXd::Constant(g.n, g.n, ref.amplitude * ref.amplitude);
    CHECK_THROWS_AS(reconstruct_two_measurement(i1, i2, ref), InconsistentIntensities);
}
