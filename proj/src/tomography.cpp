#include "mdof/tomography.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>

namespace mdof {

double FieldGrid::power() const {
    return values.cwiseAbs2().sum() * cell_area();
}

void FieldGrid::normalize() {
    double p = power();
    if (p <= 0.0) throw ZeroVector("FieldGrid::normalize: zero field");
    values /= std::sqrt(p);
}

void OamSpectrum::normalize() {
    double p = 0.0;
    for (const auto& [l, c] : coefficients) p += std::norm(c);
    if (p <= 0.0) throw ZeroVector("OamSpectrum::normalize: zero spectrum");
    const double s = std::sqrt(p);
    for (auto& [l, c] : coefficients) c /= s;
}

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

} // namespace

FieldGrid lg_mode(int l, double waist_m, const GridSpec& grid) {
    if (!(waist_m > 0.0)) throw NonPositiveInput("lg_mode: waist must be positive");
    const int al = std::abs(l);
    const double norm = std::sqrt(2.0 / (M_PI * factorial(al))) / waist_m;

    FieldGrid out;
    out.n = grid.n;
    out.extent_m = grid.extent_m;
    out.values = Mat(grid.n, grid.n);
    for (int iy = 0; iy < grid.n; ++iy) {
        const double y = grid.coord(iy);
        for (int ix = 0; ix < grid.n; ++ix) {
            const double x = grid.coord(ix);
            const double r = std::hypot(x, y);
            const double phi = std::atan2(y, x);
            const double radial =
                norm * std::pow(r * std::sqrt(2.0) / waist_m, al) * std::exp(-r * r / (waist_m * waist_m));
            out.values(iy, ix) = radial * std::exp(Cx(0, l * phi));
        }
    }
    return out;
}

FieldGrid synthesize_field(const OamSpectrum& spec, const GridSpec& grid) {
    if (spec.coefficients.empty()) throw EmptySpectrum("synthesize_field: empty spectrum");
    FieldGrid out;
    out.n = grid.n;
    out.extent_m = grid.extent_m;
    out.values = Mat::Zero(grid.n, grid.n);
    for (const auto& [l, c] : spec.coefficients) {
        if (c == Cx(0.0)) continue;
        FieldGrid mode = lg_mode(l, spec.waist_m, grid);
        out.values += c * mode.values;
    }
    out.normalize();
    return out;
}

ReferenceSpec reference_for(const FieldGrid& field, double scale) {
    ReferenceSpec ref;
    ref.amplitude = scale * field.values.cwiseAbs().maxCoeff();
    return ref;
}

IntensityGrid project_intensity(const FieldGrid& field, const ReferenceSpec& ref, Projection p) {
    const double phase = (p == Projection::first) ? ref.phase_first : ref.phase_second;
    const Cx r = ref.amplitude * std::exp(Cx(0, phase));
    IntensityGrid out;
    out.n = field.n;
    out.extent_m = field.extent_m;
    out.values = (field.values.array() + r).abs2().matrix();
    return out;
}

void add_intensity_noise(IntensityGrid& grid, double amplitude, std::uint64_t seed) {
    if (amplitude < 0.0) throw ParamOutOfRange("add_intensity_noise: amplitude must be >= 0");
    if (amplitude == 0.0) return;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (Eigen::Index i = 0; i < grid.values.rows(); ++i)
        for (Eigen::Index j = 0; j < grid.values.cols(); ++j) {
            double v = grid.values(i, j) * (1.0 + amplitude * gauss(rng));
            grid.values(i, j) = std::max(0.0, v);
        }
}

FieldGrid reconstruct_two_measurement(const IntensityGrid& i1, const IntensityGrid& i2,
                                      const ReferenceSpec& ref) {
    if (i1.n != i2.n || i1.extent_m != i2.extent_m)
        throw DimensionMismatch("reconstruct_two_measurement: grids are not congruent");
    if (!(ref.amplitude > 0.0))
        throw ParamOutOfRange("reconstruct_two_measurement: reference amplitude must be positive");
    if (std::abs(std::abs(ref.phase_second - ref.phase_first) - M_PI / 2.0) > 1e-9)
        throw ParamOutOfRange("reconstruct_two_measurement: projections must be in quadrature");

    const double R = ref.amplitude;
    // Tolerate noise-induced negative radicands up to a small fraction of the
    // reference intensity.
    const double radicand_floor = -1e-8 * R * R;

    FieldGrid out;
    out.n = i1.n;
    out.extent_m = i1.extent_m;
    out.values = Mat(i1.n, i1.n);
    for (int iy = 0; iy < i1.n; ++iy)
        for (int ix = 0; ix < i1.n; ++ix) {
            // I1 = |f|^2 + R^2 + 2R Re f, I2 = |f|^2 + R^2 + 2R Im f
            const double a = i1.values(iy, ix);
            const double b = i2.values(iy, ix);
            const double s = (a - b) / (2.0 * R);  // Re f - Im f
            double rad = 2.0 * a - (R + s) * (R + s);
            if (rad < radicand_floor)
                throw InconsistentIntensities(
                    "reconstruct_two_measurement: negative radicand " + std::to_string(rad));
            rad = std::max(0.0, rad);
            const double re = (s - R + std::sqrt(rad)) / 2.0;
            out.values(iy, ix) = Cx(re, re - s);
        }

    // account for the reference phase origin
    if (ref.phase_first != 0.0)
        out.values *= std::exp(Cx(0, ref.phase_first));
    out.normalize();
    return out;
}

double mode_overlap_fidelity(const FieldGrid& a, const FieldGrid& b) {
    if (a.n != b.n || a.extent_m != b.extent_m)
        throw DimensionMismatch("mode_overlap_fidelity: grids are not congruent");
    Cx overlap = (a.values.conjugate().cwiseProduct(b.values)).sum() * a.cell_area();
    return std::norm(overlap);
}

Cx project_onto_mode(const FieldGrid& field, int l, double waist_m) {
    FieldGrid mode = lg_mode(l, waist_m, GridSpec{field.n, field.extent_m});
    return (mode.values.conjugate().cwiseProduct(field.values)).sum() * field.cell_area();
}

namespace {

void write_matrix_csv(const std::string& path, int n, double extent,
                      const std::function<double(int, int)>& at) {
    std::ofstream out(path);
    if (!out) throw IoFailure("cannot open " + path);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "# %d %.9g\n", n, extent);
    out << buf;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            std::snprintf(buf, sizeof(buf), "%.9g", at(i, j));
            out << buf << (j + 1 < n ? "," : "\n");
        }
    }
    if (!out) throw IoFailure("failed writing " + path);
}

} // namespace

void write_grid_csv(const std::string& path, const FieldGrid& grid, GridComponent comp) {
    write_matrix_csv(path, grid.n, grid.extent_m, [&](int i, int j) {
        switch (comp) {
            case GridComponent::real: return grid.values(i, j).real();
            case GridComponent::imag: return grid.values(i, j).imag();
            default: return std::norm(grid.values(i, j));
        }
    });
}

void write_intensity_csv(const std::string& path, const IntensityGrid& grid) {
    write_matrix_csv(path, grid.n, grid.extent_m,
                     [&](int i, int j) { return grid.values(i, j); });
}

void write_intensity_pgm(const std::string& path, const IntensityGrid& grid) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open " + path);
    const double peak = grid.values.maxCoeff();
    out << "P5\n" << grid.n << " " << grid.n << "\n255\n";
    for (int i = 0; i < grid.n; ++i)
        for (int j = 0; j < grid.n; ++j) {
            const double v = peak > 0.0 ? grid.values(i, j) / peak : 0.0;
            out.put(static_cast<char>(std::lround(255.0 * v)));
        }
    if (!out) throw IoFailure("failed writing " + path);
}

} // namespace mdof
