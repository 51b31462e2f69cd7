#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>

#include "mdof/hilbert.hpp"

namespace mdof {

struct GridSpec {
    int n = 256;
    double extent_m = 4.0 * 9.5e-6;  // physical half-width; default 4 beam waists

    // node-based sampling on [-extent, extent); even n puts r = 0 on the grid
    double step() const { return 2.0 * extent_m / n; }
    double cell_area() const { return step() * step(); }
    double coord(int i) const { return -extent_m + i * step(); }
};

// Complex scalar field sampled on an N x N transverse grid.
struct FieldGrid {
    int n = 0;
    double extent_m = 0.0;
    Mat values;  // row i = y index, column j = x index

    double cell_area() const {
        GridSpec g{n, extent_m};
        return g.cell_area();
    }
    double power() const;  // sum |v|^2 * cell area
    void normalize();
};

struct IntensityGrid {
    int n = 0;
    double extent_m = 0.0;
    Eigen::MatrixXd values;
};

// Complex weights per topological charge, normalized to unit total power.
struct OamSpectrum {
    std::map<int, Cx> coefficients;
    double waist_m = 9.5e-6;

    void normalize();
};

// Laguerre-Gaussian mode, radial index 0, charge l (analytically normalized).
FieldGrid lg_mode(int l, double waist_m, const GridSpec& grid);

FieldGrid synthesize_field(const OamSpectrum& spec, const GridSpec& grid);

// Plane-wave reference for the two-step interferometric projections.
struct ReferenceSpec {
    double amplitude = 0.0;
    double phase_first = 0.0;
    double phase_second = M_PI / 2.0;
};

// amplitude = scale * max |field|; the default strength puts the 1%-noise
// reconstruction near 0.98 overlap fidelity
ReferenceSpec reference_for(const FieldGrid& field, double scale = 3.5);

enum class Projection { first, second };

// |field + ref|^2 with the reference phase of the chosen projection step.
IntensityGrid project_intensity(const FieldGrid& field, const ReferenceSpec& ref, Projection p);

// Multiplicative Gaussian intensity noise (sigma = amplitude), clamped at 0.
void add_intensity_noise(IntensityGrid& grid, double amplitude, std::uint64_t seed);

// Per-pixel inversion of the two interference equations; output normalized.
FieldGrid reconstruct_two_measurement(const IntensityGrid& i1, const IntensityGrid& i2,
                                      const ReferenceSpec& ref);

// |<a|b>|^2 with the discrete cell-area inner product.
double mode_overlap_fidelity(const FieldGrid& a, const FieldGrid& b);

// <LG_l | field>, for spectrum extraction checks.
Cx project_onto_mode(const FieldGrid& field, int l, double waist_m);

enum class GridComponent { real, imag, intensity };

// CSV with a "# N extent_m" header, row-major.
void write_grid_csv(const std::string& path, const FieldGrid& grid, GridComponent comp);
void write_intensity_csv(const std::string& path, const IntensityGrid& grid);
// 8-bit PGM scaled to the max value.
void write_intensity_pgm(const std::string& path, const IntensityGrid& grid);

} // namespace mdof
