#pragma once

#include <cmath>
#include <vector>

#include "mdof/hilbert.hpp"

namespace mdof {

// Fiber model parameters. The +l / -l effective indices are split
// symmetrically around n_eff by delta_n; delta_n is a model knob (the
// degenerate-index case produces no oscillation).
struct FiberParams {
    double n_eff = 1.448;
    double delta_n = 1e-7;
    double lambda_photon = 1.55e-6;  // meters
    double loss_db_per_km = 0.36;
    double core_radius_um = 9.5;
    double theta1 = 1.02 * M_PI;  // phase shift on the +l,+l branch
    double phi1 = 0.98 * M_PI;    // phase shift on the -l,-l branch
    // Both photons accrue beta*z, so each branch picks up 2*beta*z by default;
    // disabling this reproduces the single-beta-per-branch form (only the
    // oscillation period changes).
    bool per_photon_phase = true;

    double n_plus() const { return n_eff + delta_n / 2.0; }
    double n_minus() const { return n_eff - delta_n / 2.0; }
    void validate() const;
};

// Propagation constant beta = 2 pi n_eff / lambda, rad/meter.
double beta(double n_eff, double lambda_m);

struct PropagationResult {
    StateVector state;             // post-phase, unit norm
    double survival_probability;   // 10^(-loss * z / 10)
    double fidelity_vs_input;      // |<in|out>|^2
};

// Branch phases e^{i(2 beta+ z + theta1)} / e^{i(2 beta- z + phi1)} applied to
// the |+l,+l> / |-l,-l> branches of a hybrid (or hyper-entangled) state.
// Loss is tracked as a survival probability and never rescales amplitudes.
PropagationResult propagate(const StateVector& s, double z_km, const FiberParams& fp);

struct FiberSweepRow {
    double z_km;
    double fidelity;
    double survival;
};

std::vector<FiberSweepRow> fidelity_vs_distance_sweep(double alpha, const FiberParams& fp,
                                                      double z_max_km, double dz_km);

// Oscillation period of the sweep, km: 2 pi / (2 delta_beta) with delta_beta
// in rad/m (halved again when per_photon_phase is set).
double analytic_period_km(const FiberParams& fp);

// First autocorrelation peak of a mean-removed series, in lag steps; returns 0
// when no periodic structure is found.
int autocorrelation_period_steps(const std::vector<double>& series);

// Fraction of one period with fidelity above the threshold.
double favorable_fraction(double alpha, const FiberParams& fp, double threshold = 0.5,
                          int samples_per_period = 4096);

} // namespace mdof
