#pragma once

#include "mdof/hilbert.hpp"
#include "mdof/metrics.hpp"

namespace mdof {

// Four single-qubit +-1 observables: A1/A2 on one photon, B1/B2 on the other.
struct MeasurementSettings {
    Operator a1, a2, b1, b2;

    MeasurementSettings(Operator a1_, Operator a2_, Operator b1_, Operator b2_);

    // A1=(X+Z)/sqrt2, A2=(X-Z)/sqrt2, B1=X, B2=Z
    static MeasurementSettings pol_preset();
    // a1=(X+Y)/sqrt2, a2=(X-Y)/sqrt2, b1=X, b2=Y
    static MeasurementSettings oam_preset();
};

enum class Subspace { polarization, oam };

enum class ProjKind { P1, P2, P3, P4 };

// Rank-1 projector onto the stated diagonal-basis product vector:
// P1=|h1 h1><h1 h1|, P2=|v1 v1><v1 v1| (polarization, h1/v1 = (H+-V)/sqrt2),
// P3=|h2 h2><h2 h2|, P4=|v2 v2><v2 v2| (OAM, h2/v2 = (|m> +- |-m>)/sqrt2).
Operator subspace_projector(ProjKind kind);

// CHSH combination on a two-qubit density matrix:
// <A1 B1> + <A1 B2> + <A2 B1> - <A2 B2>.
double chsh_value(const DensityMatrix& rho, const MeasurementSettings& s);

// Reduce the state to the named two-qubit subspace by partial trace, then
// evaluate the CHSH combination.
double chsh(const StateVector& state, const MeasurementSettings& s, Subspace sub);

// Alternative composition: apply the projector to the subspace factors,
// renormalize, then reduce and measure. Reported alongside the partial-trace
// route because the two are not equivalent in general.
double chsh_projected(const StateVector& state, ProjKind kind, const MeasurementSettings& s,
                      Subspace sub);

// Fixed-settings ceiling for a Schmidt pair (alpha, beta): 2 sqrt(1 + 4 a^2 b^2).
double chsh_optimal_bound(double alpha);

} // namespace mdof
