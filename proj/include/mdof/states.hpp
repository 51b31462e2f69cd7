#pragma once

#include <utility>

#include "mdof/hilbert.hpp"

namespace mdof {

// Source settings for the entangled photon pair: alpha weights the psi+/psi-
// branches (beta = sqrt(1 - alpha^2)), theta is the phase-matching angle and
// phi the optical path phase difference.
struct SourceParams {
    double alpha;
    double theta;
    double phi;

    SourceParams(double alpha_, double theta_, double phi_);
    double beta() const;
};

// q-plate of order q imprints topological charge l = 2q.
struct QPlateSpec {
    double q;

    explicit QPlateSpec(double q_);
    int l() const;
};

// psi+ = cos(t/2)|0> + e^{i phi} sin(t/2)|1> and its orthogonal partner
// psi- = sin(t/2)|0> - e^{i phi} cos(t/2)|1>, both on a single polarization qubit.
std::pair<StateVector, StateVector> single_qubit_basis(double theta, double phi);

// alpha psi+ psi+ + beta psi- psi-, normalized, on two polarization qubits.
StateVector polarization_pair_state(const SourceParams& p);

// Per photon: |H> -> |H>|+l>, |V> -> |V>|-l> (QWP / q-plate / QWP chain with
// the OAM charge stored as a qubit, |+l> = logical 0 and |-l> = logical 1).
// Output factor order: all polarization factors first, then one OAM factor per
// photon in the same photon order.
StateVector qplate_transform(const StateVector& pol_state, const QPlateSpec& spec);

// alpha |HH>|l,l> + sqrt(1-alpha^2) |VV>|-l,-l> on four qubits ordered
// (A-pol, B-pol, A-oam, B-oam).
StateVector hybrid_state(double alpha, int l);

// Appends the normalized frequency Bell pair (|10> + |01>)/sqrt(2).
StateVector add_frequency_dof(const StateVector& s);

} // namespace mdof
