#pragma once

#include "mdof/hilbert.hpp"

namespace mdof {

enum class PauliAxis { X, Y, Z };

Operator pauli(PauliAxis axis, Dof dof = Dof::polarization);
Operator identity_op(const HilbertLabel& label);

// Pure-target fidelity <psi| rho |psi>.
double fidelity(const DensityMatrix& rho, const StateVector& target);

// Tr(rho O) for Hermitian O.
double expectation(const DensityMatrix& rho, const Operator& obs);

// Spin-flip concurrence of a pure n-qubit state.
//
// `standard` conjugates the state and takes the unsquared magnitude, so Bell
// states score 1. `literal` skips the conjugation and squares the overlap;
// it is kept as an alternative surface shape for comparison sweeps.
enum class ConcurrenceMode { standard, literal };

double concurrence_pure(const StateVector& psi, ConcurrenceMode mode = ConcurrenceMode::standard);

// Spectral spin-flip concurrence for mixed n-qubit states: eigenvalues of
// rho * (sigma_y^n rho* sigma_y^n) in descending order give
// C = max(0, sqrt(l1) - sum_{i>1} sqrt(li)). Coincides with the Wootters
// concurrence for n = 2 and with concurrence_pure on rank-1 inputs; for
// n > 2 it is a model choice and is flagged as such in experiment metadata.
double concurrence_mixed(const DensityMatrix& rho);

} // namespace mdof
