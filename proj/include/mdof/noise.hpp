#pragma once

#include <vector>

#include "mdof/hilbert.hpp"

namespace mdof {

// Damping (gamma_d) and scattering/dephasing (gamma_s) strengths, both in [0, 1].
struct ApdParams {
    double gamma_d;
    double gamma_s;

    ApdParams(double d, double s);
};

// Relaxation time T1, dephasing time T2 and elapsed transmission time t,
// all in microseconds.
struct TimeParams {
    double T1 = 100.0;
    double T2 = 100.0;
    double t = 0.0;

    TimeParams() = default;
    TimeParams(double T1_, double T2_, double t_);
};

struct KrausSet {
    int dim = 0;
    std::vector<Mat> operators;

    // max-norm of sum E_i^dag E_i - I
    double completeness_residual() const;
};

// Exponential relaxation gamma(t) = 1 - exp(-t/T).
double gamma_of_time(double t, double T);

ApdParams apd_params_at(const TimeParams& tp);

// Single-qubit amplitude-and-phase damping set {E0, E1, E2}:
//   E0 = diag(1, sqrt(1 - gd - (1-gd) gs)), E1 = sqrt(gd)|0><1|,
//   E2 = sqrt((1-gd) gs)|1><1|.
KrausSet apd_kraus(const ApdParams& p);

// d-level cascade: level k decays toward k-1 with weight 1 - (1-gd)^k and
// dephases with weight (1-gd)^k (1 - (1-gs)^k); reduces to apd_kraus at d = 2.
KrausSet qudit_apd_kraus(int d, const ApdParams& p);

KrausSet identity_kraus(int dim);

// Same cascade applied to both topological-charge signs: each operator is
// lifted block-diagonally to the 2d-dimensional (sign x level) space.
KrausSet lift_to_signed(const KrausSet& ks);

// eps(rho) = sum_{m,n} (E_m x E_n) rho (E_m x E_n)^dag on a two-factor space.
DensityMatrix apply_channel_two_photon(const DensityMatrix& rho, const KrausSet& ks);

// Independent application of the channel to each listed factor, composed
// sequentially. Channels on disjoint factors commute, so the target order is
// irrelevant.
DensityMatrix apply_channel_per_qubit(const DensityMatrix& rho, const KrausSet& ks,
                                      const std::vector<int>& targets);

struct FactorChannel {
    int factor;
    const KrausSet* kraus;
};

// <psi| eps(|psi><psi|) |psi> = sum_K |<psi|K|psi>|^2 evaluated directly over
// the composite Kraus expansion; avoids materialising the full density matrix
// for large sign x level spaces.
double channel_fidelity_pure(const StateVector& psi, const std::vector<FactorChannel>& channels);

// Calibrated time scales for the OAM-ladder system: the polarization factor
// sees a saturating noise level gamma_inf (1 - exp(-t/tau)) while the charge
// ladders relax on T_cascade. Defaults come from the shipped calibration
// (see experiments::calibrate_qudit).
struct QuditScales {
    double gamma_inf = 0.3276519186;
    double tau = 59.6751100167;
    double T_cascade = 1191.6532825;
};

enum class SystemKind { qubits4, qubits6, oam };

struct SystemSpec {
    SystemKind kind = SystemKind::qubits4;
    int l = 4;  // ladder depth, used by SystemKind::oam only

    static SystemSpec qubits4() { return {SystemKind::qubits4, 1}; }
    static SystemSpec qubits6() { return {SystemKind::qubits6, 1}; }
    static SystemSpec oam(int l) { return {SystemKind::oam, l}; }
};

// Input state of the given system: the hybrid 4-qubit state, the 6-qubit
// hyper-entangled state, or the polarization-modulated charge-ladder pair
// alpha |HH>|+T,+T> + beta |VV>|-T,-T| with T the top ladder level.
StateVector system_state(const SystemSpec& sys, double alpha);

// Fidelity of the system state after its noise channels at time t.
double system_fidelity(const SystemSpec& sys, double alpha, double t,
                       const TimeParams& base = TimeParams{},
                       const QuditScales& scales = QuditScales{});

// 100 * (F(alpha_hi, t) - F(alpha_lo, t)) / F(alpha_lo, t).
double fidelity_improvement_ratio(double alpha_hi, double alpha_lo, double t,
                                  const SystemSpec& sys,
                                  const TimeParams& base = TimeParams{},
                                  const QuditScales& scales = QuditScales{});

} // namespace mdof
