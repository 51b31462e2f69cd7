#include "mdof/states.hpp"

#include <cmath>
#include <string>

namespace mdof {

SourceParams::SourceParams(double alpha_, double theta_, double phi_)
    : alpha(alpha_), theta(theta_), phi(phi_) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw ParamOutOfRange("SourceParams: alpha must lie in [0, 1]");
    if (!std::isfinite(theta) || !std::isfinite(phi))
        throw ParamOutOfRange("SourceParams: angles must be finite");
}

double SourceParams::beta() const { return std::sqrt(std::max(0.0, 1.0 - alpha * alpha)); }

QPlateSpec::QPlateSpec(double q_) : q(q_) {
    double twice = 2.0 * q;
    if (std::abs(twice - std::round(twice)) > 1e-9)
        throw ParamOutOfRange("QPlateSpec: q must be a half-integer");
    if (std::round(twice) == 0.0)
        throw ParamOutOfRange("QPlateSpec: q = 0 imprints no charge");
}

int QPlateSpec::l() const { return static_cast<int>(std::lround(2.0 * q)); }

std::pair<StateVector, StateVector> single_qubit_basis(double theta, double phi) {
    if (!std::isfinite(theta) || !std::isfinite(phi))
        throw ParamOutOfRange("single_qubit_basis: angles must be finite");
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    const Cx ph = std::exp(Cx(0, phi));
    HilbertLabel q = HilbertLabel::qubits(Dof::polarization, 1);
    Vec plus(2), minus(2);
    plus << c, ph * s;
    minus << s, -ph * c;
    return {StateVector(q, std::move(plus)), StateVector(q, std::move(minus))};
}

StateVector polarization_pair_state(const SourceParams& p) {
    auto [plus, minus] = single_qubit_basis(p.theta, p.phi);
    StateVector pp = tensor(plus, plus);
    StateVector mm = tensor(minus, minus);
    StateVector out(pp.label, p.alpha * pp.amplitudes + p.beta() * mm.amplitudes);
    return normalize(out);
}

StateVector qplate_transform(const StateVector& pol_state, const QPlateSpec&) {
    const auto& label = pol_state.label;
    for (int i = 0; i < label.factor_count(); ++i) {
        if (label.factor(i).dof != Dof::polarization || label.factor(i).dim != 2)
            throw NonPolarizationInput(
                "qplate_transform: input must live on polarization qubits only");
    }
    const int photons = label.factor_count();
    HilbertLabel out_label = label.concat(HilbertLabel::qubits(Dof::oam, photons));

    // |b1..bn>_pol -> |b1..bn>_pol |b1..bn>_oam: H copies to +l (0), V to -l (1).
    const int pol_dim = label.dim();
    Vec out = Vec::Zero(out_label.dim());
    for (int b = 0; b < pol_dim; ++b) out(b * pol_dim + b) = pol_state.amplitudes(b);
    return StateVector(std::move(out_label), std::move(out));
}

StateVector hybrid_state(double alpha, int l) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw ParamOutOfRange("hybrid_state: alpha must lie in [0, 1]");
    if (l == 0) throw ParamOutOfRange("hybrid_state: topological charge must be nonzero");
    HilbertLabel label =
        HilbertLabel::qubits(Dof::polarization, 2).concat(HilbertLabel::qubits(Dof::oam, 2));
    Vec amps = Vec::Zero(16);
    amps(0) = alpha;                                       // |HH>|+l,+l>
    amps(15) = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));  // |VV>|-l,-l>
    return normalize(StateVector(std::move(label), std::move(amps)));
}

StateVector add_frequency_dof(const StateVector& s) {
    if (!s.is_normalized(1e-9))
        throw ParamOutOfRange("add_frequency_dof: input state must be normalized");
    HilbertLabel freq = HilbertLabel::qubits(Dof::frequency, 2);
    Vec bell = Vec::Zero(4);
    bell(2) = 1.0;  // |10>
    bell(1) = 1.0;  // |01>
    StateVector f = normalize(StateVector(freq, std::move(bell)));
    return tensor(s, f);
}

} // namespace mdof
