#include "mdof/chsh.hpp"

#include <cmath>

namespace mdof {

namespace {

void check_pm_one(const Operator& op, const char* name) {
    if (op.label.dim() != 2) throw DimensionMismatch(std::string(name) + ": must be single-qubit");
    if (!op.is_hermitian()) throw NonHermitianObservable(std::string(name) + ": not Hermitian");
    Mat sq = op.entries * op.entries;
    if ((sq - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() > kMatrixTol)
        throw ParamOutOfRange(std::string(name) + ": observable must square to identity");
}

Operator combine(const Operator& x, const Operator& y, double sign, Dof dof) {
    Mat m = (x.entries + sign * y.entries) / std::sqrt(2.0);
    return Operator(HilbertLabel::single(dof, 2), std::move(m));
}

std::vector<int> subspace_factors(const HilbertLabel& label, Subspace sub) {
    Dof dof = (sub == Subspace::polarization) ? Dof::polarization : Dof::oam;
    std::vector<int> fs = label.factors_of(dof);
    if (fs.size() != 2)
        throw UnsupportedStateShape(std::string("chsh: state does not expose two ") +
                                    dof_name(dof) + " qubits");
    for (int f : fs)
        if (label.factor(f).dim != 2)
            throw UnsupportedStateShape("chsh: subspace factors must be two-level");
    return fs;
}

} // namespace

MeasurementSettings::MeasurementSettings(Operator a1_, Operator a2_, Operator b1_, Operator b2_)
    : a1(std::move(a1_)), a2(std::move(a2_)), b1(std::move(b1_)), b2(std::move(b2_)) {
    check_pm_one(a1, "A1");
    check_pm_one(a2, "A2");
    check_pm_one(b1, "B1");
    check_pm_one(b2, "B2");
}

MeasurementSettings MeasurementSettings::pol_preset() {
    Operator x = pauli(PauliAxis::X), z = pauli(PauliAxis::Z);
    return MeasurementSettings(combine(x, z, +1.0, Dof::polarization),
                               combine(x, z, -1.0, Dof::polarization), x, z);
}

MeasurementSettings MeasurementSettings::oam_preset() {
    Operator x = pauli(PauliAxis::X, Dof::oam), y = pauli(PauliAxis::Y, Dof::oam);
    return MeasurementSettings(combine(x, y, +1.0, Dof::oam), combine(x, y, -1.0, Dof::oam), x, y);
}

Operator subspace_projector(ProjKind kind) {
    const bool pol = (kind == ProjKind::P1 || kind == ProjKind::P2);
    const double sign = (kind == ProjKind::P1 || kind == ProjKind::P3) ? 1.0 : -1.0;
    Dof dof = pol ? Dof::polarization : Dof::oam;

    Vec diag(2);
    diag << 1.0 / std::sqrt(2.0), sign / std::sqrt(2.0);
    StateVector single(HilbertLabel::single(dof, 2), diag);
    StateVector product = tensor(single, single);
    return Operator(product.label, product.amplitudes * product.amplitudes.adjoint());
}

double chsh_value(const DensityMatrix& rho, const MeasurementSettings& s) {
    if (rho.label.dim() != 4) throw DimensionMismatch("chsh_value: expected a two-qubit state");
    auto corr = [&](const Operator& a, const Operator& b) {
        Operator ab = tensor(a, b);
        // reuse rho's label so dimension checks pass regardless of dof tags
        return expectation(rho, Operator(rho.label, ab.entries));
    };
    return corr(s.a1, s.b1) + corr(s.a1, s.b2) + corr(s.a2, s.b1) - corr(s.a2, s.b2);
}

double chsh(const StateVector& state, const MeasurementSettings& s, Subspace sub) {
    if (state.label.factor_count() == 2 && state.label.dim() == 4)
        return chsh_value(density_from_pure(state), s);
    std::vector<int> keep = subspace_factors(state.label, sub);
    return chsh_value(partial_trace_state(state, keep), s);
}

double chsh_projected(const StateVector& state, ProjKind kind, const MeasurementSettings& s,
                      Subspace sub) {
    std::vector<int> fs = subspace_factors(state.label, sub);
    Operator proj = subspace_projector(kind);

    // The projector is entangled across the factor pair, so it cannot be
    // applied factor-by-factor; lift the 4x4 matrix to the full space instead.
    Vec v = state.amplitudes;
    const int nf = state.label.factor_count();
    Mat full = Mat::Ones(1, 1);
    int pos = 0;
    while (pos < nf) {
        if (pos == fs[0]) {
            if (fs[1] != fs[0] + 1)
                throw UnsupportedStateShape("chsh_projected: subspace factors must be adjacent");
            full = kron(full, proj.entries);
            pos += 2;
        } else {
            full = kron(full, Mat::Identity(state.label.factor(pos).dim,
                                            state.label.factor(pos).dim));
            pos += 1;
        }
    }
    v = full * v;
    double n = v.norm();
    if (n <= 1e-15) throw ZeroVector("chsh_projected: projection annihilates the state");
    StateVector projected(state.label, v / n);
    return chsh_value(partial_trace_state(projected, fs), s);
}

double chsh_optimal_bound(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw ParamOutOfRange("chsh_optimal_bound: alpha must lie in [0, 1]");
    const double ab2 = alpha * alpha * (1.0 - alpha * alpha);
    return 2.0 * std::sqrt(1.0 + 4.0 * ab2);
}

} // namespace mdof
