#include "mdof/noise.hpp"

#include "mdof/states.hpp"

#include <cmath>
#include <string>

namespace mdof {

ApdParams::ApdParams(double d, double s) : gamma_d(d), gamma_s(s) {
    if (!(gamma_d >= 0.0 && gamma_d <= 1.0) || !(gamma_s >= 0.0 && gamma_s <= 1.0))
        throw ParamOutOfRange("ApdParams: gamma_d and gamma_s must lie in [0, 1]");
}

TimeParams::TimeParams(double T1_, double T2_, double t_) : T1(T1_), T2(T2_), t(t_) {
    if (!(T1 > 0.0) || !(T2 > 0.0)) throw ParamOutOfRange("TimeParams: T1, T2 must be positive");
    if (!(t >= 0.0)) throw ParamOutOfRange("TimeParams: t must be non-negative");
}

double KrausSet::completeness_residual() const {
    Mat sum = Mat::Zero(dim, dim);
    for (const auto& e : operators) sum += e.adjoint() * e;
    return (sum - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

double gamma_of_time(double t, double T) {
    if (!(T > 0.0)) throw ParamOutOfRange("gamma_of_time: T must be positive");
    if (!(t >= 0.0)) throw ParamOutOfRange("gamma_of_time: t must be non-negative");
    return 1.0 - std::exp(-t / T);
}

ApdParams apd_params_at(const TimeParams& tp) {
    return ApdParams(gamma_of_time(tp.t, tp.T1), gamma_of_time(tp.t, tp.T2));
}

KrausSet apd_kraus(const ApdParams& p) {
    const double gd = p.gamma_d, gs = p.gamma_s;
    Mat e0 = Mat::Zero(2, 2), e1 = Mat::Zero(2, 2), e2 = Mat::Zero(2, 2);
    e0(0, 0) = 1.0;
    e0(1, 1) = std::sqrt(std::max(0.0, 1.0 - gd - (1.0 - gd) * gs));
    e1(0, 1) = std::sqrt(gd);
    e2(1, 1) = std::sqrt((1.0 - gd) * gs);
    return KrausSet{2, {std::move(e0), std::move(e1), std::move(e2)}};
}

KrausSet qudit_apd_kraus(int d, const ApdParams& p) {
    if (d < 2) throw ParamOutOfRange("qudit_apd_kraus: dimension must be >= 2");
    const double gd = p.gamma_d, gs = p.gamma_s;

    KrausSet ks;
    ks.dim = d;

    // survival amplitudes: level k keeps sqrt((1-gd)^k (1-gs)^k)
    Mat e0 = Mat::Zero(d, d);
    for (int k = 0; k < d; ++k)
        e0(k, k) = std::sqrt(std::pow(1.0 - gd, k) * std::pow(1.0 - gs, k));
    ks.operators.push_back(std::move(e0));

    for (int k = 1; k < d; ++k) {
        const double decay = 1.0 - std::pow(1.0 - gd, k);
        Mat e = Mat::Zero(d, d);
        e(k - 1, k) = std::sqrt(decay);
        ks.operators.push_back(std::move(e));
    }
    for (int k = 1; k < d; ++k) {
        const double dephase = std::pow(1.0 - gd, k) * (1.0 - std::pow(1.0 - gs, k));
        Mat e = Mat::Zero(d, d);
        e(k, k) = std::sqrt(dephase);
        ks.operators.push_back(std::move(e));
    }
    return ks;
}

KrausSet identity_kraus(int dim) {
    return KrausSet{dim, {Mat::Identity(dim, dim)}};
}

KrausSet lift_to_signed(const KrausSet& ks) {
    KrausSet out;
    out.dim = 2 * ks.dim;
    for (const auto& e : ks.operators) {
        Mat m = Mat::Zero(out.dim, out.dim);
        m.topLeftCorner(ks.dim, ks.dim) = e;
        m.bottomRightCorner(ks.dim, ks.dim) = e;
        out.operators.push_back(std::move(m));
    }
    return out;
}

DensityMatrix apply_channel_two_photon(const DensityMatrix& rho, const KrausSet& ks) {
    if (rho.label.factor_count() != 2)
        throw DimensionMismatch("apply_channel_two_photon: state must have two factors");
    for (int i = 0; i < 2; ++i)
        if (rho.label.factor(i).dim != ks.dim)
            throw DimensionMismatch("apply_channel_two_photon: factor/Kraus dimension mismatch");

    Mat out = Mat::Zero(rho.entries.rows(), rho.entries.cols());
    for (const auto& em : ks.operators)
        for (const auto& en : ks.operators) {
            Mat k = kron(em, en);
            out += k * rho.entries * k.adjoint();
        }
    DensityMatrix dm(rho.label, std::move(out));
    dm.sub_normalized = rho.sub_normalized;
    return dm;
}

DensityMatrix apply_channel_per_qubit(const DensityMatrix& rho, const KrausSet& ks,
                                      const std::vector<int>& targets) {
    std::vector<bool> seen(static_cast<size_t>(rho.label.factor_count()), false);
    for (int q : targets) {
        if (q < 0 || q >= rho.label.factor_count())
            throw IndexOutOfRange("apply_channel_per_qubit: target " + std::to_string(q));
        if (seen[static_cast<size_t>(q)])
            throw DuplicateTarget("apply_channel_per_qubit: duplicate target " +
                                  std::to_string(q));
        seen[static_cast<size_t>(q)] = true;
        if (rho.label.factor(q).dim != ks.dim)
            throw DimensionMismatch("apply_channel_per_qubit: factor/Kraus dimension mismatch");
    }

    Mat cur = rho.entries;
    for (int q : targets) {
        Mat next = Mat::Zero(cur.rows(), cur.cols());
        for (const auto& e : ks.operators) {
            // E rho E^dag on one factor: left-multiply, then the adjoint trick
            // for the right side.
            Mat left = apply_factor_left(e, cur, rho.label, q);
            next += apply_factor_left(e, left.adjoint(), rho.label, q).adjoint();
        }
        cur = std::move(next);
    }
    DensityMatrix dm(rho.label, std::move(cur));
    dm.sub_normalized = rho.sub_normalized;
    return dm;
}

namespace {

std::vector<int> index_digits(int index, const HilbertLabel& label) {
    std::vector<int> digits(static_cast<size_t>(label.factor_count()));
    for (int f = label.factor_count() - 1; f >= 0; --f) {
        const int d = label.factor(f).dim;
        digits[static_cast<size_t>(f)] = index % d;
        index /= d;
    }
    return digits;
}

} // namespace

double channel_fidelity_pure(const StateVector& psi, const std::vector<FactorChannel>& channels) {
    std::vector<bool> seen(static_cast<size_t>(psi.label.factor_count()), false);
    for (const auto& ch : channels) {
        if (ch.factor < 0 || ch.factor >= psi.label.factor_count())
            throw IndexOutOfRange("channel_fidelity_pure: factor index");
        if (seen[static_cast<size_t>(ch.factor)])
            throw DuplicateTarget("channel_fidelity_pure: duplicate factor " +
                                  std::to_string(ch.factor));
        seen[static_cast<size_t>(ch.factor)] = true;
        if (psi.label.factor(ch.factor).dim != ch.kraus->dim)
            throw DimensionMismatch("channel_fidelity_pure: factor/Kraus dimension mismatch");
    }

    struct SupportEntry {
        Cx amp;
        std::vector<int> digits;
    };
    std::vector<SupportEntry> support;
    for (Eigen::Index i = 0; i < psi.amplitudes.size(); ++i)
        if (psi.amplitudes(i) != Cx(0.0))
            support.push_back({psi.amplitudes(i), index_digits(static_cast<int>(i), psi.label)});

    // Matrix element of the composite Kraus operator between two support kets;
    // unlisted factors act as identity.
    auto composite_element = [&](const std::vector<int>& choice, const SupportEntry& bra,
                                 const SupportEntry& ket) {
        for (size_t f = 0; f < bra.digits.size(); ++f) {
            bool channelled = false;
            for (const auto& ch : channels)
                if (ch.factor == static_cast<int>(f)) { channelled = true; break; }
            if (!channelled && bra.digits[f] != ket.digits[f]) return Cx(0.0);
        }
        Cx val = 1.0;
        for (size_t c = 0; c < channels.size(); ++c) {
            const auto& ch = channels[c];
            const Mat& e = ch.kraus->operators[static_cast<size_t>(choice[c])];
            val *= e(bra.digits[static_cast<size_t>(ch.factor)],
                     ket.digits[static_cast<size_t>(ch.factor)]);
            if (val == Cx(0.0)) return val;
        }
        return val;
    };

    std::vector<int> choice(channels.size(), 0);
    double total = 0.0;
    while (true) {
        Cx overlap = 0.0;  // <psi|K|psi>
        for (const auto& ket : support)
            for (const auto& bra : support)
                overlap += std::conj(bra.amp) * composite_element(choice, bra, ket) * ket.amp;
        total += std::norm(overlap);

        // next mixed-radix choice
        size_t pos = 0;
        while (pos < choice.size()) {
            if (++choice[pos] < static_cast<int>(channels[pos].kraus->operators.size())) break;
            choice[pos] = 0;
            ++pos;
        }
        if (pos == choice.size()) break;
    }
    return total;
}

StateVector system_state(const SystemSpec& sys, double alpha) {
    switch (sys.kind) {
        case SystemKind::qubits4: return hybrid_state(alpha, 1);
        case SystemKind::qubits6: return add_frequency_dof(hybrid_state(alpha, 1));
        case SystemKind::oam: break;
    }
    if (sys.l < 2) throw ParamOutOfRange("system_state: ladder depth must be >= 2");
    const int d = sys.l;
    const int od = 2 * d;  // sign x level
    HilbertLabel label = HilbertLabel::qubits(Dof::polarization, 2)
                             .concat(HilbertLabel({Factor{Dof::oam, od}, Factor{Dof::oam, od}}));
    Vec amps = Vec::Zero(label.dim());
    const double beta = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
    const int top_plus = d - 1;       // (+ sector, top level)
    const int top_minus = 2 * d - 1;  // (- sector, top level)
    auto idx = [&](int p1, int p2, int o1, int o2) {
        return ((p1 * 2 + p2) * od + o1) * od + o2;
    };
    amps(idx(0, 0, top_plus, top_plus)) = alpha;
    amps(idx(1, 1, top_minus, top_minus)) = beta;
    return normalize(StateVector(std::move(label), std::move(amps)));
}

double system_fidelity(const SystemSpec& sys, double alpha, double t, const TimeParams& base,
                       const QuditScales& scales) {
    StateVector psi = system_state(sys, alpha);
    if (sys.kind == SystemKind::qubits4 || sys.kind == SystemKind::qubits6) {
        KrausSet ks = apd_kraus(apd_params_at(TimeParams(base.T1, base.T2, t)));
        std::vector<FactorChannel> channels;
        for (int f = 0; f < psi.label.factor_count(); ++f) channels.push_back({f, &ks});
        return channel_fidelity_pure(psi, channels);
    }

    // Polarization factor saturates at gamma_inf; the charge ladders relax
    // exponentially on T_cascade.
    const double gp =
        std::clamp(scales.gamma_inf * (1.0 - std::exp(-t / scales.tau)), 0.0, 1.0);
    const double gc = gamma_of_time(t, scales.T_cascade);
    KrausSet pol = apd_kraus(ApdParams(gp, gp));
    KrausSet ladder = lift_to_signed(qudit_apd_kraus(sys.l, ApdParams(gc, gc)));
    std::vector<FactorChannel> channels{{0, &pol}, {1, &pol}, {2, &ladder}, {3, &ladder}};
    return channel_fidelity_pure(psi, channels);
}

double fidelity_improvement_ratio(double alpha_hi, double alpha_lo, double t,
                                  const SystemSpec& sys, const TimeParams& base,
                                  const QuditScales& scales) {
    const double f_lo = system_fidelity(sys, alpha_lo, t, base, scales);
    const double f_hi = system_fidelity(sys, alpha_hi, t, base, scales);
    if (f_lo <= 0.0) throw ParamOutOfRange("fidelity_improvement_ratio: zero reference fidelity");
    return 100.0 * (f_hi - f_lo) / f_lo;
}

} // namespace mdof
