#include "mdof/fiber.hpp"

#include "mdof/states.hpp"

#include <cmath>
#include <limits>

namespace mdof {

void FiberParams::validate() const {
    if (!(lambda_photon > 0.0)) throw NonPositiveInput("FiberParams: wavelength must be positive");
    if (!(loss_db_per_km >= 0.0)) throw ParamOutOfRange("FiberParams: loss must be non-negative");
    if (!(n_minus() > 1.0)) throw ParamOutOfRange("FiberParams: effective indices must exceed 1");
}

double beta(double n_eff, double lambda_m) {
    if (!(n_eff > 0.0) || !(lambda_m > 0.0))
        throw NonPositiveInput("beta: n_eff and lambda must be positive");
    return 2.0 * M_PI * n_eff / lambda_m;
}

PropagationResult propagate(const StateVector& s, double z_km, const FiberParams& fp) {
    fp.validate();
    if (z_km < 0.0) throw ParamOutOfRange("propagate: z must be non-negative");

    const std::vector<int> oam = s.label.factors_of(Dof::oam);
    if (oam.empty()) throw UnsupportedStateShape("propagate: state carries no OAM factors");
    for (int f : oam)
        if (s.label.factor(f).dim != 2)
            throw UnsupportedStateShape("propagate: OAM factors must be two-level");

    // factor strides for digit extraction
    std::vector<int> strides(static_cast<size_t>(s.label.factor_count()), 1);
    for (int i = s.label.factor_count() - 2; i >= 0; --i)
        strides[static_cast<size_t>(i)] =
            strides[static_cast<size_t>(i + 1)] * s.label.factor(i + 1).dim;

    const double z_m = z_km * 1000.0;
    const double phase_scale = fp.per_photon_phase ? 2.0 : 1.0;
    const Cx ph_plus = std::exp(Cx(0, phase_scale * beta(fp.n_plus(), fp.lambda_photon) * z_m +
                                       fp.theta1));
    const Cx ph_minus = std::exp(Cx(0, phase_scale * beta(fp.n_minus(), fp.lambda_photon) * z_m +
                                        fp.phi1));

    Vec out = s.amplitudes;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        if (out(i) == Cx(0.0)) continue;
        int zeros = 0, ones = 0;
        for (int f : oam) {
            int digit = (static_cast<int>(i) / strides[static_cast<size_t>(f)]) % 2;
            (digit == 0 ? zeros : ones)++;
        }
        if (zeros == static_cast<int>(oam.size()))
            out(i) *= ph_plus;
        else if (ones == static_cast<int>(oam.size()))
            out(i) *= ph_minus;
        else
            throw UnsupportedStateShape(
                "propagate: amplitude with mixed OAM signs has no branch phase");
    }

    PropagationResult res;
    res.state = StateVector(s.label, std::move(out));
    res.survival_probability = std::pow(10.0, -fp.loss_db_per_km * z_km / 10.0);
    Cx overlap = s.amplitudes.adjoint() * res.state.amplitudes;
    res.fidelity_vs_input = std::norm(overlap);
    return res;
}

std::vector<FiberSweepRow> fidelity_vs_distance_sweep(double alpha, const FiberParams& fp,
                                                      double z_max_km, double dz_km) {
    if (!(dz_km > 0.0)) throw ParamOutOfRange("fidelity_vs_distance_sweep: dz must be positive");
    StateVector s = add_frequency_dof(hybrid_state(alpha, 1));
    std::vector<FiberSweepRow> rows;
    const int n = static_cast<int>(std::floor(z_max_km / dz_km + 0.5)) + 1;
    rows.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double z = i * dz_km;
        PropagationResult r = propagate(s, z, fp);
        rows.push_back({z, r.fidelity_vs_input, r.survival_probability});
    }
    return rows;
}

double analytic_period_km(const FiberParams& fp) {
    // beta(n+) - beta(n-) written directly to avoid cancellation
    const double dbeta = 2.0 * M_PI * fp.delta_n / fp.lambda_photon;
    if (dbeta <= 0.0) return std::numeric_limits<double>::infinity();
    const double scale = fp.per_photon_phase ? 2.0 : 1.0;
    return 2.0 * M_PI / (scale * dbeta) / 1000.0;
}

int autocorrelation_period_steps(const std::vector<double>& series) {
    const int n = static_cast<int>(series.size());
    if (n < 4) return 0;
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= n;

    // unbiased estimate: dividing by the overlap removes the window taper that
    // would otherwise drag the peak toward smaller lags
    auto corr = [&](int lag) {
        double num = 0.0;
        for (int i = 0; i + lag < n; ++i) num += (series[i] - mean) * (series[i + lag] - mean);
        return num / (n - lag);
    };
    const double c0 = corr(0);
    if (c0 <= 0.0) return 0;

    // skip the lag-0 lobe, then take the peak of the first positive lobe
    // (the global maximum can drift to a higher harmonic when the window
    // holds a non-integer number of periods)
    int lag = 1;
    while (lag <= n / 2 && corr(lag) > 0.0) ++lag;
    while (lag <= n / 2 && corr(lag) <= 0.0) ++lag;
    if (lag > n / 2) return 0;
    int best = lag;
    double best_val = corr(lag);
    for (; lag <= n / 2 && corr(lag) > 0.0; ++lag) {
        const double r = corr(lag);
        if (r > best_val) {
            best_val = r;
            best = lag;
        }
    }
    return best;
}

double favorable_fraction(double alpha, const FiberParams& fp, double threshold,
                          int samples_per_period) {
    const double period = analytic_period_km(fp);
    if (!std::isfinite(period))
        throw ParamOutOfRange("favorable_fraction: delta_n must be positive");
    StateVector s = add_frequency_dof(hybrid_state(alpha, 1));
    int above = 0;
    for (int i = 0; i < samples_per_period; ++i) {
        const double z = period * i / samples_per_period;
        if (propagate(s, z, fp).fidelity_vs_input > threshold) ++above;
    }
    return static_cast<double>(above) / samples_per_period;
}

} // namespace mdof
