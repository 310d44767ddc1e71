#include "nslab/dissipation.hpp"

#include <algorithm>
#include <cmath>

#include "nslab/classify.hpp"
#include "nslab/spectral_ops.hpp"

namespace nslab {

DissipationReport dissipation_report(const TrajectorySample& sample, double nu,
                                     FourierWorkspace& ws, DealiasRule dealias) {
    if (!sample.du_dt) throw Error("dissipation report requires the stored du/dt sample");
    const auto& u = sample.u;
    DissipationReport rep;
    rep.t = sample.t;

    const auto adv = advective_term(u, ws, dealias);
    const auto wphys = to_physical(adv.field, ws);
    const double inv_count = 1.0 / static_cast<double>(u.grid.size());
    for (int i = 0; i < 3; ++i) {
        double sum = 0.0;
        for (double v : wphys[i]) sum += std::abs(v);
        rep.advective_component[i] = sum * inv_count;
    }

    for (int i = 0; i < 3; ++i) {
        // -<u_i d_t u_i> as a spectral sum (spatial average by Parseval).
        double sum = 0.0;
        const auto& a = u.coeffs[i];
        const auto& b = sample.du_dt->coeffs[i];
        for (std::size_t k = 0; k < a.size(); ++k)
            sum += a[k].real() * b[k].real() + a[k].imag() * b[k].imag();
        rep.temporal_component[i] = -sum;
    }

    rep.nu_t_nl = rep.advective_component[0] + rep.advective_component[1] +
                  rep.advective_component[2];
    rep.nu_t_temp = rep.temporal_component[0] + rep.temporal_component[1] +
                    rep.temporal_component[2];
    rep.nl_euclidean = std::sqrt(sq(rep.advective_component[0]) +
                                 sq(rep.advective_component[1]) +
                                 sq(rep.advective_component[2]));
    rep.temp_euclidean = std::sqrt(sq(rep.temporal_component[0]) +
                                   sq(rep.temporal_component[1]) +
                                   sq(rep.temporal_component[2]));
    rep.nu_t = rep.nu_t_nl + rep.nu_t_temp;
    rep.nu_tot = rep.nu_t + nu;
    rep.viscous_rate = nu * gradient_square_average(u);
    rep.energy = energy(u);
    rep.enstrophy = enstrophy(u);
    rep.div_residual = divergence_residual(u);
    return rep;
}

std::vector<DissipationReport> dissipation_series(const Trajectory& trajectory) {
    if (trajectory.samples.empty()) return {};
    FourierWorkspace ws(trajectory.samples.front().u.grid.n);
    std::vector<DissipationReport> out;
    out.reserve(trajectory.samples.size());
    for (const auto& s : trajectory.samples)
        out.push_back(
            dissipation_report(s, trajectory.config.nu, ws, trajectory.config.dealias));
    return out;
}

std::vector<double> energy_identity_residual(const Trajectory& trajectory, double nu) {
    std::vector<double> out;
    const double volume = std::pow(trajectory.config.length, 3);
    for (const auto& s : trajectory.samples) {
        if (!s.du_dt) throw Error("energy identity residual requires stored du/dt samples");
        const double pairing = h_inner(*s.du_dt, s.u);
        const double dissipation = nu * volume * gradient_square_average(s.u);
        const double norm2 = sq(h_norm(s.u));
        out.push_back(norm2 > 0.0 ? std::abs(pairing + dissipation) / norm2 : 0.0);
    }
    return out;
}

std::vector<double> discrete_energy_residual(std::span<const StepRecord> steps) {
    if (steps.size() < 3)
        throw Error("discrete energy residual needs at least three step records");
    std::vector<double> out;
    out.reserve(steps.size() - 2);
    for (std::size_t i = 1; i + 1 < steps.size(); ++i) {
        const double dt2 = steps[i + 1].t - steps[i - 1].t;
        const double dedt = (steps[i + 1].energy - steps[i - 1].energy) / dt2;
        const double resid = std::abs(dedt + steps[i].energy_dissipation);
        out.push_back(steps[i].energy > 0.0 ? resid / steps[i].energy : resid);
    }
    return out;
}

EntropySurrogate entropy_surrogate(const SpectralVelocityField& u, int lmax) {
    double field_norm = 0.0;
    for (int c = 0; c < 3; ++c)
        for (const auto& v : u.coeffs[c]) field_norm += std::norm(v);
    if (field_norm == 0.0) throw Error("entropy surrogate of the zero field");

    // Weight vector over the mean-vs-fluctuation decomposition of the angular
    // table: [double-mean component, l-profile residual, per-l m-residuals].
    auto weights_from = [&](const AngularTable& table) {
        std::vector<double> w;
        double q = 0.0;
        std::vector<double> p(table.lmax + 1, 0.0);
        double lres2 = 0.0;
        for (int l = 0; l <= table.lmax; ++l) {
            const double root = std::sqrt(2.0 * l + 1.0);
            double sum = 0.0;
            for (int m = -l; m <= l; ++m) sum += table.at(l, m);
            p[l] = sum / root;
            double res2 = 0.0;
            for (int m = -l; m <= l; ++m) res2 += sq(table.at(l, m) - p[l] / root);
            w.push_back(res2);  // m-residual energy
        }
        const double root_levels = std::sqrt(static_cast<double>(table.lmax + 1));
        for (int l = 0; l <= table.lmax; ++l) q += p[l];
        q /= root_levels;
        for (int l = 0; l <= table.lmax; ++l) lres2 += sq(p[l] - q / root_levels);
        w.insert(w.begin(), lres2);
        w.insert(w.begin(), q * q);
        return w;
    };

    std::vector<double> weights = weights_from(angular_table(u, lmax));
    double total = 0.0;
    for (double w : weights) total += w;
    if (total <= 0.0) {
        // Component-sum content can vanish identically (cancelling
        // polarizations); fall back to per-component tables.
        weights.clear();
        for (int c = 0; c < 3; ++c) {
            SpectralVelocityField comp(u.grid);
            comp.coeffs[c] = u.coeffs[c];
            double cnorm = 0.0;
            for (const auto& v : comp.coeffs[c]) cnorm += std::norm(v);
            if (cnorm == 0.0) continue;
            const auto w = weights_from(angular_table(comp, lmax));
            weights.insert(weights.end(), w.begin(), w.end());
        }
        total = 0.0;
        for (double w : weights) total += w;
        if (total <= 0.0) throw Error("entropy surrogate: no angular content");
    }

    EntropySurrogate out;
    out.mean_weight = weights.empty() ? 0.0 : weights[0] / total;
    for (double w : weights) {
        const double p = w / total;
        const double term = p > 0.0 ? -p * std::log(p) : 0.0;
        out.contributions.push_back(term);
        out.value += term;
    }
    return out;
}

RegularityLedger regularity_ledger(const Trajectory& trajectory) {
    RegularityLedger ledger;
    if (trajectory.samples.empty()) return ledger;
    const double nu_eff = trajectory.config.nu > 0.0 ? trajectory.config.nu : 1.0;
    FourierWorkspace ws(trajectory.samples.front().u.grid.n);
    for (const auto& s : trajectory.samples) {
        if (!s.du_dt) throw Error("regularity ledger requires stored du/dt samples");
        ledger.times.push_back(s.t);
        ledger.h_norm.push_back(h_norm(s.u));
        ledger.h1_norm.push_back(sobolev_norm(s.u, 1.0, nu_eff));
        ledger.dtu_dual_norm.push_back(sobolev_norm(*s.du_dt, -1.0, nu_eff));
        auto adv = advective_term(s.u, ws, trajectory.config.dealias).field;
        adv.coeffs[0][0] = adv.coeffs[1][0] = adv.coeffs[2][0] = cdouble{0.0, 0.0};
        ledger.advective_dual_norm.push_back(sobolev_norm(adv, -1.0, nu_eff));
    }
    auto l43 = [&](const std::vector<double>& series) {
        double integral = 0.0;
        for (std::size_t i = 1; i < series.size(); ++i)
            integral += 0.5 *
                        (std::pow(series[i - 1], 4.0 / 3.0) + std::pow(series[i], 4.0 / 3.0)) *
                        (ledger.times[i] - ledger.times[i - 1]);
        return std::pow(integral, 0.75);
    };
    ledger.dtu_l43_aggregate = l43(ledger.dtu_dual_norm);
    ledger.advective_l43_aggregate = l43(ledger.advective_dual_norm);
    return ledger;
}

double mixed_norm(const Trajectory& trajectory, double r, double s) {
    if (!(s >= 2.0 && s <= 6.0))
        throw Error("mixed norm requires 2 <= s <= 6; admissible pairs include "
                    "(r=inf,s=2), (r=8/3,s=4), (r=2,s=6)");
    const double line = (std::isinf(r) ? 0.0 : 2.0 / r) + 3.0 / s;
    if (std::abs(line - 1.5) > 1e-9)
        throw Error("(r, s) must satisfy 2/r + 3/s = 3/2; admissible pairs include "
                    "(r=inf,s=2), (r=8/3,s=4), (r=2,s=6)");
    if (trajectory.samples.empty()) throw Error("mixed norm needs stored samples");

    FourierWorkspace ws(trajectory.samples.front().u.grid.n);
    const auto& grid = trajectory.samples.front().u.grid;
    const double cell = std::pow(grid.spacing(), 3);

    std::vector<double> spatial;
    spatial.reserve(trajectory.samples.size());
    for (const auto& sample : trajectory.samples) {
        const auto phys = to_physical(sample.u, ws);
        double sum = 0.0;
        for (std::size_t i = 0; i < phys[0].size(); ++i) {
            const double mag =
                std::sqrt(sq(phys[0][i]) + sq(phys[1][i]) + sq(phys[2][i]));
            sum += std::pow(mag, s) * cell;
        }
        spatial.push_back(std::pow(sum, 1.0 / s));
    }

    if (std::isinf(r)) return *std::max_element(spatial.begin(), spatial.end());

    double integral = 0.0;
    for (std::size_t i = 1; i < spatial.size(); ++i)
        integral += 0.5 * (std::pow(spatial[i - 1], r) + std::pow(spatial[i], r)) *
                    (trajectory.samples[i].t - trajectory.samples[i - 1].t);
    return std::pow(integral, 1.0 / r);
}

}  // namespace nslab
