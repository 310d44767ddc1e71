#include "nslab/blowup.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "nslab/classify.hpp"
#include "nslab/dissipation.hpp"
#include "nslab/spectral_ops.hpp"

namespace nslab {

SpectrumFit fit_spectral_decay(std::span<const double> shell_energy, double kappa_unit,
                               double noise_floor) {
    if (shell_energy.size() < 2) throw Error("spectrum has no shells to fit");

    // Usable window: spectral peak to the last shell above the floor,
    // excluding shell 0 and the top sixth (dealiasing contamination).
    const int smax = static_cast<int>(shell_energy.size()) - 1;
    const int top = smax - std::max(1, smax / 6);
    int peak = 1;
    for (int s = 1; s <= top; ++s)
        if (shell_energy[s] > shell_energy[peak]) peak = s;
    std::vector<int> shells;
    for (int s = peak; s <= top; ++s) {
        if (shell_energy[s] > noise_floor)
            shells.push_back(s);
        else
            break;
    }
    if (shells.size() < 8)
        throw Error("too few usable shells for a spectral-decay fit (" +
                    std::to_string(shells.size()) + " above the noise floor)");

    Eigen::MatrixXd a(shells.size(), 3);
    Eigen::VectorXd b(shells.size());
    for (std::size_t i = 0; i < shells.size(); ++i) {
        const double kappa = kappa_unit * shells[i];
        a(i, 0) = 1.0;
        a(i, 1) = std::log(kappa);
        a(i, 2) = kappa;
        b(i) = std::log(shell_energy[shells[i]]);
    }
    const Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
    const Eigen::VectorXd resid = b - a * x;
    const double mean = b.mean();
    double ss_tot = 0.0;
    for (int i = 0; i < b.size(); ++i) ss_tot += sq(b(i) - mean);

    SpectrumFit fit;
    fit.prefactor_log = x(0);
    fit.power_exponent = x(1);
    fit.delta = -0.5 * x(2);
    fit.shells_used = static_cast<int>(shells.size());
    fit.r2 = ss_tot > 0.0 ? 1.0 - resid.squaredNorm() / ss_tot : 1.0;
    if (fit.delta <= 0.0) {
        fit.exponential = false;
        fit.flag = "non-exponential";
    } else if (fit.r2 < 0.9) {
        fit.exponential = false;
        fit.flag = "poor-fit";
    } else {
        fit.exponential = true;
    }
    return fit;
}

SpectrumFit analyticity_strip_width(const SpectralVelocityField& u, double noise_floor) {
    const auto spectrum = shell_spectrum(u);
    bool decaying = false;
    int peak = 1;
    for (std::size_t s = 1; s < spectrum.size(); ++s)
        if (spectrum[s] > spectrum[peak]) peak = static_cast<int>(s);
    for (std::size_t s = peak; s + 1 < spectrum.size(); ++s)
        if (spectrum[s + 1] < spectrum[s]) decaying = true;
    if (!decaying) throw Error("spectrum is not decaying; no analyticity width to fit");
    return fit_spectral_decay(spectrum, u.grid.wavenumber_unit(), noise_floor);
}

double bkm_integral(std::span<const double> times, std::span<const double> max_vorticity) {
    if (times.size() != max_vorticity.size()) throw Error("BKM series length mismatch");
    double integral = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i)
        integral += 0.5 * (max_vorticity[i - 1] + max_vorticity[i]) * (times[i] - times[i - 1]);
    return integral;
}

double bkm_integral(const Trajectory& trajectory) {
    if (trajectory.samples.empty()) throw Error("BKM integral needs stored samples");
    FourierWorkspace ws(trajectory.samples.front().u.grid.n);
    std::vector<double> times, sup;
    for (const auto& s : trajectory.samples) {
        times.push_back(s.t);
        sup.push_back(max_vorticity(s.u, ws));
    }
    return bkm_integral(times, sup);
}

DecayBounds decay_law_bounds(std::span<const double> times, std::span<const double> nu_t) {
    if (times.size() != nu_t.size()) throw Error("decay-law series length mismatch");
    if (times.size() < 8) throw Error("decay-law bounds need at least 8 samples");
    DecayBounds out;
    out.nu_t_floor = *std::min_element(nu_t.begin(), nu_t.end());
    double d_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < times.size(); ++i) {
        const double rate = -(nu_t[i + 1] - nu_t[i - 1]) / (times[i + 1] - times[i - 1]);
        d_min = std::min(d_min, rate);
    }
    out.d_min = d_min;
    return out;
}

std::optional<double> excluded_region_time(double nu_t_at_0, double nu_t_floor, double d_min) {
    if (!(nu_t_at_0 > nu_t_floor))
        throw Error("degenerate excluded-region geometry: nu_t(0) must exceed the floor");
    if (d_min <= 0.0) return std::nullopt;  // parallel or diverging lines never intersect
    return (nu_t_at_0 - nu_t_floor) / d_min;
}

BlowupDiagnostics blowup_diagnostics(const Trajectory& trajectory) {
    if (trajectory.samples.empty()) throw Error("blowup diagnostics need stored samples");
    const auto& grid = trajectory.samples.front().u.grid;
    FourierWorkspace ws(grid.n);

    BlowupDiagnostics diag;
    std::vector<double> times, sup_vorticity, nu_t_series, nu_t_l1_series;
    for (const auto& s : trajectory.samples) {
        times.push_back(s.t);
        sup_vorticity.push_back(max_vorticity(s.u, ws));
        const auto rep =
            dissipation_report(s, trajectory.config.nu, ws, trajectory.config.dealias);
        nu_t_series.push_back(rep.nu_t);
        const auto adv = advective_term(s.u, ws, trajectory.config.dealias);
        const auto table = angular_table(adv.field, 1);
        double l1 = 0.0;
        for (int m = -1; m <= 1; ++m) l1 += sq(table.at(1, m));
        nu_t_l1_series.push_back(std::sqrt(l1));
    }

    // The spectral cutoff length scale: widths below it flag under-resolution.
    const double cutoff_scale =
        1.0 / (grid.wavenumber_unit() * std::max(1, grid.dealias_limit()));

    double bkm_partial = 0.0;
    double last_resolved_time = -1.0;
    for (std::size_t i = 0; i < trajectory.samples.size(); ++i) {
        BlowupSample bs;
        bs.t = times[i];
        if (i > 0)
            bkm_partial += 0.5 * (sup_vorticity[i - 1] + sup_vorticity[i]) *
                           (times[i] - times[i - 1]);
        bs.bkm_partial = bkm_partial;
        bs.nu_t = nu_t_series[i];
        bs.nu_t_l1 = nu_t_l1_series[i];
        try {
            const auto fit = analyticity_strip_width(trajectory.samples[i].u);
            bs.r2 = fit.r2;
            if (fit.exponential) {
                bs.delta = fit.delta;
                if (fit.delta > cutoff_scale)
                    last_resolved_time = times[i];
                else {
                    bs.flags = "under-resolved";
                    diag.resolution_flags.push_back("t=" + std::to_string(times[i]) +
                                                    ": width below grid cutoff scale");
                }
            } else {
                bs.flags = fit.flag;
            }
        } catch (const Error&) {
            bs.flags = "no-fit";
        }
        if (i > 0 && i + 1 < times.size()) {
            bs.d_estimate =
                -(nu_t_series[i + 1] - nu_t_series[i - 1]) / (times[i + 1] - times[i - 1]);
            bs.d_estimate_l1 =
                -(nu_t_l1_series[i + 1] - nu_t_l1_series[i - 1]) / (times[i + 1] - times[i - 1]);
        }
        diag.series.push_back(std::move(bs));
    }
    diag.bkm_integral = bkm_partial;

    if (times.size() >= 8) {
        const auto bounds = decay_law_bounds(times, nu_t_series);
        diag.nu_t_floor = bounds.nu_t_floor;
        diag.d_min = bounds.d_min;
        if (nu_t_series.front() > bounds.nu_t_floor) {
            diag.t_star = excluded_region_time(nu_t_series.front(), bounds.nu_t_floor,
                                               bounds.d_min);
            if (diag.t_star && last_resolved_time >= 0.0 && *diag.t_star < last_resolved_time)
                diag.t_star_extrapolated = true;
        }
    } else {
        diag.nu_t_floor = *std::min_element(nu_t_series.begin(), nu_t_series.end());
        diag.d_min = 0.0;
    }
    return diag;
}

}  // namespace nslab
