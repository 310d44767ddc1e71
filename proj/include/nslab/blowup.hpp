#pragma once

#include <optional>
#include <span>
#include <string>

#include "nslab/dynamics.hpp"

namespace nslab {

/// Least-squares fit of log E(k) = log C + alpha log k - 2 delta k over the
/// usable shell window (spectral peak to the last shell above the noise
/// floor, excluding the dealiasing-contaminated top sixth).
struct SpectrumFit {
    double delta = 0.0;       // analyticity half-width estimate
    double r2 = 0.0;          // fit quality
    double prefactor_log = 0.0;
    double power_exponent = 0.0;  // the alpha log k term
    int shells_used = 0;
    bool exponential = false;  // false flags a non-exponential tail (no delta)
    std::string flag;
};

SpectrumFit fit_spectral_decay(std::span<const double> shell_energy, double kappa_unit,
                               double noise_floor = 1e-28);

/// Shell spectrum of the field, then the decay fit. Requires >= 8 usable
/// shells above the noise floor.
SpectrumFit analyticity_strip_width(const SpectralVelocityField& u,
                                    double noise_floor = 1e-28);

/// Trapezoid-in-time integral of the collocation maximum of |omega|.
double bkm_integral(std::span<const double> times, std::span<const double> max_vorticity);
double bkm_integral(const Trajectory& trajectory);

struct DecayBounds {
    double nu_t_floor = 0.0;  // running minimum of nu_t
    double d_min = 0.0;       // minimum decrease rate, sign preserved
};

/// Needs at least 8 samples; the decrease rate D = -d nu_t/dt is estimated
/// by central differences.
DecayBounds decay_law_bounds(std::span<const double> times, std::span<const double> nu_t);

/// Intersection time of the sloping worst-case decay line with the
/// horizontal floor; none when the lines never meet (d_min <= 0).
std::optional<double> excluded_region_time(double nu_t_at_0, double nu_t_floor, double d_min);

struct BlowupSample {
    double t = 0.0;
    std::optional<double> delta;
    double r2 = 0.0;
    double bkm_partial = 0.0;
    double nu_t = 0.0;
    double nu_t_l1 = 0.0;  // l = 1 angular magnitude of the advective field
    double d_estimate = 0.0;
    double d_estimate_l1 = 0.0;
    std::string flags;
};

struct BlowupDiagnostics {
    std::vector<BlowupSample> series;
    double bkm_integral = 0.0;
    double nu_t_floor = 0.0;
    double d_min = 0.0;
    std::optional<double> t_star;
    bool t_star_extrapolated = false;
    std::vector<std::string> resolution_flags;
};

/// Full monitor over a stored trajectory: analyticity widths, BKM partials,
/// decay-law bounds and the excluded-region time.
BlowupDiagnostics blowup_diagnostics(const Trajectory& trajectory);

}  // namespace nslab
