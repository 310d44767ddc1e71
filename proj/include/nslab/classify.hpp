#pragma once

#include <string>
#include <vector>

#include "nslab/field.hpp"
#include "nslab/harmonics.hpp"

namespace nslab {

/// Default classifier tolerance; reported alongside labels so callers can
/// re-threshold.
inline constexpr double kClassifierTolerance = 1e-8;

enum class DataLabel { Smooth, Turbulent, StrictlyTurbulent };

std::string to_string(DataLabel label);

/// Per-(l, m) angular content in the real spherical-harmonic representation,
/// packed by lm_index. Real fields have conjugation-locked complex
/// coefficients; the real basis absorbs that symmetry, so every real table
/// is realizable by an actual velocity field.
///
/// For a spectral velocity field the complex content is the component-sum
/// angular spectrum of the band-limited field,
///   f_lm = i^l sum_{k != 0} (u_x + u_y + u_z)_k conj(Y_lm(khat)),
/// evaluated analytically from the plane-wave expansion (unit radial weight
/// per mode), then converted to the real basis.
struct AngularTable {
    int lmax = 0;
    std::vector<double> t;

    double at(int l, int m) const { return t[lm_index(l, m)]; }
    double& at(int l, int m) { return t[lm_index(l, m)]; }
};

AngularTable angular_table(const SpectralVelocityField& u, int lmax);

/// Angular table from an existing expansion: F coefficients summed over
/// radial nodes, converted to the real basis.
AngularTable angular_table(const HarmonicCoefficients& coeffs);

struct LevelDiagnostics {
    int l = 0;
    double norm = 0.0;            // ||v_l||
    double mean_component = 0.0;  // <e, v_l>, e uniform over m
    double alignment = 0.0;       // |<e, v_l>| / ||v_l||
    double residual = 0.0;        // ||v_l - <e,v_l> e|| / ||v_l||
};

struct Classification {
    DataLabel label = DataLabel::Turbulent;
    /// Energy fraction outside the double-mean direction; <= tol means smooth.
    double smooth_discriminant = 1.0;
    /// Energy fraction aligned with the per-l m-mean directions; <= tol means
    /// strictly turbulent.
    double strict_discriminant = 1.0;
    double tolerance = kClassifierTolerance;
    std::vector<LevelDiagnostics> levels;
};

/// Turbulent-data classifier: per l the projection onto the uniform unit
/// vector over m, then the projection of the l-profile onto the uniform unit
/// vector over retained l. Discriminants are energy weighted across levels so
/// levels with negligible content cannot flip the label.
Classification classify(const AngularTable& table, double tolerance = kClassifierTolerance);

Classification classify_initial_data(const SpectralVelocityField& u, int lmax,
                                     double tolerance = kClassifierTolerance);
Classification classify_initial_data(const HarmonicCoefficients& coeffs,
                                     double tolerance = kClassifierTolerance);

/// Builds a divergence-free, reality-symmetric, drift-free field whose
/// angular table matches the targets for l <= targets.lmax. Throws if the
/// deterministic mode set cannot realize the targets to near roundoff.
SpectralVelocityField synthesize_from_angular_targets(const WaveGrid& grid,
                                                      const AngularTable& targets,
                                                      double rms);

/// Target tables for the three constructible labels.
AngularTable smooth_targets(int lmax);
AngularTable strict_targets(int l_active, int lmax);
AngularTable mixed_targets(int lmax);

/// Construct a field carrying the given label (classifier-basis constructors).
SpectralVelocityField synthesize_labeled(const WaveGrid& grid, DataLabel label, int lmax,
                                         double rms = 0.1);

/// Largest construction lmax the deterministic mode set supports.
inline constexpr int kMaxConstructionLmax = 5;

}  // namespace nslab
