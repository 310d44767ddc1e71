#pragma once

#include <vector>

#include "nslab/field.hpp"

namespace nslab {

/// Clamped cubic spline with compact support: zero value and zero slope at
/// both end knots, identically zero outside them. C^1 across the support
/// boundary; evaluated with its exact piecewise-cubic derivative.
class CompactSpline {
  public:
    CompactSpline() = default;

    /// knots strictly increasing; values at the first and last knot must be 0.
    CompactSpline(std::vector<double> knots, std::vector<double> values);

    double operator()(double t) const;
    double derivative(double t) const;

    double support_begin() const { return knots_.empty() ? 0.0 : knots_.front(); }
    double support_end() const { return knots_.empty() ? 0.0 : knots_.back(); }

  private:
    std::vector<double> knots_;
    std::vector<double> values_;
    std::vector<double> slopes_;  // Hermite slopes, clamped to 0 at the ends
    int segment(double t) const;
};

/// One term of a cutoff function: a Stokes eigenfunction on the torus (a
/// Fourier mode pair with a divergence-free polarization) times a compactly
/// supported C^1 time profile.
struct CutoffTerm {
    Int3 wavevector{};
    std::array<cdouble, 3> polarization{};  // orthogonal to the wavevector
    CompactSpline profile;
};

/// Finite sum of cutoff terms phi(x, t) = sum_k alpha_k(t) a_k(x).
class CutoffFunction {
  public:
    CutoffFunction() = default;
    explicit CutoffFunction(std::vector<CutoffTerm> terms);

    const std::vector<CutoffTerm>& terms() const { return terms_; }

    /// phi(., t) as a spectral field on the given grid.
    SpectralVelocityField field_at(double t, const WaveGrid& grid) const;

    /// d phi / d t (., t), using the exact spline derivatives.
    SpectralVelocityField time_derivative_at(double t, const WaveGrid& grid) const;

  private:
    std::vector<CutoffTerm> terms_;
};

}  // namespace nslab
