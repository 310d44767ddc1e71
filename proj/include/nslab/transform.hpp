#pragma once

#include <memory>
#include <span>
#include <vector>

#include "nslab/field.hpp"

namespace nslab {

/// Complex-to-complex 3D FFT workspace for one grid size. Forward divides
/// by N^3 so the zero mode equals the spatial mean; inverse is unscaled.
/// Plans use FFTW_ESTIMATE so results are reproducible run to run.
/// One workspace per thread; plan creation is internally serialized.
class FourierWorkspace {
  public:
    explicit FourierWorkspace(int n);
    ~FourierWorkspace();

    FourierWorkspace(const FourierWorkspace&) = delete;
    FourierWorkspace& operator=(const FourierWorkspace&) = delete;

    int size() const { return n_; }

    /// Physical samples (N^3, row-major) -> coefficient table.
    void forward(std::span<const cdouble> physical, std::span<cdouble> coefficients);

    /// Coefficient table -> physical samples.
    void inverse(std::span<const cdouble> coefficients, std::span<cdouble> physical);

  private:
    int n_;
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Physical-space view of a velocity field (real parts of the inverse
/// transform; imaginary residue of a reality-symmetric field is roundoff).
std::array<std::vector<double>, 3> to_physical(const SpectralVelocityField& u,
                                               FourierWorkspace& ws);

/// Builds a field from three physical component sample arrays.
SpectralVelocityField from_physical(const WaveGrid& grid,
                                    const std::array<std::vector<double>, 3>& samples,
                                    FourierWorkspace& ws);

}  // namespace nslab
