#pragma once

#include <array>
#include <optional>
#include <vector>

#include "nslab/grid.hpp"

namespace nslab {

/// Divergence-free real-valued velocity field stored as truncated Fourier
/// coefficients, one complex table per component. Reality is maintained as
/// the invariant coeff(-k) == conj(coeff(k)).
struct SpectralVelocityField {
    WaveGrid grid;
    std::array<std::vector<cdouble>, 3> coeffs;
    std::optional<double> time_tag;

    SpectralVelocityField() = default;
    explicit SpectralVelocityField(const WaveGrid& g) : grid(g) {
        for (auto& c : coeffs) c.assign(g.size(), cdouble{0.0, 0.0});
    }

    cdouble& at(int comp, std::size_t idx) { return coeffs[comp][idx]; }
    const cdouble& at(int comp, std::size_t idx) const { return coeffs[comp][idx]; }
};

/// 3x3 tensor of spectral coefficient tables (velocity gradients and friends).
struct TensorFieldSample {
    WaveGrid grid;
    std::array<std::vector<cdouble>, 9> entries;

    TensorFieldSample() = default;
    explicit TensorFieldSample(const WaveGrid& g) : grid(g) {
        for (auto& e : entries) e.assign(g.size(), cdouble{0.0, 0.0});
    }

    std::vector<cdouble>& entry(int i, int j) { return entries[3 * i + j]; }
    const std::vector<cdouble>& entry(int i, int j) const { return entries[3 * i + j]; }
};

}  // namespace nslab
