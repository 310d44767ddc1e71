#pragma once

#include <doctest.h>

#include "nslab/dynamics.hpp"
#include "nslab/spectral_ops.hpp"

namespace nslab::test {

/// Random divergence-free, drift-free field band limited to the dealiased
/// region, with a 1/(1+s) shell profile.
inline SpectralVelocityField random_field(const WaveGrid& grid, std::uint64_t seed,
                                          double rms = 0.3) {
    std::vector<double> shells(static_cast<std::size_t>(grid.dealias_limit()) + 1, 0.0);
    double total = 0.0;
    for (std::size_t s = 1; s < shells.size(); ++s) {
        shells[s] = 1.0 / (1.0 + static_cast<double>(s));
        total += shells[s];
    }
    const double volume = std::pow(grid.length, 3);
    for (std::size_t s = 1; s < shells.size(); ++s)
        shells[s] *= 0.5 * rms * rms * volume / total;
    return random_shell_field(grid, shells, seed);
}

inline double max_coeff_difference(const SpectralVelocityField& a,
                                   const SpectralVelocityField& b) {
    double err = 0.0;
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < a.coeffs[c].size(); ++i)
            err = std::max(err, std::abs(a.coeffs[c][i] - b.coeffs[c][i]));
    return err;
}

}  // namespace nslab::test
