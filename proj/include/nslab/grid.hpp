#pragma once

#include <cstddef>

#include "nslab/common.hpp"

namespace nslab {

/// Truncated Fourier grid on the periodic cube: N modes per dimension,
/// period L, integer wavevectors k with -N/2 < k_i <= N/2 stored in FFT
/// index order. The Nyquist plane k_i = N/2 is kept in storage but forced
/// to zero by all field constructors so conjugate symmetry stays closed.
struct WaveGrid {
    int n = 0;
    double length = kTwoPi;

    std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }

    /// Storage index a in [0, n) -> signed integer wavenumber.
    int signed_index(int a) const { return a <= n / 2 ? a : a - n; }

    /// Physical wavevector component 2*pi*k/L for storage index a.
    double wavenumber(int a) const { return kTwoPi / length * signed_index(a); }

    double wavenumber_unit() const { return kTwoPi / length; }

    /// Grid spacing of the collocation grid.
    double spacing() const { return length / n; }

    std::size_t index(int a0, int a1, int a2) const {
        return (static_cast<std::size_t>(a0) * n + a1) * n + a2;
    }

    /// Storage index of the conjugate mode -k.
    std::size_t conjugate_index(int a0, int a1, int a2) const {
        auto neg = [this](int a) { return a == 0 ? 0 : n - a; };
        return index(neg(a0), neg(a1), neg(a2));
    }

    bool is_nyquist(int a0, int a1, int a2) const {
        return a0 == n / 2 || a1 == n / 2 || a2 == n / 2;
    }

    /// Per-dimension cutoff of the two-thirds dealiasing rule. Strictly
    /// 3*kmax < N: at 3*kmax = N the alias of a doubled edge mode lands
    /// exactly on -kmax and contaminates the retained band.
    int dealias_limit() const { return (n - 1) / 3; }

    bool operator==(const WaveGrid&) const = default;
};

/// Validates and builds a WaveGrid. N must be even and >= 4, L positive.
WaveGrid make_grid(int n, double length = kTwoPi);

}  // namespace nslab
