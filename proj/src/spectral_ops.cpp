#include "nslab/spectral_ops.hpp"

#include <algorithm>
#include <cmath>

namespace nslab {

namespace {

template <typename Fn>
void for_each_mode(const WaveGrid& g, Fn&& fn) {
    for (int a0 = 0; a0 < g.n; ++a0) {
        const double k0 = g.wavenumber(a0);
        for (int a1 = 0; a1 < g.n; ++a1) {
            const double k1 = g.wavenumber(a1);
            std::size_t idx = g.index(a0, a1, 0);
            for (int a2 = 0; a2 < g.n; ++a2, ++idx) {
                fn(idx, k0, k1, g.wavenumber(a2));
            }
        }
    }
}

}  // namespace

SpectralVelocityField leray_project(const SpectralVelocityField& f) {
    SpectralVelocityField out = f;
    for_each_mode(f.grid, [&](std::size_t idx, double k0, double k1, double k2) {
        const double k2sum = k0 * k0 + k1 * k1 + k2 * k2;
        if (k2sum == 0.0) return;
        const cdouble dot = k0 * out.coeffs[0][idx] + k1 * out.coeffs[1][idx] +
                            k2 * out.coeffs[2][idx];
        const cdouble factor = dot / k2sum;
        out.coeffs[0][idx] -= k0 * factor;
        out.coeffs[1][idx] -= k1 * factor;
        out.coeffs[2][idx] -= k2 * factor;
    });
    return out;
}

namespace {

// Negative powers are undefined on the zero mode; drift at roundoff level
// (relative to the largest coefficient) is treated as absent.
bool has_drift(const SpectralVelocityField& u) {
    double zero_mode = 0.0, scale = 0.0;
    for (int c = 0; c < 3; ++c) {
        zero_mode = std::max(zero_mode, std::abs(u.coeffs[c][0]));
        for (const auto& v : u.coeffs[c]) scale = std::max(scale, std::abs(v));
    }
    return zero_mode > 1e-12 * scale;
}

}  // namespace

SpectralVelocityField stokes_apply(const SpectralVelocityField& u, double s, double nu) {
    if (s < 0.0 && has_drift(u))
        throw Error("zero mode not invertible: negative Stokes power on a field with drift");
    SpectralVelocityField out = u;
    if (s == 0.0) return out;
    for_each_mode(u.grid, [&](std::size_t idx, double k0, double k1, double k2) {
        const double k2sum = k0 * k0 + k1 * k1 + k2 * k2;
        const double factor = k2sum == 0.0 ? 0.0 : std::pow(nu * k2sum, s);
        for (int c = 0; c < 3; ++c) out.coeffs[c][idx] *= factor;
    });
    return out;
}

double sobolev_norm(const SpectralVelocityField& u, double s, double nu) {
    if (s < 0.0 && has_drift(u))
        throw Error("zero mode not invertible: negative Sobolev index on a field with drift");
    double sum = 0.0;
    for_each_mode(u.grid, [&](std::size_t idx, double k0, double k1, double k2) {
        const double k2sum = k0 * k0 + k1 * k1 + k2 * k2;
        double weight;
        if (s == 0.0) weight = 1.0;
        else if (k2sum == 0.0) weight = 0.0;
        else weight = std::pow(nu * k2sum, s);
        const double mag2 = std::norm(u.coeffs[0][idx]) + std::norm(u.coeffs[1][idx]) +
                            std::norm(u.coeffs[2][idx]);
        sum += weight * mag2;
    });
    const double volume = u.grid.length * u.grid.length * u.grid.length;
    return std::sqrt(volume * sum);
}

SpectralVelocityField remove_drift(const SpectralVelocityField& u) {
    SpectralVelocityField out = u;
    for (int c = 0; c < 3; ++c) out.coeffs[c][0] = cdouble{0.0, 0.0};
    return out;
}

FieldGradients field_gradients(const SpectralVelocityField& u) {
    FieldGradients g{TensorFieldSample(u.grid), TensorFieldSample(u.grid),
                     SpectralVelocityField(u.grid), TensorFieldSample(u.grid)};
    g.vorticity.time_tag = u.time_tag;
    for_each_mode(u.grid, [&](std::size_t idx, double k0, double k1, double k2) {
        const Vec3 k{k0, k1, k2};
        const cdouble iunit{0.0, 1.0};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                g.stress_rate.entry(i, j)[idx] = iunit * k[j] * u.coeffs[i][idx];
        // omega = i k x u
        g.vorticity.coeffs[0][idx] = iunit * (k[1] * u.coeffs[2][idx] - k[2] * u.coeffs[1][idx]);
        g.vorticity.coeffs[1][idx] = iunit * (k[2] * u.coeffs[0][idx] - k[0] * u.coeffs[2][idx]);
        g.vorticity.coeffs[2][idx] = iunit * (k[0] * u.coeffs[1][idx] - k[1] * u.coeffs[0][idx]);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                g.vorticity_gradient.entry(i, j)[idx] = iunit * k[j] * g.vorticity.coeffs[i][idx];
    });
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            auto& sym = g.strain.entry(i, j);
            const auto& a = g.stress_rate.entry(i, j);
            const auto& b = g.stress_rate.entry(j, i);
            for (std::size_t idx = 0; idx < sym.size(); ++idx)
                sym[idx] = 0.5 * (a[idx] + b[idx]);
        }
    return g;
}

double divergence_residual(const SpectralVelocityField& u) {
    double max_div = 0.0;
    double grad_scale2 = 0.0;
    for_each_mode(u.grid, [&](std::size_t idx, double k0, double k1, double k2) {
        const cdouble dot = k0 * u.coeffs[0][idx] + k1 * u.coeffs[1][idx] +
                            k2 * u.coeffs[2][idx];
        max_div = std::max(max_div, std::abs(dot));
        const double k2sum = k0 * k0 + k1 * k1 + k2 * k2;
        grad_scale2 += k2sum * (std::norm(u.coeffs[0][idx]) + std::norm(u.coeffs[1][idx]) +
                                std::norm(u.coeffs[2][idx]));
    });
    const double scale = std::sqrt(grad_scale2);
    return scale == 0.0 ? 0.0 : max_div / scale;
}

double mean_velocity_magnitude(const SpectralVelocityField& u) {
    double m = 0.0;
    for (int c = 0; c < 3; ++c) m = std::max(m, std::abs(u.coeffs[c][0]));
    return m;
}

double h_inner(const SpectralVelocityField& u, const SpectralVelocityField& v) {
    if (u.grid != v.grid) throw Error("inner product of fields on different grids");
    double sum = 0.0;
    for (int c = 0; c < 3; ++c) {
        const auto& a = u.coeffs[c];
        const auto& b = v.coeffs[c];
        for (std::size_t i = 0; i < a.size(); ++i)
            sum += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    }
    const double volume = u.grid.length * u.grid.length * u.grid.length;
    return volume * sum;
}

double h_norm(const SpectralVelocityField& u) { return sobolev_norm(u, 0.0, 1.0); }

double gradient_inner(const SpectralVelocityField& u, const SpectralVelocityField& v) {
    if (u.grid != v.grid) throw Error("inner product of fields on different grids");
    double sum = 0.0;
    for_each_mode(u.grid, [&](std::size_t idx, double k0, double k1, double k2) {
        const double k2sum = k0 * k0 + k1 * k1 + k2 * k2;
        if (k2sum == 0.0) return;
        for (int c = 0; c < 3; ++c) {
            const cdouble& a = u.coeffs[c][idx];
            const cdouble& b = v.coeffs[c][idx];
            sum += k2sum * (a.real() * b.real() + a.imag() * b.imag());
        }
    });
    const double volume = u.grid.length * u.grid.length * u.grid.length;
    return volume * sum;
}

void zero_nyquist(SpectralVelocityField& u) {
    const int half = u.grid.n / 2;
    const WaveGrid& g = u.grid;
    for (int a0 = 0; a0 < g.n; ++a0)
        for (int a1 = 0; a1 < g.n; ++a1)
            for (int a2 = 0; a2 < g.n; ++a2) {
                if (a0 != half && a1 != half && a2 != half) continue;
                const std::size_t idx = g.index(a0, a1, a2);
                for (int c = 0; c < 3; ++c) u.coeffs[c][idx] = cdouble{0.0, 0.0};
            }
}

void dealias_two_thirds(SpectralVelocityField& u) {
    const int cutoff = u.grid.dealias_limit();
    const WaveGrid& g = u.grid;
    for (int a0 = 0; a0 < g.n; ++a0) {
        const bool kill0 = std::abs(g.signed_index(a0)) > cutoff;
        for (int a1 = 0; a1 < g.n; ++a1) {
            const bool kill1 = kill0 || std::abs(g.signed_index(a1)) > cutoff;
            for (int a2 = 0; a2 < g.n; ++a2) {
                if (!(kill1 || std::abs(g.signed_index(a2)) > cutoff)) continue;
                const std::size_t idx = g.index(a0, a1, a2);
                for (int c = 0; c < 3; ++c) u.coeffs[c][idx] = cdouble{0.0, 0.0};
            }
        }
    }
}

void enforce_reality(SpectralVelocityField& u) {
    const WaveGrid& g = u.grid;
    for (int a0 = 0; a0 < g.n; ++a0)
        for (int a1 = 0; a1 < g.n; ++a1)
            for (int a2 = 0; a2 < g.n; ++a2) {
                const std::size_t idx = g.index(a0, a1, a2);
                const std::size_t cidx = g.conjugate_index(a0, a1, a2);
                if (cidx < idx) continue;
                for (int c = 0; c < 3; ++c) {
                    const cdouble avg = 0.5 * (u.coeffs[c][idx] + std::conj(u.coeffs[c][cidx]));
                    u.coeffs[c][idx] = avg;
                    u.coeffs[c][cidx] = std::conj(avg);
                }
            }
}

double reality_defect(const SpectralVelocityField& u) {
    const WaveGrid& g = u.grid;
    double max_defect = 0.0;
    double max_mag = 0.0;
    for (int a0 = 0; a0 < g.n; ++a0)
        for (int a1 = 0; a1 < g.n; ++a1)
            for (int a2 = 0; a2 < g.n; ++a2) {
                const std::size_t idx = g.index(a0, a1, a2);
                const std::size_t cidx = g.conjugate_index(a0, a1, a2);
                for (int c = 0; c < 3; ++c) {
                    max_defect = std::max(
                        max_defect, std::abs(u.coeffs[c][idx] - std::conj(u.coeffs[c][cidx])));
                    max_mag = std::max(max_mag, std::abs(u.coeffs[c][idx]));
                }
            }
    return max_mag == 0.0 ? 0.0 : max_defect / max_mag;
}

std::vector<double> shell_spectrum(const SpectralVelocityField& u) {
    const int smax = (u.grid.n / 2) + 1;
    std::vector<double> spectrum(static_cast<std::size_t>(smax) + 1, 0.0);
    const double unit = u.grid.wavenumber_unit();
    for_each_mode(u.grid, [&](std::size_t idx, double k0, double k1, double k2) {
        const double kmag = std::sqrt(k0 * k0 + k1 * k1 + k2 * k2) / unit;
        const auto shell = static_cast<std::size_t>(std::llround(kmag));
        if (shell >= spectrum.size()) return;
        spectrum[shell] += std::norm(u.coeffs[0][idx]) + std::norm(u.coeffs[1][idx]) +
                           std::norm(u.coeffs[2][idx]);
    });
    const double volume = u.grid.length * u.grid.length * u.grid.length;
    for (auto& e : spectrum) e *= 0.5 * volume;
    return spectrum;
}

double energy(const SpectralVelocityField& u) {
    const double norm = h_norm(u);
    return 0.5 * norm * norm;
}

double enstrophy(const SpectralVelocityField& u) {
    double sum = 0.0;
    for_each_mode(u.grid, [&](std::size_t idx, double k0, double k1, double k2) {
        const Vec3 k{k0, k1, k2};
        // |i k x u|^2 accumulated component-wise
        const cdouble w0 = k[1] * u.coeffs[2][idx] - k[2] * u.coeffs[1][idx];
        const cdouble w1 = k[2] * u.coeffs[0][idx] - k[0] * u.coeffs[2][idx];
        const cdouble w2 = k[0] * u.coeffs[1][idx] - k[1] * u.coeffs[0][idx];
        sum += std::norm(w0) + std::norm(w1) + std::norm(w2);
    });
    const double volume = u.grid.length * u.grid.length * u.grid.length;
    return 0.5 * volume * sum;
}

double gradient_square_average(const SpectralVelocityField& u) {
    double sum = 0.0;
    for_each_mode(u.grid, [&](std::size_t idx, double k0, double k1, double k2) {
        const double k2sum = k0 * k0 + k1 * k1 + k2 * k2;
        sum += k2sum * (std::norm(u.coeffs[0][idx]) + std::norm(u.coeffs[1][idx]) +
                        std::norm(u.coeffs[2][idx]));
    });
    return sum;
}

double max_velocity(const SpectralVelocityField& u, FourierWorkspace& ws) {
    const auto phys = to_physical(u, ws);
    double vmax2 = 0.0;
    for (std::size_t i = 0; i < phys[0].size(); ++i) {
        const double m2 = sq(phys[0][i]) + sq(phys[1][i]) + sq(phys[2][i]);
        vmax2 = std::max(vmax2, m2);
    }
    return std::sqrt(vmax2);
}

double max_vorticity(const SpectralVelocityField& u, FourierWorkspace& ws) {
    return max_velocity(field_gradients(u).vorticity, ws);
}

}  // namespace nslab
