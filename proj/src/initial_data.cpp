#include <cmath>
#include <sstream>

#include "nslab/classify.hpp"
#include "nslab/dynamics.hpp"
#include "nslab/rng.hpp"
#include "nslab/spectral_ops.hpp"

namespace nslab {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

double parse_number(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error("invalid " + what + " '" + s + "' in initial-data descriptor");
    }
}

std::size_t mode_index(const WaveGrid& g, int k0, int k1, int k2) {
    auto wrap = [&](int k) { return k >= 0 ? k : g.n + k; };
    return g.index(wrap(k0), wrap(k1), wrap(k2));
}

SpectralVelocityField taylor_green(const WaveGrid& grid) {
    SpectralVelocityField u(grid);
    const cdouble a{0.0, -0.25};  // -i/4
    // u = (sin x cos y, -cos x sin y, 0): the (+-1, +-1, 0) mode family.
    u.coeffs[0][mode_index(grid, 1, 1, 0)] = a;
    u.coeffs[0][mode_index(grid, 1, -1, 0)] = a;
    u.coeffs[0][mode_index(grid, -1, 1, 0)] = -a;
    u.coeffs[0][mode_index(grid, -1, -1, 0)] = -a;
    u.coeffs[1][mode_index(grid, 1, 1, 0)] = -a;
    u.coeffs[1][mode_index(grid, 1, -1, 0)] = a;
    u.coeffs[1][mode_index(grid, -1, 1, 0)] = -a;
    u.coeffs[1][mode_index(grid, -1, -1, 0)] = a;
    return u;
}

Vec3 unit_orthogonal(const Int3& k) {
    const Vec3 kd{static_cast<double>(k[0]), static_cast<double>(k[1]),
                  static_cast<double>(k[2])};
    // cross with the axis least aligned with k
    int axis = 0;
    double best = std::abs(kd[0]);
    for (int i = 1; i < 3; ++i)
        if (std::abs(kd[i]) < best) {
            best = std::abs(kd[i]);
            axis = i;
        }
    Vec3 e{0.0, 0.0, 0.0};
    e[axis] = 1.0;
    Vec3 p{kd[1] * e[2] - kd[2] * e[1], kd[2] * e[0] - kd[0] * e[2],
           kd[0] * e[1] - kd[1] * e[0]};
    const double norm = std::sqrt(sq(p[0]) + sq(p[1]) + sq(p[2]));
    return {p[0] / norm, p[1] / norm, p[2] / norm};
}

SpectralVelocityField single_mode(const WaveGrid& grid, const Int3& k,
                                  const std::optional<Vec3>& polarization) {
    if (k[0] == 0 && k[1] == 0 && k[2] == 0)
        throw Error("single-mode wavevector must be nonzero");
    const int half = grid.n / 2;
    for (int c = 0; c < 3; ++c)
        if (std::abs(k[c]) >= half) throw Error("single-mode wavevector outside the grid");
    Vec3 p = polarization ? *polarization : unit_orthogonal(k);
    const double kdotp = k[0] * p[0] + k[1] * p[1] + k[2] * p[2];
    const double pmag = std::sqrt(sq(p[0]) + sq(p[1]) + sq(p[2]));
    if (pmag == 0.0) throw Error("single-mode polarization must be nonzero");
    if (std::abs(kdotp) > 1e-12 * pmag)
        throw Error("single-mode polarization must be orthogonal to the wavevector");
    SpectralVelocityField u(grid);
    const std::size_t idx = mode_index(grid, k[0], k[1], k[2]);
    const std::size_t cidx = mode_index(grid, -k[0], -k[1], -k[2]);
    for (int c = 0; c < 3; ++c) {
        u.coeffs[c][idx] = cdouble{0.5 * p[c], 0.0};
        u.coeffs[c][cidx] = cdouble{0.5 * p[c], 0.0};
    }
    return u;
}

}  // namespace

SpectralVelocityField random_shell_field(const WaveGrid& grid,
                                         const std::vector<double>& shell_energy,
                                         std::uint64_t seed) {
    const int limit = grid.dealias_limit();
    // Count canonical modes per shell first so moduli are fixed by the shell
    // energy (phases random, moduli deterministic).
    std::vector<int> shell_count(shell_energy.size(), 0);
    auto shell_of = [&](int k0, int k1, int k2) {
        return static_cast<std::size_t>(
            std::llround(std::sqrt(static_cast<double>(k0 * k0 + k1 * k1 + k2 * k2))));
    };
    auto canonical = [](int k0, int k1, int k2) {
        return k0 > 0 || (k0 == 0 && (k1 > 0 || (k1 == 0 && k2 > 0)));
    };
    for (int k0 = -limit; k0 <= limit; ++k0)
        for (int k1 = -limit; k1 <= limit; ++k1)
            for (int k2 = -limit; k2 <= limit; ++k2) {
                if (!canonical(k0, k1, k2)) continue;
                const auto s = shell_of(k0, k1, k2);
                if (s < shell_energy.size() && shell_energy[s] > 0.0) ++shell_count[s];
            }

    const double volume = grid.length * grid.length * grid.length;
    SpectralVelocityField u(grid);
    Rng rng(seed);
    for (int k0 = -limit; k0 <= limit; ++k0)
        for (int k1 = -limit; k1 <= limit; ++k1)
            for (int k2 = -limit; k2 <= limit; ++k2) {
                if (!canonical(k0, k1, k2)) continue;
                const auto s = shell_of(k0, k1, k2);
                if (s >= shell_energy.size() || shell_energy[s] <= 0.0) continue;
                // Pair energy in H convention is L^3 |u_k|^2.
                const double modulus =
                    std::sqrt(shell_energy[s] / (volume * shell_count[s]));
                const Int3 k{k0, k1, k2};
                const Vec3 e1 = unit_orthogonal(k);
                const Vec3 kd{static_cast<double>(k0), static_cast<double>(k1),
                              static_cast<double>(k2)};
                const double kmag = std::sqrt(sq(kd[0]) + sq(kd[1]) + sq(kd[2]));
                const Vec3 e2{(kd[1] * e1[2] - kd[2] * e1[1]) / kmag,
                              (kd[2] * e1[0] - kd[0] * e1[2]) / kmag,
                              (kd[0] * e1[1] - kd[1] * e1[0]) / kmag};
                const double psi = rng.angle();
                const double phase = rng.angle();
                const cdouble rot{std::cos(phase), std::sin(phase)};
                const std::size_t idx = mode_index(grid, k0, k1, k2);
                const std::size_t cidx = mode_index(grid, -k0, -k1, -k2);
                for (int c = 0; c < 3; ++c) {
                    const cdouble v =
                        modulus * (std::cos(psi) * e1[c] + std::sin(psi) * e2[c]) * rot;
                    u.coeffs[c][idx] = v;
                    u.coeffs[c][cidx] = std::conj(v);
                }
            }
    return u;
}

SpectralVelocityField initial_data(const std::string& descriptor, const WaveGrid& grid,
                                   std::uint64_t seed) {
    const auto sections = split(descriptor, ':');
    if (sections.empty()) throw Error("empty initial-data descriptor");
    const std::string& name = sections[0];

    if (name == "taylor-green") {
        if (grid.n / 2 <= 1) throw Error("taylor-green needs N >= 4");
        return taylor_green(grid);
    }

    if (name == "single-mode") {
        if (sections.size() < 2) throw Error("single-mode descriptor needs a wavevector");
        const auto kparts = split(sections[1], ',');
        if (kparts.size() != 3) throw Error("single-mode wavevector needs three components");
        Int3 k{static_cast<int>(parse_number(kparts[0], "wavevector")),
               static_cast<int>(parse_number(kparts[1], "wavevector")),
               static_cast<int>(parse_number(kparts[2], "wavevector"))};
        std::optional<Vec3> pol;
        if (sections.size() >= 3) {
            const auto pparts = split(sections[2], ',');
            if (pparts.size() != 3) throw Error("single-mode polarization needs three components");
            pol = Vec3{parse_number(pparts[0], "polarization"),
                       parse_number(pparts[1], "polarization"),
                       parse_number(pparts[2], "polarization")};
        }
        return single_mode(grid, k, pol);
    }

    if (name == "random-band") {
        if (sections.size() < 2) throw Error("random-band descriptor needs kmin,kmax,slope");
        const auto parts = split(sections[1], ',');
        if (parts.size() < 3) throw Error("random-band descriptor needs kmin,kmax,slope");
        const int kmin = static_cast<int>(parse_number(parts[0], "kmin"));
        const int kmax = static_cast<int>(parse_number(parts[1], "kmax"));
        const double slope = parse_number(parts[2], "slope");
        const double rms = parts.size() >= 4 ? parse_number(parts[3], "rms") : 0.1;
        if (kmin < 1 || kmax < kmin) throw Error("random-band needs 1 <= kmin <= kmax");
        if (kmax > grid.dealias_limit())
            throw Error("random-band outside the grid: kmax " + std::to_string(kmax) +
                        " exceeds the dealiased band " + std::to_string(grid.dealias_limit()));
        std::vector<double> shells(static_cast<std::size_t>(kmax) + 1, 0.0);
        double total = 0.0;
        for (int s = kmin; s <= kmax; ++s) total += std::pow(static_cast<double>(s), slope);
        const double volume = grid.length * grid.length * grid.length;
        const double target_energy = 0.5 * rms * rms * volume;
        for (int s = kmin; s <= kmax; ++s)
            shells[s] = target_energy * std::pow(static_cast<double>(s), slope) / total;
        return random_shell_field(grid, shells, seed);
    }

    if (name == "harmonic-mean" || name == "strictly-turbulent") {
        int param = name == "harmonic-mean" ? 2 : 1;
        double rms = 0.1;
        if (sections.size() >= 2) {
            const auto parts = split(sections[1], ',');
            if (!parts.empty()) param = static_cast<int>(parse_number(parts[0], "level"));
            if (parts.size() >= 2) rms = parse_number(parts[1], "rms");
        }
        if (name == "harmonic-mean")
            return synthesize_labeled(grid, DataLabel::Smooth, param, rms);
        const int lmax = std::max(param, 2);
        auto u = synthesize_from_angular_targets(grid, strict_targets(param, lmax), rms);
        return u;
    }

    throw Error("unknown initial-data descriptor '" + name + "'");
}

}  // namespace nslab
