#include "nslab/classify.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace nslab {

std::string to_string(DataLabel label) {
    switch (label) {
        case DataLabel::Smooth: return "smooth";
        case DataLabel::Turbulent: return "turbulent";
        case DataLabel::StrictlyTurbulent: return "strictly-turbulent";
    }
    return "unknown";
}

namespace {

/// Complex component-sum angular content f_lm = i^l sum s_k conj(Y_lm(khat)).
std::vector<cdouble> complex_angular_content(const SpectralVelocityField& u, int lmax) {
    const WaveGrid& g = u.grid;
    const int nlm = lm_count(lmax);
    std::vector<cdouble> f(nlm, cdouble{0.0, 0.0});
    std::vector<cdouble> y(nlm);
    for (int a0 = 0; a0 < g.n; ++a0)
        for (int a1 = 0; a1 < g.n; ++a1)
            for (int a2 = 0; a2 < g.n; ++a2) {
                const std::size_t idx = g.index(a0, a1, a2);
                const cdouble s = u.coeffs[0][idx] + u.coeffs[1][idx] + u.coeffs[2][idx];
                if (std::abs(s) == 0.0) continue;
                const double k0 = g.wavenumber(a0);
                const double k1 = g.wavenumber(a1);
                const double k2 = g.wavenumber(a2);
                const double kmag = std::sqrt(k0 * k0 + k1 * k1 + k2 * k2);
                if (kmag == 0.0) continue;
                const double theta = std::acos(std::clamp(k2 / kmag, -1.0, 1.0));
                const double phi = std::atan2(k1, k0);
                ylm_array(lmax, theta, phi, y);
                for (int l = 0; l <= lmax; ++l)
                    for (int m = -l; m <= l; ++m)
                        f[lm_index(l, m)] += s * std::conj(y[lm_index(l, m)]);
            }
    // The plane-wave phase i^l makes coefficients of real fields
    // conjugation-symmetric: f(l,-m) = (-1)^m conj(f(l,m)).
    for (int l = 0; l <= lmax; ++l) {
        cdouble il{1.0, 0.0};
        switch (l % 4) {
            case 0: il = {1.0, 0.0}; break;
            case 1: il = {0.0, 1.0}; break;
            case 2: il = {-1.0, 0.0}; break;
            case 3: il = {0.0, -1.0}; break;
        }
        for (int m = -l; m <= l; ++m) f[lm_index(l, m)] *= il;
    }
    return f;
}

/// Complex table (with conjugation symmetry) -> real spherical-harmonic basis.
AngularTable to_real_basis(const std::vector<cdouble>& f, int lmax) {
    AngularTable table;
    table.lmax = lmax;
    table.t.assign(lm_count(lmax), 0.0);
    const double root2 = std::sqrt(2.0);
    for (int l = 0; l <= lmax; ++l) {
        table.at(l, 0) = f[lm_index(l, 0)].real();
        for (int m = 1; m <= l; ++m) {
            const double sign = (m % 2 == 0) ? 1.0 : -1.0;
            table.at(l, m) = sign * root2 * f[lm_index(l, m)].real();
            table.at(l, -m) = -sign * root2 * f[lm_index(l, m)].imag();
        }
    }
    return table;
}

}  // namespace

AngularTable angular_table(const SpectralVelocityField& u, int lmax) {
    return to_real_basis(complex_angular_content(u, lmax), lmax);
}

AngularTable angular_table(const HarmonicCoefficients& coeffs) {
    const int lmax = coeffs.lmax;
    std::vector<cdouble> f(lm_count(lmax), cdouble{0.0, 0.0});
    for (std::size_t n = 0; n < coeffs.radial_k.size(); ++n)
        for (int l = 0; l <= lmax; ++l)
            for (int m = -l; m <= l; ++m)
                f[lm_index(l, m)] += coeffs.f_coeff[coeffs.coeff_index(n, l, m)];
    return to_real_basis(f, lmax);
}

Classification classify(const AngularTable& table, double tolerance) {
    const int lmax = table.lmax;
    Classification out;
    out.tolerance = tolerance;

    double total2 = 0.0;
    double mean2 = 0.0;  // sum |<e, v_l>|^2
    double q = 0.0;      // <E, P> with E uniform over retained l
    std::vector<double> p(lmax + 1, 0.0);
    for (int l = 0; l <= lmax; ++l) {
        const double root = std::sqrt(2.0 * l + 1.0);
        double norm2 = 0.0;
        double sum = 0.0;
        for (int m = -l; m <= l; ++m) {
            const double v = table.at(l, m);
            norm2 += v * v;
            sum += v;
        }
        p[l] = sum / root;
        total2 += norm2;
        mean2 += p[l] * p[l];
        // Residuals are formed componentwise; the Pythagorean shortcut
        // sqrt(norm^2 - p^2) cancels catastrophically near aligned data.
        double res2 = 0.0;
        for (int m = -l; m <= l; ++m) res2 += sq(table.at(l, m) - p[l] / root);
        LevelDiagnostics diag;
        diag.l = l;
        diag.norm = std::sqrt(norm2);
        diag.mean_component = p[l];
        if (diag.norm > 0.0) {
            diag.alignment = std::abs(p[l]) / diag.norm;
            diag.residual = std::sqrt(res2) / diag.norm;
        }
        out.levels.push_back(diag);
    }
    if (total2 == 0.0) throw Error("empty expansion: no angular content to classify");

    const double root_levels = std::sqrt(static_cast<double>(lmax + 1));
    for (int l = 0; l <= lmax; ++l) q += p[l];
    q /= root_levels;

    // Componentwise residual off the double-mean direction D with entries
    // 1 / (sqrt(lmax+1) sqrt(2l+1)).
    double smooth_res2 = 0.0;
    for (int l = 0; l <= lmax; ++l) {
        const double d = q / (root_levels * std::sqrt(2.0 * l + 1.0));
        for (int m = -l; m <= l; ++m) smooth_res2 += sq(table.at(l, m) - d);
    }

    const double total = std::sqrt(total2);
    out.strict_discriminant = std::sqrt(mean2) / total;
    out.smooth_discriminant = std::sqrt(smooth_res2) / total;

    if (out.smooth_discriminant <= tolerance)
        out.label = DataLabel::Smooth;
    else if (out.strict_discriminant <= tolerance)
        out.label = DataLabel::StrictlyTurbulent;
    else
        out.label = DataLabel::Turbulent;
    return out;
}

Classification classify_initial_data(const SpectralVelocityField& u, int lmax,
                                     double tolerance) {
    return classify(angular_table(u, lmax), tolerance);
}

Classification classify_initial_data(const HarmonicCoefficients& coeffs, double tolerance) {
    return classify(angular_table(coeffs), tolerance);
}

namespace {

struct ModePair {
    Int3 k;
    Vec3 khat;
    Vec3 polarization;  // divergence free, components sum to 1
};

/// Deterministic mode set: canonical representatives of +/- pairs on shells
/// |k|^2 in {1,2,3,5,6}, excluding directions parallel to (1,1,1) where the
/// component sum of a divergence-free polarization is forced to zero.
std::vector<ModePair> construction_modes() {
    std::vector<ModePair> modes;
    const std::array<int, 5> shells{1, 2, 3, 5, 6};
    for (int k0 = -2; k0 <= 2; ++k0)
        for (int k1 = -2; k1 <= 2; ++k1)
            for (int k2 = -2; k2 <= 2; ++k2) {
                const int mag2 = k0 * k0 + k1 * k1 + k2 * k2;
                if (std::find(shells.begin(), shells.end(), mag2) == shells.end()) continue;
                const bool canonical = k0 > 0 || (k0 == 0 && (k1 > 0 || (k1 == 0 && k2 > 0)));
                if (!canonical) continue;
                if (k0 == k1 && k1 == k2) continue;  // parallel to (1,1,1)
                ModePair mp;
                mp.k = {k0, k1, k2};
                const double mag = std::sqrt(static_cast<double>(mag2));
                mp.khat = {k0 / mag, k1 / mag, k2 / mag};
                // a_perp / |a_perp|^2 with a = (1,1,1): divergence free and
                // component sum exactly 1.
                const double adotk = (k0 + k1 + k2) / mag;
                Vec3 aperp{1.0 - adotk * mp.khat[0], 1.0 - adotk * mp.khat[1],
                           1.0 - adotk * mp.khat[2]};
                const double aperp2 = sq(aperp[0]) + sq(aperp[1]) + sq(aperp[2]);
                mp.polarization = {aperp[0] / aperp2, aperp[1] / aperp2, aperp[2] / aperp2};
                modes.push_back(mp);
            }
    return modes;
}

}  // namespace

SpectralVelocityField synthesize_from_angular_targets(const WaveGrid& grid,
                                                      const AngularTable& targets,
                                                      double rms) {
    const int lmax = targets.lmax;
    if (lmax > kMaxConstructionLmax)
        throw Error("construction supports lmax <= " + std::to_string(kMaxConstructionLmax));
    if (grid.dealias_limit() < 2)
        throw Error("grid too small for classifier-basis construction (need N >= 8)");

    const auto modes = construction_modes();
    const int n_pairs = static_cast<int>(modes.size());
    const int n_rows = lm_count(lmax);

    // Real linear map from (Re s_j, Im s_j) to the real angular table.
    // Pair contribution to the complex content: i^l (s + (-1)^l conj(s)) Y*,
    // i.e. even l couple to Re(s), odd l to Im(s).
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_rows, 2 * n_pairs);
    std::vector<cdouble> y(lm_count(lmax));
    const double root2 = std::sqrt(2.0);
    for (int j = 0; j < n_pairs; ++j) {
        const auto& mp = modes[j];
        const double theta = std::acos(std::clamp(mp.khat[2], -1.0, 1.0));
        const double phi = std::atan2(mp.khat[1], mp.khat[0]);
        ylm_array(lmax, theta, phi, y);
        for (int l = 0; l <= lmax; ++l) {
            // f_lm = i^l * c * conj(Y_lm), c = 2 Re(s) (even l) or 2i Im(s) (odd l)
            // i^l * 2 Re(s): real factor; i^l * 2i Im(s): also real factor.
            double factor;
            int col;
            if (l % 2 == 0) {
                factor = (l % 4 == 0) ? 2.0 : -2.0;
                col = j;
            } else {
                factor = (l % 4 == 1) ? -2.0 : 2.0;
                col = n_pairs + j;
            }
            for (int m = 0; m <= l; ++m) {
                const cdouble f = factor * std::conj(y[lm_index(l, m)]);
                if (m == 0) {
                    a(lm_index(l, 0), col) += f.real();
                } else {
                    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
                    a(lm_index(l, m), col) += sign * root2 * f.real();
                    a(lm_index(l, -m), col) += -sign * root2 * f.imag();
                }
            }
        }
    }

    Eigen::VectorXd b(n_rows);
    for (int i = 0; i < n_rows; ++i) b(i) = targets.t[i];

    const auto qr = a.colPivHouseholderQr();
    Eigen::VectorXd x = qr.solve(b);
    for (int pass = 0; pass < 3; ++pass) {
        const Eigen::VectorXd resid = b - a * x;
        x += qr.solve(resid);
    }
    const double resid_norm = (b - a * x).norm();
    const double target_norm = b.norm();
    if (target_norm > 0.0 && resid_norm > 1e-12 * target_norm)
        throw Error("angular target not realizable on the construction mode set (residual " +
                    std::to_string(resid_norm / target_norm) + ")");

    SpectralVelocityField u(grid);
    for (int j = 0; j < n_pairs; ++j) {
        const auto& mp = modes[j];
        const cdouble s{x(j), x(n_pairs + j)};
        auto wrap = [&](int k) { return k >= 0 ? k : grid.n + k; };
        const std::size_t idx = grid.index(wrap(mp.k[0]), wrap(mp.k[1]), wrap(mp.k[2]));
        const std::size_t cidx = grid.index(wrap(-mp.k[0]), wrap(-mp.k[1]), wrap(-mp.k[2]));
        for (int c = 0; c < 3; ++c) {
            u.coeffs[c][idx] = s * mp.polarization[c];
            u.coeffs[c][cidx] = std::conj(s) * mp.polarization[c];
        }
    }

    // Normalize to the requested rms; pure scaling leaves the label unchanged.
    double mean_square = 0.0;
    for (int c = 0; c < 3; ++c)
        for (const auto& v : u.coeffs[c]) mean_square += std::norm(v);
    if (mean_square > 0.0 && rms > 0.0) {
        const double scale = rms / std::sqrt(mean_square);
        for (int c = 0; c < 3; ++c)
            for (auto& v : u.coeffs[c]) v *= scale;
    }
    return u;
}

AngularTable smooth_targets(int lmax) {
    AngularTable t;
    t.lmax = lmax;
    t.t.assign(lm_count(lmax), 0.0);
    for (int l = 0; l <= lmax; ++l) {
        const double c = 1.0 / std::sqrt(2.0 * l + 1.0);
        for (int m = -l; m <= l; ++m) t.at(l, m) = c;
    }
    return t;
}

AngularTable strict_targets(int l_active, int lmax) {
    if (l_active < 1 || l_active > lmax)
        throw Error("strictly turbulent construction needs 1 <= l <= lmax");
    AngularTable t;
    t.lmax = lmax;
    t.t.assign(lm_count(lmax), 0.0);
    const double r = 1.0 / std::sqrt(2.0);
    t.at(l_active, -l_active) = r;
    t.at(l_active, l_active) = -r;
    return t;
}

AngularTable mixed_targets(int lmax) {
    AngularTable smooth = smooth_targets(lmax);
    AngularTable strict = strict_targets(std::min(1, lmax), lmax);
    if (lmax < 1) throw Error("mixed construction needs lmax >= 1");
    AngularTable t;
    t.lmax = lmax;
    t.t.assign(lm_count(lmax), 0.0);
    const double ws = 1.0 / std::sqrt(static_cast<double>(lm_count(lmax)));
    for (int i = 0; i < lm_count(lmax); ++i) t.t[i] = ws * smooth.t[i] + strict.t[i];
    return t;
}

SpectralVelocityField synthesize_labeled(const WaveGrid& grid, DataLabel label, int lmax,
                                         double rms) {
    AngularTable targets;
    switch (label) {
        case DataLabel::Smooth: targets = smooth_targets(lmax); break;
        case DataLabel::StrictlyTurbulent: targets = strict_targets(std::min(lmax, 1), lmax); break;
        case DataLabel::Turbulent: targets = mixed_targets(lmax); break;
    }
    auto u = synthesize_from_angular_targets(grid, targets, rms);
    const auto result = classify_initial_data(u, lmax);
    if (result.label != label)
        throw Error("classifier-basis construction failed closure for label " + to_string(label));
    return u;
}

}  // namespace nslab
