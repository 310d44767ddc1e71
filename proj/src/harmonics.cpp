#include "nslab/harmonics.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace nslab {

void legendre_array(int lmax, double x, std::span<double> out) {
    if (static_cast<int>(out.size()) < lm_count(lmax)) throw Error("legendre output too small");
    const double sx = std::sqrt(std::max(0.0, 1.0 - x * x));
    // Sectoral seed P~_0^0 = sqrt(1/4pi), then diagonal and band recurrences
    // with on-the-fly normalization.
    double pmm = std::sqrt(1.0 / (4.0 * kPi));
    for (int m = 0; m <= lmax; ++m) {
        out[lm_index(m, m)] = pmm;
        if (m + 1 <= lmax) {
            const double pm1 = x * std::sqrt(2.0 * m + 3.0) * pmm;
            out[lm_index(m + 1, m)] = pm1;
            double pl2 = pmm, pl1 = pm1;
            for (int l = m + 2; l <= lmax; ++l) {
                const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - m * m));
                const double b = std::sqrt(((l - 1.0) * (l - 1.0) - m * m) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
                const double pl = a * (x * pl1 - b * pl2);
                out[lm_index(l, m)] = pl;
                pl2 = pl1;
                pl1 = pl;
            }
        }
        pmm *= -std::sqrt((2.0 * m + 3.0) / (2.0 * m + 2.0)) * sx;
    }
    // Negative m via P~_l^{-m} = (-1)^m P~_l^m.
    for (int l = 0; l <= lmax; ++l)
        for (int m = 1; m <= l; ++m)
            out[lm_index(l, -m)] = (m % 2 == 0 ? 1.0 : -1.0) * out[lm_index(l, m)];
}

void ylm_array(int lmax, double theta, double phi, std::span<cdouble> out) {
    if (static_cast<int>(out.size()) < lm_count(lmax)) throw Error("ylm output too small");
    std::vector<double> leg(lm_count(lmax));
    legendre_array(lmax, std::cos(theta), leg);
    for (int l = 0; l <= lmax; ++l)
        for (int m = -l; m <= l; ++m) {
            const double arg = m * phi;
            out[lm_index(l, m)] = leg[lm_index(l, m)] * cdouble{std::cos(arg), std::sin(arg)};
        }
}

cdouble ylm(int l, int m, double theta, double phi) {
    if (l < 0) throw Error("spherical harmonic degree must be nonnegative");
    if (std::abs(m) > l) throw Error("spherical harmonic order |m| exceeds degree l");
    std::vector<cdouble> all(lm_count(l));
    ylm_array(l, theta, phi, all);
    return all[lm_index(l, m)];
}

void spherical_bessel_array(int lmax, double x, std::span<double> j_out, std::span<double> y_out) {
    if (static_cast<int>(j_out.size()) < lmax + 1 || static_cast<int>(y_out.size()) < lmax + 1)
        throw Error("bessel output too small");
    if (x < 0.0) throw Error("spherical Bessel argument must be nonnegative");
    if (x == 0.0) {
        // j_l(0) = delta_{l0}; the Neumann branch is singular at the origin.
        for (int l = 0; l <= lmax; ++l) {
            j_out[l] = l == 0 ? 1.0 : 0.0;
            y_out[l] = -std::numeric_limits<double>::infinity();
        }
        return;
    }

    // Neumann: upward recurrence is stable.
    y_out[0] = -std::cos(x) / x;
    if (lmax >= 1) y_out[1] = -std::cos(x) / (x * x) - std::sin(x) / x;
    for (int l = 2; l <= lmax; ++l)
        y_out[l] = (2.0 * l - 1.0) / x * y_out[l - 1] - y_out[l - 2];

    // Bessel: downward recurrence from well above max(lmax, x), then
    // normalize by j_0 = sin(x)/x.
    const int start = std::max(lmax, static_cast<int>(x)) + 25;
    double fp1 = 0.0;
    double f = 1e-300;
    std::vector<double> scratch(static_cast<std::size_t>(start) + 1);
    for (int l = start; l >= 1; --l) {
        const double fm1 = (2.0 * l + 1.0) / x * f - fp1;
        fp1 = f;
        f = fm1;
        if (l - 1 <= lmax) scratch[l - 1] = f;
        if (std::abs(f) > 1e280) {
            const double rescale = 1e-280;
            f *= rescale;
            fp1 *= rescale;
            for (int i = l - 1; i <= lmax; ++i)
                if (i >= 0) scratch[i] *= rescale;
        }
    }
    const double j0 = std::sin(x) / x;
    const double norm = j0 / scratch[0];
    for (int l = 0; l <= lmax; ++l) j_out[l] = scratch[l] * norm;
}

BesselPair spherical_bessel(int l, double x) {
    if (l < 0) throw Error("spherical Bessel order must be nonnegative");
    if (x == 0.0) throw Error("Neumann function singular at x = 0");
    std::vector<double> j(static_cast<std::size_t>(l) + 1), y(static_cast<std::size_t>(l) + 1);
    spherical_bessel_array(l, x, j, y);
    return {j[l], y[l]};
}

BesselPair spherical_bessel_derivative(int l, double x) {
    if (x == 0.0) throw Error("Neumann function singular at x = 0");
    std::vector<double> j(static_cast<std::size_t>(l) + 2), y(static_cast<std::size_t>(l) + 2);
    spherical_bessel_array(l + 1, x, j, y);
    if (l == 0) return {-j[1], -y[1]};
    return {j[l - 1] - (l + 1.0) / x * j[l], y[l - 1] - (l + 1.0) / x * y[l]};
}

namespace {
const double kSolidNorm = std::sqrt(2.0 / kPi);
}

SolidBasisValue solid_basis(double k, int l, int m, double r, double theta, double phi) {
    if (r <= 0.0) throw Error("irregular solid harmonic requires r > 0");
    const auto bp = spherical_bessel(l, k * r);
    const cdouble y = ylm(l, m, theta, phi);
    return {kSolidNorm * k * bp.j * y, kSolidNorm * k * bp.y * y};
}

cdouble solid_basis_smooth(double k, int l, int m, double r, double theta, double phi) {
    if (r < 0.0) throw Error("radius must be nonnegative");
    double jl;
    if (k * r == 0.0) {
        jl = l == 0 ? 1.0 : 0.0;
    } else {
        std::vector<double> j(static_cast<std::size_t>(l) + 1), y(static_cast<std::size_t>(l) + 1);
        spherical_bessel_array(l, k * r, j, y);
        jl = j[l];
    }
    return kSolidNorm * k * jl * ylm(l, m, theta, phi);
}

void gauss_legendre(int order, std::span<double> nodes, std::span<double> weights) {
    if (static_cast<int>(nodes.size()) < order || static_cast<int>(weights.size()) < order)
        throw Error("gauss output too small");
    for (int i = 0; i < order; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int l = 2; l <= order; ++l) {
                const double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
                p0 = p1;
                p1 = p2;
            }
            pp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[order - 1 - i] = x;
        weights[order - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
}

BallQuadrature make_ball_quadrature(int n_r, int n_theta, int n_phi, double radius,
                                    double r_min_fraction) {
    if (n_r < 1 || n_theta < 1 || n_phi < 1) throw Error("quadrature orders must be positive");
    if (!(radius > 0.0)) throw Error("ball radius must be positive");
    BallQuadrature q;
    q.radius = radius;
    q.r_min = r_min_fraction * radius;
    q.radii.resize(n_r);
    q.radial_weights.resize(n_r);
    std::vector<double> x(n_r), w(n_r);
    gauss_legendre(n_r, x, w);
    const double a = q.r_min, b = radius;
    for (int i = 0; i < n_r; ++i) {
        q.radii[i] = 0.5 * (b - a) * x[i] + 0.5 * (b + a);
        q.radial_weights[i] = 0.5 * (b - a) * w[i];
    }
    q.cos_theta.resize(n_theta);
    q.theta_weights.resize(n_theta);
    gauss_legendre(n_theta, q.cos_theta, q.theta_weights);
    q.n_phi = n_phi;
    return q;
}

BallQuadrature default_ball_quadrature(int lmax, int n_radial, double radius) {
    const int n_theta = std::max(2 * (lmax + 1), 8);
    const int n_phi = std::max(2 * lmax + 2, 8);
    const int n_r = std::max({2 * n_radial + 4, 2 * (lmax + 1), 12});
    return make_ball_quadrature(n_r, n_theta, n_phi, radius);
}

double BallQuadrature::integrate(std::span<const double> samples) const {
    if (samples.size() != size()) throw Error("sample count does not match quadrature nodes");
    const double wphi = kTwoPi / n_phi;
    double total = 0.0;
    for (std::size_t ir = 0; ir < radii.size(); ++ir) {
        const double wr = radial_weights[ir] * radii[ir] * radii[ir];
        for (std::size_t it = 0; it < cos_theta.size(); ++it) {
            const double wt = theta_weights[it];
            double phi_sum = 0.0;
            for (int ip = 0; ip < n_phi; ++ip) phi_sum += samples[node_index(ir, it, ip)];
            total += wr * wt * wphi * phi_sum;
        }
    }
    return total;
}

namespace {

/// Angular projections g_lm(r_i) = int conj(Y_lm) f dOmega at each radius.
std::vector<cdouble> angular_projections(std::span<const double> samples,
                                         const BallQuadrature& quad, int lmax) {
    const std::size_t n_r = quad.radii.size();
    const std::size_t n_t = quad.cos_theta.size();
    const int n_phi = quad.n_phi;
    const int nlm = lm_count(lmax);
    const double wphi = kTwoPi / n_phi;

    // Legendre values per theta node.
    std::vector<double> leg(static_cast<std::size_t>(n_t) * nlm);
    for (std::size_t it = 0; it < n_t; ++it)
        legendre_array(lmax, quad.cos_theta[it], std::span(leg).subspan(it * nlm, nlm));

    // Phase table e^{-i m phi_p}.
    std::vector<cdouble> phase(static_cast<std::size_t>(2 * lmax + 1) * n_phi);
    for (int m = -lmax; m <= lmax; ++m)
        for (int ip = 0; ip < n_phi; ++ip) {
            const double arg = -m * kTwoPi * ip / n_phi;
            phase[(m + lmax) * static_cast<std::size_t>(n_phi) + ip] = {std::cos(arg), std::sin(arg)};
        }

    std::vector<cdouble> g(n_r * nlm, cdouble{0.0, 0.0});
    std::vector<cdouble> fm(2 * lmax + 1);
    for (std::size_t ir = 0; ir < n_r; ++ir) {
        for (std::size_t it = 0; it < n_t; ++it) {
            // phi analysis first: fm(m) = sum_p w_phi f e^{-im phi}
            std::fill(fm.begin(), fm.end(), cdouble{0.0, 0.0});
            for (int ip = 0; ip < n_phi; ++ip) {
                const double v = samples[quad.node_index(ir, it, ip)];
                if (v == 0.0) continue;
                for (int m = -lmax; m <= lmax; ++m)
                    fm[m + lmax] += v * phase[(m + lmax) * static_cast<std::size_t>(n_phi) + ip];
            }
            const double wt = quad.theta_weights[it] * wphi;
            const double* legs = &leg[it * nlm];
            for (int l = 0; l <= lmax; ++l)
                for (int m = -l; m <= l; ++m)
                    g[ir * nlm + lm_index(l, m)] += wt * legs[lm_index(l, m)] * fm[m + lmax];
        }
    }
    return g;
}

}  // namespace

HarmonicCoefficients expand(std::span<const double> samples, const BallQuadrature& quad,
                            int lmax, int n_radial, bool with_singular) {
    if (samples.size() != quad.size())
        throw Error("sample count does not match quadrature nodes (" +
                    std::to_string(samples.size()) + " vs " + std::to_string(quad.size()) + ")");
    if (lmax < 0 || n_radial < 1) throw Error("invalid expansion orders");
    const std::size_t n_r = quad.radii.size();
    const int n_cols = with_singular ? 2 * n_radial : n_radial;
    if (static_cast<int>(n_r) < n_cols)
        throw Error("quadrature has too few radial nodes for the requested expansion");

    HarmonicCoefficients out;
    out.lmax = lmax;
    out.ball_radius = quad.radius;
    out.radial_k.resize(n_radial);
    for (int n = 0; n < n_radial; ++n) out.radial_k[n] = (n + 1) * kPi / quad.radius;
    const int nlm = lm_count(lmax);
    out.f_coeff.assign(static_cast<std::size_t>(n_radial) * nlm, cdouble{0.0, 0.0});
    if (with_singular) out.s_coeff.assign(static_cast<std::size_t>(n_radial) * nlm, cdouble{0.0, 0.0});

    const auto g = angular_projections(samples, quad, lmax);

    // Radial basis values per (radius, node).
    std::vector<double> jtab(n_r * static_cast<std::size_t>(n_radial) * (lmax + 1));
    std::vector<double> ytab(n_r * static_cast<std::size_t>(n_radial) * (lmax + 1));
    std::vector<double> jbuf(static_cast<std::size_t>(lmax) + 1), ybuf(static_cast<std::size_t>(lmax) + 1);
    for (std::size_t ir = 0; ir < n_r; ++ir)
        for (int n = 0; n < n_radial; ++n) {
            spherical_bessel_array(lmax, out.radial_k[n] * quad.radii[ir], jbuf, ybuf);
            for (int l = 0; l <= lmax; ++l) {
                const std::size_t t = (ir * n_radial + n) * (lmax + 1) + l;
                jtab[t] = kSolidNorm * out.radial_k[n] * jbuf[l];
                ytab[t] = kSolidNorm * out.radial_k[n] * ybuf[l];
            }
        }

    // Weighted least squares per l, shared across m.
    Eigen::VectorXd row_weight(n_r);
    for (std::size_t ir = 0; ir < n_r; ++ir)
        row_weight(ir) = std::sqrt(quad.radial_weights[ir]) * quad.radii[ir];

    for (int l = 0; l <= lmax; ++l) {
        Eigen::MatrixXd design(n_r, n_cols);
        for (std::size_t ir = 0; ir < n_r; ++ir)
            for (int n = 0; n < n_radial; ++n) {
                const std::size_t t = (ir * n_radial + n) * (lmax + 1) + l;
                design(ir, n) = row_weight(ir) * jtab[t];
                if (with_singular) design(ir, n_radial + n) = row_weight(ir) * ytab[t];
            }
        // Column equilibration keeps the singular family (huge near r_min)
        // from wrecking the conditioning.
        Eigen::VectorXd col_scale(n_cols);
        for (int c = 0; c < n_cols; ++c) {
            const double norm = design.col(c).norm();
            col_scale(c) = norm > 0.0 ? 1.0 / norm : 1.0;
            design.col(c) *= col_scale(c);
        }
        const auto qr = design.colPivHouseholderQr();
        Eigen::VectorXd rhs_re(n_r), rhs_im(n_r);
        for (int m = -l; m <= l; ++m) {
            for (std::size_t ir = 0; ir < n_r; ++ir) {
                const cdouble v = row_weight(ir) * g[ir * nlm + lm_index(l, m)];
                rhs_re(ir) = v.real();
                rhs_im(ir) = v.imag();
            }
            Eigen::VectorXd sol_re = qr.solve(rhs_re);
            Eigen::VectorXd sol_im = qr.solve(rhs_im);
            // One refinement pass sharpens exactly representable inputs.
            sol_re += qr.solve(Eigen::VectorXd(rhs_re - design * sol_re));
            sol_im += qr.solve(Eigen::VectorXd(rhs_im - design * sol_im));
            Eigen::VectorXcd sol(n_cols);
            for (int n = 0; n < n_cols; ++n)
                sol(n) = cdouble{sol_re(n), sol_im(n)} * col_scale(n);
            for (int n = 0; n < n_radial; ++n)
                out.f_coeff[out.coeff_index(n, l, m)] = sol(n);
            if (with_singular)
                for (int n = 0; n < n_radial; ++n)
                    out.s_coeff[out.coeff_index(n, l, m)] = sol(n_radial + n);
        }
    }
    return out;
}

std::vector<double> reconstruct(const HarmonicCoefficients& coeffs,
                                std::span<const SphericalPoint> points) {
    const int lmax = coeffs.lmax;
    const int nlm = lm_count(lmax);
    const std::size_t n_radial = coeffs.radial_k.size();
    bool any_singular = false;
    for (const auto& s : coeffs.s_coeff)
        if (std::abs(s) > 0.0) any_singular = true;

    std::vector<double> values(points.size(), 0.0);
    std::vector<cdouble> y(nlm);
    std::vector<double> jbuf(static_cast<std::size_t>(lmax) + 1), ybuf(static_cast<std::size_t>(lmax) + 1);
    for (std::size_t p = 0; p < points.size(); ++p) {
        const auto& pt = points[p];
        if (pt.r < 0.0) throw Error("reconstruction point has negative radius");
        if (any_singular && pt.r == 0.0)
            throw Error("irregular solid harmonic requires r > 0");
        ylm_array(lmax, pt.theta, pt.phi, y);
        cdouble total{0.0, 0.0};
        for (std::size_t n = 0; n < n_radial; ++n) {
            const double x = coeffs.radial_k[n] * pt.r;
            if (x == 0.0) {
                jbuf.assign(jbuf.size(), 0.0);
                jbuf[0] = 1.0;
                ybuf.assign(ybuf.size(), 0.0);
            } else {
                spherical_bessel_array(lmax, x, jbuf, ybuf);
            }
            const double scale = kSolidNorm * coeffs.radial_k[n];
            for (int l = 0; l <= lmax; ++l)
                for (int m = -l; m <= l; ++m) {
                    const auto ci = coeffs.coeff_index(n, l, m);
                    cdouble basis = scale * jbuf[l] * y[lm_index(l, m)];
                    total += coeffs.f_coeff[ci] * basis;
                    if (coeffs.has_singular() && std::abs(coeffs.s_coeff[ci]) > 0.0)
                        total += coeffs.s_coeff[ci] * (scale * ybuf[l] * y[lm_index(l, m)]);
                }
        }
        values[p] = total.real();
    }
    return values;
}

std::vector<double> sample_on_ball(const SpectralVelocityField& u, int component,
                                   const BallQuadrature& quad) {
    if (component < -1 || component > 2) throw Error("component must be -1, 0, 1, or 2");
    const WaveGrid& g = u.grid;
    // Gather nonzero modes once; sparse fields evaluate fast.
    struct Mode {
        double k0, k1, k2;
        cdouble value;
    };
    std::vector<Mode> modes;
    for (int a0 = 0; a0 < g.n; ++a0)
        for (int a1 = 0; a1 < g.n; ++a1)
            for (int a2 = 0; a2 < g.n; ++a2) {
                const std::size_t idx = g.index(a0, a1, a2);
                cdouble v{0.0, 0.0};
                if (component == -1)
                    v = u.coeffs[0][idx] + u.coeffs[1][idx] + u.coeffs[2][idx];
                else
                    v = u.coeffs[component][idx];
                if (std::abs(v) == 0.0) continue;
                modes.push_back({g.wavenumber(a0), g.wavenumber(a1), g.wavenumber(a2), v});
            }

    std::vector<double> samples(quad.size(), 0.0);
    for (std::size_t ir = 0; ir < quad.radii.size(); ++ir)
        for (std::size_t it = 0; it < quad.cos_theta.size(); ++it)
            for (int ip = 0; ip < quad.n_phi; ++ip) {
                const auto pt = quad.point(ir, it, ip);
                const double st = std::sin(pt.theta);
                const double x0 = pt.r * st * std::cos(pt.phi);
                const double x1 = pt.r * st * std::sin(pt.phi);
                const double x2 = pt.r * quad.cos_theta[it];
                cdouble total{0.0, 0.0};
                for (const auto& md : modes) {
                    const double arg = md.k0 * x0 + md.k1 * x1 + md.k2 * x2;
                    total += md.value * cdouble{std::cos(arg), std::sin(arg)};
                }
                samples[quad.node_index(ir, it, ip)] = total.real();
            }
    return samples;
}

EpsilonExpansion epsilon_expansion(std::span<const double> samples, const BallQuadrature& quad,
                                   int lmax, int n_radial, bool with_singular) {
    double min_sample = 0.0;
    for (double v : samples) min_sample = std::min(min_sample, v);
    if (min_sample < -1e-12)
        throw Error("dissipation-rate samples must be nonnegative (min " +
                    std::to_string(min_sample) + ")");

    const auto coeffs = expand(samples, quad, lmax, n_radial, with_singular);
    EpsilonExpansion out;
    out.lmax = lmax;
    out.radial_k = coeffs.radial_k;
    out.c_lm.assign(lm_count(lmax), cdouble{0.0, 0.0});
    out.f_kl.assign(static_cast<std::size_t>(n_radial) * (lmax + 1), 0.0);
    if (with_singular) out.s_kl.assign(static_cast<std::size_t>(n_radial) * (lmax + 1), 0.0);
    out.l_energy.assign(lmax + 1, 0.0);
    out.rank1_residual.assign(lmax + 1, 0.0);

    const int rows_per_family = n_radial;
    for (int l = 0; l <= lmax; ++l) {
        const int rows = with_singular ? 2 * rows_per_family : rows_per_family;
        Eigen::MatrixXcd table(rows, 2 * l + 1);
        for (int n = 0; n < n_radial; ++n)
            for (int m = -l; m <= l; ++m) {
                table(n, m + l) = coeffs.f_coeff[coeffs.coeff_index(n, l, m)];
                if (with_singular)
                    table(n_radial + n, m + l) = coeffs.s_coeff[coeffs.coeff_index(n, l, m)];
            }
        const double table_norm = table.norm();
        out.l_energy[l] = table_norm * table_norm;
        if (table_norm == 0.0) continue;

        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(table, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const double sigma = svd.singularValues()(0);
        Eigen::VectorXcd left = svd.matrixU().col(0) * sigma;
        Eigen::VectorXcd right = svd.matrixV().col(0);
        // Deterministic sign/phase: largest angular component real positive.
        int imax = 0;
        for (int i = 1; i < right.size(); ++i)
            if (std::abs(right(i)) > std::abs(right(imax))) imax = i;
        const cdouble pivot = right(imax);
        if (std::abs(pivot) > 0.0) {
            const cdouble rot = std::abs(pivot) / pivot;
            right *= rot;
            left *= std::conj(rot);
        }
        for (int m = -l; m <= l; ++m) out.c_lm[lm_index(l, m)] = std::conj(right(m + l));
        for (int n = 0; n < n_radial; ++n) {
            // The radial profiles of a real nonnegative field come out real
            // up to roundoff; store the real parts.
            out.f_kl[static_cast<std::size_t>(n) * (lmax + 1) + l] = left(n).real();
            if (with_singular)
                out.s_kl[static_cast<std::size_t>(n) * (lmax + 1) + l] = left(n_radial + n).real();
        }
        Eigen::MatrixXcd approx = Eigen::MatrixXcd::Zero(rows, 2 * l + 1);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < 2 * l + 1; ++c) approx(r, c) = left(r) * std::conj(right(c));
        // rank-1 model: table(n, m) = F_nl * C_lm with C = conj(right)
        out.rank1_residual[l] = (table - approx).norm() / table_norm;
    }

    // Coefficient decay across l (regularity proxy).
    std::vector<double> ls, logs;
    const double floor = 1e-24 * (*std::max_element(out.l_energy.begin(), out.l_energy.end()) + 1e-300);
    for (int l = 0; l <= lmax; ++l)
        if (out.l_energy[l] > floor) {
            ls.push_back(l);
            logs.push_back(std::log(out.l_energy[l]));
        }
    if (ls.size() < 2) {
        out.decay_flat = true;
        out.decay_slope = 0.0;
    } else {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < ls.size(); ++i) {
            sx += ls[i];
            sy += logs[i];
            sxx += ls[i] * ls[i];
            sxy += ls[i] * logs[i];
        }
        const double n = static_cast<double>(ls.size());
        out.decay_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        out.decay_flat = out.decay_slope > -0.1;
    }
    return out;
}

double young_bound(double a, double b, double p) {
    if (!(p > 1.0)) throw Error("Young's inequality requires p > 1");
    const double q = p / (p - 1.0);
    return std::pow(a, p) / p + std::pow(b, q) / q;
}

}  // namespace nslab
