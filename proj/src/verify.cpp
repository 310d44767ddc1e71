#include "nslab/verify.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "nslab/blowup.hpp"
#include "nslab/classify.hpp"
#include "nslab/dissipation.hpp"
#include "nslab/dynamics.hpp"
#include "nslab/ensemble.hpp"
#include "nslab/rng.hpp"
#include "nslab/snapshot.hpp"
#include "nslab/spectral_ops.hpp"

namespace nslab {

namespace {

SpectralVelocityField random_field(const WaveGrid& grid, std::uint64_t seed) {
    std::vector<double> shells(static_cast<std::size_t>(grid.dealias_limit()) + 1, 0.0);
    for (std::size_t s = 1; s < shells.size(); ++s) shells[s] = 1.0 / (1.0 + s);
    return random_shell_field(grid, shells, seed);
}

struct Check {
    const char* name;
    std::function<void(std::ostringstream&)> run;  // throws on failure
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(what);
}

}  // namespace

int run_verify(std::ostream& out) {
    const std::vector<Check> checks = {
        {"grid-validation",
         [](std::ostringstream&) {
             const auto g = make_grid(4, kTwoPi);
             require(g.signed_index(3) == -1 && g.signed_index(2) == 2, "index map");
             const auto g2 = make_grid(32, 1.0);
             require(std::abs(g2.wavenumber(1) - kTwoPi) < 1e-14, "kappa = 2 pi k / L");
             bool threw = false;
             try {
                 make_grid(3, kTwoPi);
             } catch (const Error&) {
                 threw = true;
             }
             require(threw, "odd N must be rejected");
         }},
        {"transform-round-trip",
         [](std::ostringstream&) {
             const auto grid = make_grid(16);
             FourierWorkspace ws(16);
             const auto u = random_field(grid, 11);
             const auto phys = to_physical(u, ws);
             const auto back = from_physical(grid, phys, ws);
             double err = 0.0, scale = 0.0;
             for (int c = 0; c < 3; ++c)
                 for (std::size_t i = 0; i < u.coeffs[c].size(); ++i) {
                     err = std::max(err, std::abs(back.coeffs[c][i] - u.coeffs[c][i]));
                     scale = std::max(scale, std::abs(u.coeffs[c][i]));
                 }
             require(err <= 1e-13 * scale, "round trip above 1e-13");
         }},
        {"leray-projector",
         [](std::ostringstream&) {
             const auto grid = make_grid(16);
             auto u = random_field(grid, 21);
             // break divergence-freedom deliberately
             u.coeffs[0][grid.index(1, 2, 3)] += cdouble{0.3, -0.1};
             u.coeffs[0][grid.conjugate_index(1, 2, 3)] += cdouble{0.3, 0.1};
             const auto p1 = leray_project(u);
             const auto p2 = leray_project(p1);
             require(divergence_residual(p1) <= 1e-12, "projection leaves divergence");
             SpectralVelocityField diff = p2;
             for (int c = 0; c < 3; ++c)
                 for (std::size_t i = 0; i < diff.coeffs[c].size(); ++i)
                     diff.coeffs[c][i] -= p1.coeffs[c][i];
             require(h_norm(diff) <= 1e-12 * h_norm(p1), "projector not idempotent");
         }},
        {"stokes-powers",
         [](std::ostringstream&) {
             const auto grid = make_grid(16);
             const auto u = remove_drift(random_field(grid, 31));
             const auto a = stokes_apply(stokes_apply(u, 0.5, 2.0), 0.5, 2.0);
             const auto b = stokes_apply(u, 1.0, 2.0);
             double err = 0.0;
             for (int c = 0; c < 3; ++c)
                 for (std::size_t i = 0; i < a.coeffs[c].size(); ++i)
                     err = std::max(err, std::abs(a.coeffs[c][i] - b.coeffs[c][i]));
             require(err <= 1e-12 * h_norm(u), "fractional powers fail to compose");
         }},
        {"sobolev-cauchy-schwarz",
         [](std::ostringstream&) {
             const auto grid = make_grid(16);
             for (int trial = 0; trial < 5; ++trial) {
                 const auto u = remove_drift(random_field(grid, 41 + trial));
                 const double h = h_norm(u);
                 const double h1 = sobolev_norm(u, 1.0, 0.7);
                 const double hm1 = sobolev_norm(u, -1.0, 0.7);
                 require(h1 * hm1 >= h * h * (1.0 - 1e-12), "interpolation inequality");
             }
         }},
        {"gradients-curl",
         [](std::ostringstream&) {
             const auto grid = make_grid(16);
             const auto u = initial_data("single-mode:1,0,0:0,1,0", grid, 0);
             const auto grads = field_gradients(u);
             // u = (0, cos x, 0) => omega = (0, 0, -sin x)
             const auto idx = grid.index(1, 0, 0);
             require(std::abs(grads.vorticity.coeffs[2][idx] - cdouble{0.0, 0.5}) < 1e-14,
                     "curl coefficient");
         }},
        {"taylor-green-nonlinear",
         [](std::ostringstream&) {
             const auto grid = make_grid(32);
             FourierWorkspace ws(32);
             const auto u = initial_data("taylor-green", grid, 0);
             const auto nl = nonlinear_term(u, ws, DealiasRule::TwoThirds);
             require(h_norm(nl) <= 1e-12, "Taylor-Green projected advection must vanish");
         }},
        {"nonlinear-energy-neutrality",
         [](std::ostringstream&) {
             const auto grid = make_grid(16);
             FourierWorkspace ws(16);
             for (int trial = 0; trial < 10; ++trial) {
                 const auto u = random_field(grid, 100 + trial);
                 const auto nl = nonlinear_term(u, ws, DealiasRule::TwoThirds);
                 const double pairing = std::abs(h_inner(nl, u));
                 const double scale = sq(sobolev_norm(u, 1.0, 1.0));
                 require(pairing <= 1e-12 * scale, "advection pairing above tolerance");
             }
         }},
        {"taylor-green-decay",
         [](std::ostringstream&) {
             SimulationConfig cfg;
             cfg.n = 16;
             cfg.nu = 0.05;
             cfg.dt = 1e-3;
             cfg.t_final = 0.05;
             cfg.output_every = 10;
             const auto traj = simulate(cfg);
             const double h0 = h_norm(traj.samples.front().u);
             for (const auto& s : traj.samples) {
                 const double expected = h0 * std::exp(-2.0 * cfg.nu * s.t);
                 require(std::abs(h_norm(s.u) - expected) <= 1e-8 * h0,
                         "analytic decay violated");
             }
         }},
        {"bessel-closed-forms",
         [](std::ostringstream&) {
             for (double x : {0.1, 1.0, 7.5, 40.0}) {
                 const auto b0 = spherical_bessel(0, x);
                 require(std::abs(b0.j - std::sin(x) / x) <= 1e-13, "j0");
                 require(std::abs(b0.y + std::cos(x) / x) <= 1e-13, "y0");
                 for (int l : {1, 5, 10}) {
                     const auto b = spherical_bessel(l, x);
                     const auto d = spherical_bessel_derivative(l, x);
                     const double wronskian = b.j * d.y - d.j * b.y;
                     require(std::abs(wronskian - 1.0 / (x * x)) <= 1e-10 / (x * x),
                             "Wronskian identity");
                 }
             }
         }},
        {"ylm-orthonormality",
         [](std::ostringstream&) {
             require(std::abs(ylm(0, 0, 0.3, 0.7) - cdouble{1.0 / std::sqrt(4.0 * kPi), 0.0}) <
                         1e-14,
                     "Y00 constant");
             const double theta = 1.1;
             require(std::abs(ylm(1, 0, theta, 0.0) -
                              cdouble{std::sqrt(3.0 / (4.0 * kPi)) * std::cos(theta), 0.0}) <
                         1e-14,
                     "Y10 closed form");
             const int lmax = 4;
             const int nlm = lm_count(lmax);
             const int nt = 2 * (lmax + 1), np = 2 * lmax + 2;
             std::vector<double> ct(nt), wt(nt);
             gauss_legendre(nt, ct, wt);
             std::vector<cdouble> a(nlm);
             std::vector<cdouble> gram(static_cast<std::size_t>(nlm) * nlm, cdouble{0.0, 0.0});
             for (int it = 0; it < nt; ++it) {
                 const double th = std::acos(ct[it]);
                 for (int ip = 0; ip < np; ++ip) {
                     ylm_array(lmax, th, kTwoPi * ip / np, a);
                     const double w = wt[it] * kTwoPi / np;
                     for (int i = 0; i < nlm; ++i)
                         for (int j = 0; j < nlm; ++j)
                             gram[static_cast<std::size_t>(i) * nlm + j] +=
                                 w * std::conj(a[i]) * a[j];
                 }
             }
             double worst = 0.0;
             for (int i = 0; i < nlm; ++i)
                 for (int j = 0; j < nlm; ++j) {
                     const double expected = i == j ? 1.0 : 0.0;
                     worst = std::max(
                         worst, std::abs(gram[static_cast<std::size_t>(i) * nlm + j] - expected));
                 }
             require(worst <= 1e-10, "Gram deviation above 1e-10");
         }},
        {"expand-round-trip",
         [](std::ostringstream&) {
             const int lmax = 2, n_radial = 3;
             const double radius = kPi;
             const auto quad = default_ball_quadrature(lmax, n_radial, radius);
             HarmonicCoefficients truth;
             truth.lmax = lmax;
             truth.ball_radius = radius;
             truth.radial_k = {kPi / radius, 2.0 * kPi / radius, 3.0 * kPi / radius};
             truth.f_coeff.assign(n_radial * lm_count(lmax), cdouble{0.0, 0.0});
             truth.f_coeff[truth.coeff_index(1, 1, 0)] = cdouble{0.8, 0.0};
             truth.f_coeff[truth.coeff_index(0, 2, 1)] = cdouble{0.2, 0.1};
             truth.f_coeff[truth.coeff_index(0, 2, -1)] = cdouble{-0.2, 0.1};
             std::vector<SphericalPoint> nodes;
             for (std::size_t ir = 0; ir < quad.radii.size(); ++ir)
                 for (std::size_t it = 0; it < quad.cos_theta.size(); ++it)
                     for (int ip = 0; ip < quad.n_phi; ++ip)
                         nodes.push_back(quad.point(ir, it, ip));
             const auto samples = reconstruct(truth, nodes);
             const auto fitted = expand(samples, quad, lmax, n_radial);
             double err = 0.0;
             for (std::size_t i = 0; i < truth.f_coeff.size(); ++i)
                 err = std::max(err, std::abs(fitted.f_coeff[i] - truth.f_coeff[i]));
             require(err <= 1e-8, "expansion recovery above 1e-8");
         }},
        {"classifier-closure",
         [](std::ostringstream&) {
             const auto grid = make_grid(16);
             for (int lmax : {1, 2}) {
                 for (auto label : {DataLabel::Smooth, DataLabel::Turbulent,
                                    DataLabel::StrictlyTurbulent}) {
                     const auto u = synthesize_labeled(grid, label, lmax);
                     require(classify_initial_data(u, lmax).label == label,
                             "closure failed for " + to_string(label));
                 }
             }
         }},
        {"entropy-surrogate",
         [](std::ostringstream&) {
             const auto grid = make_grid(16);
             const auto mean_state = synthesize_labeled(grid, DataLabel::Smooth, 4);
             const auto s = entropy_surrogate(mean_state, 4);
             require(std::abs(s.value) <= 1e-12, "mean state entropy must be 0");
             for (int trial = 0; trial < 5; ++trial) {
                 const auto u = random_field(grid, 500 + trial);
                 require(entropy_surrogate(u, 4).value >= -1e-12, "entropy below zero");
             }
             auto scaled_field = mean_state;
             for (int c = 0; c < 3; ++c)
                 for (auto& v : scaled_field.coeffs[c]) v *= 2.0;
             require(std::abs(entropy_surrogate(scaled_field, 4).value - s.value) <= 1e-12,
                     "entropy not scale invariant");
         }},
        {"heat-semigroup",
         [](std::ostringstream&) {
             const auto grid = make_grid(16);
             const auto u = random_field(grid, 77);
             const auto a = heat_solution(heat_solution(u, 0.3, 0.4), 0.3, 0.6);
             const auto b = heat_solution(u, 0.3, 1.0);
             double err = 0.0;
             for (int c = 0; c < 3; ++c)
                 for (std::size_t i = 0; i < a.coeffs[c].size(); ++i)
                     err = std::max(err, std::abs(a.coeffs[c][i] - b.coeffs[c][i]));
             require(err <= 1e-14, "semigroup law violated");
         }},
        {"excluded-region-geometry",
         [](std::ostringstream&) {
             const auto t = excluded_region_time(1.0, 0.2, 0.4);
             require(t && std::abs(*t - 2.0) <= 1e-15, "affine intersection");
             require(!excluded_region_time(1.0, 0.2, 0.0), "parallel lines must return none");
             require(!excluded_region_time(1.0, 0.2, -0.1), "diverging lines must return none");
         }},
        {"decay-law-bounds",
         [](std::ostringstream&) {
             std::vector<double> times, nu_t;
             for (int i = 0; i < 12; ++i) {
                 times.push_back(0.1 * i);
                 nu_t.push_back(1.0 - 0.3 * 0.1 * i);
             }
             const auto bounds = decay_law_bounds(times, nu_t);
             require(std::abs(bounds.d_min - 0.3) <= 1e-12, "affine slope");
             require(std::abs(bounds.nu_t_floor - (1.0 - 0.3 * 1.1)) <= 1e-12, "affine floor");
         }},
        {"spectrum-fit-recovery",
         [](std::ostringstream&) {
             std::vector<double> shells(22, 0.0);
             const double delta = 0.5;
             for (std::size_t s = 1; s < shells.size(); ++s)
                 shells[s] = std::pow(static_cast<double>(s), 4.0) *
                             std::exp(-2.0 * delta * s);
             const auto fit = fit_spectral_decay(shells, 1.0);
             require(fit.exponential, "synthetic spectrum must fit");
             require(std::abs(fit.delta - delta) <= 0.05 * delta, "width recovery above 5%");
         }},
        {"snapshot-round-trip",
         [](std::ostringstream&) {
             namespace fs = std::filesystem;
             const auto dir = fs::temp_directory_path() / "nslab-verify";
             fs::create_directories(dir);
             const auto grid = make_grid(8);
             const auto u = random_field(grid, 3);
             const auto path = dir / "trip.nssf";
             save_field(u, 0.01, path);
             const auto snap = load_field(path);
             for (int c = 0; c < 3; ++c)
                 for (std::size_t i = 0; i < u.coeffs[c].size(); ++i)
                     require(snap.field.coeffs[c][i] == u.coeffs[c][i], "round trip not bitwise");
             fs::remove(path);
         }},
    };

    int failures = 0;
    for (const auto& check : checks) {
        std::ostringstream detail;
        try {
            check.run(detail);
            out << "[PASS] " << check.name;
            if (!detail.str().empty()) out << " " << detail.str();
            out << "\n";
        } catch (const std::exception& e) {
            ++failures;
            out << "[FAIL] " << check.name << ": " << e.what() << "\n";
        }
    }
    out << (failures == 0 ? "verify: all checks passed\n"
                          : "verify: " + std::to_string(failures) + " check(s) failed\n");
    return failures;
}

}  // namespace nslab
