#include <doctest.h>

#include <cmath>

#include "nslab/classify.hpp"
#include "nslab/dissipation.hpp"
#include "nslab/ensemble.hpp"
#include "nslab/spectral_ops.hpp"
#include "test_support.hpp"

using namespace nslab;
using test::random_field;

namespace {

/// Direct mode-pair convolution of (u.grad)u restricted to the dealiased
/// band: the independent oracle for the pseudo-spectral path (N = 8 keeps the
/// cost trivial).
SpectralVelocityField advective_by_direct_convolution(const SpectralVelocityField& u) {
    const WaveGrid& g = u.grid;
    const int limit = g.dealias_limit();
    SpectralVelocityField w(g);
    auto wrap = [&](int k) { return k >= 0 ? k : g.n + k; };
    for (int o0 = -limit; o0 <= limit; ++o0)
        for (int o1 = -limit; o1 <= limit; ++o1)
            for (int o2 = -limit; o2 <= limit; ++o2) {
                const std::size_t out = g.index(wrap(o0), wrap(o1), wrap(o2));
                for (int p0 = -limit; p0 <= limit; ++p0)
                    for (int p1 = -limit; p1 <= limit; ++p1)
                        for (int p2 = -limit; p2 <= limit; ++p2) {
                            const int q0 = o0 - p0, q1 = o1 - p1, q2 = o2 - p2;
                            if (std::abs(q0) > limit || std::abs(q1) > limit ||
                                std::abs(q2) > limit)
                                continue;
                            const std::size_t pi = g.index(wrap(p0), wrap(p1), wrap(p2));
                            const std::size_t qi = g.index(wrap(q0), wrap(q1), wrap(q2));
                            const Vec3 kq{g.wavenumber_unit() * q0, g.wavenumber_unit() * q1,
                                          g.wavenumber_unit() * q2};
                            for (int i = 0; i < 3; ++i) {
                                cdouble sum{0.0, 0.0};
                                for (int j = 0; j < 3; ++j)
                                    sum += u.coeffs[j][pi] * cdouble{0.0, kq[j]} *
                                           u.coeffs[i][qi];
                                w.coeffs[i][out] += sum;
                            }
                        }
            }
    return w;
}

}  // namespace

TEST_SUITE("dissipation-report") {
    TEST_CASE("constant fields have no turbulent terms") {
        const auto grid = make_grid(8);
        FourierWorkspace ws(8);
        TrajectorySample s;
        s.t = 0.0;
        s.u = SpectralVelocityField(grid);
        s.u.coeffs[0][0] = cdouble{2.0, 0.0};
        s.du_dt = SpectralVelocityField(grid);
        const auto rep = dissipation_report(s, 0.01, ws);
        CHECK(rep.nu_t_nl == 0.0);
        CHECK(rep.nu_t_temp == 0.0);
        CHECK(rep.nu_t == 0.0);
        CHECK(rep.nu_tot == doctest::Approx(0.01));
    }

    TEST_CASE("steady fields have zero temporal dissipation") {
        const auto grid = make_grid(16);
        FourierWorkspace ws(16);
        TrajectorySample s;
        s.t = 0.0;
        s.u = random_field(grid, 5);
        s.du_dt = SpectralVelocityField(grid);  // steady: du/dt = 0
        const auto rep = dissipation_report(s, 0.1, ws);
        CHECK(rep.nu_t_temp == 0.0);
        for (int i = 0; i < 3; ++i) CHECK(rep.temporal_component[i] == 0.0);
    }

    TEST_CASE("single-mode heat decay: aggregated temporal rate equals the viscous rate") {
        // Analytic differentiation oracle: u ~ e^{-nu k^2 t} gives
        // -<u_i d_t u_i> = nu k^2 <u_i^2>, so the index sum is nu <|grad u|^2>.
        const auto grid = make_grid(16);
        FourierWorkspace ws(16);
        const double nu = 0.07;
        auto u0 = SpectralVelocityField(grid);
        u0.coeffs[1][grid.index(2, 0, 1)] = cdouble{0.3, 0.4};
        u0.coeffs[1][grid.conjugate_index(2, 0, 1)] = cdouble{0.3, -0.4};
        const auto traj = heat_trajectory(u0, nu, 0.5, 6);
        for (const auto& s : traj.samples) {
            const auto rep = dissipation_report(s, nu, ws);
            CHECK(rep.nu_t_temp == doctest::Approx(rep.viscous_rate).epsilon(1e-12));
            CHECK(rep.nu_t_nl <= 1e-14);
            CHECK(rep.nu_t == doctest::Approx(rep.nu_t_nl + rep.nu_t_temp).epsilon(1e-15));
            CHECK(rep.nu_tot == doctest::Approx(rep.nu_t + nu).epsilon(1e-15));
        }
    }

    TEST_CASE("missing du/dt is rejected") {
        const auto grid = make_grid(8);
        FourierWorkspace ws(8);
        TrajectorySample s;
        s.u = SpectralVelocityField(grid);
        CHECK_THROWS_WITH_AS(dissipation_report(s, 0.1, ws), doctest::Contains("du/dt"), Error);
    }

    TEST_CASE("turbulent terms are nonnegative on simulated decay (monitored)") {
        SimulationConfig cfg;
        cfg.n = 16;
        cfg.nu = 0.05;
        cfg.dt = 2e-3;
        cfg.t_final = 0.1;
        cfg.init = "random-band:1,4,-1.6667,0.3";
        cfg.output_every = 10;
        const auto reports = dissipation_series(simulate(cfg));
        for (const auto& r : reports) {
            CHECK(r.nu_t_nl >= -1e-12);
            CHECK(r.nu_t_temp >= -1e-12);  // decaying run dissipates
        }
    }
}

TEST_SUITE("energy-identity") {
    TEST_CASE("exact heat trajectories have a roundoff residual") {
        const auto grid = make_grid(16);
        const auto u0 = random_field(grid, 31);
        const double nu = 0.2;
        const auto traj = heat_trajectory(u0, nu, 1.0, 8);
        for (double r : energy_identity_residual(traj, nu)) CHECK(r <= 1e-13);
    }

    TEST_CASE("inviscid residual equals the dealiasing neutrality defect") {
        SimulationConfig cfg;
        cfg.n = 16;
        cfg.nu = 0.0;
        cfg.dt = 1e-3;
        cfg.t_final = 0.02;
        cfg.init = "random-band:1,4,-2,0.2";
        cfg.output_every = 5;
        const auto traj = simulate(cfg);
        for (double r : energy_identity_residual(traj, 0.0)) CHECK(r <= 1e-12);
    }

    TEST_CASE("discrete residual converges at second order in dt") {
        auto residual_at = [](double dt) {
            SimulationConfig cfg;
            cfg.n = 16;
            cfg.nu = 0.02;
            cfg.dt = dt;
            cfg.t_final = 0.05;
            cfg.init = "random-band:1,4,-1.6667,0.25";
            cfg.seed = 17;
            cfg.store_fields = false;
            const auto traj = simulate(cfg);
            const auto res = discrete_energy_residual(traj.steps);
            return *std::max_element(res.begin(), res.end());
        };
        const double r1 = residual_at(1e-3);
        const double r2 = residual_at(5e-4);
        CHECK(r1 <= 1e-4);
        CHECK(r1 / r2 >= 3.5);
    }

    TEST_CASE("needs at least three records") {
        std::vector<StepRecord> two(2);
        CHECK_THROWS_AS(discrete_energy_residual(two), Error);
    }
}

TEST_SUITE("entropy") {
    TEST_CASE("normalized mean state evaluates to zero") {
        const auto grid = make_grid(16);
        const auto mean_state = synthesize_labeled(grid, DataLabel::Smooth, 4);
        const auto s = entropy_surrogate(mean_state, 4);
        CHECK(std::abs(s.value) <= 1e-12);
        CHECK(s.mean_weight == doctest::Approx(1.0).epsilon(1e-12));
    }

    TEST_CASE("never below zero on random states") {
        const auto grid = make_grid(16);
        for (int trial = 0; trial < 20; ++trial) {
            const auto u = random_field(grid, 9000 + trial);
            CHECK(entropy_surrogate(u, 4).value >= -1e-12);
        }
    }

    TEST_CASE("scaling the field leaves the surrogate unchanged") {
        const auto grid = make_grid(16);
        const auto u = random_field(grid, 3);
        const double base = entropy_surrogate(u, 4).value;
        auto doubled = u;
        for (int c = 0; c < 3; ++c)
            for (auto& v : doubled.coeffs[c]) v *= 2.0;
        CHECK(entropy_surrogate(doubled, 4).value == doctest::Approx(base).epsilon(1e-13));
    }

    TEST_CASE("the zero field is rejected") {
        const auto grid = make_grid(8);
        SpectralVelocityField zero(grid);
        CHECK_THROWS_WITH_AS(entropy_surrogate(zero, 2), doctest::Contains("zero field"), Error);
    }

    TEST_CASE("component-sum degeneracy falls back to per-component content") {
        // Taylor-Green has an identically zero component sum.
        const auto grid = make_grid(16);
        const auto u = initial_data("taylor-green", grid, 0);
        const auto s = entropy_surrogate(u, 2);
        CHECK(s.value >= -1e-12);
    }
}

TEST_SUITE("regularity-ledger") {
    TEST_CASE("zero trajectory gives zero norms") {
        Trajectory traj;
        traj.config.nu = 0.1;
        TrajectorySample s;
        s.t = 0.0;
        s.u = SpectralVelocityField(make_grid(8));
        s.du_dt = SpectralVelocityField(make_grid(8));
        traj.samples.push_back(s);
        s.t = 1.0;
        traj.samples.push_back(s);
        const auto ledger = regularity_ledger(traj);
        CHECK(ledger.h_norm[0] == 0.0);
        CHECK(ledger.h1_norm[0] == 0.0);
        CHECK(ledger.dtu_dual_norm[0] == 0.0);
        CHECK(ledger.advective_dual_norm[0] == 0.0);
        CHECK(ledger.dtu_l43_aggregate == 0.0);
    }

    TEST_CASE("single-mode steady ratio is the square-rooted eigenvalue") {
        const auto grid = make_grid(16);
        const double nu = 0.3;
        Trajectory traj;
        traj.config.nu = nu;
        TrajectorySample s;
        s.t = 0.0;
        s.u = SpectralVelocityField(grid);
        s.u.coeffs[2][grid.index(2, 1, 0)] = cdouble{0.4, -0.1};
        s.u.coeffs[2][grid.conjugate_index(2, 1, 0)] = cdouble{0.4, 0.1};
        s.du_dt = SpectralVelocityField(grid);
        traj.samples.push_back(s);
        const auto ledger = regularity_ledger(traj);
        const double expected = std::sqrt(nu * 5.0);  // |k|^2 = 5
        CHECK(ledger.h1_norm[0] / ledger.h_norm[0] == doctest::Approx(expected).epsilon(1e-12));
    }

    TEST_CASE("advective dual norm matches the direct convolution oracle") {
        const auto grid = make_grid(8);
        FourierWorkspace ws(8);
        for (int trial = 0; trial < 3; ++trial) {
            const auto u = random_field(grid, 60 + trial);
            const auto fft_path = advective_term(u, ws, DealiasRule::TwoThirds).field;
            const auto direct = advective_by_direct_convolution(u);
            double err = 0.0, scale = 0.0;
            for (int c = 0; c < 3; ++c)
                for (std::size_t i = 0; i < direct.coeffs[c].size(); ++i) {
                    err = std::max(err, std::abs(direct.coeffs[c][i] - fft_path.coeffs[c][i]));
                    scale = std::max(scale, std::abs(direct.coeffs[c][i]));
                }
            CHECK(err <= 1e-8 * std::max(scale, 1e-30));

            // and the ledger entry agrees with the oracle's H_{-1} sum
            Trajectory traj;
            traj.config.nu = 0.5;
            TrajectorySample s;
            s.t = 0.0;
            s.u = u;
            s.du_dt = SpectralVelocityField(grid);
            traj.samples.push_back(s);
            const auto ledger = regularity_ledger(traj);
            auto oracle_field = direct;
            for (int c = 0; c < 3; ++c) oracle_field.coeffs[c][0] = cdouble{0.0, 0.0};
            const double oracle = sobolev_norm(oracle_field, -1.0, 0.5);
            CHECK(ledger.advective_dual_norm[0] == doctest::Approx(oracle).epsilon(1e-8));
        }
    }

    TEST_CASE("aggregates are finite on a resolved run") {
        SimulationConfig cfg;
        cfg.n = 16;
        cfg.nu = 0.05;
        cfg.dt = 2e-3;
        cfg.t_final = 0.1;
        cfg.init = "random-band:1,4,-1.6667,0.3";
        cfg.output_every = 10;
        const auto traj = simulate(cfg);
        const auto ledger = regularity_ledger(traj);
        CHECK(std::isfinite(ledger.dtu_l43_aggregate));
        CHECK(std::isfinite(ledger.advective_l43_aggregate));
        CHECK(ledger.dtu_l43_aggregate > 0.0);
    }
}

TEST_SUITE("mixed-norms") {
    namespace {
    Trajectory constant_single_mode_trajectory(double amplitude, double t_final) {
        const auto grid = make_grid(16);
        Trajectory traj;
        traj.config.nu = 0.1;
        SpectralVelocityField u(grid);
        // u = (0, A sin x, 0)
        u.coeffs[1][grid.index(1, 0, 0)] = cdouble{0.0, -amplitude / 2.0};
        u.coeffs[1][grid.index(15, 0, 0)] = cdouble{0.0, amplitude / 2.0};
        for (double t : {0.0, t_final / 2.0, t_final}) {
            TrajectorySample s;
            s.t = t;
            s.u = u;
            traj.samples.push_back(std::move(s));
        }
        return traj;
    }
    }  // namespace

    TEST_CASE("(inf, 2) is the supremum of the L2 norm") {
        const auto traj = constant_single_mode_trajectory(0.7, 1.0);
        const double expected = h_norm(traj.samples[0].u);
        CHECK(mixed_norm(traj, std::numeric_limits<double>::infinity(), 2.0) ==
              doctest::Approx(expected).epsilon(1e-12));
    }

    TEST_CASE("zero field gives zero") {
        Trajectory traj;
        traj.config.nu = 0.1;
        TrajectorySample s;
        s.t = 0.0;
        s.u = SpectralVelocityField(make_grid(8));
        traj.samples.push_back(s);
        s.t = 1.0;
        traj.samples.push_back(s);
        CHECK(mixed_norm(traj, 2.0, 6.0) == 0.0);
    }

    TEST_CASE("sinusoid matches the closed-form space integral times T^{1/r}") {
        // Symbolic oracle: int_0^{2pi} |sin x|^s dx = 2 sqrt(pi)
        // Gamma((s+1)/2) / Gamma(s/2 + 1).
        const double amplitude = 1.3, t_final = 0.8;
        const auto traj = constant_single_mode_trajectory(amplitude, t_final);
        auto closed_form = [&](double s) {
            const double line_integral =
                2.0 * std::sqrt(kPi) *
                std::exp(std::lgamma((s + 1.0) / 2.0) - std::lgamma(s / 2.0 + 1.0));
            const double space = std::pow(amplitude, s) * sq(kTwoPi) * line_integral;
            return std::pow(space, 1.0 / s);
        };
        const double m46 = mixed_norm(traj, 8.0 / 3.0, 4.0);
        CHECK(m46 == doctest::Approx(closed_form(4.0) * std::pow(t_final, 3.0 / 8.0))
                         .epsilon(1e-10));
        const double m26 = mixed_norm(traj, 2.0, 6.0);
        CHECK(m26 ==
              doctest::Approx(closed_form(6.0) * std::pow(t_final, 0.5)).epsilon(1e-10));
    }

    TEST_CASE("positive homogeneity under pointwise scaling") {
        auto traj = constant_single_mode_trajectory(0.5, 1.0);
        const double base = mixed_norm(traj, 2.0, 6.0);
        for (auto& s : traj.samples)
            for (int c = 0; c < 3; ++c)
                for (auto& v : s.u.coeffs[c]) v *= 3.0;
        CHECK(mixed_norm(traj, 2.0, 6.0) == doctest::Approx(3.0 * base).epsilon(1e-12));
    }

    TEST_CASE("pairs off the admissible line are rejected with guidance") {
        const auto traj = constant_single_mode_trajectory(0.5, 1.0);
        CHECK_THROWS_WITH_AS(mixed_norm(traj, 2.0, 4.0), doctest::Contains("admissible"),
                             Error);
        CHECK_THROWS_AS(mixed_norm(traj, 8.0 / 3.0, 7.0), Error);
    }
}
