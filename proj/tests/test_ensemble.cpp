#include <doctest.h>

#include <cmath>

#include "nslab/dissipation.hpp"
#include "nslab/ensemble.hpp"
#include "nslab/spectral_ops.hpp"
#include "test_support.hpp"

using namespace nslab;
using test::max_coeff_difference;
using test::random_field;

TEST_SUITE("heat-solution") {
    TEST_CASE("t = 0 is the identity and single modes decay by the closed form") {
        const auto grid = make_grid(16);
        const auto u = random_field(grid, 2);
        CHECK(max_coeff_difference(heat_solution(u, 0.01, 0.0), u) == 0.0);

        SpectralVelocityField m(grid);
        m.coeffs[2][grid.index(1, 1, 0)] = cdouble{1.0, 0.0};  // |k|^2 = 2
        const auto ht = heat_solution(m, 0.01, 1.0);
        CHECK(std::abs(ht.coeffs[2][grid.index(1, 1, 0)]) ==
              doctest::Approx(std::exp(-0.02)).epsilon(1e-14));
    }

    TEST_CASE("linearity and the semigroup law hold exactly") {
        const auto grid = make_grid(16);
        const auto u = random_field(grid, 3);
        const auto v = random_field(grid, 4);
        SpectralVelocityField combo(grid);
        for (int c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < combo.coeffs[c].size(); ++i)
                combo.coeffs[c][i] = 2.0 * u.coeffs[c][i] - 0.5 * v.coeffs[c][i];
        const auto left = heat_solution(combo, 0.1, 0.7);
        SpectralVelocityField right(grid);
        const auto hu = heat_solution(u, 0.1, 0.7);
        const auto hv = heat_solution(v, 0.1, 0.7);
        for (int c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < right.coeffs[c].size(); ++i)
                right.coeffs[c][i] = 2.0 * hu.coeffs[c][i] - 0.5 * hv.coeffs[c][i];
        CHECK(max_coeff_difference(left, right) <= 1e-15);

        const auto chained = heat_solution(heat_solution(u, 0.1, 0.3), 0.1, 0.4);
        CHECK(max_coeff_difference(chained, hu) <= 1e-15);
    }

    TEST_CASE("negative times are rejected") {
        const auto grid = make_grid(8);
        CHECK_THROWS_AS(heat_solution(SpectralVelocityField(grid), 0.1, -1.0), Error);
    }
}

TEST_SUITE("ensemble-mean") {
    namespace {
    Trajectory tiny_trajectory(const SpectralVelocityField& u0, double sign) {
        Trajectory traj;
        traj.config.nu = 0.0;
        for (double t : {0.0, 0.5}) {
            TrajectorySample s;
            s.t = t;
            s.u = u0;
            for (int c = 0; c < 3; ++c)
                for (auto& v : s.u.coeffs[c]) v *= sign;
            traj.samples.push_back(std::move(s));
        }
        return traj;
    }
    }  // namespace

    TEST_CASE("a single trajectory is its own mean") {
        const auto grid = make_grid(8);
        const auto u = random_field(grid, 5);
        const auto traj = tiny_trajectory(u, 1.0);
        const auto mean = ensemble_mean(std::vector<Trajectory>{traj});
        CHECK(max_coeff_difference(mean.samples[0].u, traj.samples[0].u) == 0.0);
    }

    TEST_CASE("opposite members cancel") {
        const auto grid = make_grid(8);
        const auto u = random_field(grid, 6);
        std::vector<Trajectory> members{tiny_trajectory(u, 1.0), tiny_trajectory(u, -1.0)};
        const auto mean = ensemble_mean(members);
        CHECK(h_norm(mean.samples[0].u) == 0.0);
        CHECK(h_norm(mean.samples[1].u) == 0.0);
    }

    TEST_CASE("the mean commutes with the linear spectral operators") {
        const auto grid = make_grid(16);
        std::vector<Trajectory> members;
        for (int i = 0; i < 4; ++i) {
            auto u = random_field(grid, 100 + i);
            // push off the divergence-free subspace so the projector acts
            u.coeffs[0][grid.index(1, 2, 0)] += cdouble{0.2, 0.1};
            u.coeffs[0][grid.conjugate_index(1, 2, 0)] += cdouble{0.2, -0.1};
            members.push_back(tiny_trajectory(u, 1.0));
        }
        const auto mean = ensemble_mean(members);

        // project-then-average equals average-then-project
        SpectralVelocityField avg_proj(grid);
        for (const auto& m : members) {
            const auto p = leray_project(m.samples[0].u);
            for (int c = 0; c < 3; ++c)
                for (std::size_t i = 0; i < avg_proj.coeffs[c].size(); ++i)
                    avg_proj.coeffs[c][i] += p.coeffs[c][i] / 4.0;
        }
        CHECK(max_coeff_difference(avg_proj, leray_project(mean.samples[0].u)) <= 1e-15);

        // same for a fractional Stokes power
        SpectralVelocityField avg_stokes(grid);
        for (const auto& m : members) {
            const auto p = stokes_apply(m.samples[0].u, 0.5, 0.7);
            for (int c = 0; c < 3; ++c)
                for (std::size_t i = 0; i < avg_stokes.coeffs[c].size(); ++i)
                    avg_stokes.coeffs[c][i] += p.coeffs[c][i] / 4.0;
        }
        CHECK(max_coeff_difference(avg_stokes, stokes_apply(mean.samples[0].u, 0.5, 0.7)) <=
              1e-14);
    }

    TEST_CASE("mismatched grids and times are rejected") {
        const auto a = tiny_trajectory(random_field(make_grid(8), 1), 1.0);
        auto b = tiny_trajectory(random_field(make_grid(16), 1), 1.0);
        CHECK_THROWS_AS(ensemble_mean(std::vector<Trajectory>{a, b}), Error);
        auto c = tiny_trajectory(random_field(make_grid(8), 1), 1.0);
        c.samples[1].t = 0.75;
        CHECK_THROWS_AS(ensemble_mean(std::vector<Trajectory>{a, c}), Error);
    }
}

TEST_SUITE("ensemble-members") {
    TEST_CASE("members are deterministic given the spec seed") {
        EnsembleSpec spec;
        spec.seed = 9;
        spec.base_init = "random-band:1,3,-1.6667,0.1";
        const auto grid = make_grid(16);
        const auto a = member_initial_field(spec, grid, 3);
        const auto b = member_initial_field(spec, grid, 3);
        CHECK(max_coeff_difference(a, b) == 0.0);
        const auto c = member_initial_field(spec, grid, 4);
        CHECK(max_coeff_difference(a, c) > 0.0);
    }

    TEST_CASE("random-phase members share shell energies exactly") {
        EnsembleSpec spec;
        spec.seed = 1;
        spec.base_init = "random-band:1,4,-1.6667,0.2";
        const auto grid = make_grid(16);
        const auto a = member_initial_field(spec, grid, 0);
        const auto b = member_initial_field(spec, grid, 1);
        const auto sa = shell_spectrum(a);
        const auto sb = shell_spectrum(b);
        for (std::size_t s = 0; s < sa.size(); ++s)
            CHECK(sa[s] == doctest::Approx(sb[s]).epsilon(1e-12));
        CHECK(divergence_residual(a) <= 1e-13);
        CHECK(mean_velocity_magnitude(a) == 0.0);
    }

    TEST_CASE("sign-flip pairs average to the base field") {
        EnsembleSpec spec;
        spec.seed = 5;
        spec.perturbation = Perturbation::SignFlip;
        spec.amplitude = 0.3;
        spec.base_init = "random-band:1,3,-2,0.1";
        const auto grid = make_grid(16);
        const auto base = initial_data(spec.base_init, grid, spec.seed);
        const auto plus = member_initial_field(spec, grid, 0);
        const auto minus = member_initial_field(spec, grid, 1);
        SpectralVelocityField avg(grid);
        for (int c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < avg.coeffs[c].size(); ++i)
                avg.coeffs[c][i] = 0.5 * (plus.coeffs[c][i] + minus.coeffs[c][i]);
        CHECK(max_coeff_difference(avg, base) <= 1e-15);
    }
}

TEST_SUITE("mean-heat") {
    TEST_CASE("sign-flip pair about zero: deviation is second order in the amplitude") {
        // Perturbation-expansion oracle: members +-delta have a mean with no
        // odd-order terms, so halving delta divides the deviation by about 4.
        auto deviation_at = [](double amplitude) {
            EnsembleSpec spec;
            spec.count = 2;
            spec.perturbation = Perturbation::SignFlip;
            spec.amplitude = amplitude;
            spec.base_init = "random-band:1,2,-2,0.0";  // base is the zero field
            spec.seed = 21;
            spec.config.n = 16;
            spec.config.nu = 0.05;
            spec.config.dt = 5e-3;
            spec.config.t_final = 0.1;
            spec.config.init = spec.base_init;
            spec.config.output_every = 10;
            const auto report = mean_heat_deviation(spec, {2});
            return report.deviation_metric[0];
        };
        const double d1 = deviation_at(0.2);
        const double d2 = deviation_at(0.1);
        CHECK(d1 > 0.0);
        const double order = std::log2(d1 / d2);
        CHECK(order >= 1.7);
        CHECK(order <= 2.4);
    }

    TEST_CASE("single-member deviation measures the nonlinear transfer") {
        EnsembleSpec spec;
        spec.count = 1;
        spec.perturbation = Perturbation::RandomPhase;
        spec.base_init = "random-band:1,3,-1.6667,0.2";
        spec.seed = 2;
        spec.config.n = 16;
        spec.config.nu = 0.05;
        spec.config.dt = 5e-3;
        spec.config.t_final = 0.1;
        spec.config.init = spec.base_init;
        spec.config.output_every = 10;
        const auto report = mean_heat_deviation(spec, {1});
        // one member: the mean is the trajectory itself; the deviation from
        // pure heat flow is exactly its nonlinear departure, nonzero
        CHECK(report.deviation_metric[0] > 1e-8);
        CHECK(report.deviation_series[0][0] == 0.0);  // exact at t = 0
    }

    TEST_CASE("initial data is achieved continuously in H") {
        EnsembleSpec spec;
        spec.count = 4;
        spec.base_init = "random-band:1,3,-1.6667,0.1";
        spec.seed = 8;
        spec.config.n = 16;
        spec.config.nu = 0.02;
        spec.config.dt = 1e-3;
        spec.config.t_final = 0.064;
        spec.config.init = spec.base_init;
        spec.config.output_every = 16;
        const auto result = run_ensemble(spec);
        // || M(u)(t) - M(u0) ||_H decays linearly as t -> 0
        std::vector<double> drift;
        for (std::size_t s = 1; s < result.times.size(); ++s) {
            SpectralVelocityField diff = result.mean_u[s];
            for (int c = 0; c < 3; ++c)
                for (std::size_t i = 0; i < diff.coeffs[c].size(); ++i)
                    diff.coeffs[c][i] -= result.mean_initial.coeffs[c][i];
            drift.push_back(h_norm(diff) / result.times[s]);
        }
        // the ratio ||M(t)-M(0)||/t stays bounded (O(t) continuity)
        for (double d : drift) CHECK(d <= 2.0 * drift.back() + 1e-9);
    }

    TEST_CASE("advective magnitude of the exact heat flow decays with the band envelope") {
        // Quadratic functional of an exponentially decaying field: a single
        // shell |k|^2 = const decays like e^{-2 nu |k|^2 t} exactly.
        const auto grid = make_grid(16);
        FourierWorkspace ws(16);
        SpectralVelocityField u0(grid);
        u0.coeffs[2][grid.index(1, 1, 0)] = cdouble{0.2, 0.1};
        u0.coeffs[2][grid.conjugate_index(1, 1, 0)] = cdouble{0.2, -0.1};
        u0.coeffs[0][grid.index(0, 1, 1)] = cdouble{-0.1, 0.3};
        u0.coeffs[0][grid.conjugate_index(0, 1, 1)] = cdouble{-0.1, -0.3};
        const double nu = 0.1;
        const double norm0 = h_norm(advective_term(u0, ws, DealiasRule::TwoThirds).field);
        for (double t : {0.5, 1.0}) {
            const auto ut = heat_solution(u0, nu, t);
            const double norm_t = h_norm(advective_term(ut, ws, DealiasRule::TwoThirds).field);
            CHECK(norm_t == doctest::Approx(norm0 * std::exp(-2.0 * nu * 2.0 * t)).epsilon(1e-10));
        }
    }

    TEST_CASE("deterministic ensembles reproduce the single-run dissipation") {
        EnsembleSpec spec;
        spec.count = 3;
        spec.perturbation = Perturbation::BandNoise;
        spec.amplitude = 0.0;  // identical members
        spec.base_init = "random-band:1,3,-1.6667,0.2";
        spec.seed = 13;
        spec.config.n = 16;
        spec.config.nu = 0.05;
        spec.config.dt = 5e-3;
        spec.config.t_final = 0.05;
        spec.config.init = spec.base_init;
        spec.config.output_every = 5;
        const auto result = run_ensemble(spec);

        SimulationConfig single = spec.config;
        single.seed = spec.seed;
        const auto traj = simulate(single, initial_data(spec.base_init, make_grid(16), spec.seed));
        const auto reports = dissipation_series(traj);
        REQUIRE(reports.size() == result.mean_nu_t_nl.size());
        for (std::size_t s = 0; s < reports.size(); ++s) {
            CHECK(result.mean_nu_t_nl[s] == doctest::Approx(reports[s].nu_t_nl).epsilon(1e-12));
            CHECK(result.mean_nu_t_temp[s] ==
                  doctest::Approx(reports[s].nu_t_temp).epsilon(1e-12));
        }
    }
}
