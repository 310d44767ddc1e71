#include "nslab/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "nslab/spectral_ops.hpp"

namespace nslab {

Scheme parse_scheme(const std::string& name) {
    if (name == "etd-rk2") return Scheme::EtdRk2;
    if (name == "imex-cn") return Scheme::ImexCn;
    throw Error("unknown scheme '" + name + "' (expected etd-rk2 or imex-cn)");
}

DealiasRule parse_dealias(const std::string& name) {
    if (name == "two-thirds") return DealiasRule::TwoThirds;
    if (name == "none") return DealiasRule::None;
    throw Error("unknown dealias rule '" + name + "' (expected two-thirds or none)");
}

std::string to_string(Scheme s) { return s == Scheme::EtdRk2 ? "etd-rk2" : "imex-cn"; }
std::string to_string(DealiasRule d) { return d == DealiasRule::TwoThirds ? "two-thirds" : "none"; }

void SimulationConfig::validate() const {
    if (n < 4 || n % 2 != 0) throw Error("config: n must be even and >= 4");
    if (!(length > 0.0)) throw Error("config: length must be positive");
    if (nu < 0.0) throw Error("config: nu must be nonnegative");
    if (!(dt > 0.0)) throw Error("config: dt must be positive");
    if (!(t_final > dt)) throw Error("config: t-final must exceed dt");
    if (output_every < 1) throw Error("config: output-every must be >= 1");
    if (forcing && !forcing->empty() && *forcing != "0" && *forcing != "zero")
        throw Error("config: nonzero stirring force is not supported (f = 0)");
}

std::size_t SimulationConfig::step_count() const {
    return static_cast<std::size_t>(std::llround(t_final / dt));
}

namespace {

void apply_mask(SpectralVelocityField& u, DealiasRule dealias) {
    if (dealias == DealiasRule::TwoThirds)
        dealias_two_thirds(u);
    else
        zero_nyquist(u);
}

}  // namespace

AdvectiveTerm advective_term(const SpectralVelocityField& u, FourierWorkspace& ws,
                             DealiasRule dealias) {
    const WaveGrid& g = u.grid;
    const std::size_t count = g.size();

    // u and its nine gradients in physical space.
    const auto uphys = to_physical(u, ws);
    std::array<std::vector<double>, 9> dphys;
    {
        std::vector<cdouble> scratch(count), phys(count);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                for (int a0 = 0; a0 < g.n; ++a0)
                    for (int a1 = 0; a1 < g.n; ++a1) {
                        std::size_t idx = g.index(a0, a1, 0);
                        for (int a2 = 0; a2 < g.n; ++a2, ++idx) {
                            const double kj = j == 0   ? g.wavenumber(a0)
                                              : j == 1 ? g.wavenumber(a1)
                                                       : g.wavenumber(a2);
                            scratch[idx] = cdouble{0.0, kj} * u.coeffs[i][idx];
                        }
                    }
                ws.inverse(scratch, phys);
                auto& d = dphys[3 * i + j];
                d.resize(count);
                for (std::size_t idx = 0; idx < count; ++idx) d[idx] = phys[idx].real();
            }
    }

    double vmax2 = 0.0;
    std::array<std::vector<double>, 3> w;
    for (int i = 0; i < 3; ++i) w[i].assign(count, 0.0);
    for (std::size_t idx = 0; idx < count; ++idx) {
        const double u0 = uphys[0][idx], u1 = uphys[1][idx], u2 = uphys[2][idx];
        vmax2 = std::max(vmax2, u0 * u0 + u1 * u1 + u2 * u2);
        for (int i = 0; i < 3; ++i)
            w[i][idx] = u0 * dphys[3 * i + 0][idx] + u1 * dphys[3 * i + 1][idx] +
                        u2 * dphys[3 * i + 2][idx];
    }

    AdvectiveTerm out{from_physical(g, w, ws), std::sqrt(vmax2)};
    out.field.time_tag = u.time_tag;
    apply_mask(out.field, dealias);
    return out;
}

SpectralVelocityField nonlinear_term(const SpectralVelocityField& u, FourierWorkspace& ws,
                                     DealiasRule dealias) {
    return leray_project(advective_term(u, ws, dealias).field);
}

SpectralVelocityField navier_stokes_rhs(const SpectralVelocityField& u, double nu,
                                        FourierWorkspace& ws, DealiasRule dealias) {
    SpectralVelocityField rhs = nonlinear_term(u, ws, dealias);
    const WaveGrid& g = u.grid;
    for (int a0 = 0; a0 < g.n; ++a0)
        for (int a1 = 0; a1 < g.n; ++a1) {
            std::size_t idx = g.index(a0, a1, 0);
            const double k0 = g.wavenumber(a0), k1 = g.wavenumber(a1);
            for (int a2 = 0; a2 < g.n; ++a2, ++idx) {
                const double k2 = g.wavenumber(a2);
                const double lap = -(k0 * k0 + k1 * k1 + k2 * k2);
                for (int c = 0; c < 3; ++c)
                    rhs.coeffs[c][idx] = nu * lap * u.coeffs[c][idx] - rhs.coeffs[c][idx];
            }
        }
    return rhs;
}

namespace {

std::vector<double> viscous_decay_factors(const WaveGrid& g, double nu, double dt) {
    std::vector<double> e(g.size());
    for (int a0 = 0; a0 < g.n; ++a0)
        for (int a1 = 0; a1 < g.n; ++a1) {
            std::size_t idx = g.index(a0, a1, 0);
            const double k0 = g.wavenumber(a0), k1 = g.wavenumber(a1);
            for (int a2 = 0; a2 < g.n; ++a2, ++idx) {
                const double k2 = g.wavenumber(a2);
                e[idx] = std::exp(-nu * (k0 * k0 + k1 * k1 + k2 * k2) * dt);
            }
        }
    return e;
}

struct Integrator {
    const SimulationConfig& cfg;
    WaveGrid grid;
    FourierWorkspace& ws;
    std::vector<double> decay;        // etd-rk2 integrating factors
    std::vector<double> cn_num, cn_den;  // imex-cn (1 -+ nu k^2 dt/2)
    std::optional<SpectralVelocityField> prev_nonlinear;  // for CNAB2

    Integrator(const SimulationConfig& c, const WaveGrid& g, FourierWorkspace& w)
        : cfg(c), grid(g), ws(w) {
        if (cfg.scheme == Scheme::EtdRk2) {
            decay = viscous_decay_factors(g, cfg.nu, cfg.dt);
        } else {
            cn_num.resize(g.size());
            cn_den.resize(g.size());
            for (int a0 = 0; a0 < g.n; ++a0)
                for (int a1 = 0; a1 < g.n; ++a1) {
                    std::size_t idx = g.index(a0, a1, 0);
                    const double k0 = g.wavenumber(a0), k1 = g.wavenumber(a1);
                    for (int a2 = 0; a2 < g.n; ++a2, ++idx) {
                        const double k2 = g.wavenumber(a2);
                        const double half = 0.5 * cfg.nu * (k0 * k0 + k1 * k1 + k2 * k2) * cfg.dt;
                        cn_num[idx] = 1.0 - half;
                        cn_den[idx] = 1.0 / (1.0 + half);
                    }
                }
        }
    }

    void check_cfl(double max_velocity) const {
        if (max_velocity <= 0.0) return;
        const double limit = cfg.advective_cfl * grid.spacing() / max_velocity;
        if (cfg.dt > limit) throw CflError(cfg.dt, limit, max_velocity);
    }

    SpectralVelocityField advance(const SpectralVelocityField& u, double* max_velocity_out) {
        if (cfg.scheme == Scheme::EtdRk2) return advance_etdrk2(u, max_velocity_out);
        return advance_cnab2(u, max_velocity_out);
    }

    SpectralVelocityField advance_etdrk2(const SpectralVelocityField& u, double* vmax_out) {
        const double dt = cfg.dt;
        auto adv = advective_term(u, ws, cfg.dealias);
        if (vmax_out) *vmax_out = adv.max_velocity;
        check_cfl(adv.max_velocity);
        SpectralVelocityField n1 = leray_project(adv.field);

        SpectralVelocityField mid(grid);
        for (int c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < mid.coeffs[c].size(); ++i)
                mid.coeffs[c][i] = decay[i] * (u.coeffs[c][i] - dt * n1.coeffs[c][i]);

        SpectralVelocityField n2 = nonlinear_term(mid, ws, cfg.dealias);

        SpectralVelocityField next(grid);
        for (int c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < next.coeffs[c].size(); ++i)
                next.coeffs[c][i] = decay[i] * u.coeffs[c][i] -
                                    0.5 * dt * (decay[i] * n1.coeffs[c][i] + n2.coeffs[c][i]);
        finalize(next);
        return next;
    }

    SpectralVelocityField advance_cnab2(const SpectralVelocityField& u, double* vmax_out) {
        const double dt = cfg.dt;
        auto adv = advective_term(u, ws, cfg.dealias);
        if (vmax_out) *vmax_out = adv.max_velocity;
        check_cfl(adv.max_velocity);
        SpectralVelocityField n_now = leray_project(adv.field);
        const SpectralVelocityField& n_prev = prev_nonlinear ? *prev_nonlinear : n_now;

        SpectralVelocityField next(grid);
        for (int c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < next.coeffs[c].size(); ++i) {
                const cdouble explicit_part =
                    -dt * (1.5 * n_now.coeffs[c][i] - 0.5 * n_prev.coeffs[c][i]);
                next.coeffs[c][i] = (cn_num[i] * u.coeffs[c][i] + explicit_part) * cn_den[i];
            }
        prev_nonlinear = std::move(n_now);
        finalize(next);
        return next;
    }

    void finalize(SpectralVelocityField& u) const {
        apply_mask(u, cfg.dealias);
        for (int c = 0; c < 3; ++c) u.coeffs[c][0] = cdouble{0.0, 0.0};
    }
};

StepRecord make_record(const SpectralVelocityField& u, double t, double nu, double vmax) {
    StepRecord rec;
    rec.t = t;
    rec.energy = energy(u);
    const double volume = u.grid.length * u.grid.length * u.grid.length;
    rec.energy_dissipation = nu * volume * gradient_square_average(u);
    rec.max_velocity = vmax;
    rec.div_residual = divergence_residual(u);
    return rec;
}

}  // namespace

TrajectorySample step(const TrajectorySample& sample, const SimulationConfig& cfg,
                      FourierWorkspace& ws) {
    cfg.validate();
    Integrator integ(cfg, sample.u.grid, ws);
    TrajectorySample next;
    next.t = sample.t + cfg.dt;
    next.u = integ.advance(sample.u, nullptr);
    next.u.time_tag = next.t;
    next.du_dt = navier_stokes_rhs(next.u, cfg.nu, ws, cfg.dealias);
    return next;
}

Trajectory simulate(const SimulationConfig& cfg) {
    return simulate(cfg, StepObserver{});
}

Trajectory simulate(const SimulationConfig& cfg, const StepObserver& observer) {
    cfg.validate();
    const WaveGrid grid = make_grid(cfg.n, cfg.length);
    return simulate(cfg, initial_data(cfg.init, grid, cfg.seed), observer);
}

Trajectory simulate(const SimulationConfig& cfg, const SpectralVelocityField& initial,
                    const StepObserver& observer) {
    cfg.validate();
    const WaveGrid grid = initial.grid;
    if (grid.n != cfg.n) throw Error("initial field grid does not match the configuration");
    FourierWorkspace ws(cfg.n);

    SpectralVelocityField u = initial;
    if (cfg.dealias == DealiasRule::TwoThirds) dealias_two_thirds(u);
    zero_nyquist(u);
    for (int c = 0; c < 3; ++c) u.coeffs[c][0] = cdouble{0.0, 0.0};
    u.time_tag = 0.0;

    Trajectory traj;
    traj.config = cfg;

    Integrator integ(cfg, grid, ws);
    const std::size_t nsteps = cfg.step_count();

    auto emit_sample = [&](double t, const SpectralVelocityField& state) {
        TrajectorySample s;
        s.t = t;
        s.u = state;
        s.u.time_tag = t;
        s.du_dt = navier_stokes_rhs(state, cfg.nu, ws, cfg.dealias);
        traj.samples.push_back(std::move(s));
    };

    if (cfg.store_fields) emit_sample(0.0, u);
    {
        StepRecord rec = make_record(u, 0.0, cfg.nu, max_velocity(u, ws));
        if (observer) observer(rec);
        traj.steps.push_back(rec);
    }

    for (std::size_t n = 1; n <= nsteps; ++n) {
        double vmax = 0.0;
        u = integ.advance(u, &vmax);
        const double t = static_cast<double>(n) * cfg.dt;
        u.time_tag = t;
        // vmax describes the pre-step state; record the limit breach there.
        StepRecord rec = make_record(u, t, cfg.nu, vmax);
        if (observer) observer(rec);
        traj.steps.push_back(rec);
        if (cfg.store_fields &&
            (n % static_cast<std::size_t>(cfg.output_every) == 0 || n == nsteps))
            emit_sample(t, u);
    }
    return traj;
}

double weak_residual(const Trajectory& trajectory, const CutoffFunction& phi, double t1,
                     double t2) {
    if (trajectory.samples.empty()) throw Error("weak residual needs stored samples");
    if (!(t2 > t1)) throw Error("weak residual needs t2 > t1");
    const auto& samples = trajectory.samples;
    auto find_sample = [&](double t) -> std::size_t {
        for (std::size_t i = 0; i < samples.size(); ++i)
            if (std::abs(samples[i].t - t) <= 1e-9 * std::max(1.0, std::abs(t))) return i;
        throw Error("interval endpoint " + std::to_string(t) + " is not a stored sample time");
    };
    const std::size_t i1 = find_sample(t1);
    const std::size_t i2 = find_sample(t2);
    if (i2 <= i1) throw Error("interval outside trajectory");

    const WaveGrid& grid = samples.front().u.grid;
    const double nu = trajectory.config.nu;
    FourierWorkspace ws(grid.n);

    auto integrand = [&](const TrajectorySample& s) {
        const auto phi_t = phi.field_at(s.t, grid);
        const auto dphi_t = phi.time_derivative_at(s.t, grid);
        const auto adv = advective_term(s.u, ws, trajectory.config.dealias);
        return -h_inner(s.u, dphi_t) + nu * gradient_inner(s.u, phi_t) +
               h_inner(adv.field, phi_t);
    };

    double integral = 0.0;
    double prev = integrand(samples[i1]);
    for (std::size_t i = i1 + 1; i <= i2; ++i) {
        const double cur = integrand(samples[i]);
        integral += 0.5 * (prev + cur) * (samples[i].t - samples[i - 1].t);
        prev = cur;
    }

    const double boundary1 = h_inner(samples[i1].u, phi.field_at(samples[i1].t, grid));
    const double boundary2 = h_inner(samples[i2].u, phi.field_at(samples[i2].t, grid));
    return std::abs(integral - boundary1 + boundary2);
}

}  // namespace nslab
