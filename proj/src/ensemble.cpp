#include "nslab/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "nslab/dissipation.hpp"
#include "nslab/rng.hpp"
#include "nslab/spectral_ops.hpp"

namespace nslab {

Perturbation parse_perturbation(const std::string& name) {
    if (name == "random-phase") return Perturbation::RandomPhase;
    if (name == "sign-flip") return Perturbation::SignFlip;
    if (name == "band-noise") return Perturbation::BandNoise;
    throw Error("unknown perturbation '" + name +
                "' (expected random-phase, sign-flip, or band-noise)");
}

std::string to_string(Perturbation p) {
    switch (p) {
        case Perturbation::RandomPhase: return "random-phase";
        case Perturbation::SignFlip: return "sign-flip";
        case Perturbation::BandNoise: return "band-noise";
    }
    return "unknown";
}

int thread_budget() {
    const char* env = std::getenv("NS_LAB_THREADS");
    if (env) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 4;
}

namespace {

/// Unit-rms perturbation field: shaped like the base field's spectrum when
/// the base is nonzero, a flat low band otherwise (a zero base still needs a
/// direction to perturb along).
SpectralVelocityField unit_perturbation(const EnsembleSpec& spec, const WaveGrid& grid,
                                        std::uint64_t seed) {
    const SpectralVelocityField base = initial_data(spec.base_init, grid, spec.seed);
    std::vector<double> shells = shell_spectrum(base);
    double total = 0.0;
    for (double e : shells) total += e;
    if (total <= 0.0) {
        shells.assign(shells.size(), 0.0);
        const int top = std::min(3, grid.dealias_limit());
        for (int s = 1; s <= top; ++s) shells[s] = 1.0;
    }
    SpectralVelocityField draw = random_shell_field(grid, shells, seed);
    double mean_square = 0.0;
    for (int c = 0; c < 3; ++c)
        for (const auto& v : draw.coeffs[c]) mean_square += std::norm(v);
    const double scale = 1.0 / std::sqrt(mean_square);
    for (int c = 0; c < 3; ++c)
        for (auto& v : draw.coeffs[c]) v *= scale;
    return draw;
}

}  // namespace

SpectralVelocityField member_initial_field(const EnsembleSpec& spec, const WaveGrid& grid,
                                           int member) {
    const std::uint64_t member_seed = Rng::derive(spec.seed, static_cast<std::uint64_t>(member));
    switch (spec.perturbation) {
        case Perturbation::RandomPhase:
            // Fresh phases per member; moduli fixed by the base descriptor.
            return initial_data(spec.base_init, grid, member_seed);
        case Perturbation::SignFlip: {
            SpectralVelocityField base = initial_data(spec.base_init, grid, spec.seed);
            const std::uint64_t pair_seed =
                Rng::derive(spec.seed ^ 0x5851f42d4c957f2dULL, static_cast<std::uint64_t>(member / 2));
            const auto delta = unit_perturbation(spec, grid, pair_seed);
            const double sign = member % 2 == 0 ? 1.0 : -1.0;
            for (int c = 0; c < 3; ++c)
                for (std::size_t i = 0; i < base.coeffs[c].size(); ++i)
                    base.coeffs[c][i] += sign * spec.amplitude * delta.coeffs[c][i];
            return base;
        }
        case Perturbation::BandNoise: {
            SpectralVelocityField base = initial_data(spec.base_init, grid, spec.seed);
            const auto noise = unit_perturbation(spec, grid, member_seed);
            for (int c = 0; c < 3; ++c)
                for (std::size_t i = 0; i < base.coeffs[c].size(); ++i)
                    base.coeffs[c][i] += spec.amplitude * noise.coeffs[c][i];
            return base;
        }
    }
    throw Error("unhandled perturbation");
}

Trajectory ensemble_mean(std::span<const Trajectory> members) {
    if (members.empty()) throw Error("ensemble mean of no trajectories");
    const auto& first = members.front();
    Trajectory mean;
    mean.config = first.config;
    mean.samples.reserve(first.samples.size());
    for (std::size_t s = 0; s < first.samples.size(); ++s) {
        TrajectorySample acc;
        acc.t = first.samples[s].t;
        acc.u = SpectralVelocityField(first.samples[s].u.grid);
        acc.u.time_tag = acc.t;
        bool have_rhs = true;
        SpectralVelocityField rhs(first.samples[s].u.grid);
        for (const auto& member : members) {
            if (member.samples.size() != first.samples.size())
                throw Error("ensemble members have mismatched sample counts");
            const auto& sample = member.samples[s];
            if (sample.u.grid != acc.u.grid) throw Error("ensemble members on different grids");
            if (std::abs(sample.t - acc.t) > 1e-12 * std::max(1.0, std::abs(acc.t)))
                throw Error("ensemble members have mismatched sample times");
            for (int c = 0; c < 3; ++c)
                for (std::size_t i = 0; i < acc.u.coeffs[c].size(); ++i)
                    acc.u.coeffs[c][i] += sample.u.coeffs[c][i];
            if (sample.du_dt && have_rhs) {
                for (int c = 0; c < 3; ++c)
                    for (std::size_t i = 0; i < rhs.coeffs[c].size(); ++i)
                        rhs.coeffs[c][i] += sample.du_dt->coeffs[c][i];
            } else {
                have_rhs = false;
            }
        }
        const double scale = 1.0 / static_cast<double>(members.size());
        for (int c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < acc.u.coeffs[c].size(); ++i) acc.u.coeffs[c][i] *= scale;
        if (have_rhs) {
            for (int c = 0; c < 3; ++c)
                for (std::size_t i = 0; i < rhs.coeffs[c].size(); ++i) rhs.coeffs[c][i] *= scale;
            acc.du_dt = std::move(rhs);
        }
        mean.samples.push_back(std::move(acc));
    }
    return mean;
}

SpectralVelocityField heat_solution(const SpectralVelocityField& u0, double nu, double t) {
    if (t < 0.0) throw Error("heat solution requires t >= 0");
    const WaveGrid& g = u0.grid;
    SpectralVelocityField u(g);
    u.time_tag = t;
    for (int a0 = 0; a0 < g.n; ++a0)
        for (int a1 = 0; a1 < g.n; ++a1) {
            std::size_t idx = g.index(a0, a1, 0);
            const double k0 = g.wavenumber(a0), k1 = g.wavenumber(a1);
            for (int a2 = 0; a2 < g.n; ++a2, ++idx) {
                const double k2 = g.wavenumber(a2);
                const double factor = std::exp(-nu * (k0 * k0 + k1 * k1 + k2 * k2) * t);
                for (int c = 0; c < 3; ++c) u.coeffs[c][idx] = factor * u0.coeffs[c][idx];
            }
        }
    return u;
}

Trajectory heat_trajectory(const SpectralVelocityField& u0, double nu, double t_final,
                           int sample_count) {
    if (sample_count < 2) throw Error("heat trajectory needs at least two samples");
    Trajectory traj;
    traj.config.n = u0.grid.n;
    traj.config.length = u0.grid.length;
    traj.config.nu = nu;
    traj.config.dt = t_final / (sample_count - 1);
    traj.config.t_final = t_final;
    const WaveGrid& g = u0.grid;
    for (int s = 0; s < sample_count; ++s) {
        const double t = t_final * s / (sample_count - 1);
        TrajectorySample sample;
        sample.t = t;
        sample.u = heat_solution(u0, nu, t);
        SpectralVelocityField rhs(g);
        for (int a0 = 0; a0 < g.n; ++a0)
            for (int a1 = 0; a1 < g.n; ++a1) {
                std::size_t idx = g.index(a0, a1, 0);
                const double k0 = g.wavenumber(a0), k1 = g.wavenumber(a1);
                for (int a2 = 0; a2 < g.n; ++a2, ++idx) {
                    const double k2 = g.wavenumber(a2);
                    const double lap = -(k0 * k0 + k1 * k1 + k2 * k2);
                    for (int c = 0; c < 3; ++c)
                        rhs.coeffs[c][idx] = nu * lap * sample.u.coeffs[c][idx];
                }
            }
        sample.du_dt = std::move(rhs);
        StepRecord rec;
        rec.t = t;
        rec.energy = energy(sample.u);
        const double volume = std::pow(g.length, 3);
        rec.energy_dissipation = nu * volume * gradient_square_average(sample.u);
        traj.steps.push_back(rec);
        traj.samples.push_back(std::move(sample));
    }
    return traj;
}

namespace {

struct MemberData {
    std::vector<SpectralVelocityField> u;   // per sample
    std::vector<SpectralVelocityField> adv;
    std::vector<double> nu_t_nl, nu_t_temp;
    SpectralVelocityField initial;
};

MemberData run_member(const EnsembleSpec& spec, const WaveGrid& grid, int member) {
    MemberData data;
    data.initial = member_initial_field(spec, grid, member);
    SimulationConfig cfg = spec.config;
    cfg.store_fields = true;
    Trajectory traj = simulate(cfg, data.initial);
    FourierWorkspace ws(grid.n);
    data.u.reserve(traj.samples.size());
    for (auto& s : traj.samples) {
        const auto rep = dissipation_report(s, cfg.nu, ws, cfg.dealias);
        data.nu_t_nl.push_back(rep.nu_t_nl);
        data.nu_t_temp.push_back(rep.nu_t_temp);
        data.adv.push_back(advective_term(s.u, ws, cfg.dealias).field);
        data.u.push_back(std::move(s.u));
    }
    return data;
}

ExponentFit fit_exponent(const std::vector<int>& counts, const std::vector<double>& metric) {
    ExponentFit fit;
    std::vector<double> x, y;
    for (std::size_t i = 0; i < counts.size(); ++i)
        if (metric[i] > 0.0) {
            x.push_back(std::log(static_cast<double>(counts[i])));
            y.push_back(std::log(metric[i]));
        }
    if (x.size() < 2) return fit;
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    fit.exponent = (n * sxy - sx * sy) / denom;
    double ss = 0.0;
    const double intercept = (sy - fit.exponent * sx) / n;
    for (std::size_t i = 0; i < x.size(); ++i)
        ss += sq(y[i] - intercept - fit.exponent * x[i]);
    if (x.size() > 2) {
        const double var = ss / (n - 2.0) / (sxx - sx * sx / n);
        fit.stderr_ = std::sqrt(std::max(0.0, var));
    }
    return fit;
}

void accumulate(std::vector<SpectralVelocityField>& acc,
                const std::vector<SpectralVelocityField>& add) {
    if (acc.empty()) {
        acc = add;
        return;
    }
    for (std::size_t s = 0; s < acc.size(); ++s)
        for (int c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < acc[s].coeffs[c].size(); ++i)
                acc[s].coeffs[c][i] += add[s].coeffs[c][i];
}

std::vector<SpectralVelocityField> scaled(const std::vector<SpectralVelocityField>& acc,
                                          double scale) {
    std::vector<SpectralVelocityField> out = acc;
    for (auto& f : out)
        for (int c = 0; c < 3; ++c)
            for (auto& v : f.coeffs[c]) v *= scale;
    return out;
}

}  // namespace

EnsembleResult run_ensemble(const EnsembleSpec& spec) {
    spec.config.validate();
    EnsembleResult result;
    const WaveGrid grid = make_grid(spec.config.n, spec.config.length);
    std::vector<SpectralVelocityField> sum_u, sum_adv;
    SpectralVelocityField sum_init(grid);
    std::vector<double> sum_nl, sum_temp;
    {
        const std::size_t nsteps = spec.config.step_count();
        result.times.push_back(0.0);
        for (std::size_t n = 1; n <= nsteps; ++n)
            if (n % static_cast<std::size_t>(spec.config.output_every) == 0 || n == nsteps)
                result.times.push_back(static_cast<double>(n) * spec.config.dt);
    }

    const int threads = std::max(1, std::min(thread_budget(), spec.count));
    for (int base = 0; base < spec.count; base += threads) {
        const int batch = std::min(threads, spec.count - base);
        std::vector<MemberData> batch_data(batch);
        std::vector<std::thread> workers;
        for (int b = 0; b < batch; ++b)
            workers.emplace_back(
                [&, b] { batch_data[b] = run_member(spec, grid, base + b); });
        for (auto& w : workers) w.join();
        for (int b = 0; b < batch; ++b) {
            auto& md = batch_data[b];
            accumulate(sum_u, md.u);
            accumulate(sum_adv, md.adv);
            for (int c = 0; c < 3; ++c)
                for (std::size_t i = 0; i < sum_init.coeffs[c].size(); ++i)
                    sum_init.coeffs[c][i] += md.initial.coeffs[c][i];
            if (sum_nl.empty()) {
                sum_nl.assign(md.nu_t_nl.size(), 0.0);
                sum_temp.assign(md.nu_t_temp.size(), 0.0);
            }
            for (std::size_t s = 0; s < sum_nl.size(); ++s) {
                sum_nl[s] += md.nu_t_nl[s];
                sum_temp[s] += md.nu_t_temp[s];
            }
        }
    }

    const double scale = 1.0 / spec.count;
    result.mean_u = scaled(sum_u, scale);
    result.mean_advective = scaled(sum_adv, scale);
    result.mean_initial = sum_init;
    for (int c = 0; c < 3; ++c)
        for (auto& v : result.mean_initial.coeffs[c]) v *= scale;
    result.mean_nu_t_nl.resize(sum_nl.size());
    result.mean_nu_t_temp.resize(sum_temp.size());
    for (std::size_t s = 0; s < sum_nl.size(); ++s) {
        result.mean_nu_t_nl[s] = sum_nl[s] * scale;
        result.mean_nu_t_temp[s] = sum_temp[s] * scale;
    }
    return result;
}

MeanReport mean_heat_deviation(const EnsembleSpec& spec, std::vector<int> counts) {
    if (counts.empty()) throw Error("mean-heat deviation needs at least one ensemble size");
    std::sort(counts.begin(), counts.end());
    if (counts.front() < 1) throw Error("ensemble sizes must be positive");
    spec.config.validate();
    const WaveGrid grid = make_grid(spec.config.n, spec.config.length);
    const int max_count = counts.back();

    MeanReport report;
    report.counts = counts;

    std::vector<SpectralVelocityField> sum_u, sum_adv;
    SpectralVelocityField sum_init(grid);
    std::vector<double> sum_nl, sum_temp;
    std::vector<double> times;

    struct Snapshot {
        int count;
        std::vector<SpectralVelocityField> mean_u, mean_adv;
        SpectralVelocityField mean_init;
        std::vector<double> mean_nl, mean_temp;
    };
    std::vector<Snapshot> snapshots;

    const int threads = std::max(1, std::min(thread_budget(), max_count));
    std::size_t next_snapshot = 0;
    for (int base = 0; base < max_count; base += threads) {
        const int batch = std::min(threads, max_count - base);
        std::vector<MemberData> batch_data(batch);
        std::vector<std::thread> workers;
        for (int b = 0; b < batch; ++b)
            workers.emplace_back(
                [&, b] { batch_data[b] = run_member(spec, grid, base + b); });
        for (auto& w : workers) w.join();
        for (int b = 0; b < batch; ++b) {
            auto& md = batch_data[b];
            if (times.empty()) {
                SimulationConfig cfg = spec.config;
                const std::size_t nsteps = cfg.step_count();
                times.push_back(0.0);
                for (std::size_t n = 1; n <= nsteps; ++n)
                    if (n % static_cast<std::size_t>(cfg.output_every) == 0 || n == nsteps)
                        times.push_back(static_cast<double>(n) * cfg.dt);
            }
            accumulate(sum_u, md.u);
            accumulate(sum_adv, md.adv);
            for (int c = 0; c < 3; ++c)
                for (std::size_t i = 0; i < sum_init.coeffs[c].size(); ++i)
                    sum_init.coeffs[c][i] += md.initial.coeffs[c][i];
            if (sum_nl.empty()) {
                sum_nl.assign(md.nu_t_nl.size(), 0.0);
                sum_temp.assign(md.nu_t_temp.size(), 0.0);
            }
            for (std::size_t s = 0; s < sum_nl.size(); ++s) {
                sum_nl[s] += md.nu_t_nl[s];
                sum_temp[s] += md.nu_t_temp[s];
            }
            const int done = base + b + 1;
            while (next_snapshot < counts.size() && done == counts[next_snapshot]) {
                Snapshot snap;
                snap.count = done;
                const double scale = 1.0 / done;
                snap.mean_u = scaled(sum_u, scale);
                snap.mean_adv = scaled(sum_adv, scale);
                snap.mean_init = sum_init;
                for (int c = 0; c < 3; ++c)
                    for (auto& v : snap.mean_init.coeffs[c]) v *= scale;
                snap.mean_nl.resize(sum_nl.size());
                snap.mean_temp.resize(sum_temp.size());
                for (std::size_t s = 0; s < sum_nl.size(); ++s) {
                    snap.mean_nl[s] = sum_nl[s] * scale;
                    snap.mean_temp[s] = sum_temp[s] * scale;
                }
                snapshots.push_back(std::move(snap));
                ++next_snapshot;
            }
        }
    }

    report.times = times;
    FourierWorkspace ws(grid.n);
    for (const auto& snap : snapshots) {
        std::vector<double> dev(times.size(), 0.0);
        double dev_metric = 0.0, nl_metric = 0.0, iter_metric = 0.0;
        for (std::size_t s = 0; s < times.size(); ++s) {
            const auto reference = heat_solution(snap.mean_init, spec.config.nu, times[s]);
            SpectralVelocityField diff = snap.mean_u[s];
            for (int c = 0; c < 3; ++c)
                for (std::size_t i = 0; i < diff.coeffs[c].size(); ++i)
                    diff.coeffs[c][i] -= reference.coeffs[c][i];
            dev[s] = h_norm(diff);
            if (s > 0) dev_metric = std::max(dev_metric, dev[s]);
            nl_metric = std::max(nl_metric, h_norm(snap.mean_adv[s]));
            const auto iter = advective_term(snap.mean_u[s], ws, spec.config.dealias);
            iter_metric = std::max(iter_metric, h_norm(iter.field));
        }
        report.deviation_series.push_back(std::move(dev));
        report.deviation_metric.push_back(dev_metric);
        report.nl_mean_magnitude.push_back(nl_metric);
        report.iterated_nl_magnitude.push_back(iter_metric);
        if (snap.count == counts.back()) {
            report.mean_nu_t_nl = snap.mean_nl;
            report.mean_nu_t_temp = snap.mean_temp;
        }
    }

    // Deviation fits against ensemble size; deviation ~ N^{-p}.
    ExponentFit dev_fit = fit_exponent(counts, report.deviation_metric);
    report.deviation_fit = {-dev_fit.exponent, dev_fit.stderr_};
    report.nl_fit = fit_exponent(counts, report.nl_mean_magnitude);
    report.iterated_fit = fit_exponent(counts, report.iterated_nl_magnitude);
    return report;
}

}  // namespace nslab
