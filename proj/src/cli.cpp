#include "nslab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "nslab/blowup.hpp"
#include "nslab/classify.hpp"
#include "nslab/dissipation.hpp"
#include "nslab/dynamics.hpp"
#include "nslab/ensemble.hpp"
#include "nslab/manifest.hpp"
#include "nslab/run_config.hpp"
#include "nslab/snapshot.hpp"
#include "nslab/spectral_ops.hpp"
#include "nslab/verify.hpp"

namespace nslab {

namespace fs = std::filesystem;

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const auto start = clock::now();
    return std::chrono::duration<double>(clock::now() - start).count();
}

std::string snapshot_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "snap_%06zu.nssf", index);
    return buf;
}

void write_dissipation_csv(const fs::path& path, const std::vector<DissipationReport>& reports) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << "# nslab-csv dissipation v1\n";
    out << "t,energy,enstrophy,nu_t_nl,nu_t_temp,nu_t,nu_tot,div_residual\n";
    for (const auto& r : reports)
        out << format_full(r.t) << ',' << format_full(r.energy) << ','
            << format_full(r.enstrophy) << ',' << format_full(r.nu_t_nl) << ','
            << format_full(r.nu_t_temp) << ',' << format_full(r.nu_t) << ','
            << format_full(r.nu_tot) << ',' << format_full(r.div_residual) << '\n';
}

void write_steps_csv(const fs::path& path, const std::vector<StepRecord>& steps) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << "# nslab-csv energy-series v1\n";
    out << "t,energy,energy_dissipation,max_velocity,div_residual\n";
    for (const auto& s : steps)
        out << format_full(s.t) << ',' << format_full(s.energy) << ','
            << format_full(s.energy_dissipation) << ',' << format_full(s.max_velocity) << ','
            << format_full(s.div_residual) << '\n';
}

Trajectory load_trajectory(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw Error("trajectory directory '" + dir.string() + "' not found");
    std::vector<fs::path> snaps;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".nssf") snaps.push_back(entry.path());
    std::sort(snaps.begin(), snaps.end());
    if (snaps.empty()) throw Error("no NSSF1 snapshots in '" + dir.string() + "'");

    Trajectory traj;
    double nu = 0.0;
    for (const auto& p : snaps) {
        auto snap = load_field(p);
        nu = snap.nu;
        TrajectorySample sample;
        sample.t = snap.field.time_tag.value_or(0.0);
        sample.u = std::move(snap.field);
        traj.samples.push_back(std::move(sample));
    }
    std::sort(traj.samples.begin(), traj.samples.end(),
              [](const TrajectorySample& a, const TrajectorySample& b) { return a.t < b.t; });

    traj.config.n = traj.samples.front().u.grid.n;
    traj.config.length = traj.samples.front().u.grid.length;
    traj.config.nu = nu;
    traj.config.t_final = traj.samples.back().t;
    traj.config.dt = traj.samples.size() > 1 ? traj.samples[1].t - traj.samples[0].t : 1.0;

    // Recover the dealias rule from the run config echo when available.
    const fs::path cfg_echo = dir / "run-config.txt";
    if (fs::exists(cfg_echo)) {
        try {
            const auto parsed = parse_run_config(cfg_echo);
            traj.config.scheme = parsed.config.scheme;
            traj.config.dealias = parsed.config.dealias;
            traj.config.init = parsed.config.init;
            traj.config.seed = parsed.config.seed;
        } catch (const Error&) {
            // analysis proceeds with defaults
        }
    }

    FourierWorkspace ws(traj.config.n);
    for (auto& s : traj.samples)
        s.du_dt = navier_stokes_rhs(s.u, traj.config.nu, ws, traj.config.dealias);
    return traj;
}

int cmd_simulate(const std::string& config_path) {
    const auto parsed = parse_run_config(config_path);
    const fs::path out_dir(parsed.out_dir);
    fs::create_directories(out_dir);

    const double t0 = now_seconds();
    Trajectory traj = simulate(parsed.config);
    const double t1 = now_seconds();

    RunManifest manifest("simulate", parsed.echo, parsed.config.seed);

    // Normalized config echo so analyze can recover the exact run settings.
    {
        std::ofstream echo(out_dir / "run-config.txt");
        echo << "n=" << parsed.config.n << "\n";
        echo << "length=" << format_full(parsed.config.length) << "\n";
        echo << "nu=" << format_full(parsed.config.nu) << "\n";
        echo << "dt=" << format_full(parsed.config.dt) << "\n";
        echo << "t-final=" << format_full(parsed.config.t_final) << "\n";
        echo << "scheme=" << to_string(parsed.config.scheme) << "\n";
        echo << "dealias=" << to_string(parsed.config.dealias) << "\n";
        echo << "init=" << parsed.config.init << "\n";
        echo << "output-every=" << parsed.config.output_every << "\n";
        echo << "seed=" << parsed.config.seed << "\n";
    }
    manifest.add_file(out_dir / "run-config.txt");

    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const auto name = snapshot_name(i);
        save_field(traj.samples[i].u, parsed.config.nu, out_dir / name);
        manifest.add_file(out_dir / name);
    }

    write_dissipation_csv(out_dir / "dissipation.csv", dissipation_series(traj));
    manifest.add_file(out_dir / "dissipation.csv");
    write_steps_csv(out_dir / "energy_series.csv", traj.steps);
    manifest.add_file(out_dir / "energy_series.csv");

    manifest.add_timing("simulate_wall_seconds", t1 - t0);
    manifest.add_timing("per_step_seconds",
                        traj.steps.size() > 1 ? (t1 - t0) / (traj.steps.size() - 1) : 0.0);
    manifest.write(out_dir);
    std::cout << "simulate: " << traj.samples.size() << " snapshots -> " << out_dir.string()
              << "\n";
    return 0;
}

int cmd_analyze(const std::string& traj_dir, const std::string& report_name,
                const std::string& ledger_name) {
    const fs::path dir(traj_dir);
    Trajectory traj = load_trajectory(dir);

    const auto reports = dissipation_series(traj);
    write_dissipation_csv(dir / report_name, reports);

    const auto ledger = regularity_ledger(traj);
    {
        std::ofstream out(dir / ledger_name);
        out << "# nslab-csv regularity v1\n";
        out << "t,h_norm,h1_norm,dtu_dual_norm,advective_dual_norm\n";
        for (std::size_t i = 0; i < ledger.times.size(); ++i)
            out << format_full(ledger.times[i]) << ',' << format_full(ledger.h_norm[i]) << ','
                << format_full(ledger.h1_norm[i]) << ',' << format_full(ledger.dtu_dual_norm[i])
                << ',' << format_full(ledger.advective_dual_norm[i]) << '\n';
    }

    nlohmann::json summary;
    summary["schema"] = "nslab-analysis-v1";
    summary["dtu_l43_aggregate"] = ledger.dtu_l43_aggregate;
    summary["advective_l43_aggregate"] = ledger.advective_l43_aggregate;
    const auto residuals = energy_identity_residual(traj, traj.config.nu);
    summary["energy_identity_residual_max"] =
        residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
    double nu_t_sup = 0.0;
    for (const auto& r : reports) nu_t_sup = std::max(nu_t_sup, std::abs(r.nu_t));
    summary["nu_t_sup"] = nu_t_sup;
    summary["mixed_norms"] = {
        {"r_inf_s_2", mixed_norm(traj, std::numeric_limits<double>::infinity(), 2.0)},
        {"r_8_3_s_4", mixed_norm(traj, 8.0 / 3.0, 4.0)},
        {"r_2_s_6", mixed_norm(traj, 2.0, 6.0)},
    };
    // Nonnegativity of the turbulent dissipation terms is monitored, not
    // enforced; violations are recorded here.
    nlohmann::json violations = nlohmann::json::array();
    for (const auto& r : reports) {
        if (r.nu_t_nl < -1e-12)
            violations.push_back({{"t", r.t}, {"term", "nu_t_nl"}, {"value", r.nu_t_nl}});
        if (r.nu_t_temp < -1e-12)
            violations.push_back({{"t", r.t}, {"term", "nu_t_temp"}, {"value", r.nu_t_temp}});
    }
    summary["nonnegativity_violations"] = violations;

    std::ofstream sout(dir / "analysis_summary.json");
    sout << summary.dump(2) << "\n";

    RunManifest manifest("analyze", {{"traj", traj_dir}}, traj.config.seed);
    manifest.add_file(dir / report_name);
    manifest.add_file(dir / ledger_name);
    manifest.add_file(dir / "analysis_summary.json");
    manifest.write(dir);
    std::cout << "analyze: wrote " << report_name << ", " << ledger_name
              << ", analysis_summary.json\n";
    return 0;
}

int cmd_harmonics_expand(const std::string& input, int lmax, int n_radial,
                         const std::string& output, bool with_singular) {
    const fs::path in_path(input);
    if (!fs::exists(in_path)) throw Error("input '" + input + "' not found");

    BallQuadrature quad;
    std::vector<double> samples;

    std::ifstream probe(in_path, std::ios::binary);
    char magic[4] = {};
    probe.read(magic, 4);
    if (std::string(magic, 4) == "NSSF") {
        const auto snap = load_field(in_path);
        quad = default_ball_quadrature(lmax, n_radial, snap.field.grid.length / 2.0);
        samples = sample_on_ball(snap.field, -1, quad);
    } else {
        // Raw ball samples: header "# ball-samples R=<r> nr=<n> ntheta=<n>
        // nphi=<n>", then one value per line in node order.
        std::ifstream in(in_path);
        std::string header;
        std::getline(in, header);
        double radius = 0.0;
        int nr = 0, ntheta = 0, nphi = 0;
        if (std::sscanf(header.c_str(), "# ball-samples R=%lf nr=%d ntheta=%d nphi=%d", &radius,
                        &nr, &ntheta, &nphi) != 4)
            throw Error("raw sample file needs the ball-samples header");
        quad = make_ball_quadrature(nr, ntheta, nphi, radius);
        double v;
        while (in >> v) samples.push_back(v);
    }

    const auto coeffs = expand(samples, quad, lmax, n_radial, with_singular);

    std::ofstream out(output);
    if (!out) throw Error("cannot write '" + output + "'");
    out << "# nslab-csv harmonic-coefficients v1\n";
    out << "k_index,l,m,re_F,im_F,re_S,im_S\n";
    for (std::size_t n = 0; n < coeffs.radial_k.size(); ++n)
        for (int l = 0; l <= coeffs.lmax; ++l)
            for (int m = -l; m <= l; ++m) {
                const auto f = coeffs.f_coeff[coeffs.coeff_index(n, l, m)];
                const cdouble s = coeffs.has_singular()
                                      ? coeffs.s_coeff[coeffs.coeff_index(n, l, m)]
                                      : cdouble{0.0, 0.0};
                out << (n + 1) << ',' << l << ',' << m << ',' << format_full(f.real()) << ','
                    << format_full(f.imag()) << ',' << format_full(s.real()) << ','
                    << format_full(s.imag()) << '\n';
            }
    out.close();

    RunManifest manifest("harmonics expand",
                         {{"in", input},
                          {"lmax", std::to_string(lmax)},
                          {"radial", std::to_string(n_radial)}},
                         0);
    manifest.add_file(fs::path(output));
    manifest.write(fs::path(output).has_parent_path() ? fs::path(output).parent_path()
                                                      : fs::path("."));
    std::cout << "harmonics: wrote " << output << "\n";
    return 0;
}

int cmd_blowup(const std::string& traj_dir, const std::string& output) {
    const fs::path dir(traj_dir);
    Trajectory traj = load_trajectory(dir);
    const auto diag = blowup_diagnostics(traj);

    const fs::path out_path = fs::path(output).has_parent_path() ? fs::path(output)
                                                                 : dir / output;
    std::ofstream out(out_path);
    if (!out) throw Error("cannot write '" + out_path.string() + "'");
    out << "# nslab-csv blowup v1\n";
    out << "t,delta,r2,bkm_partial,nu_t,d_est,flags\n";
    for (const auto& s : diag.series)
        out << format_full(s.t) << ',' << (s.delta ? format_full(*s.delta) : "") << ','
            << format_full(s.r2) << ',' << format_full(s.bkm_partial) << ','
            << format_full(s.nu_t) << ',' << format_full(s.d_estimate) << ',' << s.flags << '\n';
    out.close();

    nlohmann::json summary;
    summary["schema"] = "nslab-blowup-v1";
    summary["nu_t_floor"] = diag.nu_t_floor;
    summary["d_min"] = diag.d_min;
    if (diag.t_star)
        summary["t_star"] = *diag.t_star;
    else
        summary["t_star"] = nullptr;
    summary["t_star_extrapolated"] = diag.t_star_extrapolated;
    summary["bkm_integral"] = diag.bkm_integral;
    summary["resolution_flags"] = diag.resolution_flags;
    // The l = 1 restriction of the decay mode is an interpretation; both the
    // aggregate and the restricted series are reported.
    nlohmann::json l1 = nlohmann::json::array();
    for (const auto& s : diag.series)
        l1.push_back({{"t", s.t}, {"nu_t_l1", s.nu_t_l1}, {"d_est_l1", s.d_estimate_l1}});
    summary["l1_series"] = l1;

    std::ofstream sout(dir / "blowup_summary.json");
    sout << summary.dump(2) << "\n";

    RunManifest manifest("blowup", {{"traj", traj_dir}}, traj.config.seed);
    manifest.add_file(out_path);
    manifest.add_file(dir / "blowup_summary.json");
    manifest.write(dir);
    std::cout << "blowup: wrote " << out_path.string() << " and blowup_summary.json\n";
    return 0;
}

int cmd_ensemble(const std::string& config_path, int count, const std::string& perturbation,
                 double amplitude, const std::string& out_dir_flag,
                 const std::string& counts_flag) {
    const auto parsed = parse_run_config(config_path);
    EnsembleSpec spec;
    spec.config = parsed.config;
    spec.config.store_fields = true;
    spec.count = count;
    spec.base_init = parsed.config.init;
    spec.perturbation = parse_perturbation(perturbation);
    spec.amplitude = amplitude;
    spec.seed = parsed.config.seed;

    std::vector<int> counts;
    if (!counts_flag.empty()) {
        std::stringstream ss(counts_flag);
        std::string tok;
        while (std::getline(ss, tok, ',')) counts.push_back(std::stoi(tok));
    } else {
        counts.push_back(count);
    }

    const fs::path out_dir = out_dir_flag.empty() ? fs::path(parsed.out_dir) : fs::path(out_dir_flag);
    fs::create_directories(out_dir);

    const double t0 = now_seconds();
    const auto report = mean_heat_deviation(spec, counts);
    const double t1 = now_seconds();

    {
        std::ofstream out(out_dir / "deviation.csv");
        out << "# nslab-csv ensemble-deviation v1\n";
        out << "count,t,deviation\n";
        for (std::size_t c = 0; c < report.counts.size(); ++c)
            for (std::size_t s = 0; s < report.times.size(); ++s)
                out << report.counts[c] << ',' << format_full(report.times[s]) << ','
                    << format_full(report.deviation_series[c][s]) << '\n';
    }
    {
        std::ofstream out(out_dir / "mean_dissipation.csv");
        out << "# nslab-csv ensemble-mean-dissipation v1\n";
        out << "t,mean_nu_t_nl,mean_nu_t_temp\n";
        for (std::size_t s = 0; s < report.times.size(); ++s)
            out << format_full(report.times[s]) << ',' << format_full(report.mean_nu_t_nl[s])
                << ',' << format_full(report.mean_nu_t_temp[s]) << '\n';
    }

    nlohmann::json j;
    j["schema"] = "nslab-mean-report-v1";
    j["counts"] = report.counts;
    j["deviation_metric"] = report.deviation_metric;
    j["deviation_exponent"] = report.deviation_fit.exponent;
    j["deviation_exponent_stderr"] = report.deviation_fit.stderr_;
    j["nl_mean_magnitude"] = report.nl_mean_magnitude;
    j["nl_exponent"] = report.nl_fit.exponent;
    j["nl_exponent_stderr"] = report.nl_fit.stderr_;
    j["iterated_nl_magnitude"] = report.iterated_nl_magnitude;
    j["iterated_exponent"] = report.iterated_fit.exponent;
    std::ofstream jout(out_dir / "mean_report.json");
    jout << j.dump(2) << "\n";
    jout.close();

    RunManifest manifest("ensemble", parsed.echo, spec.seed);
    manifest.add_file(out_dir / "deviation.csv");
    manifest.add_file(out_dir / "mean_dissipation.csv");
    manifest.add_file(out_dir / "mean_report.json");
    manifest.add_timing("ensemble_wall_seconds", t1 - t0);
    manifest.write(out_dir);
    std::cout << "ensemble: wrote mean_report.json (deviation exponent "
              << report.deviation_fit.exponent << ")\n";
    return 0;
}

int cmd_verify(const std::string& out_dir_flag) {
    const int failures = run_verify(std::cout);
    const fs::path out_dir(out_dir_flag);
    fs::create_directories(out_dir);
    RunManifest manifest("verify", {}, 0);
    manifest.add_timing("verify_failures", failures);
    manifest.write(out_dir);
    return failures == 0 ? 0 : 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Pseudo-spectral incompressible Navier-Stokes laboratory"};
    app.require_subcommand(1);

    std::string config_path, traj_dir, report_name = "dissipation.csv",
                             ledger_name = "regularity.csv";
    std::string harmonics_in, harmonics_out = "coefficients.csv";
    int lmax = 4, n_radial = 4;
    bool with_singular = false;
    std::string blowup_out = "blowup.csv";
    int count = 16;
    std::string perturbation = "random-phase", ens_out, counts_flag;
    double amplitude = 0.1;
    std::string verify_out = ".";

    auto* sim = app.add_subcommand("simulate", "Integrate the Navier-Stokes equation");
    sim->add_option("--config", config_path, "key=value run configuration")->required();

    auto* ana = app.add_subcommand("analyze", "Dissipation and regularity reports");
    ana->add_option("--traj", traj_dir, "trajectory directory")->required();
    ana->add_option("--report", report_name, "dissipation CSV name");
    ana->add_option("--ledger", ledger_name, "regularity CSV name");

    auto* har = app.add_subcommand("harmonics", "Solid-harmonic analysis");
    auto* harx = har->add_subcommand("expand", "Expand a field on the inscribed ball");
    harx->add_option("--in", harmonics_in, "NSSF1 snapshot or raw ball samples")->required();
    harx->add_option("--lmax", lmax, "maximum degree");
    harx->add_option("--radial", n_radial, "radial node count");
    harx->add_option("--out", harmonics_out, "coefficient CSV");
    harx->add_flag("--with-singular", with_singular, "fit the irregular family too");
    har->require_subcommand(1);

    auto* blo = app.add_subcommand("blowup", "Blowup diagnostics monitor");
    blo->add_option("--traj", traj_dir, "trajectory directory")->required();
    blo->add_option("--out", blowup_out, "output CSV name");

    auto* ens = app.add_subcommand("ensemble", "Ensemble means and the heat-flow comparison");
    ens->add_option("--config", config_path, "key=value run configuration")->required();
    ens->add_option("--count", count, "ensemble size");
    ens->add_option("--counts", counts_flag, "comma list of ensemble sizes");
    ens->add_option("--perturbation", perturbation, "random-phase | sign-flip | band-noise");
    ens->add_option("--amplitude", amplitude, "perturbation amplitude");
    ens->add_option("--out", ens_out, "output directory (default: config out-dir)");

    auto* ver = app.add_subcommand("verify", "Run the built-in invariant suite");
    ver->add_option("--out", verify_out, "manifest directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(config_path);
        if (ana->parsed()) return cmd_analyze(traj_dir, report_name, ledger_name);
        if (har->parsed())
            return cmd_harmonics_expand(harmonics_in, lmax, n_radial, harmonics_out,
                                        with_singular);
        if (blo->parsed()) return cmd_blowup(traj_dir, blowup_out);
        if (ens->parsed())
            return cmd_ensemble(config_path, count, perturbation, amplitude, ens_out,
                                counts_flag);
        if (ver->parsed()) return cmd_verify(verify_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace nslab
