#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "nslab/cli.hpp"
#include "nslab/manifest.hpp"
#include "nslab/harmonics.hpp"
#include "nslab/run_config.hpp"
#include "nslab/snapshot.hpp"
#include "nslab/spectral_ops.hpp"
#include "test_support.hpp"

using namespace nslab;
using test::max_coeff_difference;
using test::random_field;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "nslab-tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_SUITE("nssf1") {
    TEST_CASE("round trip is bit-identical") {
        const auto dir = scratch_dir("roundtrip");
        const auto grid = make_grid(16);
        for (int trial = 0; trial < 5; ++trial) {
            auto u = random_field(grid, 400 + trial);
            u.time_tag = 0.25 * trial;
            const auto path = dir / ("f" + std::to_string(trial) + ".nssf");
            save_field(u, 0.01 * trial, path);
            const auto snap = load_field(path);
            CHECK(snap.nu == 0.01 * trial);
            CHECK(snap.field.time_tag == u.time_tag);
            CHECK(snap.field.grid == grid);
            for (int c = 0; c < 3; ++c)
                for (std::size_t i = 0; i < u.coeffs[c].size(); ++i)
                    CHECK(snap.field.coeffs[c][i] == u.coeffs[c][i]);
        }
    }

    TEST_CASE("corrupted magic is an unrecognized format") {
        const auto dir = scratch_dir("magic");
        const auto path = dir / "bad.nssf";
        std::ofstream(path, std::ios::binary) << "GARBAGEDATA";
        CHECK_THROWS_WITH_AS(load_field(path), doctest::Contains("unrecognized format"),
                             FormatError);
    }

    TEST_CASE("future versions are a distinct error") {
        const auto dir = scratch_dir("version");
        const auto grid = make_grid(8);
        const auto path = dir / "v2.nssf";
        save_field(SpectralVelocityField(grid), 0.0, path);
        // poke the version byte
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(4);
        f.put('2');
        f.close();
        CHECK_THROWS_AS(load_field(path), FormatVersionError);
    }

    TEST_CASE("truncated payloads are reported as such") {
        const auto dir = scratch_dir("truncated");
        const auto grid = make_grid(8);
        const auto path = dir / "short.nssf";
        save_field(random_field(grid, 1), 0.1, path);
        const auto size = fs::file_size(path);
        fs::resize_file(path, size / 2);
        CHECK_THROWS_WITH_AS(load_field(path), doctest::Contains("unexpected end of payload"),
                             TruncatedPayloadError);
    }
}

TEST_SUITE("run-config") {
    TEST_CASE("full configuration parses with comments") {
        const std::string text =
            "# reference run\n"
            "n = 32\n"
            "length = 6.283185307179586\n"
            "nu = 0.01\n"
            "dt = 1e-3\n"
            "t-final = 1.0\n"
            "scheme = etd-rk2\n"
            "dealias = two-thirds\n"
            "init = taylor-green\n"
            "output-every = 100\n"
            "seed = 12345\n"
            "out-dir = /tmp/tg-run\n";
        const auto parsed = parse_run_config_text(text);
        CHECK(parsed.config.n == 32);
        CHECK(parsed.config.nu == 0.01);
        CHECK(parsed.config.seed == 12345);
        CHECK(parsed.config.scheme == Scheme::EtdRk2);
        CHECK(parsed.out_dir == "/tmp/tg-run");
    }

    TEST_CASE("unknown keys and malformed lines are rejected") {
        CHECK_THROWS_WITH_AS(parse_run_config_text("n=16\ndt=1e-3\nt-final=1\nresolution = 9\n"),
                             doctest::Contains("unknown config key"), Error);
        CHECK_THROWS_WITH_AS(parse_run_config_text("n 16\n"), doctest::Contains("key=value"),
                             Error);
        CHECK_THROWS_WITH_AS(parse_run_config_text("n=sixteen\n"),
                             doctest::Contains("invalid value"), Error);
        CHECK_THROWS_AS(parse_run_config_text("n=16\ndt=0.0\nt-final=1\n"), Error);
    }

    TEST_CASE("full-precision round trip of doubles") {
        const double value = 0.1234567890123456789;
        CHECK(std::stod(format_full(value)) == value);
    }
}

TEST_SUITE("manifest") {
    TEST_CASE("identical inputs give identical manifest hashes") {
        const auto dir_a = scratch_dir("man-a");
        const auto dir_b = scratch_dir("man-b");
        for (const auto& dir : {dir_a, dir_b}) {
            std::ofstream(dir / "data.csv") << "t,v\n0,1\n";
            RunManifest m("test", {{"n", "16"}}, 7);
            m.add_file(dir / "data.csv");
            m.write(dir);
        }
        // timings differ, the covered hash must not
        auto read_hash = [](const fs::path& p) {
            std::ifstream in(p / "manifest.json");
            std::string text((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
            const auto pos = text.find("manifest_hash");
            return text.substr(pos, 40);
        };
        CHECK(read_hash(dir_a) == read_hash(dir_b));
    }

    TEST_CASE("fnv1a64 matches the published test vector") {
        // FNV-1a 64-bit of "a" is 0xaf63dc4c8601ec8c.
        CHECK(fnv1a64("a", 1) == 0xaf63dc4c8601ec8cULL);
    }
}

TEST_SUITE("cli") {
    namespace {
    int run_cli(std::vector<std::string> args) {
        std::vector<const char*> argv{"ns-lab"};
        for (const auto& a : args) argv.push_back(a.c_str());
        return cli_main(static_cast<int>(argv.size()), argv.data());
    }
    }  // namespace

    TEST_CASE("missing required flags exit with the usage code") {
        CHECK(run_cli({"simulate"}) == 2);
        CHECK(run_cli({"analyze"}) == 2);
        CHECK(run_cli({"frobnicate"}) == 2);
        CHECK(run_cli({"simulate", "--config", "/nonexistent/cfg"}) == 1);
    }

    TEST_CASE("simulate, analyze, and blowup pipeline produces the documented files") {
        const auto dir = scratch_dir("pipeline");
        const auto cfg_path = dir / "run.cfg";
        std::ofstream(cfg_path) << "n = 16\n"
                                << "nu = 0.02\n"
                                << "dt = 2e-3\n"
                                << "t-final = 0.2\n"
                                << "init = random-band:1,4,-1.6667,0.2\n"
                                << "output-every = 10\n"
                                << "seed = 11\n"
                                << "out-dir = " << (dir / "out").string() << "\n";
        CHECK(run_cli({"simulate", "--config", cfg_path.string()}) == 0);
        CHECK(fs::exists(dir / "out" / "snap_000000.nssf"));
        CHECK(fs::exists(dir / "out" / "dissipation.csv"));
        CHECK(fs::exists(dir / "out" / "energy_series.csv"));
        CHECK(fs::exists(dir / "out" / "manifest.json"));

        CHECK(run_cli({"analyze", "--traj", (dir / "out").string(), "--report",
                       "dissipation.csv", "--ledger", "regularity.csv"}) == 0);
        CHECK(fs::exists(dir / "out" / "regularity.csv"));
        CHECK(fs::exists(dir / "out" / "analysis_summary.json"));

        CHECK(run_cli({"blowup", "--traj", (dir / "out").string(), "--out", "blowup.csv"}) == 0);
        CHECK(fs::exists(dir / "out" / "blowup.csv"));
        CHECK(fs::exists(dir / "out" / "blowup_summary.json"));

        // harmonic expansion of the final snapshot
        std::vector<fs::path> snaps;
        for (const auto& e : fs::directory_iterator(dir / "out"))
            if (e.path().extension() == ".nssf") snaps.push_back(e.path());
        std::sort(snaps.begin(), snaps.end());
        const auto coeff_csv = (dir / "coeffs.csv").string();
        CHECK(run_cli({"harmonics", "expand", "--in", snaps.back().string(), "--lmax", "2",
                       "--radial", "2", "--out", coeff_csv}) == 0);
        CHECK(fs::exists(coeff_csv));
        std::ifstream csv(coeff_csv);
        std::string line0, line1;
        std::getline(csv, line0);
        std::getline(csv, line1);
        CHECK(line1 == "k_index,l,m,re_F,im_F,re_S,im_S");
    }

    TEST_CASE("ensemble subcommand writes the mean report") {
        const auto dir = scratch_dir("ensemble-cli");
        const auto cfg_path = dir / "ens.cfg";
        std::ofstream(cfg_path) << "n = 8\nnu = 0.05\ndt = 5e-3\nt-final = 0.05\n"
                                << "init = random-band:1,2,-1.6667,0.05\n"
                                << "output-every = 5\nseed = 3\n"
                                << "out-dir = " << (dir / "out").string() << "\n";
        CHECK(run_cli({"ensemble", "--config", cfg_path.string(), "--counts", "2,4",
                       "--perturbation", "random-phase"}) == 0);
        CHECK(fs::exists(dir / "out" / "mean_report.json"));
        CHECK(fs::exists(dir / "out" / "deviation.csv"));
        CHECK(fs::exists(dir / "out" / "mean_dissipation.csv"));
        CHECK(fs::exists(dir / "out" / "manifest.json"));
    }

    TEST_CASE("harmonics expand accepts raw ball samples") {
        const auto dir = scratch_dir("raw-samples");
        const auto quad = make_ball_quadrature(8, 8, 8, 1.0);
        const auto path = dir / "samples.txt";
        {
            std::ofstream out(path);
            out << "# ball-samples R=1 nr=8 ntheta=8 nphi=8\n";
            for (std::size_t ir = 0; ir < quad.radii.size(); ++ir)
                for (std::size_t it = 0; it < quad.cos_theta.size(); ++it)
                    for (int ip = 0; ip < quad.n_phi; ++ip) out << 1.0 << "\n";
        }
        const auto csv = (dir / "coeffs.csv").string();
        CHECK(run_cli({"harmonics", "expand", "--in", path.string(), "--lmax", "2", "--radial",
                       "2", "--out", csv}) == 0);
        CHECK(fs::exists(csv));
    }

    TEST_CASE("repeated runs are byte-identical") {
        const auto dir = scratch_dir("determinism");
        for (const char* sub : {"a", "b"}) {
            const auto cfg_path = dir / (std::string("run-") + sub + ".cfg");
            std::ofstream(cfg_path) << "n = 16\nnu = 0.02\ndt = 2e-3\nt-final = 0.05\n"
                                    << "init = random-band:1,4,-1.6667,0.2\n"
                                    << "output-every = 10\nseed = 11\n"
                                    << "out-dir = " << (dir / sub).string() << "\n";
            REQUIRE(run_cli({"simulate", "--config", cfg_path.string()}) == 0);
        }
        for (const auto& entry : fs::directory_iterator(dir / "a")) {
            if (entry.path().filename() == "manifest.json") continue;  // carries timings
            const auto other = dir / "b" / entry.path().filename();
            CHECK(fnv1a64_file(entry.path()) == fnv1a64_file(other));
        }
    }

    TEST_CASE("taylor-green reference run reproduces the analytic energy decay") {
        const auto dir = scratch_dir("tg-analyze");
        const auto cfg_path = dir / "tg.cfg";
        std::ofstream(cfg_path) << "n = 16\nnu = 0.01\ndt = 1e-3\nt-final = 0.3\n"
                                << "init = taylor-green\noutput-every = 50\nseed = 0\n"
                                << "out-dir = " << (dir / "out").string() << "\n";
        REQUIRE(run_cli({"simulate", "--config", cfg_path.string()}) == 0);
        REQUIRE(run_cli({"analyze", "--traj", (dir / "out").string(), "--report",
                         "dissipation.csv", "--ledger", "regularity.csv"}) == 0);
        std::ifstream csv(dir / "out" / "dissipation.csv");
        std::string line;
        std::getline(csv, line);  // schema comment
        std::getline(csv, line);  // header
        double e0 = -1.0;
        while (std::getline(csv, line)) {
            std::stringstream ss(line);
            std::string tok;
            std::getline(ss, tok, ',');
            const double t = std::stod(tok);
            std::getline(ss, tok, ',');
            const double e = std::stod(tok);
            if (e0 < 0.0) e0 = e;
            const double expected = e0 * std::exp(-4.0 * 0.01 * t);
            CHECK(std::abs(e - expected) / e0 <= 1e-6);
        }
    }
}
