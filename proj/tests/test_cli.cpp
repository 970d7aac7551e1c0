#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "jamcast/csvio.hpp"
#include "jamcast/numio.hpp"
#include "jamcast/synth.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(JAMCAST_CLI_PATH) + " " + args + " 2>&1";
    std::array<char, 256> buf{};
    RunResult result;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe) != nullptr) result.output += buf.data();
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

void write_synth_config(const fs::path& path, int roads, int days, int seed) {
    std::ofstream out(path);
    out << "seed = " << seed << "\nroads = " << roads << "\ndays = " << days
        << "\nstart_date = 2019-04-15\nnoise_std = 0.5\n";
}

}  // namespace

TEST_CASE("synth command row counts and determinism") {
    const auto dir = testsupport::scratch_dir("cli_synth");
    write_synth_config(dir / "synth.cfg", 4, 14, 42);

    const auto a = run("synth --config " + (dir / "synth.cfg").string() + " --out " +
                       (dir / "a.csv").string());
    CHECK(a.exit_code == 0);
    CHECK(a.output.find("16128 rows") != std::string::npos);  // 4 x 14 x 288

    const auto b = run("synth --config " + (dir / "synth.cfg").string() + " --out " +
                       (dir / "b.csv").string());
    CHECK(b.exit_code == 0);
    CHECK(testsupport::read_file(dir / "a.csv") == testsupport::read_file(dir / "b.csv"));
    CHECK(fs::exists(dir / "a.csv.manifest.json"));

    SUBCASE("invalid config exits 2") {
        std::ofstream bad(dir / "bad.cfg");
        bad << "unknown_key = 1\n";
        bad.close();
        const auto r = run("synth --config " + (dir / "bad.cfg").string() + " --out " +
                           (dir / "c.csv").string());
        CHECK(r.exit_code == 2);
    }
    SUBCASE("bad usage exits 2") {
        CHECK(run("synthh").exit_code == 2);
    }
}

TEST_CASE("experiment command produces the full artifact set") {
    const auto dir = testsupport::scratch_dir("cli_experiment");
    write_synth_config(dir / "synth.cfg", 2, 14, 7);
    REQUIRE(run("synth --config " + (dir / "synth.cfg").string() + " --out " +
                (dir / "data.csv").string())
                .exit_code == 0);

    const std::string out_dir = (dir / "out").string();
    const auto r = run("experiment --data " + (dir / "data.csv").string() + " --out " +
                       out_dir + " --seed 3");
    CHECK(r.exit_code == 0);

    CHECK(fs::exists(fs::path(out_dir) / "report.csv"));
    CHECK(fs::exists(fs::path(out_dir) / "comparison.csv"));
    CHECK(fs::exists(fs::path(out_dir) / "comparison.svg"));
    CHECK(fs::exists(fs::path(out_dir) / "manifest.json"));
    int road_svgs = 0, models = 0, forecasts = 0;
    for (const auto& entry : fs::recursive_directory_iterator(out_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.starts_with("road_") && name.ends_with(".svg")) ++road_svgs;
        if (name.ends_with(".model")) ++models;
        if (entry.path().parent_path().filename() == "forecasts") ++forecasts;
    }
    CHECK(road_svgs == 2);
    CHECK(models == 2);
    CHECK(forecasts == 2);

    // Report average equals the mean of the road rows, re-parsed from disk.
    std::ifstream in(fs::path(out_dir) / "report.csv");
    std::string line;
    std::getline(in, line);
    REQUIRE(line == "road_id,method,rmse");
    double svr_sum = 0.0, svr_avg = -1.0;
    int svr_roads = 0;
    while (std::getline(in, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        if (line.substr(c1 + 1, c2 - c1 - 1) != "svr") continue;
        const double value = jamcast::parse_double(line.substr(c2 + 1));
        if (line.substr(0, c1) == "average") {
            svr_avg = value;
        } else {
            svr_sum += value;
            ++svr_roads;
        }
    }
    REQUIRE(svr_roads == 2);
    CHECK(svr_avg == doctest::Approx(svr_sum / 2.0).epsilon(1e-12));
}

TEST_CASE("experiment command data-error exits") {
    const auto dir = testsupport::scratch_dir("cli_experiment_errors");
    CHECK(run("experiment --data " + (dir / "nope.csv").string() + " --out " +
              (dir / "out2").string())
              .exit_code == 3);

    write_synth_config(dir / "short.cfg", 1, 3, 7);
    REQUIRE(run("synth --config " + (dir / "short.cfg").string() + " --out " +
                (dir / "short.csv").string())
                .exit_code == 0);
    CHECK(run("experiment --data " + (dir / "short.csv").string() + " --out " +
              (dir / "out3").string())
              .exit_code == 3);
}

TEST_CASE("a grid whose every point fails to converge exits 4") {
    const auto dir = testsupport::scratch_dir("cli_exit4");
    write_synth_config(dir / "synth.cfg", 1, 14, 3);
    REQUIRE(run("synth --config " + (dir / "synth.cfg").string() + " --out " +
                (dir / "data.csv").string())
                .exit_code == 0);
    std::ofstream grid(dir / "grid.cfg");
    grid << "C=10 epsilon=0 tol=1e-15 max_passes=1\n";  // one pass cannot hit 1e-15
    grid.close();
    const auto r = run("experiment --data " + (dir / "data.csv").string() + " --out " +
                       (dir / "out").string() + " --grid " + (dir / "grid.cfg").string());
    CHECK(r.exit_code == 4);
    CHECK(r.output.find("road_01") != std::string::npos);
}

TEST_CASE("random road selection is seeded") {
    const auto dir = testsupport::scratch_dir("cli_random");
    write_synth_config(dir / "synth.cfg", 5, 14, 11);
    REQUIRE(run("synth --config " + (dir / "synth.cfg").string() + " --out " +
                (dir / "data.csv").string())
                .exit_code == 0);

    const auto r1 = run("experiment --data " + (dir / "data.csv").string() + " --out " +
                        (dir / "o1").string() + " --random 2 --seed 7");
    const auto r2 = run("experiment --data " + (dir / "data.csv").string() + " --out " +
                        (dir / "o2").string() + " --random 2 --seed 7");
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r2.exit_code == 0);
    const auto roads_line = [](const std::string& text) {
        const auto pos = text.find("roads:");
        return text.substr(pos, text.find('\n', pos) - pos);
    };
    CHECK(roads_line(r1.output) == roads_line(r2.output));
    CHECK(testsupport::read_file(dir / "o1" / "manifest.json") ==
          testsupport::read_file(dir / "o2" / "manifest.json"));
}

TEST_CASE("collect command with the mock transport") {
    const auto dir = testsupport::scratch_dir("cli_collect");
    std::ofstream cfg(dir / "collect.cfg");
    cfg << "corner_a_lat = 28.747193\ncorner_a_lon = 77.091064\n"
           "corner_b_lat = 28.495247\ncorner_b_lon = 77.304611\n";
    cfg.close();

    SUBCASE("15 minutes -> 3 cycles") {
        const auto r = run("collect --config " + (dir / "collect.cfg").string() +
                           " --out " + (dir / "c.csv").string() +
                           " --duration-s 900 --mock-provider --mock-seed 1");
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("3 cycles ok") != std::string::npos);
        CHECK(jamcast::load_csv((dir / "c.csv").string()).size() == 12);  // 3 cycles x 4 roads
    }
    SUBCASE("zero duration exits 0 with no rows") {
        const auto r = run("collect --config " + (dir / "collect.cfg").string() +
                           " --out " + (dir / "z.csv").string() +
                           " --duration-s 0 --mock-provider");
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("0 cycles ok") != std::string::npos);
    }
    SUBCASE("interval override packs 15 cycles into 15 minutes") {
        const auto r = run("collect --config " + (dir / "collect.cfg").string() +
                           " --out " + (dir / "i.csv").string() +
                           " --duration-s 900 --interval-s 60 --mock-provider");
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("15 cycles ok") != std::string::npos);
    }
    SUBCASE("non-mock mode without endpoints exits 2") {
        const auto r = run("collect --config " + (dir / "collect.cfg").string() +
                           " --out " + (dir / "n.csv").string() + " --duration-s 300");
        CHECK(r.exit_code == 2);
    }
}
