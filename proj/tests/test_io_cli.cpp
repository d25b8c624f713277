#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "grushin/config.hpp"
#include "grushin/experiments.hpp"
#include "grushin/io.hpp"
#include "grushin/rng.hpp"

using namespace grushin;

namespace {

std::filesystem::path temp_dir(const std::string& tag) {
    const auto dir = std::filesystem::temp_directory_path() / ("grushin_test_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("splitmix reference stream") {
    // Frozen from the documented update rule; any reimplementation of the
    // sampling (other languages included) must reproduce these.
    SplitMix64 a(0);
    CHECK(a.next() == UINT64_C(0xe220a8397b1dcdaf));
    CHECK(a.next() == UINT64_C(0x6e789e6aa1b965f4));
    CHECK(a.next() == UINT64_C(0x06c45d188009454f));

    SplitMix64 b(42);
    CHECK(b.next() == UINT64_C(0xbdd732262feb6e95));
    CHECK(b.next() == UINT64_C(0x28efe333b266f103));

    SplitMix64 c(42);
    CHECK(c.uniform() == doctest::Approx(0.7415648787718233).epsilon(1e-15));
    const double v = c.uniform(-2.0, 2.0);
    CHECK(v >= -2.0);
    CHECK(v < 2.0);
}

TEST_CASE("field files round-trip bit-exactly") {
    const auto dir = temp_dir("roundtrip");
    const GridSpec grid =
        GridSpec(GrushinParams{1, 2, 0.75}, {5, 7, 6}, {-1.0, -2.0, 0.0}, {1.5, 2.0, 3.0});
    Field field(grid);
    SplitMix64 rng(99);
    for (double& v : field.values) v = rng.uniform(-1e6, 1e6) * 1e-3;

    const std::string path = (dir / "field.grsh").string();
    write_field(path, field);
    const Field loaded = read_field(path);

    CHECK(loaded.grid == field.grid);
    REQUIRE(loaded.values.size() == field.values.size());
    CHECK(std::memcmp(loaded.values.data(), field.values.data(),
                      field.values.size() * sizeof(double)) == 0);

    // Writing the loaded field again reproduces the file byte for byte.
    const std::string path2 = (dir / "field2.grsh").string();
    write_field(path2, loaded);
    CHECK(slurp(path) == slurp(path2));
}

TEST_CASE("field file error paths") {
    const auto dir = temp_dir("errors");
    const GridSpec grid = GridSpec::cube(GrushinParams{1, 1, 1.0}, 5, 1.0);
    Field field(grid);
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        field.values[i] = static_cast<double>(i);
    }
    const std::string path = (dir / "ok.grsh").string();
    write_field(path, field);

    const std::string content = slurp(path);

    {
        std::ofstream out(dir / "magic.grsh", std::ios::binary);
        out << "GRSHX" << content.substr(5);
    }
    CHECK_THROWS_AS(read_field((dir / "magic.grsh").string()), BadMagic);

    {
        std::ofstream out(dir / "short.grsh", std::ios::binary);
        out << content.substr(0, content.size() - 9);
    }
    CHECK_THROWS_AS(read_field((dir / "short.grsh").string()), TruncatedPayload);

    {
        std::ofstream out(dir / "long.grsh", std::ios::binary);
        out << content << "zz";
    }
    CHECK_THROWS_AS(read_field((dir / "long.grsh").string()), HeaderMismatch);

    {
        std::ofstream out(dir / "header.grsh", std::ios::binary);
        out << "GRSH1\n1 1 not_a_number\n5 5\n-1 1 -1 1\n";
    }
    CHECK_THROWS_AS(read_field((dir / "header.grsh").string()), HeaderMismatch);

    {
        std::ofstream out(dir / "dims.grsh", std::ios::binary);
        out << "GRSH1\n1 1 1\n2 5\n-1 1 -1 1\n";
    }
    CHECK_THROWS_AS(read_field((dir / "dims.grsh").string()), HeaderMismatch);
}

TEST_CASE("field csv export") {
    const auto dir = temp_dir("csv");
    const GridSpec grid = GridSpec::cube(GrushinParams{1, 1, 1.0}, 3, 1.0);
    Field field(grid);
    field.values[4] = 0.125;  // center node of the 3x3 grid
    const std::string path = (dir / "field.csv").string();
    write_field_csv(path, field);

    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "x0,y0,value");
    int rows = 0;
    bool found_center = false;
    while (std::getline(in, line)) {
        ++rows;
        if (line == "0,0,0.125") found_center = true;
    }
    CHECK(rows == 9);
    CHECK(found_center);
}

TEST_CASE("format_double round-trips doubles") {
    SplitMix64 rng(7);
    for (int i = 0; i < 200; ++i) {
        const double v = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-12.0, 12.0));
        CHECK(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("config parsing") {
    const ConfigFile cfg = ConfigFile::parse_string(
        "# a comment\n"
        "problem = identities   # trailing comment\n"
        "gamma=1.5\n"
        "\n"
        "nodes =  65\n"
        "radii = 4 8 16\n");
    CHECK(cfg.require_string("problem") == "identities");
    CHECK(cfg.require_double("gamma") == 1.5);
    CHECK(cfg.get_int("nodes", 0) == 65);
    CHECK(cfg.get_double_list("radii", {}).size() == 3);
    CHECK(cfg.get_double("missing", 2.5) == 2.5);
    CHECK_NOTHROW(cfg.finalize());
}

TEST_CASE("config error reporting carries line numbers") {
    CHECK_THROWS_AS(ConfigFile::parse_string("key_without_value\n"), ConfigParse);
    try {
        ConfigFile::parse_string("a = 1\nbroken line\n");
        FAIL("expected ConfigParse");
    } catch (const ConfigParse& err) {
        CHECK(err.line == 2);
    }
    CHECK_THROWS_AS(ConfigFile::parse_string("a = 1\na = 2\n"), ConfigParse);

    const ConfigFile cfg = ConfigFile::parse_string("count = seven\n");
    CHECK_THROWS_AS(cfg.get_int("count", 0), ConfigParse);
    CHECK_THROWS_AS(cfg.require_double("count"), ConfigParse);
}

TEST_CASE("missing gamma is a config error naming the key") {
    const ConfigFile cfg = ConfigFile::parse_string("problem = identities\n");
    std::ostringstream log;
    try {
        run_experiment(cfg, log);
        FAIL("expected ConfigParse");
    } catch (const ConfigParse& err) {
        CHECK(std::string(err.what()).find("gamma") != std::string::npos);
    }
}

TEST_CASE("unknown keys are rejected before any work") {
    const auto dir = temp_dir("unknown");
    const ConfigFile cfg = ConfigFile::parse_string("problem = identities\ngamma = 1\n"
                                                    "output_dir = " +
                                                    (dir / "out").string() + "\nwat = 1\n");
    std::ostringstream log;
    CHECK_THROWS_AS(run_experiment(cfg, log), ConfigParse);
    CHECK(!std::filesystem::exists(dir / "out"));
}

TEST_CASE("identities experiment is deterministic byte for byte") {
    const auto dir = temp_dir("determinism");
    const std::string out = (dir / "out").string();
    const std::string config = "problem = identities\ngamma = 1.0\nseed = 42\nsamples = 30\n"
                               "output_dir = " +
                               out + "\n";
    std::ostringstream log;
    CHECK(run_experiment(ConfigFile::parse_string(config), log) == 0);
    const std::string csv_first = slurp(out + "/identities.csv");
    const std::string json_first = slurp(out + "/summary.json");
    CHECK(run_experiment(ConfigFile::parse_string(config), log) == 0);
    CHECK(slurp(out + "/identities.csv") == csv_first);
    CHECK(slurp(out + "/summary.json") == json_first);
    CHECK(!csv_first.empty());

    // A different seed samples different points.
    const std::string config2 = "problem = identities\ngamma = 1.0\nseed = 43\nsamples = 30\n"
                                "output_dir = " +
                                out + "\n";
    CHECK(run_experiment(ConfigFile::parse_string(config2), log) == 0);
    CHECK(slurp(out + "/identities.csv") != csv_first);
}

TEST_CASE("kelvin experiment writes residual rows") {
    const auto dir = temp_dir("kelvin_exp");
    const std::string out = (dir / "out").string();
    const std::string config = "problem = kelvin_verify\ngamma = 1.0\nsamples = 20\n"
                               "output_dir = " +
                               out + "\n";
    std::ostringstream log;
    CHECK(run_experiment(ConfigFile::parse_string(config), log) == 0);
    std::ifstream in(out + "/kelvin.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "x0,y0,transformed_side,original_side,residual");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 20);
}

TEST_CASE("verify suites report pass lines") {
    std::ostringstream log;
    CHECK(verify_suite("identities", log) == 0);
    CHECK(log.str().find("[PASS]") != std::string::npos);
    CHECK_THROWS_AS(verify_suite("nonsense", log), Error);
}
