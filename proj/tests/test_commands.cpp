#include <filesystem>

#include "cistair/commands.hpp"
#include "cistair/errors.hpp"
#include "cistair/io.hpp"
#include "doctest.h"

using namespace cistair;

namespace {

std::string tmpdir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("cistair_cmd_" + std::to_string(::getpid())) / name;
    std::filesystem::remove_all(p);
    return p.string();
}

}  // namespace

TEST_CASE("exponents command: diagonal, single phase, s = 0") {
    RunConfig c;
    auto r = cmd_exponents(c);
    CHECK(r.report["q"].get<double>() == doctest::Approx(4.0 / 3.0));
    CHECK(r.report["p"].get<double>() == doctest::Approx(4.0));
    CHECK(r.report["case"] == "s>0");

    RunConfig one;
    one.set("sigma1", "1,0,0,1");
    one.set("sigma2", "1,0,0,1");
    r = cmd_exponents(one);
    CHECK(r.report["single_phase"] == true);

    RunConfig zero;
    zero.set("S1", "0.5");
    try {
        cmd_exponents(zero);
        FAIL("expected an unsupported-case error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Unsupported);
    }
}

TEST_CASE("staircase command with N = 1 writes a single-step table") {
    RunConfig c;
    c.set("N", "1");
    c.set("output_dir", tmpdir("st1"));
    const auto r = cmd_staircase(c);
    REQUIRE(r.report["runs"].size() == 1);
    CHECK(r.report["runs"][0]["moment_final"].get<double>() > 0);
    std::istringstream is(read_text_file(c.output_dir + "/series.csv"));
    check_csv_schema(is, kSeriesCsvSchema, "series.csv");
    std::string line;
    int rows = 0;
    std::getline(is, line);
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 1);
}

TEST_CASE("realize is deterministic and verify reproduces it") {
    RunConfig c;
    c.set("N", "4");
    c.set("output_dir", tmpdir("a"));
    auto r1 = cmd_realize(c);
    CHECK(r1.status == 0);
    RunConfig c2 = c;
    c2.set("output_dir", tmpdir("b"));
    auto r2 = cmd_realize(c2);
    CHECK(r2.status == 0);
    for (const char* f : {"mesh.csv", "profile.csv", "levels.csv", "mesh.json"})
        CHECK(read_text_file(c.output_dir + "/" + f) == read_text_file(c2.output_dir + "/" + f));
    const auto v = cmd_verify(c.output_dir);
    CHECK(v.status == 0);
    CHECK(v.report["summary"] == r1.report["summary"]);

    // a tiny budget stops early and reports it
    RunConfig small = c;
    small.set("cell_budget", "200");
    small.set("output_dir", tmpdir("small"));
    const auto rs = cmd_realize(small);
    CHECK(rs.status == 5);
    CHECK(rs.report["achieved_depth"].get<int>() < 4);
    std::filesystem::remove_all(std::filesystem::path(c.output_dir).parent_path());
}
