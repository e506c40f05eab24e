#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cistair/config.hpp"
#include "cistair/errors.hpp"
#include "cistair/io.hpp"
#include "cistair/staircase.hpp"
#include "doctest.h"

using namespace cistair;

TEST_CASE("laminate JSONL round trip keeps exact weights") {
    const auto P = diagonal_params<Rational>(2, 2, 2);
    const auto s = step(P, CMq::J(), 1, 0.0, 0.1);
    std::stringstream ss;
    write_laminate_jsonl(ss, s.nu);
    const auto recs = read_laminate_jsonl(ss);
    REQUIRE(recs.size() == s.nu.nodes().size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const auto& n = s.nu.nodes()[i];
        CHECK(recs[i].parent == n.parent);
        CHECK(recs[i].left == n.left);
        CHECK(Rational(recs[i].weight) == n.weight);
        CHECK(Rational(recs[i].ap_re) == n.matrix.ap.re);
        CHECK(Rational(recs[i].am_im) == n.matrix.am.im);
    }
    bool two_fifths = false;
    for (const auto& r : recs) two_fifths |= r.weight == "2/5";
    CHECK(two_fifths);

    std::stringstream bad("{\"schema\":\"cistair.laminate/2\",\"nodes\":0}\n");
    CHECK_THROWS_AS(read_laminate_jsonl(bad), Error);
}

TEST_CASE("mesh JSON round trip and schema checks") {
    PiecewiseAffineMap m;
    m.domain = rectangle(0, 0, 1, 1);
    m.boundary = Mat2<double>(0.1, 0.2, 0.3, 1.0 / 3.0);
    Cell c;
    c.poly = m.domain;
    c.G = m.boundary;
    c.c = {1e-17, -2.5};
    c.level = 3;
    c.kind = CellKind::Target2;
    c.active = false;
    m.cells.push_back(c);
    const auto j = mesh_to_json(m, {2});
    std::vector<int> ph;
    const auto back = mesh_from_json(nlohmann::json::parse(j.dump()), &ph);
    REQUIRE(back.cells.size() == 1);
    CHECK(back.cells[0].G == c.G);
    CHECK(back.cells[0].c.x == c.c.x);
    CHECK(back.cells[0].kind == CellKind::Target2);
    CHECK(back.cells[0].level == 3);
    CHECK(ph == std::vector<int>{2});

    auto j2 = j;
    j2["schema"] = "cistair.mesh/0";
    CHECK_THROWS_AS(mesh_from_json(j2), Error);

    std::ostringstream os;
    write_mesh_csv(os, m, {2});
    std::istringstream is(os.str());
    CHECK_NOTHROW(check_csv_schema(is, kMeshCsvSchema, "mesh.csv"));
    std::istringstream is2("cell_id,area\n");
    CHECK_THROWS_AS(check_csv_schema(is2, kMeshCsvSchema, "mesh.csv"), Error);
}

TEST_CASE("config parsing, overrides and validation") {
    const auto path = std::filesystem::temp_directory_path() / "cistair_cfg_test.txt";
    {
        std::ofstream f(path);
        f << "# staircase run\nK = 2\nS1 = 1   # phase one\nS2=2\nN = 6\ntheta = 0, 1.5707963267948966\n";
    }
    RunConfig cfg;
    cfg.load_file(path.string());
    CHECK(cfg.K == 2);
    CHECK(cfg.S1 == 1);
    CHECK(cfg.N == 6);
    CHECK(cfg.thetas().size() == 2);
    cfg.set("N", "9");
    CHECK(cfg.N == 9);
    CHECK_NOTHROW(cfg.validate());

    RunConfig back;
    for (const auto& [k, v] : cfg.entries()) back.set(k, v);
    CHECK(back.entries() == cfg.entries());

    CHECK_THROWS_AS(cfg.set("colour", "red"), Error);
    CHECK_THROWS_AS(cfg.set("N", "2.5"), Error);
    CHECK_THROWS_AS(cfg.set("gamma", "abc"), Error);
    cfg.set("gamma", "1.5");
    CHECK_THROWS_AS(cfg.validate(), Error);
    std::filesystem::remove(path);

    RunConfig g;
    g.set("theta_grid", "4");
    const auto th = g.thetas();
    REQUIRE(th.size() == 4);
    CHECK(th[2] == doctest::Approx(M_PI / 2));
}
