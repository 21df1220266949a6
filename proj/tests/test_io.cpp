#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>

#include "dmt/cli.hpp"
#include "dmt/pgm.hpp"
#include "dmt/report.hpp"
#include "helpers.hpp"

using namespace dmt;
namespace fs = std::filesystem;

namespace {

std::string temp_file(const std::string& name, const std::string& bytes) {
    std::string path = (fs::temp_directory_path() / name).string();
    std::ofstream out(path, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    return path;
}

} // namespace

TEST_CASE("pgm parsing") {
    SUBCASE("ascii ramp path") {
        PgmImage img = parse_pgm("P2\n# tiny\n4 1\n255\n1 3 4 2\n", "test");
        CHECK(img.width == 4);
        CHECK(img.height == 1);
        CHECK(img.pixels == std::vector<int>{1, 3, 4, 2});
        LoadedImage li = lift_image(img);
        FieldResult r = process_lower_stars(Subcomplex::full(*li.complex), li.values);
        CHECK(r.field.pairs() == std::vector<CellPair>{{{2, 0}, {1, 0}}, {{4, 0}, {5, 0}}});
        CHECK(r.critical.cells() == std::vector<Cell>{{0, 0}, {3, 0}, {6, 0}});
    }
    SUBCASE("binary 8-bit") {
        std::string data = "P5\n2 2\n255\n";
        data += static_cast<char>(9);
        data += static_cast<char>(2);
        data += static_cast<char>(5);
        data += static_cast<char>(7);
        PgmImage img = parse_pgm(data, "test");
        CHECK(img.pixels == std::vector<int>{9, 2, 5, 7});
    }
    SUBCASE("binary 16-bit is big-endian") {
        std::string data = "P5\n2 1\n65535\n";
        data += static_cast<char>(0x01);
        data += static_cast<char>(0x02); // 258
        data += static_cast<char>(0xFF);
        data += static_cast<char>(0xFE); // 65534
        PgmImage img = parse_pgm(data, "test");
        CHECK(img.pixels == std::vector<int>{258, 65534});
    }
    SUBCASE("errors carry the byte offset") {
        CHECK_THROWS_WITH_AS(parse_pgm("P3\n1 1\n255\n0\n", "t"),
                             doctest::Contains("byte 0"), std::runtime_error);
        std::string trunc = "P5\n3 3\n255\nab"; // 9 samples promised, 2 given
        CHECK_THROWS_WITH_AS(parse_pgm(trunc, "t"), doctest::Contains("truncated"),
                             std::runtime_error);
        CHECK_THROWS_AS(parse_pgm("P2\n2 1\n10\n4 11\n", "t"), std::runtime_error);
    }
    SUBCASE("file round trip") {
        PgmImage img;
        img.width = 3;
        img.height = 2;
        img.maxval = 255;
        img.pixels = {5, 9, 1, 7, 3, 8};
        std::string path = temp_file("dmt_io_test.pgm", write_pgm_p2(img));
        PgmImage back = load_pgm(path);
        CHECK(back.pixels == img.pixels);
        fs::remove(path);
    }
}

TEST_CASE("report round trip and verification") {
    dmtest::RampPath fx;
    ProcessLowerStars gen;
    FieldResult rk = gen.run(fx.K, fx.g);

    FieldReport rep;
    rep.mode = "oracle";
    rep.ambient = ambient_description(fx.amb);
    rep.field = rk.field;
    rep.critical = rk.critical;
    rep.metrics = {{"pairs", 2}, {"critical_cells", 3}};

    SUBCASE("emit/parse/emit is byte-stable") {
        std::string text = emit_report(rep);
        FieldReport back = parse_report(text);
        CHECK(back.field == rep.field);
        CHECK(back.critical == rep.critical);
        CHECK(back.ambient == rep.ambient);
        CHECK(emit_report(back) == text);
    }
    SUBCASE("report files round trip") {
        std::string path = (fs::temp_directory_path() / "dmt_report_test.txt").string();
        write_report(rep, path);
        std::ifstream in(path, std::ios::binary);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        FieldReport back = parse_report(text);
        CHECK(back.field == rep.field);
        CHECK(back.critical == rep.critical);
        fs::remove(path);
    }
    SUBCASE("verdicts") {
        FieldReport other = rep;
        CHECK(verify_reports(rep, other).exact_equal);
        FieldReport naive = rep;
        naive.field = field_union(rep.field, VectorField(std::vector<CellPair>{{{4, 0}, {3, 0}}}));
        Verdict v = verify_reports(naive, rep);
        CHECK(!v.exact_equal);
        REQUIRE(!v.diffs.empty());
        CHECK(v.diffs[0] == "pair only-left (4,0) <= (3,0)");
    }
    SUBCASE("mismatched complexes are rejected") {
        FieldReport other = rep;
        other.ambient = "grid2d 9 9";
        CHECK_THROWS_AS(verify_reports(rep, other), std::invalid_argument);
    }
}

TEST_CASE("cli execution") {
    SUBCASE("naive mode differs from the oracle on the ramp path") {
        std::string path = temp_file("dmt_cli_ramp.pgm", "P2\n4 1\n255\n1 3 4 2\n");
        cli::RunConfig cfg;
        cfg.mode = "naive";
        cfg.input = path;
        cfg.patches = "2x1";
        cfg.verify = true;
        cli::Outcome out = cli::execute(cfg);
        CHECK(out.exit_code == 2);
        CHECK(out.report.verdict == "differs");
        bool has_extra = false;
        for (const std::string& d : out.report.diffs)
            if (d == "pair only-left (4,0) <= (3,0)") has_extra = true;
        CHECK(has_extra);
        fs::remove(path);
    }
    SUBCASE("merge and distributed modes verify exactly") {
        for (const char* mode : {"merge-general", "merge-intersection", "merge-antithetic",
                                 "merge-2d", "distributed"}) {
            cli::RunConfig cfg;
            cfg.mode = mode;
            cfg.random_size = "12x9";
            cfg.seed = 7;
            cfg.verify = true;
            if (std::string(mode) == "distributed") cfg.patches = "3x2";
            CAPTURE(mode);
            cli::Outcome out = cli::execute(cfg);
            CHECK(out.exit_code == 0);
            CHECK(out.report.verdict == "exact-equal");
        }
    }
    SUBCASE("a one-pixel image reports one critical vertex and no pairs") {
        cli::RunConfig cfg;
        cfg.mode = "oracle";
        cfg.random_size = "1x1";
        cfg.verify = true;
        cli::Outcome out = cli::execute(cfg);
        CHECK(out.exit_code == 0);
        CHECK(out.report.field.size() == 0);
        CHECK(out.report.critical.cells() == std::vector<Cell>{{0, 0}});
    }
    SUBCASE("horizontal two-set split") {
        cli::RunConfig cfg;
        cfg.mode = "merge-general";
        cfg.random_size = "9x14";
        cfg.seed = 4;
        cfg.patches = "1x2";
        cfg.verify = true;
        CHECK(cli::execute(cfg).report.verdict == "exact-equal");
        cfg.mode = "merge-2d"; // strip merge insists on the vertical split
        CHECK_THROWS_AS(cli::execute(cfg), std::invalid_argument);
    }
    SUBCASE("two runs emit identical bytes") {
        cli::RunConfig cfg;
        cfg.mode = "distributed";
        cfg.random_size = "16x11";
        cfg.seed = 99;
        cfg.patches = "2x2";
        cfg.verify = true;
        std::string a = emit_report(cli::execute(cfg).report);
        std::string b = emit_report(cli::execute(cfg).report);
        CHECK(a == b);
        CHECK(a.find("verdict exact-equal") != std::string::npos);
    }
    SUBCASE("tree mode") {
        std::string path = temp_file("dmt_cli_tree.txt", "0\n0 1\n1 2\n2 3\n3 4\n4 5\n5 6\n");
        cli::RunConfig cfg;
        cfg.mode = "tree";
        cfg.input = path;
        cfg.radius = 2;
        cfg.seed = 3;
        cfg.verify = true;
        cli::Outcome out = cli::execute(cfg);
        CHECK(out.exit_code == 0);
        CHECK(out.report.verdict == "exact-equal");
        bool margin = false;
        for (auto& [k, v] : out.report.metrics)
            if (k == "margin_ok" && v == 1) margin = true;
        CHECK(margin);
        fs::remove(path);
    }
    SUBCASE("configuration errors are loud") {
        cli::RunConfig cfg;
        cfg.mode = "merge-2d";
        cfg.random_size = "3x3"; // too narrow to split with a 2-column overlap
        CHECK_THROWS_AS(cli::execute(cfg), std::invalid_argument);
        cli::RunConfig cfg2;
        cfg2.mode = "oracle";
        CHECK_THROWS_AS(cli::execute(cfg2), std::invalid_argument); // no input at all
    }
}
