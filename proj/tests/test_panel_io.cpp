#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "gen.hpp"
#include "popcov/error.hpp"
#include "popcov/panel_io.hpp"

using namespace popcov;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("popcov_panel_io_" + std::to_string(std::random_device{}()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path write(const std::string& name, const std::string& text) const {
        std::ofstream(path / name) << text;
        return path / name;
    }
};

}  // namespace

TEST_CASE("read panel") {
    TempDir dir;
    const auto f = dir.write("p.tsv", "snp_id\tchrom\tYRI\tCEU\nrs1\t1\t0.25\t0.5\nrs2\tX\t1\t0\n");
    const auto p = read_panel(f);
    CHECK(p.n_snps() == 2);
    CHECK(p.n_pops() == 2);
    CHECK(p(0, 1) == 0.5);
    CHECK(p.snp_ids()[1] == "rs2");
    CHECK(p.chrom()[1] == "X");
    CHECK(p.pop_names() == std::vector<std::string>{"YRI", "CEU"});
    CHECK_FALSE(p.chrom_unknown());
}

TEST_CASE("panel round trip, plain and gzip") {
    TempDir dir;
    std::mt19937_64 rng(51);
    const auto raw = gen::panel(rng, 300, 4);
    std::vector<std::string> ids, chrom;
    for (std::size_t k = 0; k < 300; ++k) {
        ids.push_back("s" + std::to_string(k));
        chrom.push_back(std::to_string(k % 5 + 1));
    }
    std::vector<double> v(raw.values().begin(), raw.values().end());
    const FreqPanel p(300, 4, v, ids, chrom, {"a", "b", "c", "d"});
    for (const char* name : {"p.tsv", "p.tsv.gz"}) {
        write_panel(dir.path / name, p);
        const auto q = read_panel(dir.path / name);
        CHECK(std::equal(q.values().begin(), q.values().end(), p.values().begin()));
        CHECK(q.snp_ids() == ids);
        CHECK(q.chrom() == chrom);
        CHECK(q.pop_names() == p.pop_names());
    }
    // the .gz file really is compressed
    std::ifstream gz(dir.path / "p.tsv.gz", std::ios::binary);
    CHECK(gz.get() == 0x1f);
    CHECK(gz.get() == 0x8b);
}

TEST_CASE("panel parse errors carry file and line") {
    TempDir dir;
    CHECK_THROWS_WITH_AS(read_panel(dir.write("a.tsv", "snp_id\tchrom\tp1\tp2\nr1\t1\t0.1\t0.2\nr2\t1\t0.1\t.\n")),
                         doctest::Contains(":3"), InputError);
    CHECK_THROWS_WITH_AS(read_panel(dir.write("b.tsv", "snp_id\tchrom\tp1\tp2\nr1\t1\t0.1\n")), doctest::Contains(":2"),
                         InputError);
    CHECK_THROWS_WITH_AS(read_panel(dir.write("c.tsv", "snp_id\tchrom\tp1\tp2\nr1\t1\t0.1\tabc\n")),
                         doctest::Contains(":2"), InputError);
    CHECK_THROWS_AS(read_panel(dir.write("d.tsv", "id\tp1\tp2\nr1\t0.1\t0.2\n")), InputError);
    CHECK_THROWS_WITH_AS(read_panel(dir.write("e.tsv", "snp_id\tchrom\tp1\tp2\n")), doctest::Contains("empty panel"),
                         InputError);
    CHECK_THROWS_AS(read_panel(dir.write("f.tsv", "snp_id\tchrom\tp1\nr1\t1\t0.1\n")), InputError);
    CHECK_THROWS_AS(read_panel(dir.path / "missing.tsv"), InputError);
    CHECK_THROWS_AS(read_panel(dir.write("g.tsv", "snp_id\tchrom\tp1\tp2\nr1\t1\t0.1\t1.5\n"), true), InputError);
    CHECK_NOTHROW(read_panel(dir.write("h.tsv", "snp_id\tchrom\tp1\tp2\nr1\t1\t0.1\t1.5\n"), false));
}

TEST_CASE("sizes files") {
    TempDir dir;
    const auto p = read_panel(dir.write("p.tsv", "snp_id\tchrom\tp1\tp2\nr1\t1\t0.1\t0.2\nr2\t2\t0.3\t0.4\n"));
    const auto s = read_sizes(dir.write("s.tsv", "snp_id\tchrom\tp1\tp2\nr1\t1\t10\t12\nr2\t2\t8\t9\n"), p);
    CHECK(s(0, 1) == 12);
    CHECK(s(1, 0) == 8);
    write_sizes(dir.path / "t.tsv", p, s);
    CHECK(read_sizes(dir.path / "t.tsv", p)(1, 1) == 9);

    CHECK_THROWS_AS(read_sizes(dir.write("a.tsv", "snp_id\tchrom\tp1\tp2\nr1\t1\t10\t.\nr2\t2\t8\t9\n"), p), InputError);
    CHECK_THROWS_AS(read_sizes(dir.write("b.tsv", "snp_id\tchrom\tp1\tp2\nr1\t1\t10\t1.5\nr2\t2\t8\t9\n"), p),
                    InputError);
    CHECK_THROWS_AS(read_sizes(dir.write("c.tsv", "snp_id\tchrom\tp1\tp2\nrX\t1\t10\t12\nr2\t2\t8\t9\n"), p),
                    InputError);
    CHECK_THROWS_AS(read_sizes(dir.write("d.tsv", "snp_id\tchrom\tp1\tp2\nr1\t1\t10\t12\n"), p), InputError);
    CHECK_THROWS_AS(read_sizes(dir.write("e.tsv", "snp_id\tchrom\tp1\tp2\nr1\t1\t10\t0\nr2\t2\t8\t9\n"), p), InputError);
}
