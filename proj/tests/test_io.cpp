#include "qhforge/io.hpp"

#include "qhforge/wdvv.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>

using namespace qhforge;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("qhforge_test_" + std::to_string(::getpid()) + "_" +
                                            std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static inline int counter = 0;
};

}  // namespace

TEST_CASE("table serialization round trips byte for byte") {
    auto p2 = RingModel::projective_space(2);
    auto table = solve_recursion(p2, Rat(3));
    std::string text = io::table_to_jsonl(table);
    auto back = io::table_from_jsonl(text);
    CHECK(back == table);
    CHECK(io::table_to_jsonl(back) == text);
}

TEST_CASE("cache stores and reloads identically") {
    TempDir dir;
    auto p2 = RingModel::projective_space(2);
    auto table = solve_recursion(p2, Rat(2));
    std::string path = io::save_table_cache(dir.path.string(), table);
    CHECK(fs::exists(path));

    auto loaded = io::load_table_cache(dir.path.string(), "P2", Rat(2), solver_version());
    REQUIRE(loaded.has_value());
    CHECK(*loaded == table);
    CHECK(io::table_to_jsonl(*loaded) == io::table_to_jsonl(table));

    // Version bump misses.
    CHECK(!io::load_table_cache(dir.path.string(), "P2", Rat(2), solver_version() + 1));

    // Truncated cache reads back as a miss, not an error.
    std::string text = io::read_file(path);
    io::write_file(path, text.substr(0, text.size() / 2 + 1));
    CHECK(!io::load_table_cache(dir.path.string(), "P2", Rat(2), solver_version()));
}

TEST_CASE("solver output is reproducible through serialization") {
    auto p2 = RingModel::projective_space(2);
    auto first = io::table_to_jsonl(solve_recursion(p2, Rat(4)));
    auto second = io::table_to_jsonl(solve_recursion(p2, Rat(4)));
    auto parallel = io::table_to_jsonl(solve_recursion(p2, Rat(4), true));
    CHECK(first == second);
    CHECK(first == parallel);
}

TEST_CASE("model json round trip") {
    auto p3 = RingModel::projective_space(3);
    auto j = io::model_to_json(p3);
    auto back = io::model_from_json(j);
    CHECK(back.name() == "P3");
    CHECK(back.basis_size() == 4);
    CHECK(back.eta() == p3.eta());
    CHECK(io::model_to_json(back) == j);

    CHECK_THROWS(io::load_model("P9"));
}

TEST_CASE("floer json round trip") {
    auto lat = make_lattice({Rat(1)}, {0});
    NovikovElement entry = NovikovElement::scalar(lat, Rat(1), Rat(2)) -
                           NovikovElement::monomial(lat, CurveClass({1}), make_rat(2, 3), Rat(2));
    FloerComplex c(lat, Rat(2), {{"a", 1, make_rat(3, 2)}, {"b", 0, Rat(0)}}, {{{0, 1}, entry}});
    auto j = io::floer_to_json(c);
    auto back = io::floer_from_json(j);
    CHECK(back.generators().size() == 2);
    CHECK(back.boundary().size() == 1);
    CHECK(back.boundary().at({0, 1}) == entry);
    CHECK(io::floer_to_json(back) == j);
}

TEST_CASE("graph json") {
    auto p2 = RingModel::projective_space(2);
    auto strata = enumerate_strata(p2, CurveClass({2}), 0, 0);
    auto j = io::graphs_to_json(strata);
    CHECK(j.at("count").get<size_t>() == 2);
    CHECK(j.at("graphs").size() == 2);
}
