#include "qhforge/io.hpp"
#include "qhforge/wdvv.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>

// End-to-end checks of the command-line binary: output shapes and the exit
// code contract (0 success, 1 verification failure, 2 input error).

namespace fs = std::filesystem;
using namespace qhforge;

namespace {

std::pair<int, std::string> run_cli(const std::string& args, const std::string& env = "") {
    std::string cmd = (env.empty() ? "" : "env " + env + " ") + std::string(QHFORGE_CLI_PATH) +
                      " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
    return {WEXITSTATUS(pclose(pipe)), out};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("qhforge_cli_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("kontsevich output") {
    auto [code, out] = run_cli("kontsevich --max-degree 4");
    CHECK(code == 0);
    CHECK(out == "N_1 = 1\nN_2 = 1\nN_3 = 12\nN_4 = 620\n");

    auto [csv_code, csv] = run_cli("kontsevich --max-degree 2 --format csv");
    CHECK(csv_code == 0);
    CHECK(csv == "d,count\n1,1\n2,1\n");

    auto [json_code, json_out] = run_cli("kontsevich --max-degree 2 --format json");
    CHECK(json_code == 0);
    CHECK(io::json::parse(json_out).at("counts").size() == 2);
}

TEST_CASE("unknown model and unreadable file exit 2") {
    auto [code, out] = run_cli("qh --model P9 --cutoff 2");
    CHECK(code == 2);
    CHECK(out.find("unknown model") != std::string::npos);

    auto [fcode, fout] = run_cli("floer homology /no/such/file.json");
    CHECK(fcode == 2);
    CHECK(fout.find("unreadable") != std::string::npos);
}

TEST_CASE("floer subcommands against fixture files") {
    TempDir dir;
    auto s2 = from_morse({{"min", 0}, {"max", 2}}, {});
    std::string s2_path = (dir.path / "s2.json").string();
    io::write_file(s2_path, io::floer_to_json(s2).dump());

    auto [code, out] = run_cli("floer homology " + s2_path);
    CHECK(code == 0);
    CHECK(out == "rank 0: 1\nrank 2: 1\n");

    auto [acode, aout] = run_cli("floer arnold " + s2_path + " --betti 1,0,1");
    CHECK(acode == 0);
    CHECK(aout.find("yes") != std::string::npos);

    // Wrong Betti input is a verification failure.
    auto [wcode, wout] = run_cli("floer arnold " + s2_path + " --betti 1,1,1");
    CHECK(wcode == 1);
    CHECK(wout.find("NO") != std::string::npos);

    // A complex whose boundary does not square to zero fails `check`.
    auto lat = make_lattice({Rat(1)}, {0});
    FloerComplex broken(lat, Rat(1), {{"x", 2, Rat(2)}, {"y", 1, Rat(1)}, {"z", 0, Rat(0)}},
                        {{{0, 1}, NovikovElement::scalar(lat, Rat(1), Rat(1))},
                         {{1, 2}, NovikovElement::scalar(lat, Rat(1), Rat(1))}});
    std::string broken_path = (dir.path / "broken.json").string();
    io::write_file(broken_path, io::floer_to_json(broken).dump());
    auto [bcode, bout] = run_cli("floer check " + broken_path);
    CHECK(bcode == 1);
    CHECK(bout.find("d^2 = 0: NO") != std::string::npos);

    // An uncertifiable pivot is an input problem: ask for a larger cutoff.
    auto lat2 = make_lattice({Rat(1), Rat(1)}, {0, 0});
    FloerComplex stuck(
        lat2, Rat(2),
        {{"x", 1, Rat(2)}, {"u", 1, Rat(3)}, {"y", 0, Rat(0)}, {"v", 0, Rat(1)}},
        {{{0, 2}, NovikovElement::monomial(lat2, CurveClass({1, 0}), Rat(1), Rat(2))},
         {{0, 3}, NovikovElement::monomial(lat2, CurveClass({0, 1}), Rat(1), Rat(2))},
         {{1, 2}, NovikovElement::monomial(lat2, CurveClass({0, 1}), Rat(1), Rat(2))}});
    std::string stuck_path = (dir.path / "stuck.json").string();
    io::write_file(stuck_path, io::floer_to_json(stuck).dump());
    auto [scode, sout] = run_cli("floer homology " + stuck_path);
    CHECK(scode == 2);
    CHECK(sout.find("insufficient cutoff") != std::string::npos);
}

TEST_CASE("cache root from the environment") {
    TempDir dir;
    auto [code, out] = run_cli("kontsevich --max-degree 2", "QHFORGE_CACHE=" + dir.path.string());
    CHECK(code == 0);
    CHECK(fs::exists(dir.path / io::table_cache_filename("P2", Rat(2), solver_version())));
}

TEST_CASE("axioms verify flags a corrupted cache with the failing key") {
    TempDir dir;
    auto [warm_code, warm_out] = run_cli("--cache " + dir.path.string() + " axioms verify --model P2 --cutoff 2");
    CHECK(warm_code == 0);

    // Flip one digit of one value in the cache.
    std::string file = (dir.path / io::table_cache_filename("P2", Rat(2), solver_version())).string();
    std::string text = io::read_file(file);
    auto pos = text.find("\"num\":\"1\"");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 9, "\"num\":\"7\"");
    io::write_file(file, text);

    auto [code, out] = run_cli("--cache " + dir.path.string() + " axioms verify --model P2 --cutoff 2");
    CHECK(code == 1);
    CHECK(out.find("FAIL cache:") != std::string::npos);
    CHECK(out.find("cached 7") != std::string::npos);
}

TEST_CASE("qh accepts a user table and flags corrupted values") {
    TempDir dir;
    auto p2 = RingModel::projective_space(2);
    auto table = solve_recursion(p2, Rat(2));
    std::string path = (dir.path / "table.jsonl").string();
    io::write_file(path, io::table_to_jsonl(table));

    auto [code, out] = run_cli("qh --model P2 --cutoff 2 --table " + path);
    CHECK(code == 0);
    CHECK(out.find("splitting residuals: all zero") != std::string::npos);

    // Perturb one stored count: the residual report must go red.
    CorrelatorTable corrupt = table;
    CorrelatorKey n2(CurveClass({2}), std::vector<Insertion>(5, Insertion{0, 2}));
    corrupt.set(n2, *table.find(n2) + 1, Provenance::user);
    io::write_file(path, io::table_to_jsonl(corrupt));
    auto [bad_code, bad_out] = run_cli("qh --model P2 --cutoff 2 --table " + path);
    CHECK(bad_code == 1);
    CHECK(bad_out.find("NONZERO") != std::string::npos);

    // Model mismatch is an input error.
    auto [mcode, mout] = run_cli("qh --model P3 --cutoff 2 --table " + path);
    CHECK(mcode == 2);
}

TEST_CASE("strata listing formats") {
    TempDir dir;
    auto [code, out] = run_cli("strata --model P2 --class 2 --marks 0");
    CHECK(code == 0);
    CHECK(out.find("2 stable stratum types") != std::string::npos);

    std::string path = (dir.path / "graphs.json").string();
    auto [jcode, jout] = run_cli("strata --model P2 --class 2 --marks 0 --format json --output " + path);
    CHECK(jcode == 0);
    auto parsed = io::json::parse(io::read_file(path));
    CHECK(parsed.at("count").get<int>() == 2);
}

TEST_CASE("descendants verify exits clean and dumps a stable series") {
    TempDir dir;
    std::string dump = (dir.path / "series.json").string();
    auto [code, out] = run_cli("descendants verify --model P2 --depth 1 --cutoff 1 --max-marks 5 "
                               "--dump-series " + dump);
    CHECK(code == 0);
    CHECK(out.find("both equations hold") != std::string::npos);
    std::string first = io::read_file(dump);
    CHECK(io::json::parse(first).at("monomials").size() > 0);

    auto [code2, out2] = run_cli("descendants verify --model P2 --depth 1 --cutoff 1 --max-marks 5 "
                                 "--dump-series " + dump);
    CHECK(code2 == 0);
    CHECK(io::read_file(dump) == first);  // golden-file stable
}
