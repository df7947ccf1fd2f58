// Command-line front end: exact genus-0 curve counts, quantum products,
// stratum listings, descendant checks and Novikov Floer homology reports.
//
// Exit codes: 0 success, 1 verification failure, 2 input error.

#include "qhforge/descendants.hpp"
#include "qhforge/errors.hpp"
#include "qhforge/io.hpp"
#include "qhforge/wdvv.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

using namespace qhforge;

namespace {

constexpr int kExitVerification = 1;
constexpr int kExitInput = 2;

std::string cache_dir_or_env(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("QHFORGE_CACHE")) return env;
    return {};
}

CorrelatorTable load_or_solve(const RingModel& m, const Rat& cutoff, const std::string& cache_dir,
                              bool parallel) {
    if (!cache_dir.empty()) {
        if (auto cached = io::load_table_cache(cache_dir, m.name(), cutoff, solver_version()))
            return *cached;
    }
    CorrelatorTable table = solve_recursion(m, cutoff, parallel);
    if (!cache_dir.empty()) io::save_table_cache(cache_dir, table);
    return table;
}

std::string novikov_str(const NovikovElement& e) {
    if (e.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [cls, coeff] : e.terms()) {
        Rat c = coeff;
        if (!first) {
            os << (c < 0 ? " - " : " + ");
            if (c < 0) c = -c;
        } else if (c < 0) {
            os << "-";
            c = -c;
        }
        first = false;
        std::string q;
        if (!cls.is_zero()) {
            if (cls.rank() == 1)
                q = cls.coords[0] == 1 ? "q" : "q^" + std::to_string(cls.coords[0]);
            else {
                q = "q^[";
                for (int i = 0; i < cls.rank(); ++i)
                    q += (i ? "," : "") + std::to_string(cls.coords[i]);
                q += "]";
            }
        }
        if (q.empty()) os << rat_str(c);
        else if (c == 1) os << q;
        else os << rat_str(c) << "*" << q;
    }
    return os.str();
}

std::string qclass_str(const RingModel& m, const QClass& q) {
    std::ostringstream os;
    bool first = true;
    for (int b = 0; b < m.basis_size(); ++b) {
        if (q.comp[b].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << novikov_str(q.comp[b]) << ")*" << m.basis_entry(b).label;
    }
    if (first) os << "0";
    return os.str();
}

CurveClass parse_class(const std::string& text, int rank) {
    std::vector<long> coords;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) coords.push_back(std::stol(part));
    if (static_cast<int>(coords.size()) != rank)
        throw Error("class '" + text + "' has " + std::to_string(coords.size()) +
                    " coordinates, model lattice has rank " + std::to_string(rank));
    return CurveClass(std::move(coords));
}

std::vector<long> parse_longs(const std::string& text) {
    std::vector<long> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(std::stol(part));
    return out;
}

int run_kontsevich(int max_degree, const std::string& format, const std::string& cache,
                   bool parallel) {
    RingModel plane = RingModel::projective_space(2);
    CorrelatorTable table = load_or_solve(plane, Rat(max_degree), cache, parallel);
    std::vector<Rat> counts = kontsevich_from_table(table, max_degree);
    if (format == "json") {
        io::json out = io::json::array();
        for (int d = 1; d <= max_degree; ++d)
            out.push_back({{"d", d}, {"value", rat_str(counts[d - 1])}});
        std::cout << io::json{{"schema", "qhforge.kontsevich/1"}, {"counts", out}}.dump() << "\n";
    } else if (format == "csv") {
        std::cout << "d,count\n";
        for (int d = 1; d <= max_degree; ++d) std::cout << d << "," << rat_str(counts[d - 1]) << "\n";
    } else {
        for (int d = 1; d <= max_degree; ++d)
            std::cout << "N_" << d << " = " << rat_str(counts[d - 1]) << "\n";
    }
    return 0;
}

int run_qh(const std::string& model, const std::string& cutoff_text, const std::string& table_file,
           const std::string& cache, bool parallel) {
    RingModel m = io::load_model(model);
    Rat cutoff = parse_rat(cutoff_text);
    if (cutoff <= 0) throw Error("cutoff must be positive");
    CorrelatorTable table = [&] {
        if (table_file.empty()) return load_or_solve(m, cutoff, cache, parallel);
        // User-supplied values, taken at face value; the residual report
        // below is what vouches for them.
        CorrelatorTable imported = io::table_from_jsonl(io::read_file(table_file));
        if (imported.model_name() != m.name())
            throw Error("table file is for model '" + imported.model_name() + "', not '" +
                        m.name() + "'");
        return imported;
    }();

    std::cout << "quantum multiplication table for " << m.name() << " (cutoff " << rat_str(cutoff)
              << ")\n";
    for (int a = 0; a < m.basis_size(); ++a)
        for (int b = a; b < m.basis_size(); ++b) {
            QClass prod =
                quantum_product(m, table, CohClass::basis(a), CohClass::basis(b), cutoff);
            std::cout << m.basis_entry(a).label << " * " << m.basis_entry(b).label << " = "
                      << qclass_str(m, prod) << "\n";
        }

    int bad_triples = 0;
    for (int a = 0; a < m.basis_size(); ++a)
        for (int b = 0; b < m.basis_size(); ++b)
            for (int c = 0; c < m.basis_size(); ++c)
                if (!associativity_residual(m, table, CohClass::basis(a), CohClass::basis(b),
                                            CohClass::basis(c), cutoff)
                         .is_zero())
                    ++bad_triples;
    int triples = m.basis_size() * m.basis_size() * m.basis_size();
    std::cout << "associativity residual: " << (bad_triples == 0 ? "0" : "NONZERO") << " on "
              << triples << " basis triples\n";

    int bad_splits = 0, split_checks = 0;
    for (const auto& cls : m.lattice()->effective_classes_up_to(cutoff)) {
        for (int a = 0; a < m.basis_size(); ++a)
            for (int b = a; b < m.basis_size(); ++b)
                for (int c = b; c < m.basis_size(); ++c)
                    for (int d = c; d < m.basis_size(); ++d) {
                        ++split_checks;
                        if (splitting_residual(m, table, {a, b, c, d}, cls) != 0) ++bad_splits;
                    }
    }
    std::cout << "splitting residuals: " << (bad_splits == 0 ? "all zero" : "NONZERO") << " on "
              << split_checks << " instances\n";
    return (bad_triples || bad_splits) ? kExitVerification : 0;
}

int run_strata(const std::string& model, const std::string& class_text, int marks, int genus,
               const std::string& format, const std::string& output) {
    RingModel m = io::load_model(model);
    CurveClass cls = parse_class(class_text, m.lattice()->rank());
    auto graphs = enumerate_strata(m, cls, genus, marks);
    std::ostringstream os;
    if (format == "json") {
        os << io::graphs_to_json(graphs).dump(2) << "\n";
    } else {
        os << graphs.size() << " stable stratum types for class [" << class_text << "], "
           << marks << " marks\n";
        for (size_t i = 0; i < graphs.size(); ++i)
            os << "#" << i + 1 << ": " << graph_str(graphs[i]) << "\n";
    }
    if (!output.empty()) io::write_file(output, os.str());
    else std::cout << os.str();
    return 0;
}

int run_descendants(const std::string& model, int depth, const std::string& cutoff_text,
                    int max_marks, const std::string& dump_series, const std::string& cache,
                    bool parallel) {
    RingModel m = io::load_model(model);
    Rat cutoff = parse_rat(cutoff_text);
    CorrelatorTable table = load_or_solve(m, cutoff, cache, parallel);
    solve_descendants(m, table, depth, cutoff, max_marks);
    if (!dump_series.empty()) {
        auto series = assemble_series(m, table, depth, cutoff, max_marks);
        io::write_file(dump_series, io::series_to_json(series).dump() + "\n");
    }
    auto report = verify_series(m, table, depth, cutoff, max_marks);
    std::cout << "string/dilaton report for " << m.name() << " (depth " << depth << ", cutoff "
              << rat_str(cutoff) << ", marks <= " << max_marks << ")\n";
    std::cout << "checked " << report.checked << " coefficients, skipped " << report.skipped
              << " outside the determined closure\n";
    for (const auto& v : report.violations)
        std::cout << "VIOLATION [" << v.equation << "] at " << v.monomial.str() << ": "
                  << rat_str(v.lhs) << " != " << rat_str(v.rhs) << "\n";
    if (report.ok()) std::cout << "both equations hold on every checked coefficient\n";
    return report.ok() ? 0 : kExitVerification;
}

int run_floer(const std::string& action, const std::string& file, const std::string& betti_text) {
    FloerComplex c = io::load_floer(file);
    if (action == "check") {
        auto violations = c.validate();
        for (const auto& v : violations) std::cout << "INVALID: " << v << "\n";
        if (!violations.empty()) return kExitVerification;
        bool square = c.d_squared_check();
        std::cout << "complex valid, " << c.generators().size() << " generators\n";
        std::cout << "d^2 = 0: " << (square ? "yes" : "NO") << "\n";
        return square ? 0 : kExitVerification;
    }
    if (action == "homology") {
        auto h = c.homology_ranks();
        for (const auto& [deg, rank] : h.ranks)
            std::cout << "rank " << deg << ": " << rank << "\n";
        if (h.ranks.empty()) std::cout << "all ranks vanish\n";
        if (!h.certified_exact) std::cout << "(certified up to cutoff only)\n";
        return 0;
    }
    if (action == "arnold") {
        if (betti_text.empty()) throw Error("arnold needs --betti, e.g. --betti 1,0,1");
        auto report = c.arnold_report(parse_longs(betti_text));
        std::cout << report.str() << "\n";
        return (report.bound_holds && report.equality_holds) ? 0 : kExitVerification;
    }
    throw Error("unknown floer action '" + action + "'");
}

int run_axioms(const std::string& model, const std::string& cutoff_text, int key_count,
               unsigned seed, const std::string& cache, bool parallel) {
    RingModel m = io::load_model(model);
    Rat cutoff = parse_rat(cutoff_text);
    CorrelatorTable table = solve_recursion(m, cutoff, parallel);
    bool failed = false;

    // A cache, when present, must agree entry by entry with recomputation.
    if (!cache.empty()) {
        auto path = std::filesystem::path(cache) /
                    io::table_cache_filename(m.name(), cutoff, solver_version());
        if (std::filesystem::exists(path)) {
            CorrelatorTable cached = io::table_from_jsonl(io::read_file(path.string()));
            for (const auto& [key, entry] : table.entries()) {
                auto v = cached.find(key);
                if (!v) {
                    std::cout << "FAIL cache: missing key " << key.str() << "\n";
                    failed = true;
                } else if (*v != entry.value) {
                    std::cout << "FAIL cache: " << key.str() << " cached " << rat_str(*v)
                              << " recomputed " << rat_str(entry.value) << "\n";
                    failed = true;
                }
            }
            if (!failed) std::cout << "PASS cache agrees with recomputation\n";
        } else {
            io::save_table_cache(cache, table);
        }
    }

    std::mt19937 rng(seed);
    const int n = m.complex_dim();
    std::uniform_int_distribution<int> pick_cls(0, m.basis_size() - 1), pick_k(3, 9);
    long max_d = 0;
    {
        // Effective rank-1 degrees within the cutoff.
        for (const auto& c : m.lattice()->effective_classes_up_to(cutoff))
            if (c.rank() == 1) max_d = std::max(max_d, c.coords[0]);
    }
    std::uniform_int_distribution<long> pick_d(0, max_d);

    auto random_key = [&](bool want_filter_pass) {
        while (true) {
            long d = pick_d(rng);
            int k = pick_k(rng);
            std::vector<int> classes;
            for (int i = 0; i < k; ++i) classes.push_back(pick_cls(rng));
            long sum = 0;
            for (int c : classes) sum += m.degree(c);
            bool passes =
                sum == expected_dimension(*m.lattice(), CurveClass({d}), 0, k, n, 0, 0);
            if (passes == want_filter_pass) return std::make_pair(CurveClass({d}), classes);
        }
    };

    // Off-dimension keys must evaluate to exactly 0.
    int off_bad = 0;
    for (int i = 0; i < key_count; ++i) {
        auto [cls, classes] = random_key(false);
        if (evaluate_primary(m, table, cls, classes) != 0) ++off_bad;
    }
    std::cout << (off_bad ? "FAIL" : "PASS") << " dimension filter: " << key_count - off_bad << "/"
              << key_count << " off-dimension keys vanish\n";
    failed = failed || off_bad;

    // Filter-passing keys: one-step divisor / unit reductions agree with the
    // full evaluation against the solved table.
    int red_bad = 0;
    for (int i = 0; i < key_count; ++i) {
        auto [cls, classes] = random_key(true);
        Rat direct = evaluate_primary(m, table, cls, classes);
        bool compared = false;
        for (size_t j = 0; j < classes.size() && !compared; ++j) {
            if (classes.size() <= 3) break;
            std::vector<int> rest = classes;
            rest.erase(rest.begin() + j);
            if (m.degree(classes[j]) == 2 && !cls.is_zero()) {
                Rat factor = m.divisor_pairing(classes[j], cls);
                if (direct != factor * evaluate_primary(m, table, cls, rest)) ++red_bad;
                compared = true;
            } else if (m.degree(classes[j]) == 0 && !cls.is_zero()) {
                if (direct != 0) ++red_bad;
                compared = true;
            }
        }
    }
    std::cout << (red_bad ? "FAIL" : "PASS")
              << " divisor/unit reductions agree with table values (" << key_count << " keys)\n";
    failed = failed || red_bad;

    // Splitting residuals across all quadruples and classes in range.
    int split_bad = 0, split_checks = 0;
    std::optional<std::string> first_bad;
    for (const auto& cls : m.lattice()->effective_classes_up_to(cutoff))
        for (int a = 0; a < m.basis_size(); ++a)
            for (int b = a; b < m.basis_size(); ++b)
                for (int c = b; c < m.basis_size(); ++c)
                    for (int d = c; d < m.basis_size(); ++d) {
                        ++split_checks;
                        if (splitting_residual(m, table, {a, b, c, d}, cls) != 0) {
                            ++split_bad;
                            if (!first_bad) {
                                std::ostringstream os;
                                os << "(" << a << "," << b << "," << c << "," << d << ") class [";
                                for (int i = 0; i < cls.rank(); ++i)
                                    os << (i ? "," : "") << cls.coords[i];
                                os << "]";
                                first_bad = os.str();
                            }
                        }
                    }
    if (split_bad)
        std::cout << "FAIL splitting residuals: " << split_bad << "/" << split_checks
                  << " nonzero, first at " << *first_bad << "\n";
    else
        std::cout << "PASS splitting residuals: all " << split_checks << " instances vanish\n";
    failed = failed || split_bad;

    return failed ? kExitVerification : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact genus-0 quantum cohomology and Novikov Floer workbench"};
    app.require_subcommand(1);

    std::string cache_flag;
    bool parallel = false;
    app.add_option("--cache", cache_flag, "cache directory (default: $QHFORGE_CACHE)");
    app.add_flag("--parallel", parallel, "evaluate solver instances concurrently");

    auto* kontsevich = app.add_subcommand("kontsevich", "rational plane curve counts");
    int max_degree = 4;
    std::string format = "text";
    kontsevich->add_option("--max-degree", max_degree, "largest degree to print")->required();
    kontsevich->add_option("--format", format, "text | json | csv");

    auto* qh = app.add_subcommand("qh", "quantum multiplication table and residual report");
    std::string model = "P2", cutoff_text = "3", table_file;
    qh->add_option("--model", model, "builtin name or model file")->required();
    qh->add_option("--cutoff", cutoff_text, "energy cutoff")->required();
    qh->add_option("--table", table_file, "use a table file instead of solving");

    auto* strata = app.add_subcommand("strata", "stable-map stratum types");
    std::string class_text = "1", output;
    int marks = 0, genus = 0;
    strata->add_option("--model", model, "builtin name or model file")->required();
    strata->add_option("--class", class_text, "curve class coordinates, e.g. 2 or 1,1")->required();
    strata->add_option("--marks", marks, "number of marked points");
    strata->add_option("--genus", genus, "total genus (enumeration supports 0)");
    strata->add_option("--format", format, "text | json");
    strata->add_option("--output", output, "write the listing to a file");

    auto* desc = app.add_subcommand("descendants", "descendant correlator checks");
    auto* desc_verify = desc->add_subcommand("verify", "verify the string and dilaton equations");
    int depth = 2, max_marks = 7;
    std::string dump_series;
    desc_verify->add_option("--model", model, "builtin name or model file")->required();
    desc_verify->add_option("--depth", depth, "maximal descendant exponent");
    desc_verify->add_option("--cutoff", cutoff_text, "energy cutoff");
    desc_verify->add_option("--max-marks", max_marks, "insertion bound for the series");
    desc_verify->add_option("--dump-series", dump_series, "write the sorted monomial list here");

    auto* floer = app.add_subcommand("floer", "Floer complex reports");
    std::string floer_action, floer_file, betti_text;
    floer->add_option("action", floer_action, "check | homology | arnold")->required();
    floer->add_option("file", floer_file, "complex JSON file")->required();
    floer->add_option("--betti", betti_text, "comma-separated Betti numbers");

    auto* axioms = app.add_subcommand("axioms", "axiom property suites");
    auto* axioms_verify = axioms->add_subcommand("verify", "run the axiom suites");
    int key_count = 500;
    unsigned seed = 20240805;
    axioms_verify->add_option("--model", model, "builtin name or model file")->required();
    axioms_verify->add_option("--cutoff", cutoff_text, "energy cutoff");
    axioms_verify->add_option("--keys", key_count, "randomized keys per suite");
    axioms_verify->add_option("--seed", seed, "random seed");

    CLI11_PARSE(app, argc, argv);

    try {
        std::string cache = cache_dir_or_env(cache_flag);
        if (kontsevich->parsed()) return run_kontsevich(max_degree, format, cache, parallel);
        if (qh->parsed()) return run_qh(model, cutoff_text, table_file, cache, parallel);
        if (strata->parsed()) return run_strata(model, class_text, marks, genus, format, output);
        if (desc->parsed() && desc_verify->parsed())
            return run_descendants(model, depth, cutoff_text, max_marks, dump_series, cache,
                                   parallel);
        if (floer->parsed()) return run_floer(floer_action, floer_file, betti_text);
        if (axioms->parsed() && axioms_verify->parsed())
            return run_axioms(model, cutoff_text, key_count, seed, cache, parallel);
        std::cerr << "missing subcommand\n";
        return kExitInput;
    } catch (const IncreaseCutoff& e) {
        std::cerr << "insufficient cutoff: " << e.what() << "\n";
        return kExitInput;
    } catch (const MissingEntry& e) {
        std::cerr << "insufficient cutoff: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
