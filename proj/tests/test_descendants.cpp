#include "qhforge/descendants.hpp"

#include "qhforge/errors.hpp"
#include "qhforge/wdvv.hpp"

#include <doctest.h>

using namespace qhforge;

namespace {

CorrelatorKey key(long d, std::vector<Insertion> ins) {
    return CorrelatorKey(CurveClass({d}), std::move(ins));
}

}  // namespace

TEST_CASE("string reduction consumes the unit and lowers one exponent") {
    auto p2 = RingModel::projective_space(2);
    auto k = key(1, {{0, 0}, {1, 2}, {0, 2}, {0, 1}});
    auto lowered = string_apply(p2, k);
    REQUIRE(lowered.size() == 1);
    CHECK(lowered[0] == key(1, {{0, 2}, {0, 2}, {0, 1}}));

    // All-primary keys have nothing to lower.
    CHECK(string_apply(p2, key(1, {{0, 0}, {0, 2}, {0, 2}, {0, 1}})).empty());

    CHECK_THROWS_AS(string_apply(p2, key(1, {{0, 0}, {0, 2}, {0, 2}})), ReductionError);
    CHECK_THROWS_AS(string_apply(p2, key(0, {{0, 0}, {0, 1}, {0, 1}})), ReductionError);
}

TEST_CASE("string values through the table") {
    auto p2 = RingModel::projective_space(2);
    auto table = solve_recursion(p2, Rat(2));
    auto v = evaluate_descendant(p2, table, key(1, {{0, 0}, {1, 2}, {0, 2}, {0, 1}}));
    REQUIRE(v.has_value());
    CHECK(*v == Rat(1));  // lowers to <pt,pt,h>_1 = N_1

    // Unit with nothing to lower vanishes.
    CHECK(evaluate_descendant(p2, table, key(1, {{0, 0}, {0, 2}, {0, 2}, {0, 1}})) == Rat(0));

    // Cotangent powers vanish on the three-pointed class-0 moduli.
    CHECK(evaluate_descendant(p2, table, key(0, {{2, 1}, {0, 1}, {0, 0}})) == Rat(0));
}

TEST_CASE("dilaton reduction") {
    auto p2 = RingModel::projective_space(2);
    auto table = solve_recursion(p2, Rat(2));
    auto [factor, reduced] = dilaton_apply(p2, key(1, {{1, 0}, {0, 2}, {0, 2}, {0, 1}}));
    CHECK(factor == Rat(1));  // k' = 3
    CHECK(reduced == key(1, {{0, 2}, {0, 2}, {0, 1}}));
    auto v = evaluate_descendant(p2, table, key(1, {{1, 0}, {0, 2}, {0, 2}, {0, 1}}));
    CHECK(v == Rat(1));

    CHECK_THROWS_AS(dilaton_apply(p2, key(1, {{1, 0}, {0, 2}, {0, 2}}), 1), ScopeError);
    CHECK_THROWS_AS(dilaton_apply(p2, key(0, {{1, 0}, {0, 1}, {0, 1}})), ReductionError);
}

TEST_CASE("pure descendants without a reduction stay undetermined") {
    auto p2 = RingModel::projective_space(2);
    auto table = solve_recursion(p2, Rat(2));
    // tau_1(pt) with two points at degree 1 passes the filter but has no
    // unit insertion to consume.
    auto k = key(1, {{1, 2}, {0, 2}, {0, 1}});
    if (dimension_filter(p2, k)) CHECK(!evaluate_descendant(p2, table, k).has_value());
    // Off-dimension descendants are just 0.
    CHECK(evaluate_descendant(p2, table, key(1, {{2, 2}, {0, 2}, {0, 2}, {0, 2}})) == Rat(0));
}

TEST_CASE("reducers map filter-passing keys to filter-passing keys") {
    auto p2 = RingModel::projective_space(2);
    int checked = 0;
    for (long d = 0; d <= 2; ++d)
        for (int extra_pts = 0; extra_pts <= 4; ++extra_pts)
            for (int psi = 1; psi <= 2; ++psi) {
                std::vector<Insertion> ins{{0, 0}, {psi, 2}};
                for (int i = 0; i < extra_pts; ++i) ins.push_back({0, 2});
                if (ins.size() < 4) continue;
                CorrelatorKey k(CurveClass({d}), ins);
                if (!dimension_filter(p2, k)) continue;
                for (const auto& low : string_apply(p2, k)) {
                    CHECK(dimension_filter(p2, low));
                    ++checked;
                }
            }
    CHECK(checked > 0);
}

TEST_CASE("string and dilaton reductions commute where both apply") {
    auto p2 = RingModel::projective_space(2);
    auto table = solve_recursion(p2, Rat(2));
    // Key carrying both a tau_0(1) and a tau_1(1): either reduction order
    // must produce the same number.
    auto k = key(1, {{0, 0}, {1, 0}, {1, 2}, {0, 2}, {0, 1}});
    REQUIRE(dimension_filter(p2, k));
    {
        // string first
        Rat via_string = 0;
        for (const auto& low : string_apply(p2, k)) {
            auto v = evaluate_descendant(p2, table, low);
            REQUIRE(v.has_value());
            via_string += *v;
        }
        // dilaton first
        auto [factor, reduced] = dilaton_apply(p2, k);
        auto v = evaluate_descendant(p2, table, reduced);
        REQUIRE(v.has_value());
        CHECK(via_string == factor * *v);
    }
}

TEST_CASE("an unsolved table checks vacuously at cutoff 0") {
    auto p2 = RingModel::projective_space(2);
    CorrelatorTable empty("P2", Rat(0), 0);
    auto report = verify_series(p2, empty, 1, Rat(0), 5);
    CHECK(report.ok());
}

TEST_CASE("series verification on the plane") {
    auto p2 = RingModel::projective_space(2);
    auto table = solve_recursion(p2, Rat(2));
    solve_descendants(p2, table, 2, Rat(2), 7);
    auto report = verify_series(p2, table, 2, Rat(2), 7);
    CHECK(report.ok());
    CHECK(report.checked > 0);

    auto series = assemble_series(p2, table, 2, Rat(2), 7);
    CHECK(!series.coeff.empty());

    // Corrupt one descendant entry: the report must name a violating
    // monomial.
    CorrelatorTable corrupt = table;
    CorrelatorKey victim = key(1, {{0, 0}, {1, 2}, {0, 2}, {0, 1}});
    REQUIRE(corrupt.find(victim).has_value());
    corrupt.set(victim, *corrupt.find(victim) + 1, Provenance::solved);
    auto bad = verify_series(p2, corrupt, 2, Rat(2), 7);
    CHECK(!bad.ok());
    bool named = false;
    for (const auto& v : bad.violations)
        if (v.monomial.cls == CurveClass({1})) named = true;
    CHECK(named);
}
