#pragma once

#include "qhforge/correlators.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qhforge {

/// String-equation step on a key with a tau_0(unit) insertion and at least
/// four marks: drops the unit and lowers one descendant exponent; the value
/// of the input is the sum over the returned keys (repeats included).
/// Throws ReductionError at three marks.
std::vector<CorrelatorKey> string_apply(const RingModel& m, const CorrelatorKey& key);

/// Dilaton-equation step on a key with a tau_1(unit) insertion: factor
/// 2g - 2 + k' at genus 0 is k' - 2 for the k' remaining insertions. Genus
/// one and up would need the Euler-characteristic correction and is out of
/// scope here.
std::pair<Rat, CorrelatorKey> dilaton_apply(const RingModel& m, const CorrelatorKey& key,
                                            int genus = 0);

/// Value of a descendant key as the closure of the solved primaries under
/// the string and dilaton reductions. nullopt marks a key outside that
/// closure (no rule applies); keys failing the dimension filter are 0.
std::optional<Rat> evaluate_descendant(const RingModel& m, const CorrelatorTable& table,
                                       const CorrelatorKey& key);

/// Stores every determined descendant value with psi exponents <= max_psi,
/// energy <= cutoff and at most max_marks insertions into the table.
void solve_descendants(const RingModel& m, CorrelatorTable& table, int max_psi, const Rat& cutoff,
                       int max_marks);

/// Monomial of the genus-0 generating function: insertion multiset (one
/// variable per (psi, class) pair) and a curve class.
struct SeriesMonomial {
    std::vector<Insertion> ins;  // sorted, repeats allowed
    CurveClass cls;

    auto operator<=>(const SeriesMonomial&) const = default;
    std::string str() const;
};

/// Truncated genus-0 generating function: monomial -> exact coefficient
/// (correlator value divided by the automorphism factorials).
struct GenSeries {
    std::map<SeriesMonomial, Rat> coeff;
};

GenSeries assemble_series(const RingModel& m, const CorrelatorTable& table, int max_psi,
                          const Rat& cutoff, int max_marks);

struct SeriesViolation {
    std::string equation;  // "string" | "dilaton"
    SeriesMonomial monomial;
    Rat lhs;
    Rat rhs;
};

struct SeriesReport {
    int checked = 0;
    int skipped = 0;  // monomials whose key lies outside the determined closure
    std::vector<SeriesViolation> violations;

    bool ok() const { return violations.empty(); }
};

/// Checks the string and dilaton equations coefficient-by-coefficient on
/// every representable monomial, reading values back from the table.
SeriesReport verify_series(const RingModel& m, const CorrelatorTable& table, int max_psi,
                           const Rat& cutoff, int max_marks);

}  // namespace qhforge
