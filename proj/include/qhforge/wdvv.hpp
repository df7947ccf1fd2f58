#pragma once

#include "qhforge/correlators.hpp"
#include "qhforge/novikov.hpp"

#include <vector>

namespace qhforge {

/// Cohomology class with Novikov-ring coefficients, one per basis position.
struct QClass {
    std::vector<NovikovElement> comp;

    bool is_zero() const {
        for (const auto& c : comp)
            if (!c.is_zero()) return false;
        return true;
    }
    bool operator==(const QClass&) const = default;
};

QClass qclass_of(const RingModel& m, const CohClass& c, const Rat& cutoff);

/// Grading of a QClass where q^A carries degree 2 chern(A); nullopt when the
/// components do not share one degree. The zero class reports degree 0.
std::optional<long> qclass_degree(const RingModel& m, const QClass& q);

/// Total 3-point function: sum over effective classes within the cutoff of
/// the 3-point correlator times q^A. The class-0 term is the classical
/// triple integral.
NovikovElement three_point_total(const RingModel& m, const CorrelatorTable& table,
                                 const CohClass& a, const CohClass& b, const CohClass& c,
                                 const Rat& cutoff);

/// Quantum product through the defining relation: a x b = sum over dual
/// basis pairs of the total 3-point function against eta^{-1}.
QClass quantum_product(const RingModel& m, const CorrelatorTable& table, const CohClass& a,
                       const CohClass& b, const Rat& cutoff);
QClass quantum_product(const RingModel& m, const CorrelatorTable& table, const QClass& a,
                       const QClass& b, const Rat& cutoff);

/// (a x b) x c - a x (b x c); identically zero on a consistent table.
QClass associativity_residual(const RingModel& m, const CorrelatorTable& table, const CohClass& a,
                              const CohClass& b, const CohClass& c, const Rat& cutoff);

int solver_version();

/// Solves every primary genus-0 correlator with energy below the cutoff for
/// a projective-space model: classical triples and the minimal-class seed
/// feed a triangular pass over composition-law instances. Deterministic;
/// the parallel flag only changes how instance right-hand sides are
/// evaluated, never the resulting table.
CorrelatorTable solve_recursion(const RingModel& m, const Rat& cutoff, bool parallel = false);

/// Counts of degree-d rational plane curves through 3d-1 generic points,
/// read off the solved plane table (degree 1 is the seeded three-point
/// value). Every value is checked to be a positive integer.
std::vector<Rat> kontsevich_numbers(int max_d);
std::vector<Rat> kontsevich_from_table(const CorrelatorTable& table, int max_d);

}  // namespace qhforge
