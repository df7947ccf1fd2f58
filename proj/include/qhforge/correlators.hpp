#pragma once

#include "qhforge/cohomology.hpp"
#include "qhforge/curve_class.hpp"

#include <array>
#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qhforge {

/// One marked-point insertion: descendant exponent and basis class index.
struct Insertion {
    int psi = 0;
    int cls = 0;
    auto operator<=>(const Insertion&) const = default;
};

/// Canonicalized genus-0 correlator key: curve class plus a sorted insertion
/// multiset. Only even classes occur, so sorting loses no signs. Keys with
/// fewer than three insertions are rejected outright.
class CorrelatorKey {
public:
    CorrelatorKey(CurveClass cls, std::vector<Insertion> ins);

    const CurveClass& cls() const { return cls_; }
    const std::vector<Insertion>& insertions() const { return ins_; }
    int marks() const { return static_cast<int>(ins_.size()); }
    bool primary() const;
    int max_psi() const;

    auto operator<=>(const CorrelatorKey&) const = default;

    std::string str() const;

private:
    CurveClass cls_;
    std::vector<Insertion> ins_;
};

enum class Provenance { classical, solved, user };

const char* provenance_str(Provenance p);
Provenance parse_provenance(const std::string& s);

struct TableEntry {
    Rat value;
    Provenance prov = Provenance::solved;
    bool operator==(const TableEntry&) const = default;
};

/// Exact correlator values keyed by canonical correlator keys.
class CorrelatorTable {
public:
    CorrelatorTable() = default;
    CorrelatorTable(std::string model_name, Rat cutoff, int solver_version);

    const std::string& model_name() const { return model_name_; }
    const Rat& cutoff() const { return cutoff_; }
    int solver_version() const { return solver_version_; }

    void insert(const CorrelatorKey& key, const Rat& value, Provenance prov);
    /// Unchecked overwrite (corruption tests, imports).
    void set(const CorrelatorKey& key, const Rat& value, Provenance prov);
    std::optional<Rat> find(const CorrelatorKey& key) const;
    const std::map<CorrelatorKey, TableEntry>& entries() const { return entries_; }
    size_t size() const { return entries_.size(); }

    bool operator==(const CorrelatorTable&) const = default;

private:
    std::string model_name_;
    Rat cutoff_ = 0;
    int solver_version_ = 0;
    std::map<CorrelatorKey, TableEntry> entries_;
};

/// True when the insertion degrees hit the expected dimension; a false
/// verdict forces the correlator to vanish.
bool dimension_filter(const RingModel& m, const CorrelatorKey& key);

/// Triple cup-product integral for the class-0, three-point, primary case.
Rat classical_eval(const RingModel& m, const CorrelatorKey& key);

/// Unit-insertion reduction for primary keys: 0 for four or more marks, the
/// classical integral in the exceptional (0,3) case with zero class. Throws
/// ReductionError at (0,3) with a nonzero class, or when no unit insertion
/// is present, or on descendant keys (those route through string_apply).
Rat fundamental_reduction(const RingModel& m, const CorrelatorKey& key);

/// Removes one degree-2 insertion from a primary key with at least four
/// marks; returns the pairing factor and the shortened key. Throws
/// ReductionError at three marks (exceptional case).
std::pair<Rat, CorrelatorKey> divisor_reduction(const RingModel& m, const CorrelatorKey& key);

/// Result of the full reduction pipeline: value = factor when no key
/// remains, otherwise factor times the table value of the reduced key.
struct Reduced {
    Rat factor;
    std::optional<CorrelatorKey> key;
};

/// Dimension filter, class-0 evaluation, unit vanishing and divisor removal,
/// applied until the key is minimal.
Reduced reduce_primary(const RingModel& m, const CurveClass& a, std::vector<int> classes);

/// Reduce and resolve through the table; throws MissingEntry when the
/// reduced key is not solved.
Rat evaluate_primary(const RingModel& m, const CorrelatorTable& table, const CurveClass& a,
                     const std::vector<int>& classes);

/// Exact linear combination of correlator keys plus a constant; the solver
/// and the residual checks share this shape.
struct LinearForm {
    Rat constant;
    std::map<CorrelatorKey, Rat> coeffs;

    LinearForm() : constant(0) {}
    void add(const Rat& c, const Reduced& r);
    LinearForm& operator-=(const LinearForm& o);
};

using KeyLookup = std::function<std::optional<Rat>(const CorrelatorKey&)>;

/// One eta-contracted degeneration of the composition law: the sum over
/// class splittings a = a1 + a2, splittings of the extra insertions, and
/// dual-basis pairs of
///   <x1, x2, extras1, beta_a>_{a1} eta^{ab} <beta_b, extras2, x3, x4>_{a2}.
/// Keys that `lookup` resolves become part of the constant; the rest stay
/// symbolic with their coefficients. Returns nullopt when some product has
/// both factors unresolved, i.e. the sum is not linear yet.
std::optional<LinearForm> degeneration_sum(const RingModel& m, int x1, int x2, int x3, int x4,
                                           const std::map<int, int>& extras, const CurveClass& a,
                                           const KeyLookup& lookup);

/// Difference of the two degenerations of the four-point function with the
/// given distinguished insertions, padded with as many point insertions as
/// the dimension filter demands; vanishes on a consistent table.
Rat splitting_residual(const RingModel& m, const CorrelatorTable& table,
                       const std::array<int, 4>& quad, const CurveClass& a);

/// Rank-1 convenience overload: the class is qdeg times the generator.
Rat splitting_residual(const RingModel& m, const CorrelatorTable& table,
                       const std::array<int, 4>& quad, long qdeg);

/// Number of point insertions that make the padded instance dimensionally
/// meaningful; nullopt if no such padding exists.
std::optional<int> splitting_padding(const RingModel& m, const std::array<int, 4>& quad,
                                     const CurveClass& a);

}  // namespace qhforge
