#include "qhforge/descendants.hpp"

#include "qhforge/errors.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace qhforge {

namespace {

std::optional<size_t> find_unit(const RingModel& m, const CorrelatorKey& key, int psi) {
    const auto& ins = key.insertions();
    for (size_t i = 0; i < ins.size(); ++i)
        if (ins[i].psi == psi && ins[i].cls == m.unit_index()) return i;
    return std::nullopt;
}

std::vector<Insertion> erase_at(const std::vector<Insertion>& ins, size_t pos) {
    std::vector<Insertion> out = ins;
    out.erase(out.begin() + pos);
    return out;
}

}  // namespace

std::vector<CorrelatorKey> string_apply(const RingModel& m, const CorrelatorKey& key) {
    auto unit = find_unit(m, key, 0);
    if (!unit) throw ReductionError("no tau_0(unit) insertion");
    if (key.marks() == 3) {
        if (key.cls().is_zero())
            throw ReductionError("(0,3) string case is the quadratic pairing term");
        throw ReductionError("string reduction undefined at (g,k)=(0,3) with nonzero class");
    }
    std::vector<Insertion> rest = erase_at(key.insertions(), *unit);
    std::vector<CorrelatorKey> out;
    for (size_t j = 0; j < rest.size(); ++j) {
        if (rest[j].psi == 0) continue;
        std::vector<Insertion> lowered = rest;
        lowered[j].psi -= 1;
        out.emplace_back(key.cls(), std::move(lowered));
    }
    return out;
}

std::pair<Rat, CorrelatorKey> dilaton_apply(const RingModel& m, const CorrelatorKey& key,
                                            int genus) {
    if (genus >= 1) throw ScopeError("dilaton chi-term unsupported beyond genus 0");
    auto unit = find_unit(m, key, 1);
    if (!unit) throw ReductionError("no tau_1(unit) insertion");
    if (key.marks() == 3) throw ReductionError("dilaton reduction leaves fewer than three marks");
    const int remaining = key.marks() - 1;
    return {Rat(remaining - 2), CorrelatorKey(key.cls(), erase_at(key.insertions(), *unit))};
}

namespace {

using Cache = std::map<CorrelatorKey, std::optional<Rat>>;

std::optional<Rat> eval_rec(const RingModel& m, const CorrelatorTable& table,
                            const CorrelatorKey& key, Cache& cache) {
    if (!dimension_filter(m, key)) return Rat(0);

    if (key.primary()) {
        std::vector<int> classes;
        for (const auto& i : key.insertions()) classes.push_back(i.cls);
        return evaluate_primary(m, table, key.cls(), classes);
    }

    // Cotangent-line classes die on the 3-pointed genus-0 moduli.
    if (key.cls().is_zero() && key.marks() == 3) return Rat(0);

    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    cache.emplace(key, std::nullopt);  // cut cycles; overwritten below

    std::optional<Rat> result;
    if (find_unit(m, key, 0) && key.marks() >= 4) {
        Rat sum = 0;
        bool determined = true;
        for (const auto& lowered : string_apply(m, key)) {
            auto v = eval_rec(m, table, lowered, cache);
            if (!v) {
                determined = false;
                break;
            }
            sum += *v;
        }
        if (determined) result = sum;
    } else if (find_unit(m, key, 1) && key.marks() >= 4) {
        auto [factor, reduced] = dilaton_apply(m, key);
        auto v = eval_rec(m, table, reduced, cache);
        if (v) result = factor * *v;
    }
    cache[key] = result;
    return result;
}

}  // namespace

std::optional<Rat> evaluate_descendant(const RingModel& m, const CorrelatorTable& table,
                                       const CorrelatorKey& key) {
    Cache cache;
    return eval_rec(m, table, key, cache);
}

namespace {

// All insertion multisets of size k over (psi, class) pairs, nondecreasing.
void multisets_rec(const RingModel& m, int max_psi, int k,
                   const std::vector<Insertion>& alphabet, size_t lo, std::vector<Insertion>& cur,
                   const std::function<void(const std::vector<Insertion>&)>& emit) {
    if (static_cast<int>(cur.size()) == k) {
        emit(cur);
        return;
    }
    for (size_t i = lo; i < alphabet.size(); ++i) {
        cur.push_back(alphabet[i]);
        multisets_rec(m, max_psi, k, alphabet, i, cur, emit);
        cur.pop_back();
    }
}

std::vector<Insertion> insertion_alphabet(const RingModel& m, int max_psi) {
    std::vector<Insertion> out;
    for (int r = 0; r <= max_psi; ++r)
        for (int a = 0; a < m.basis_size(); ++a) out.push_back({r, a});
    return out;
}

}  // namespace

void solve_descendants(const RingModel& m, CorrelatorTable& table, int max_psi, const Rat& cutoff,
                       int max_marks) {
    auto alphabet = insertion_alphabet(m, max_psi);
    for (const auto& cls : m.lattice()->effective_classes_up_to(cutoff)) {
        for (int k = 3; k <= max_marks; ++k) {
            std::vector<Insertion> cur;
            multisets_rec(m, max_psi, k, alphabet, 0, cur, [&](const std::vector<Insertion>& ins) {
                CorrelatorKey key(cls, ins);
                if (key.primary()) return;  // the recursion solver owns these
                if (!dimension_filter(m, key)) return;
                if (table.find(key)) return;
                if (auto v = evaluate_descendant(m, table, key))
                    table.insert(key, *v, Provenance::solved);
            });
        }
    }
}

std::string SeriesMonomial::str() const {
    std::ostringstream os;
    size_t i = 0;
    while (i < ins.size()) {
        size_t j = i;
        while (j < ins.size() && ins[j] == ins[i]) ++j;
        os << "t[" << ins[i].psi << "," << ins[i].cls << "]";
        if (j - i > 1) os << "^" << (j - i);
        os << " ";
        i = j;
    }
    os << "q^[";
    for (int g = 0; g < cls.rank(); ++g) os << (g ? "," : "") << cls.coords[g];
    os << "]";
    return os.str();
}

namespace {

Rat automorphisms(const std::vector<Insertion>& ins) {
    Rat aut = 1;
    size_t i = 0;
    while (i < ins.size()) {
        size_t j = i;
        while (j < ins.size() && ins[j] == ins[i]) ++j;
        aut *= Rat(factorial(j - i));
        i = j;
    }
    return aut;
}

std::optional<Rat> table_value(const RingModel& m, const CorrelatorTable& table,
                               const CorrelatorKey& key) {
    if (auto v = table.find(key)) return v;
    return evaluate_descendant(m, table, key);
}

}  // namespace

GenSeries assemble_series(const RingModel& m, const CorrelatorTable& table, int max_psi,
                          const Rat& cutoff, int max_marks) {
    GenSeries series;
    auto alphabet = insertion_alphabet(m, max_psi);
    for (const auto& cls : m.lattice()->effective_classes_up_to(cutoff)) {
        for (int k = 3; k <= max_marks; ++k) {
            std::vector<Insertion> cur;
            multisets_rec(m, max_psi, k, alphabet, 0, cur, [&](const std::vector<Insertion>& ins) {
                CorrelatorKey key(cls, ins);
                auto v = table_value(m, table, key);
                if (!v || *v == 0) return;
                series.coeff.emplace(SeriesMonomial{key.insertions(), cls},
                                     *v / automorphisms(key.insertions()));
            });
        }
    }
    return series;
}

SeriesReport verify_series(const RingModel& m, const CorrelatorTable& table, int max_psi,
                           const Rat& cutoff, int max_marks) {
    SeriesReport report;
    auto alphabet = insertion_alphabet(m, max_psi);

    auto check = [&](const std::vector<Insertion>& t_ins, const CurveClass& cls) {
        SeriesMonomial monomial{t_ins, cls};
        const int t_marks = static_cast<int>(t_ins.size());

        // String equation: the tau_0(unit) coefficient against the lowered
        // monomials plus the quadratic pairing term.
        {
            std::vector<Insertion> with_unit = t_ins;
            with_unit.push_back({0, m.unit_index()});
            auto lhs = table_value(m, table, CorrelatorKey(cls, with_unit));
            if (!lhs) {
                ++report.skipped;
            } else {
                bool determined = true;
                Rat rhs = 0;
                if (cls.is_zero() && t_marks == 2 && t_ins[0].psi == 0 && t_ins[1].psi == 0)
                    rhs += m.eta()[t_ins[0].cls][t_ins[1].cls];
                for (size_t j = 0; j < t_ins.size() && determined; ++j) {
                    if (j > 0 && t_ins[j] == t_ins[j - 1]) continue;
                    if (t_ins[j].psi == 0) continue;
                    long count = std::count(t_ins.begin(), t_ins.end(), t_ins[j]);
                    if (t_marks < 3) continue;  // no such monomials in the series
                    std::vector<Insertion> lowered = t_ins;
                    lowered[j].psi -= 1;
                    auto v = table_value(m, table, CorrelatorKey(cls, lowered));
                    if (!v) {
                        determined = false;
                        break;
                    }
                    rhs += Rat(count) * *v;
                }
                if (!determined) {
                    ++report.skipped;
                } else {
                    ++report.checked;
                    if (*lhs != rhs) report.violations.push_back({"string", monomial, *lhs, rhs});
                }
            }
        }

        // Dilaton equation: tau_1(unit) coefficient against (k-2) times the
        // monomial's own coefficient.
        {
            std::vector<Insertion> with_unit = t_ins;
            with_unit.push_back({1, m.unit_index()});
            auto lhs = table_value(m, table, CorrelatorKey(cls, with_unit));
            if (!lhs) {
                ++report.skipped;
            } else {
                std::optional<Rat> base;
                if (t_marks >= 3) base = table_value(m, table, CorrelatorKey(cls, t_ins));
                else base = Rat(0);
                if (!base) {
                    ++report.skipped;
                } else {
                    Rat rhs = Rat(t_marks - 2) * *base;
                    ++report.checked;
                    if (*lhs != rhs) report.violations.push_back({"dilaton", monomial, *lhs, rhs});
                }
            }
        }
    };

    for (const auto& cls : m.lattice()->effective_classes_up_to(cutoff)) {
        for (int k = 2; k + 1 <= max_marks; ++k) {
            std::vector<Insertion> cur;
            multisets_rec(m, max_psi, k, alphabet, 0, cur,
                          [&](const std::vector<Insertion>& ins) { check(ins, cls); });
        }
    }
    return report;
}

}  // namespace qhforge
