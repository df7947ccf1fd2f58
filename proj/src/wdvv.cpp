#include "qhforge/wdvv.hpp"

#include "qhforge/errors.hpp"
#include "qhforge/strata.hpp"

#include <algorithm>
#include <future>
#include <set>
#include <thread>

namespace qhforge {

QClass qclass_of(const RingModel& m, const CohClass& c, const Rat& cutoff) {
    QClass out;
    out.comp.assign(m.basis_size(), NovikovElement(m.lattice(), cutoff));
    for (const auto& [i, v] : c.coeff)
        out.comp[i] = NovikovElement::scalar(m.lattice(), v, cutoff);
    return out;
}

std::optional<long> qclass_degree(const RingModel& m, const QClass& q) {
    std::optional<long> deg;
    for (int i = 0; i < static_cast<int>(q.comp.size()); ++i) {
        if (q.comp[i].is_zero()) continue;
        auto d = q.comp[i].degree();
        if (!d) return std::nullopt;
        long total = *d + m.degree(i);
        if (deg && *deg != total) return std::nullopt;
        deg = total;
    }
    return deg ? deg : std::optional<long>(0);
}

NovikovElement three_point_total(const RingModel& m, const CorrelatorTable& table,
                                 const CohClass& a, const CohClass& b, const CohClass& c,
                                 const Rat& cutoff) {
    NovikovElement out(m.lattice(), cutoff);
    for (const auto& cls : m.lattice()->effective_classes_up_to(cutoff)) {
        Rat total = 0;
        for (const auto& [i, ci] : a.coeff)
            for (const auto& [j, cj] : b.coeff)
                for (const auto& [l, cl] : c.coeff)
                    total += ci * cj * cl * evaluate_primary(m, table, cls, {i, j, l});
        if (total != 0) out += NovikovElement::monomial(m.lattice(), cls, total, cutoff);
    }
    return out;
}

QClass quantum_product(const RingModel& m, const CorrelatorTable& table, const CohClass& a,
                       const CohClass& b, const Rat& cutoff) {
    QClass out;
    out.comp.assign(m.basis_size(), NovikovElement(m.lattice(), cutoff));
    const auto& eta_inv = m.eta_inverse();
    for (int p = 0; p < m.basis_size(); ++p) {
        NovikovElement psi = three_point_total(m, table, a, b, CohClass::basis(p), cutoff);
        if (psi.is_zero()) continue;
        for (int q = 0; q < m.basis_size(); ++q)
            if (eta_inv[p][q] != 0) out.comp[q] += eta_inv[p][q] * psi;
    }
    return out;
}

QClass quantum_product(const RingModel& m, const CorrelatorTable& table, const QClass& a,
                       const QClass& b, const Rat& cutoff) {
    QClass out;
    out.comp.assign(m.basis_size(), NovikovElement(m.lattice(), cutoff));
    for (int i = 0; i < m.basis_size(); ++i) {
        if (a.comp[i].is_zero()) continue;
        for (int j = 0; j < m.basis_size(); ++j) {
            if (b.comp[j].is_zero()) continue;
            NovikovElement scale = a.comp[i] * b.comp[j];
            if (scale.is_zero()) continue;
            QClass prod =
                quantum_product(m, table, CohClass::basis(i), CohClass::basis(j), cutoff);
            for (int l = 0; l < m.basis_size(); ++l)
                if (!prod.comp[l].is_zero()) out.comp[l] += scale * prod.comp[l];
        }
    }
    return out;
}

QClass associativity_residual(const RingModel& m, const CorrelatorTable& table, const CohClass& a,
                              const CohClass& b, const CohClass& c, const Rat& cutoff) {
    QClass qc = qclass_of(m, c, cutoff);
    QClass qa = qclass_of(m, a, cutoff);
    QClass left = quantum_product(m, table, quantum_product(m, table, a, b, cutoff), qc, cutoff);
    QClass right = quantum_product(m, table, qa, quantum_product(m, table, b, c, cutoff), cutoff);
    QClass out;
    out.comp.assign(m.basis_size(), NovikovElement(m.lattice(), cutoff));
    for (int l = 0; l < m.basis_size(); ++l) out.comp[l] = left.comp[l] - right.comp[l];
    return out;
}

int solver_version() { return 1; }

namespace {

// The reconstruction below leans on the basis being the power tower of the
// hyperplane class, with basis index equal to complex degree.
void require_projective_tower(const RingModel& m) {
    const int n = m.complex_dim();
    bool ok = m.basis_size() == n + 1 && m.unit_index() == 0 && m.point_index() == n &&
              m.lattice()->rank() == 1 &&
              m.divisor_indices() == std::vector<int>{1} &&
              m.lattice()->chern_weights() == std::vector<long>{n + 1};
    for (int i = 0; ok && i <= n; ++i) ok = m.degree(i) == 2 * i;
    if (!ok)
        throw ScopeError("recursion solving is supported for projective-space models only");
}

// Normalized unknowns at one curve class: insertion multisets passing the
// dimension filter with no unit or divisor class once k >= 4.
void keys_for_class(const RingModel& m, const CurveClass& cls, std::set<CorrelatorKey>& out) {
    const int n = m.complex_dim();
    const long chern = m.lattice()->chern(cls);
    const long kmax = std::max<long>(3, chern + n - 3);
    for (long k = 3; k <= kmax; ++k) {
        const long target = expected_dimension(chern, 0, static_cast<int>(k), n, 0, 0) / 2;
        const int min_cls = k == 3 ? 1 : 2;
        std::vector<int> chosen;
        auto rec = [&](auto&& self, int lo, long remaining, long left) -> void {
            if (left == 0) {
                if (remaining != 0) return;
                std::vector<Insertion> ins;
                for (int c : chosen) ins.push_back({0, c});
                out.emplace(cls, std::move(ins));
                return;
            }
            for (int c = lo; c <= n; ++c) {
                if (c > remaining - (left - 1) * lo) break;
                chosen.push_back(c);
                self(self, c, remaining - c, left - 1);
                chosen.pop_back();
            }
        };
        rec(rec, min_cls, target, k);
    }
}

struct Instance {
    // Distinguished slots of the two boundary degenerations; basis indices.
    int a1, a2, a3, a4;
    std::map<int, int> extras;
    CurveClass cls;

    auto operator<=>(const Instance&) const = default;
};

// Candidate composition-law instances that mention `key`: split one
// insertion h^s as h * h^{s-1} and distinguish two of the remaining ones.
std::vector<Instance> candidate_instances(const CorrelatorKey& key) {
    std::set<Instance> out;
    const auto& ins = key.insertions();
    for (size_t split = 0; split < ins.size(); ++split) {
        if (split > 0 && ins[split].cls == ins[split - 1].cls) continue;
        int s = ins[split].cls;
        if (s < 2) continue;
        std::vector<int> rest;
        for (size_t i = 0; i < ins.size(); ++i)
            if (i != split) rest.push_back(ins[i].cls);
        for (size_t i = 0; i < rest.size(); ++i) {
            if (i > 0 && rest[i] == rest[i - 1]) continue;
            for (size_t j = i + 1; j < rest.size(); ++j) {
                if (j > i + 1 && rest[j] == rest[j - 1]) continue;
                Instance inst;
                inst.a1 = 1;
                inst.a2 = s - 1;
                inst.a3 = rest[i];
                inst.a4 = rest[j];
                inst.cls = key.cls();
                for (size_t t = 0; t < rest.size(); ++t)
                    if (t != i && t != j) inst.extras[rest[t]]++;
                out.insert(std::move(inst));
            }
        }
    }
    return {out.begin(), out.end()};
}

std::optional<LinearForm> instance_form(const RingModel& m, const Instance& inst,
                                        const KeyLookup& lookup) {
    auto lhs = degeneration_sum(m, inst.a1, inst.a2, inst.a3, inst.a4, inst.extras, inst.cls, lookup);
    if (!lhs) return std::nullopt;
    auto rhs = degeneration_sum(m, inst.a1, inst.a3, inst.a2, inst.a4, inst.extras, inst.cls, lookup);
    if (!rhs) return std::nullopt;
    *lhs -= *rhs;
    return lhs;
}

}  // namespace

CorrelatorTable solve_recursion(const RingModel& m, const Rat& cutoff, bool parallel) {
    require_projective_tower(m);
    const int n = m.complex_dim();

    CorrelatorTable table(m.name(), cutoff, solver_version());

    // Classical three-point values on the basis.
    for (int i = 0; i <= n; ++i)
        for (int j = i; j <= n; ++j)
            for (int l = j; l <= n; ++l) {
                CorrelatorKey key(CurveClass::zero(1), {{0, i}, {0, j}, {0, l}});
                if (!dimension_filter(m, key)) continue;
                table.insert(key, classical_eval(m, key), Provenance::classical);
            }

    std::map<CorrelatorKey, Rat> solved;
    std::set<CorrelatorKey> unknowns;
    for (const auto& cls : m.lattice()->effective_classes_up_to(cutoff)) {
        if (cls.is_zero()) continue;
        keys_for_class(m, cls, unknowns);
    }

    // Seed: the minimal-energy correlator <pt, pt, h>_1 (= <pt,pt,pt>_1 on
    // the line) is external input, not derived.
    {
        CorrelatorKey seed(CurveClass({1}), {{0, n}, {0, n}, {0, 1}});
        if (unknowns.erase(seed)) {
            solved.emplace(seed, Rat(1));
            table.insert(seed, Rat(1), Provenance::user);
        }
    }

    std::vector<Instance> pending;
    {
        std::set<Instance> seen;
        for (const auto& key : unknowns)
            for (auto& inst : candidate_instances(key))
                if (seen.insert(inst).second) pending.push_back(inst);
    }

    KeyLookup lookup = [&](const CorrelatorKey& key) -> std::optional<Rat> {
        auto it = solved.find(key);
        if (it == solved.end()) return std::nullopt;
        return it->second;
    };

    auto apply_form = [&](const LinearForm& form) -> bool {
        if (form.coeffs.empty()) {
            if (form.constant != 0)
                throw Error("inconsistent composition-law instance (residual " +
                            rat_str(form.constant) + ")");
            return true;  // spent
        }
        if (form.coeffs.size() != 1) return false;
        const auto& [key, coeff] = *form.coeffs.begin();
        Rat value = -form.constant / coeff;
        auto it = solved.find(key);
        if (it != solved.end()) {
            if (it->second != value) throw Error("conflicting determinations of " + key.str());
            return true;
        }
        solved.emplace(key, value);
        unknowns.erase(key);
        return true;
    };

    bool progress = true;
    while (progress && !pending.empty()) {
        progress = false;
        std::vector<char> spent(pending.size(), 0);
        if (!parallel) {
            for (size_t i = 0; i < pending.size(); ++i) {
                auto form = instance_form(m, pending[i], lookup);
                if (!form) continue;
                size_t before = solved.size();
                if (apply_form(*form)) spent[i] = 1;
                if (solved.size() != before) progress = true;
            }
        } else {
            // Evaluate all right-hand sides against the frozen pass state,
            // then apply in instance order; values agree by exactness.
            const unsigned chunks = std::max(1u, std::thread::hardware_concurrency());
            std::vector<std::future<std::vector<std::pair<size_t, std::optional<LinearForm>>>>> jobs;
            for (unsigned c = 0; c < chunks; ++c) {
                jobs.push_back(std::async(std::launch::async, [&, c] {
                    std::vector<std::pair<size_t, std::optional<LinearForm>>> local;
                    for (size_t i = c; i < pending.size(); i += chunks)
                        local.emplace_back(i, instance_form(m, pending[i], lookup));
                    return local;
                }));
            }
            std::vector<std::pair<size_t, std::optional<LinearForm>>> all;
            for (auto& job : jobs)
                for (auto& item : job.get()) all.push_back(std::move(item));
            std::sort(all.begin(), all.end(),
                      [](const auto& x, const auto& y) { return x.first < y.first; });
            for (auto& [i, form] : all) {
                if (!form) continue;
                size_t before = solved.size();
                // Forms were computed against the pass-entry table; resolve
                // any keys solved earlier in this pass before applying.
                LinearForm updated;
                updated.constant = form->constant;
                for (const auto& [key, coeff] : form->coeffs) {
                    auto it = solved.find(key);
                    if (it != solved.end()) updated.constant += coeff * it->second;
                    else updated.coeffs.emplace(key, coeff);
                }
                if (apply_form(updated)) spent[i] = 1;
                if (solved.size() != before) progress = true;
            }
        }
        std::vector<Instance> next;
        for (size_t i = 0; i < pending.size(); ++i)
            if (!spent[i]) next.push_back(pending[i]);
        pending = std::move(next);
    }

    if (!unknowns.empty())
        throw MissingEntry("system not triangular at key " + unknowns.begin()->str());

    for (const auto& [key, value] : solved) table.insert(key, value, Provenance::solved);
    return table;
}

std::vector<Rat> kontsevich_from_table(const CorrelatorTable& table, int max_d) {
    if (max_d < 1) throw std::invalid_argument("max degree must be at least 1");
    std::vector<Rat> out;
    for (int d = 1; d <= max_d; ++d) {
        // N_1 is the seeded <pt, pt, h>_1: two-point keys are not stored.
        CorrelatorKey key = d == 1
                                ? CorrelatorKey(CurveClass({1}), {{0, 2}, {0, 2}, {0, 1}})
                                : CorrelatorKey(CurveClass({d}),
                                                std::vector<Insertion>(3 * d - 1, Insertion{0, 2}));
        auto v = table.find(key);
        if (!v) throw MissingEntry("plane table lacks " + key.str());
        if (!is_integer(*v) || *v <= 0)
            throw Error("curve count N_" + std::to_string(d) + " is not a positive integer: " +
                        rat_str(*v));
        out.push_back(*v);
    }
    return out;
}

std::vector<Rat> kontsevich_numbers(int max_d) {
    if (max_d < 1) throw std::invalid_argument("max degree must be at least 1");
    RingModel plane = RingModel::projective_space(2);
    return kontsevich_from_table(solve_recursion(plane, Rat(max_d)), max_d);
}

}  // namespace qhforge
