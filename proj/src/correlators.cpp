#include "qhforge/correlators.hpp"

#include "qhforge/errors.hpp"
#include "qhforge/strata.hpp"

#include <algorithm>
#include <sstream>

namespace qhforge {

CorrelatorKey::CorrelatorKey(CurveClass cls, std::vector<Insertion> ins)
    : cls_(std::move(cls)), ins_(std::move(ins)) {
    if (ins_.size() < 3)
        throw std::invalid_argument("correlator keys need at least three insertions");
    for (const auto& i : ins_)
        if (i.psi < 0) throw std::invalid_argument("negative descendant exponent");
    std::sort(ins_.begin(), ins_.end());
}

bool CorrelatorKey::primary() const {
    for (const auto& i : ins_)
        if (i.psi != 0) return false;
    return true;
}

int CorrelatorKey::max_psi() const {
    int m = 0;
    for (const auto& i : ins_) m = std::max(m, i.psi);
    return m;
}

std::string CorrelatorKey::str() const {
    std::ostringstream os;
    os << "<";
    for (size_t i = 0; i < ins_.size(); ++i) {
        if (i) os << " ";
        if (ins_[i].psi > 0) os << "t" << ins_[i].psi << "(b" << ins_[i].cls << ")";
        else os << "b" << ins_[i].cls;
    }
    os << ">_[";
    for (int i = 0; i < cls_.rank(); ++i) os << (i ? "," : "") << cls_.coords[i];
    os << "]";
    return os.str();
}

const char* provenance_str(Provenance p) {
    switch (p) {
        case Provenance::classical: return "classical";
        case Provenance::solved: return "solved";
        case Provenance::user: return "user";
    }
    return "?";
}

Provenance parse_provenance(const std::string& s) {
    if (s == "classical") return Provenance::classical;
    if (s == "solved") return Provenance::solved;
    if (s == "user") return Provenance::user;
    throw std::invalid_argument("unknown provenance '" + s + "'");
}

CorrelatorTable::CorrelatorTable(std::string model_name, Rat cutoff, int solver_version)
    : model_name_(std::move(model_name)), cutoff_(std::move(cutoff)),
      solver_version_(solver_version) {}

void CorrelatorTable::insert(const CorrelatorKey& key, const Rat& value, Provenance prov) {
    auto [it, inserted] = entries_.emplace(key, TableEntry{value, prov});
    if (!inserted && it->second.value != value)
        throw Error("conflicting values for " + key.str());
}

void CorrelatorTable::set(const CorrelatorKey& key, const Rat& value, Provenance prov) {
    entries_[key] = TableEntry{value, prov};
}

std::optional<Rat> CorrelatorTable::find(const CorrelatorKey& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second.value;
}

bool dimension_filter(const RingModel& m, const CorrelatorKey& key) {
    long sum = 0;
    for (const auto& ins : key.insertions()) sum += m.degree(ins.cls) + 2 * ins.psi;
    return sum == expected_dimension(*m.lattice(), key.cls(), 0, key.marks(), m.complex_dim(), 0, 0);
}

Rat classical_eval(const RingModel& m, const CorrelatorKey& key) {
    if (!key.cls().is_zero() || key.marks() != 3 || !key.primary())
        throw ReductionError("classical evaluation needs class 0, three marks, no descendants");
    const auto& ins = key.insertions();
    return m.integrate(
        m.cup(m.cup(ins[0].cls, ins[1].cls), CohClass::basis(ins[2].cls)));
}

namespace {

std::optional<size_t> find_insertion(const RingModel& m, const CorrelatorKey& key, int degree) {
    const auto& ins = key.insertions();
    for (size_t i = 0; i < ins.size(); ++i)
        if (ins[i].psi == 0 && m.degree(ins[i].cls) == degree) return i;
    return std::nullopt;
}

CorrelatorKey erase_insertion(const CorrelatorKey& key, size_t pos) {
    auto ins = key.insertions();
    ins.erase(ins.begin() + pos);
    return CorrelatorKey(key.cls(), std::move(ins));
}

}  // namespace

Rat fundamental_reduction(const RingModel& m, const CorrelatorKey& key) {
    auto pos = find_insertion(m, key, 0);
    if (!pos) throw ReductionError("no unit insertion to reduce");
    if (!key.primary())
        throw ReductionError("descendant keys reduce through the string equation");
    if (key.marks() == 3) {
        if (!key.cls().is_zero())
            throw ReductionError("unit reduction undefined at (g,k)=(0,3) with nonzero class");
        return classical_eval(m, key);
    }
    // Integration over the forgotten point kills the degree-0 insertion.
    return Rat(0);
}

std::pair<Rat, CorrelatorKey> divisor_reduction(const RingModel& m, const CorrelatorKey& key) {
    if (key.marks() == 3) throw ReductionError("divisor reduction undefined at three marks");
    if (!key.primary()) throw ReductionError("divisor reduction needs a primary key");
    auto pos = find_insertion(m, key, 2);
    if (!pos) throw ReductionError("no degree-2 insertion to reduce");
    Rat factor = m.divisor_pairing(key.insertions()[*pos].cls, key.cls());
    return {factor, erase_insertion(key, *pos)};
}

Reduced reduce_primary(const RingModel& m, const CurveClass& a, std::vector<int> classes) {
    if (!a.effective()) throw std::invalid_argument("class outside the effective cone");
    if (classes.size() < 3) throw std::invalid_argument("fewer than three insertions");

    std::sort(classes.begin(), classes.end());
    long degsum = 0;
    for (int c : classes) degsum += m.degree(c);
    const int k = static_cast<int>(classes.size());
    if (degsum != expected_dimension(*m.lattice(), a, 0, k, m.complex_dim(), 0, 0))
        return {Rat(0), std::nullopt};

    if (a.is_zero()) {
        if (k == 3) {
            std::vector<Insertion> ins;
            for (int c : classes) ins.push_back({0, c});
            return {classical_eval(m, CorrelatorKey(a, std::move(ins))), std::nullopt};
        }
        // Constant maps: the integrand is pulled back from the target, so
        // integrating over the positive-dimensional moduli factor gives 0.
        return {Rat(0), std::nullopt};
    }

    // A unit insertion kills the value as soon as the marked point can be
    // forgotten, whatever else the key carries.
    if (classes.size() > 3)
        for (int c : classes)
            if (m.degree(c) == 0) return {Rat(0), std::nullopt};

    Rat factor = 1;
    while (classes.size() > 3) {
        bool changed = false;
        for (size_t i = 0; i < classes.size(); ++i) {
            if (m.degree(classes[i]) == 2) {
                factor *= m.divisor_pairing(classes[i], a);
                if (factor == 0) return {Rat(0), std::nullopt};
                classes.erase(classes.begin() + i);
                changed = true;
                break;
            }
        }
        if (!changed) break;
    }
    std::vector<Insertion> ins;
    for (int c : classes) ins.push_back({0, c});
    return {factor, CorrelatorKey(a, std::move(ins))};
}

Rat evaluate_primary(const RingModel& m, const CorrelatorTable& table, const CurveClass& a,
                     const std::vector<int>& classes) {
    Reduced r = reduce_primary(m, a, classes);
    if (!r.key || r.factor == 0) return r.factor;
    auto v = table.find(*r.key);
    if (!v) throw MissingEntry("unsolved correlator " + r.key->str());
    return r.factor * *v;
}

void LinearForm::add(const Rat& c, const Reduced& r) {
    if (c == 0 || r.factor == 0) return;
    if (!r.key) {
        constant += c * r.factor;
        return;
    }
    auto [it, inserted] = coeffs.emplace(*r.key, c * r.factor);
    if (!inserted) {
        it->second += c * r.factor;
        if (it->second == 0) coeffs.erase(it);
    }
}

LinearForm& LinearForm::operator-=(const LinearForm& o) {
    constant -= o.constant;
    for (const auto& [key, c] : o.coeffs) {
        auto [it, inserted] = coeffs.emplace(key, -c);
        if (!inserted) {
            it->second -= c;
            if (it->second == 0) coeffs.erase(it);
        }
    }
    return *this;
}

namespace {

// Splits of a multiset (counts per basis index) with binomial multiplicities
// counting the underlying labeled marked points.
void multiset_splits(const std::vector<std::pair<int, int>>& items, size_t i, std::map<int, int>& left,
                     std::map<int, int>& right, Int& ways,
                     const std::function<void(const std::map<int, int>&, const std::map<int, int>&,
                                              const Int&)>& emit) {
    if (i == items.size()) {
        emit(left, right, ways);
        return;
    }
    auto [cls, count] = items[i];
    for (int take = 0; take <= count; ++take) {
        if (take) left[cls] = take;
        if (count - take) right[cls] = count - take;
        Int w = ways * binomial(count, take);
        std::swap(ways, w);
        multiset_splits(items, i + 1, left, right, ways, emit);
        std::swap(ways, w);
        left.erase(cls);
        right.erase(cls);
    }
}

Reduced lookup_reduced(const RingModel& m, const KeyLookup& lookup, const CurveClass& a,
                       const std::vector<int>& classes) {
    Reduced r = reduce_primary(m, a, classes);
    if (r.key && r.factor != 0) {
        if (auto v = lookup(*r.key)) return {r.factor * *v, std::nullopt};
    }
    return r;
}

}  // namespace

std::optional<LinearForm> degeneration_sum(const RingModel& m, int x1, int x2, int x3, int x4,
                                           const std::map<int, int>& extras, const CurveClass& a,
                                           const KeyLookup& lookup) {
    LinearForm out;
    bool linear = true;
    const auto& lattice = *m.lattice();
    const auto& eta_inv = m.eta_inverse();
    std::vector<std::pair<int, int>> items(extras.begin(), extras.end());

    for (const auto& a1 : lattice.effective_classes_up_to(lattice.energy(a))) {
        auto a2 = a.minus_effective(a1);
        if (!a2) continue;
        std::map<int, int> left, right;
        Int ways(1);
        multiset_splits(
            items, 0, left, right, ways,
            [&](const std::map<int, int>& m1, const std::map<int, int>& m2, const Int& mult) {
                if (!linear) return;
                for (int p = 0; p < m.basis_size(); ++p) {
                    for (int q = 0; q < m.basis_size(); ++q) {
                        if (eta_inv[p][q] == 0) continue;
                        std::vector<int> c1 = {x1, x2, p};
                        for (const auto& [cls, count] : m1)
                            c1.insert(c1.end(), count, cls);
                        Reduced r1 = lookup_reduced(m, lookup, a1, c1);
                        if (r1.factor == 0) continue;
                        std::vector<int> c2 = {q, x3, x4};
                        for (const auto& [cls, count] : m2)
                            c2.insert(c2.end(), count, cls);
                        Reduced r2 = lookup_reduced(m, lookup, *a2, c2);
                        if (r2.factor == 0) continue;
                        Rat scale = Rat(mult) * eta_inv[p][q];
                        if (!r1.key && !r2.key) {
                            out.constant += scale * r1.factor * r2.factor;
                        } else if (!r1.key) {
                            out.add(scale * r1.factor, r2);
                        } else if (!r2.key) {
                            out.add(scale * r2.factor, r1);
                        } else {
                            linear = false;
                            return;
                        }
                    }
                }
            });
        if (!linear) return std::nullopt;
    }
    return out;
}

std::optional<int> splitting_padding(const RingModel& m, const std::array<int, 4>& quad,
                                     const CurveClass& a) {
    const int n = m.complex_dim();
    long degsum_c = 0;
    for (int x : quad) degsum_c += m.degree(x) / 2;
    // Complex dimension count for the boundary-class instance with p extra
    // point insertions: degsum + p*n = chern(a) + (n-3) + (4+p) - 1.
    long rhs = m.lattice()->chern(a) + n - degsum_c;
    if (n == 1) return rhs == 0 ? std::optional<int>(0) : std::nullopt;
    if (rhs < 0 || rhs % (n - 1) != 0) return std::nullopt;
    return static_cast<int>(rhs / (n - 1));
}

Rat splitting_residual(const RingModel& m, const CorrelatorTable& table,
                       const std::array<int, 4>& quad, const CurveClass& a) {
    auto padding = splitting_padding(m, quad, a);
    if (!padding) return Rat(0);
    std::map<int, int> extras;
    if (*padding > 0) extras[m.point_index()] = *padding;
    KeyLookup lookup = [&](const CorrelatorKey& key) { return table.find(key); };
    auto lhs = degeneration_sum(m, quad[0], quad[1], quad[2], quad[3], extras, a, lookup);
    auto rhs = degeneration_sum(m, quad[0], quad[2], quad[1], quad[3], extras, a, lookup);
    if (!lhs || !rhs) throw MissingEntry("table not solved for the requested splitting instance");
    *lhs -= *rhs;
    if (!lhs->coeffs.empty())
        throw MissingEntry("unsolved correlator " + lhs->coeffs.begin()->first.str());
    return lhs->constant;
}

Rat splitting_residual(const RingModel& m, const CorrelatorTable& table,
                       const std::array<int, 4>& quad, long qdeg) {
    if (m.lattice()->rank() != 1)
        throw std::invalid_argument("q-degree shorthand needs a rank-1 lattice");
    return splitting_residual(m, table, quad, CurveClass({qdeg}));
}

}  // namespace qhforge
