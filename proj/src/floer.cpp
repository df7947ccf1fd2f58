#include "qhforge/floer.hpp"

#include "qhforge/errors.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace qhforge {

FloerComplex::FloerComplex(LatticePtr lattice, Rat cutoff, std::vector<FloerGenerator> generators,
                           std::map<std::pair<int, int>, NovikovElement> boundary)
    : lattice_(std::move(lattice)), cutoff_(std::move(cutoff)), generators_(std::move(generators)),
      boundary_(std::move(boundary)) {
    if (!lattice_) throw std::invalid_argument("null lattice");
    std::set<std::string> ids;
    for (const auto& g : generators_)
        if (!ids.insert(g.id).second) throw std::invalid_argument("duplicate generator id " + g.id);
    const int n = static_cast<int>(generators_.size());
    for (auto it = boundary_.begin(); it != boundary_.end();) {
        const auto& [from, to] = it->first;
        if (from < 0 || to < 0 || from >= n || to >= n)
            throw std::invalid_argument("boundary entry out of range");
        if (!it->second.lattice()->same_as(*lattice_))
            throw LatticeMismatch("boundary entry over a different lattice");
        if (it->second.is_zero()) it = boundary_.erase(it);
        else ++it;
    }
}

std::vector<std::string> FloerComplex::validate() const {
    std::vector<std::string> out;
    for (const auto& [arrow, element] : boundary_) {
        const auto& [from, to] = arrow;
        const auto& x = generators_[from];
        const auto& y = generators_[to];
        if (from == to) out.push_back("boundary loop at " + x.id);
        for (const auto& [cls, coeff] : element.terms()) {
            long drop = x.cz - y.cz - 2 * lattice_->chern(cls);
            if (drop != 1)
                out.push_back("grading violation on " + x.id + " -> " + y.id + ": index drop " +
                              std::to_string(drop));
            Rat energy = lattice_->energy(cls);
            if (energy < 0)
                out.push_back("filtration violation on " + x.id + " -> " + y.id +
                              ": negative energy term");
            else if (energy == 0 && !(x.action > y.action))
                out.push_back("filtration violation on " + x.id + " -> " + y.id +
                              ": action does not decrease");
        }
    }
    return out;
}

bool FloerComplex::d_squared_check() const {
    if (!valid()) throw std::invalid_argument("complex fails validation");
    // (x, z) entry of the squared matrix, accumulated sparsely.
    std::map<std::pair<int, int>, NovikovElement> square;
    for (const auto& [xy, e1] : boundary_) {
        for (const auto& [yz, e2] : boundary_) {
            if (xy.second != yz.first) continue;
            auto key = std::make_pair(xy.first, yz.second);
            auto it = square.find(key);
            if (it == square.end()) square.emplace(key, e1 * e2);
            else it->second += e1 * e2;
        }
    }
    for (const auto& [key, e] : square)
        if (!e.is_zero()) return false;
    return true;
}

FloerComplex::Homology FloerComplex::homology_ranks() const {
    if (!d_squared_check()) throw std::invalid_argument("boundary does not square to zero");

    std::vector<char> alive(generators_.size(), 1);
    std::map<std::pair<int, int>, NovikovElement> mat = boundary_;
    Homology result;

    // Cancel the generator pair (px, py) against an invertible pivot. The
    // pivot is pivot_unit * e^shift; column entries must be divisible by
    // e^shift, which holds automatically when the pivot has minimal
    // valuation in the matrix.
    auto eliminate = [&](std::pair<int, int> pivot_key, const NovikovElement& pivot_unit_inverse,
                         const CurveClass& shift) {
        const auto [px, py] = pivot_key;
        std::vector<std::pair<int, NovikovElement>> row, col;
        for (const auto& [key, e] : mat) {
            if (key.first == px && key.second != py) row.emplace_back(key.second, e);
            if (key.second == py && key.first != px) col.emplace_back(key.first, e);
        }
        for (const auto& [u, ey] : col) {
            // Divide only when an update actually happens; the quotient
            // stays in the ring because the pivot valuation is minimal.
            std::optional<NovikovElement> shifted;
            for (const auto& [v, xv] : row) {
                if (!shifted) {
                    shifted = ey.divided_by_monomial(shift);
                    if (!shifted)
                        throw IncreaseCutoff("increase cutoff: pivot does not divide its column");
                }
                auto key = std::make_pair(u, v);
                NovikovElement update = *shifted * pivot_unit_inverse * xv;
                auto it = mat.find(key);
                if (it == mat.end()) it = mat.emplace(key, NovikovElement(lattice_, cutoff_)).first;
                it->second -= update;
                if (it->second.is_zero()) mat.erase(it);
            }
        }
        alive[px] = alive[py] = 0;
        std::erase_if(mat, [&](const auto& kv) {
            return kv.first.first == px || kv.first.second == py || kv.first.first == py ||
                   kv.first.second == px;
        });
    };

    while (!mat.empty()) {
        // Unit pivots first, in deterministic matrix order.
        std::optional<std::pair<int, int>> unit_pivot;
        for (const auto& [key, e] : mat)
            if (e.scalar_part() != 0) {
                unit_pivot = key;
                break;
            }
        if (unit_pivot) {
            eliminate(*unit_pivot, mat.at(*unit_pivot).inverse(),
                      CurveClass::zero(lattice_->rank()));
            continue;
        }

        // Every entry has positive valuation: cancel along the entry of
        // minimal energy. Ranks are then certified only up to the cutoff.
        std::pair<int, int> pivot_key;
        std::optional<Rat> best;
        for (const auto& [key, e] : mat) {
            Rat v = *e.min_energy();
            if (!best || v < *best) {
                best = v;
                pivot_key = key;
            }
        }
        result.certified_exact = false;
        const NovikovElement& p = mat.at(pivot_key);
        std::optional<CurveClass> shift;
        for (const auto& [cls, c] : p.terms())
            if (lattice_->energy(cls) == *best) {
                shift = cls;
                break;
            }
        auto unit_part = p.divided_by_monomial(*shift);
        if (!unit_part || unit_part->scalar_part() == 0)
            throw IncreaseCutoff("increase cutoff: cannot certify a pivot unit");
        eliminate(pivot_key, unit_part->inverse(), *shift);
    }

    for (size_t i = 0; i < generators_.size(); ++i)
        if (alive[i]) result.ranks[generators_[i].cz] += 1;
    return result;
}

FloerComplex::ArnoldReport FloerComplex::arnold_report(const std::vector<long>& betti) const {
    Homology h = homology_ranks();
    ArnoldReport report;
    report.generators = generators_.size();
    report.ranks = h.ranks;
    report.hf_total = h.total();
    report.certified_exact = h.certified_exact;
    for (long b : betti) report.betti_total += b;
    report.bound_holds = static_cast<long>(report.generators) >= report.betti_total;
    report.equality_holds = report.hf_total == report.betti_total;
    return report;
}

std::string FloerComplex::ArnoldReport::str() const {
    std::ostringstream os;
    os << "generators=" << generators << " sum(HF)=" << hf_total << " sum(betti)=" << betti_total
       << " | #generators >= sum(betti): " << (bound_holds ? "yes" : "NO")
       << " | sum(HF) == sum(betti): " << (equality_holds ? "yes" : "NO");
    if (!certified_exact) os << " (certified up to cutoff only)";
    return os.str();
}

FloerComplex from_morse(const std::vector<MorseCell>& cells, const std::vector<MorseFlow>& flows,
                        LatticePtr lattice, Rat cutoff) {
    if (!lattice) lattice = make_lattice({Rat(1)}, {0});
    std::vector<FloerGenerator> gens;
    std::map<std::string, int> index;
    for (const auto& c : cells) {
        index[c.id] = static_cast<int>(gens.size());
        gens.push_back({c.id, c.index, Rat(c.index)});
    }
    std::map<std::pair<int, int>, NovikovElement> boundary;
    for (const auto& f : flows) {
        if (f.count == 0) continue;
        auto fi = index.find(f.from), ti = index.find(f.to);
        if (fi == index.end() || ti == index.end())
            throw std::invalid_argument("flow between unknown cells");
        const auto& x = gens[fi->second];
        const auto& y = gens[ti->second];
        if (x.cz - y.cz != 1)
            throw std::invalid_argument("flow " + f.from + " -> " + f.to +
                                        " does not drop the index by 1");
        auto key = std::make_pair(fi->second, ti->second);
        NovikovElement term = NovikovElement::scalar(lattice, Rat(f.count), cutoff);
        auto it = boundary.find(key);
        if (it == boundary.end()) boundary.emplace(key, term);
        else it->second += term;
    }
    return FloerComplex(std::move(lattice), std::move(cutoff), std::move(gens),
                        std::move(boundary));
}

}  // namespace qhforge
