#include "qhforge/curve_class.hpp"

#include "qhforge/errors.hpp"

#include <algorithm>

namespace qhforge {

namespace {

void require_same_rank(const CurveClass& a, const CurveClass& b) {
    if (a.rank() != b.rank())
        throw LatticeMismatch("curve classes of rank " + std::to_string(a.rank()) + " and " +
                              std::to_string(b.rank()));
}

}  // namespace

CurveClass CurveClass::operator+(const CurveClass& o) const {
    require_same_rank(*this, o);
    CurveClass r = *this;
    for (size_t i = 0; i < coords.size(); ++i) r.coords[i] += o.coords[i];
    return r;
}

CurveClass CurveClass::operator-(const CurveClass& o) const {
    require_same_rank(*this, o);
    CurveClass r = *this;
    for (size_t i = 0; i < coords.size(); ++i) r.coords[i] -= o.coords[i];
    return r;
}

std::optional<CurveClass> CurveClass::minus_effective(const CurveClass& o) const {
    require_same_rank(*this, o);
    CurveClass r = *this - o;
    if (!r.effective()) return std::nullopt;
    return r;
}

ClassLattice::ClassLattice(std::vector<Rat> energy_weights, std::vector<long> chern_weights)
    : energy_weights_(std::move(energy_weights)), chern_weights_(std::move(chern_weights)) {
    if (energy_weights_.size() != chern_weights_.size())
        throw std::invalid_argument("lattice weight vectors differ in length");
    for (const Rat& w : energy_weights_)
        if (w <= 0) throw std::invalid_argument("energy weights must be positive");
}

Rat ClassLattice::energy(const CurveClass& a) const {
    if (a.rank() != rank()) throw LatticeMismatch("class rank does not match lattice");
    Rat e = 0;
    for (int i = 0; i < rank(); ++i) e += energy_weights_[i] * a.coords[i];
    return e;
}

long ClassLattice::chern(const CurveClass& a) const {
    if (a.rank() != rank()) throw LatticeMismatch("class rank does not match lattice");
    long c = 0;
    for (int i = 0; i < rank(); ++i) c += chern_weights_[i] * a.coords[i];
    return c;
}

std::vector<CurveClass> ClassLattice::effective_classes_up_to(const Rat& cutoff) const {
    std::vector<CurveClass> out;
    if (cutoff < 0) return out;
    CurveClass current = CurveClass::zero(rank());
    // Depth-first over coordinates; positive weights bound every branch.
    auto rec = [&](auto&& self, int i, Rat budget) -> void {
        if (i == rank()) {
            out.push_back(current);
            return;
        }
        for (long c = 0;; ++c) {
            Rat used = energy_weights_[i] * c;
            if (used > budget) break;
            current.coords[i] = c;
            self(self, i + 1, budget - used);
        }
        current.coords[i] = 0;
    };
    rec(rec, 0, cutoff);
    std::sort(out.begin(), out.end(), [&](const CurveClass& a, const CurveClass& b) {
        Rat ea = energy(a), eb = energy(b);
        if (ea != eb) return ea < eb;
        return a.coords < b.coords;
    });
    return out;
}

LatticePtr make_lattice(std::vector<Rat> energy_weights, std::vector<long> chern_weights) {
    return std::make_shared<const ClassLattice>(std::move(energy_weights), std::move(chern_weights));
}

}  // namespace qhforge
