#pragma once

#include "qhforge/rational.hpp"

#include <compare>
#include <memory>
#include <optional>
#include <vector>

namespace qhforge {

/// Integer coordinate vector in a fixed basis of the curve-class lattice.
struct CurveClass {
    std::vector<long> coords;

    CurveClass() = default;
    explicit CurveClass(std::vector<long> c) : coords(std::move(c)) {}

    static CurveClass zero(int rank) { return CurveClass(std::vector<long>(rank, 0)); }

    int rank() const { return static_cast<int>(coords.size()); }

    bool is_zero() const {
        for (long c : coords)
            if (c != 0) return false;
        return true;
    }

    /// Lies in the declared effective cone (componentwise nonnegative).
    bool effective() const {
        for (long c : coords)
            if (c < 0) return false;
        return true;
    }

    CurveClass operator+(const CurveClass& o) const;
    CurveClass operator-(const CurveClass& o) const;

    /// this - o when the difference is still effective.
    std::optional<CurveClass> minus_effective(const CurveClass& o) const;

    auto operator<=>(const CurveClass&) const = default;
};

/// Fixed basis of second homology with a positive energy weight and an
/// integer first-Chern pairing on each generator. Immutable; shared between
/// all values built over it.
class ClassLattice {
public:
    ClassLattice(std::vector<Rat> energy_weights, std::vector<long> chern_weights);

    int rank() const { return static_cast<int>(energy_weights_.size()); }

    Rat energy(const CurveClass& a) const;
    long chern(const CurveClass& a) const;

    bool same_as(const ClassLattice& o) const {
        return energy_weights_ == o.energy_weights_ && chern_weights_ == o.chern_weights_;
    }

    /// All effective classes with energy <= cutoff, sorted by (energy, coords).
    /// Includes the zero class.
    std::vector<CurveClass> effective_classes_up_to(const Rat& cutoff) const;

    const std::vector<Rat>& energy_weights() const { return energy_weights_; }
    const std::vector<long>& chern_weights() const { return chern_weights_; }

private:
    std::vector<Rat> energy_weights_;
    std::vector<long> chern_weights_;
};

using LatticePtr = std::shared_ptr<const ClassLattice>;

LatticePtr make_lattice(std::vector<Rat> energy_weights, std::vector<long> chern_weights);

}  // namespace qhforge
