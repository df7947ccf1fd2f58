#pragma once

#include "qhforge/novikov.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qhforge {

struct FloerGenerator {
    std::string id;
    long cz = 0;  // Conley-Zehnder index; only differences matter
    Rat action = 0;
};

/// Chain complex over the truncated Novikov ring: graded generators with
/// actions and a boundary matrix of Novikov elements. Each boundary term
/// e^A from x to y must satisfy cz(x) - cz(y) - 2 chern(A) = 1 and respect
/// the action filtration. Immutable once built.
class FloerComplex {
public:
    FloerComplex(LatticePtr lattice, Rat cutoff, std::vector<FloerGenerator> generators,
                 std::map<std::pair<int, int>, NovikovElement> boundary);

    const LatticePtr& lattice() const { return lattice_; }
    const Rat& cutoff() const { return cutoff_; }
    const std::vector<FloerGenerator>& generators() const { return generators_; }
    const std::map<std::pair<int, int>, NovikovElement>& boundary() const { return boundary_; }

    /// All grading/filtration violations; empty report = valid complex.
    std::vector<std::string> validate() const;
    bool valid() const { return validate().empty(); }

    /// Squares the boundary matrix up to the cutoff. Throws on an invalid
    /// complex.
    bool d_squared_check() const;

    struct Homology {
        std::map<long, long> ranks;  // cz index -> rank over the Novikov field
        bool certified_exact = true; // false when a positive-energy pivot was used
        long total() const {
            long t = 0;
            for (const auto& [deg, r] : ranks) t += r;
            return t;
        }
    };

    /// Ranks over the Novikov field by repeated cancellation of invertible
    /// boundary entries; deterministic pivot order. Throws IncreaseCutoff
    /// when a positive-energy pivot cannot be factored at this truncation.
    Homology homology_ranks() const;

    struct ArnoldReport {
        size_t generators = 0;
        long hf_total = 0;
        long betti_total = 0;
        std::map<long, long> ranks;
        bool bound_holds = false;     // generators >= sum of Betti numbers
        bool equality_holds = false;  // sum of HF ranks == sum of Betti numbers
        bool certified_exact = true;
        std::string str() const;
    };

    ArnoldReport arnold_report(const std::vector<long>& betti) const;

private:
    LatticePtr lattice_;
    Rat cutoff_;
    std::vector<FloerGenerator> generators_;
    std::map<std::pair<int, int>, NovikovElement> boundary_;
};

struct MorseCell {
    std::string id;
    long index = 0;
};

struct MorseFlow {
    std::string from;
    std::string to;
    long count = 0;  // signed count of gradient lines
};

/// Morse-model fixture: class-0 boundary entries from signed flow counts,
/// action equal to the Morse index. Flows must drop the index by exactly 1.
FloerComplex from_morse(const std::vector<MorseCell>& cells, const std::vector<MorseFlow>& flows,
                        LatticePtr lattice = nullptr, Rat cutoff = Rat(1));

}  // namespace qhforge
