#pragma once

#include "qhforge/curve_class.hpp"
#include "qhforge/rational.hpp"

#include <map>
#include <optional>
#include <string>

namespace qhforge {

/// Element of the Novikov ring truncated at an energy cutoff: a finite sum
/// sum_A c_A e^A over effective curve classes with energy(A) <= cutoff.
/// A monomial e^A is graded in degree 2*chern(A). Values are immutable;
/// every operation returns a fresh element carrying the minimum cutoff of
/// its operands.
class NovikovElement {
public:
    NovikovElement(LatticePtr lattice, Rat cutoff);

    static NovikovElement scalar(LatticePtr lattice, const Rat& value, const Rat& cutoff);
    static NovikovElement monomial(LatticePtr lattice, const CurveClass& cls, const Rat& coeff,
                                   const Rat& cutoff);

    const LatticePtr& lattice() const { return lattice_; }
    const Rat& cutoff() const { return cutoff_; }
    const std::map<CurveClass, Rat>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    Rat coefficient(const CurveClass& cls) const;

    /// Coefficient of the zero class (the valuation-0 part).
    Rat scalar_part() const;

    /// Smallest energy among stored terms; nullopt for the zero element.
    std::optional<Rat> min_energy() const;

    /// 2*chern shared by all terms when homogeneous; 0 for scalars and 0;
    /// nullopt for an inhomogeneous element.
    std::optional<long> degree() const;

    NovikovElement truncated(const Rat& cutoff) const;

    /// Geometric-series inverse, exact up to the cutoff. Throws NotAUnit when
    /// the energy-0 part vanishes.
    NovikovElement inverse() const;

    /// Divides every term by e^shift; nullopt when some class would leave the
    /// effective cone.
    std::optional<NovikovElement> divided_by_monomial(const CurveClass& shift) const;

    NovikovElement operator-() const;
    NovikovElement& operator+=(const NovikovElement& o);
    NovikovElement& operator-=(const NovikovElement& o);
    friend NovikovElement operator+(NovikovElement a, const NovikovElement& b) { return a += b; }
    friend NovikovElement operator-(NovikovElement a, const NovikovElement& b) { return a -= b; }
    friend NovikovElement operator*(const NovikovElement& a, const NovikovElement& b);
    friend NovikovElement operator*(const Rat& c, const NovikovElement& a);

    bool operator==(const NovikovElement& o) const {
        return terms_ == o.terms_ && cutoff_ == o.cutoff_;
    }

    std::string str() const;

private:
    void add_term(const CurveClass& cls, const Rat& coeff);
    void check_compatible(const NovikovElement& o) const;

    LatticePtr lattice_;
    Rat cutoff_;
    std::map<CurveClass, Rat> terms_;
};

}  // namespace qhforge
