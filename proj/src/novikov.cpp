#include "qhforge/novikov.hpp"

#include "qhforge/errors.hpp"

#include <sstream>

namespace qhforge {

NovikovElement::NovikovElement(LatticePtr lattice, Rat cutoff)
    : lattice_(std::move(lattice)), cutoff_(std::move(cutoff)) {
    if (!lattice_) throw std::invalid_argument("null lattice");
}

NovikovElement NovikovElement::scalar(LatticePtr lattice, const Rat& value, const Rat& cutoff) {
    NovikovElement e(std::move(lattice), cutoff);
    e.add_term(CurveClass::zero(e.lattice_->rank()), value);
    return e;
}

NovikovElement NovikovElement::monomial(LatticePtr lattice, const CurveClass& cls, const Rat& coeff,
                                        const Rat& cutoff) {
    NovikovElement e(std::move(lattice), cutoff);
    e.add_term(cls, coeff);
    return e;
}

void NovikovElement::add_term(const CurveClass& cls, const Rat& coeff) {
    if (coeff == 0) return;
    if (lattice_->energy(cls) > cutoff_) return;
    auto [it, inserted] = terms_.emplace(cls, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == 0) terms_.erase(it);
    }
}

void NovikovElement::check_compatible(const NovikovElement& o) const {
    if (!lattice_->same_as(*o.lattice_))
        throw LatticeMismatch("Novikov elements over different lattices");
}

Rat NovikovElement::coefficient(const CurveClass& cls) const {
    auto it = terms_.find(cls);
    return it == terms_.end() ? Rat(0) : it->second;
}

Rat NovikovElement::scalar_part() const { return coefficient(CurveClass::zero(lattice_->rank())); }

std::optional<Rat> NovikovElement::min_energy() const {
    std::optional<Rat> best;
    for (const auto& [cls, c] : terms_) {
        Rat e = lattice_->energy(cls);
        if (!best || e < *best) best = e;
    }
    return best;
}

std::optional<long> NovikovElement::degree() const {
    std::optional<long> deg;
    for (const auto& [cls, c] : terms_) {
        long d = 2 * lattice_->chern(cls);
        if (deg && *deg != d) return std::nullopt;
        deg = d;
    }
    return deg ? deg : std::optional<long>(0);
}

NovikovElement NovikovElement::truncated(const Rat& cutoff) const {
    NovikovElement out(lattice_, cutoff < cutoff_ ? cutoff : cutoff_);
    for (const auto& [cls, c] : terms_) out.add_term(cls, c);
    return out;
}

NovikovElement NovikovElement::operator-() const {
    NovikovElement out(lattice_, cutoff_);
    for (const auto& [cls, c] : terms_) out.terms_.emplace(cls, -c);
    return out;
}

NovikovElement& NovikovElement::operator+=(const NovikovElement& o) {
    check_compatible(o);
    if (o.cutoff_ < cutoff_) *this = truncated(o.cutoff_);
    for (const auto& [cls, c] : o.terms_) add_term(cls, c);
    return *this;
}

NovikovElement& NovikovElement::operator-=(const NovikovElement& o) { return *this += -o; }

NovikovElement operator*(const NovikovElement& a, const NovikovElement& b) {
    a.check_compatible(b);
    NovikovElement out(a.lattice_, a.cutoff_ < b.cutoff_ ? a.cutoff_ : b.cutoff_);
    for (const auto& [ca, va] : a.terms_)
        for (const auto& [cb, vb] : b.terms_) out.add_term(ca + cb, va * vb);
    return out;
}

NovikovElement operator*(const Rat& c, const NovikovElement& a) {
    NovikovElement out(a.lattice_, a.cutoff_);
    if (c == 0) return out;
    for (const auto& [cls, v] : a.terms_) out.terms_.emplace(cls, c * v);
    return out;
}

NovikovElement NovikovElement::inverse() const {
    Rat c0 = scalar_part();
    if (c0 == 0) throw NotAUnit("not a unit at this valuation");
    // a = c0 (1 + s) with val(s) > 0, so 1/a = (1/c0) sum_k (-s)^k, and the
    // series is finite below the cutoff.
    NovikovElement s = (Rat(1) / c0) * *this;
    s -= scalar(lattice_, 1, cutoff_);
    NovikovElement sum = scalar(lattice_, 1, cutoff_);
    NovikovElement power = scalar(lattice_, 1, cutoff_);
    int sign = 1;
    while (true) {
        power = power * s;
        if (power.is_zero()) break;
        sign = -sign;
        sum += Rat(sign) * power;
    }
    return (Rat(1) / c0) * sum;
}

std::optional<NovikovElement> NovikovElement::divided_by_monomial(const CurveClass& shift) const {
    NovikovElement out(lattice_, cutoff_);
    for (const auto& [cls, c] : terms_) {
        auto shifted = cls.minus_effective(shift);
        if (!shifted) return std::nullopt;
        out.terms_.emplace(*shifted, c);
    }
    return out;
}

std::string NovikovElement::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [cls, c] : terms_) {
        Rat coeff = c;
        if (!first) {
            os << (coeff < 0 ? " - " : " + ");
            if (coeff < 0) coeff = -coeff;
        }
        first = false;
        bool zero_cls = cls.is_zero();
        if (zero_cls || coeff != 1) os << rat_str(coeff);
        if (!zero_cls) {
            os << "e^[";
            for (int i = 0; i < cls.rank(); ++i) os << (i ? "," : "") << cls.coords[i];
            os << "]";
        }
    }
    return os.str();
}

}  // namespace qhforge
