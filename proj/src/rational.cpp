#include "qhforge/rational.hpp"

#include <stdexcept>

namespace qhforge {

std::string rat_str(const Rat& r) {
    if (is_integer(r)) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rat parse_rat(const std::string& s) {
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            Rat r(Int(s, 10));
            return r;
        }
        Int num(s.substr(0, slash), 10);
        Int den(s.substr(slash + 1), 10);
        if (den == 0) throw std::invalid_argument("zero denominator: " + s);
        Rat r(num, den);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("not a rational: '" + s + "'");
    }
}

Int binomial(unsigned long n, unsigned long k) {
    if (k > n) return 0;
    Int result;
    mpz_bin_uiui(result.get_mpz_t(), n, k);
    return result;
}

Int factorial(unsigned long n) {
    Int result;
    mpz_fac_ui(result.get_mpz_t(), n);
    return result;
}

}  // namespace qhforge
