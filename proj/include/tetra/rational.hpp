#ifndef TETRA_RATIONAL_HPP
#define TETRA_RATIONAL_HPP

#include <string>
#include <string_view>

#include <gmpxx.h>

#include <tetra/error.hpp>

namespace tetra
{

using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den = 1)
{
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Generalized binomial coefficient C(t, n) for rational t.
inline Rational binomial(const Rational &t, unsigned long n)
{
    Rational r = 1;
    for (unsigned long k = 0; k < n; ++k) {
        r *= t - k;
        r /= k + 1;
    }
    return r;
}

// Always "p/q", also for integers, so consumers can split on '/'.
inline std::string to_fraction_string(const Rational &q)
{
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// Accepts "p/q" or "p".
inline Rational parse_rational(std::string_view s)
{
    Rational r;
    if (r.set_str(std::string(s), 10) != 0 || r.get_den() == 0) {
        throw error(errc::domain, "not a rational number: '" + std::string(s) + "'");
    }
    r.canonicalize();
    return r;
}

} // namespace tetra

#endif
