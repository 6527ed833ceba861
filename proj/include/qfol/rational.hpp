#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace qfol {

// Exact arbitrary-precision rationals. cpp_rational keeps gcd-reduced
// numerator/denominator with positive denominator, which is the canonical
// form everything downstream (term orders, serialization) relies on.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string rational_to_string(const Rational& r) { return r.str(); }

inline Rational rational_pow(const Rational& base, unsigned e)
{
    Rational r = 1;
    for (unsigned i = 0; i < e; ++i)
        r *= base;
    return r;
}

} // namespace qfol
