#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace qfol {

/// Exponent vector of a power product in a fixed polynomial ring.
/// The ambient variable count is the vector length.
struct Monomial {
    std::vector<uint32_t> exps;

    Monomial() = default;
    explicit Monomial(size_t nvars) : exps(nvars, 0) {}
    Monomial(std::initializer_list<uint32_t> e) : exps(e) {}

    size_t nvars() const { return exps.size(); }

    uint32_t degree() const
    {
        return std::accumulate(exps.begin(), exps.end(), uint32_t{0});
    }

    bool is_one() const
    {
        for (uint32_t e : exps)
            if (e != 0)
                return false;
        return true;
    }

    bool operator==(const Monomial& o) const { return exps == o.exps; }
    bool operator!=(const Monomial& o) const { return !(*this == o); }

    Monomial operator*(const Monomial& o) const
    {
        Monomial r = *this;
        for (size_t i = 0; i < exps.size(); ++i)
            r.exps[i] += o.exps[i];
        return r;
    }

    bool divides(const Monomial& o) const
    {
        for (size_t i = 0; i < exps.size(); ++i)
            if (exps[i] > o.exps[i])
                return false;
        return true;
    }

    /// Quotient o / *this; caller must check divisibility.
    Monomial quotient_of(const Monomial& o) const
    {
        Monomial r(exps.size());
        for (size_t i = 0; i < exps.size(); ++i)
            r.exps[i] = o.exps[i] - exps[i];
        return r;
    }

    static Monomial lcm(const Monomial& a, const Monomial& b)
    {
        Monomial r(a.exps.size());
        for (size_t i = 0; i < a.exps.size(); ++i)
            r.exps[i] = a.exps[i] > b.exps[i] ? a.exps[i] : b.exps[i];
        return r;
    }
};

/// Degree-reverse-lexicographic order: first by total degree, ties broken by
/// the last coordinate where the exponents differ (smaller exponent wins).
/// This is the single global monomial order of the library.
inline bool degrevlex_less(const Monomial& a, const Monomial& b)
{
    uint32_t da = a.degree(), db = b.degree();
    if (da != db)
        return da < db;
    for (size_t i = a.exps.size(); i-- > 0;) {
        if (a.exps[i] != b.exps[i])
            return a.exps[i] > b.exps[i];
    }
    return false;
}

inline bool degrevlex_greater(const Monomial& a, const Monomial& b)
{
    return degrevlex_less(b, a);
}

/// A monomial in a free module A^r: power product together with the index of
/// the basis vector it sits in. Ordered position-over-term with the lower
/// component taking priority, then degrevlex within a component.
struct ModuleMonomial {
    size_t component = 0;
    Monomial mono;

    bool operator==(const ModuleMonomial& o) const
    {
        return component == o.component && mono == o.mono;
    }

    bool divides(const ModuleMonomial& o) const
    {
        return component == o.component && mono.divides(o.mono);
    }
};

inline bool module_mono_greater(const ModuleMonomial& a, const ModuleMonomial& b)
{
    if (a.component != b.component)
        return a.component < b.component;
    return degrevlex_greater(a.mono, b.mono);
}

} // namespace qfol
