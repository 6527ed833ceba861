#pragma once

#include <sstream>
#include <string>

#include "qfol/ring.hpp"

namespace qfol {

/// Default variable names: x, y, z for up to three variables, x1..xn beyond.
inline std::vector<std::string> canonical_var_names(size_t n)
{
    if (n <= 3) {
        std::vector<std::string> v = {"x", "y", "z"};
        v.resize(n);
        return v;
    }
    std::vector<std::string> v;
    for (size_t i = 1; i <= n; ++i)
        v.push_back("x" + std::to_string(i));
    return v;
}

inline std::vector<std::string> canonical_der_names(size_t n)
{
    auto v = canonical_var_names(n);
    for (auto& s : v)
        s = "d" + s;
    return v;
}

inline std::string monomial_to_string(const Monomial& m,
                                      const std::vector<std::string>& vars)
{
    std::string s;
    for (size_t i = 0; i < m.exps.size(); ++i) {
        if (m.exps[i] == 0)
            continue;
        if (!s.empty())
            s += "*";
        s += vars[i];
        if (m.exps[i] > 1)
            s += "^" + std::to_string(m.exps[i]);
    }
    return s;
}

inline std::string poly_to_string(const Poly& p, const std::vector<std::string>& vars)
{
    if (p.is_zero())
        return "0";
    std::string s;
    bool first = true;
    for (const auto& t : p.terms()) {
        Rational c = t.coef;
        bool neg = c < 0;
        if (neg)
            c = -c;
        if (first)
            s += neg ? "-" : "";
        else
            s += neg ? " - " : " + ";
        first = false;
        std::string mono = monomial_to_string(t.mono, vars);
        if (mono.empty())
            s += rational_to_string(c);
        else if (c == 1)
            s += mono;
        else
            s += rational_to_string(c) + "*" + mono;
    }
    return s;
}

inline std::string poly_to_string(const Poly& p)
{
    return poly_to_string(p, canonical_var_names(p.nvars()));
}

inline std::string polyvector_to_string(const PolyVector& v,
                                        const std::vector<std::string>& vars)
{
    std::string s = "(";
    for (size_t i = 0; i < v.rank(); ++i) {
        if (i)
            s += ", ";
        s += poly_to_string(v[i], vars);
    }
    return s + ")";
}

inline std::string polyvector_to_string(const PolyVector& v)
{
    return polyvector_to_string(v, canonical_var_names(v.nvars()));
}

/// Row-major [[...], [...]] form; an empty dimension prints [].
inline std::string polymatrix_to_string(const PolyMatrix& m,
                                        const std::vector<std::string>& vars)
{
    std::string s = "[";
    for (size_t i = 0; i < m.rows(); ++i) {
        if (i)
            s += ", ";
        s += "[";
        for (size_t j = 0; j < m.cols(); ++j) {
            if (j)
                s += ", ";
            s += poly_to_string(m.at(i, j), vars);
        }
        s += "]";
    }
    return s + "]";
}

inline std::string polymatrix_to_string(const PolyMatrix& m)
{
    return polymatrix_to_string(m, canonical_var_names(m.nvars()));
}

/// Vector fields print as combinations of basis derivations, e.g. "x*dx - y*dy".
inline std::string vectorfield_to_string(const VectorField& v,
                                         const std::vector<std::string>& vars,
                                         const std::vector<std::string>& ders)
{
    if (v.is_zero())
        return "0";
    std::string s;
    bool first = true;
    for (size_t i = 0; i < v.nvars(); ++i) {
        const Poly& p = v.components[i];
        if (p.is_zero())
            continue;
        for (const auto& t : p.terms()) {
            Rational c = t.coef;
            bool neg = c < 0;
            if (neg)
                c = -c;
            if (first)
                s += neg ? "-" : "";
            else
                s += neg ? " - " : " + ";
            first = false;
            std::string mono = monomial_to_string(t.mono, vars);
            std::string coefpart;
            if (mono.empty()) {
                if (c != 1)
                    coefpart = rational_to_string(c) + "*";
            } else if (c == 1) {
                coefpart = mono + "*";
            } else {
                coefpart = rational_to_string(c) + "*" + mono + "*";
            }
            s += coefpart + ders[i];
        }
    }
    return s;
}

inline std::string vectorfield_to_string(const VectorField& v)
{
    return vectorfield_to_string(v, canonical_var_names(v.nvars()),
                                 canonical_der_names(v.nvars()));
}

} // namespace qfol
