#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>

#include "qfol/monomial.hpp"
#include "qfol/rational.hpp"

namespace qfol {

/// Multivariate polynomial over the rationals in a fixed number of variables.
/// Terms are kept sorted in descending degrevlex order with no zero
/// coefficients, so equal polynomials have identical representations.
class Poly {
public:
    struct Term {
        Monomial mono;
        Rational coef;
    };

    Poly() = default;
    explicit Poly(size_t nvars) : nvars_(nvars) {}

    static Poly constant(size_t nvars, const Rational& c)
    {
        Poly p(nvars);
        if (c != 0)
            p.terms_.push_back({Monomial(nvars), c});
        return p;
    }

    static Poly variable(size_t nvars, size_t i)
    {
        if (i >= nvars)
            throw std::invalid_argument("variable index out of range");
        Poly p(nvars);
        Monomial m(nvars);
        m.exps[i] = 1;
        p.terms_.push_back({m, Rational(1)});
        return p;
    }

    static Poly monomial(size_t nvars, Monomial m, Rational c)
    {
        Poly p(nvars);
        if (c != 0)
            p.terms_.push_back({std::move(m), std::move(c)});
        return p;
    }

    size_t nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    const std::vector<Term>& terms() const { return terms_; }

    const Monomial& leading_monomial() const
    {
        if (is_zero())
            throw std::logic_error("leading term of zero polynomial");
        return terms_.front().mono;
    }

    const Rational& leading_coefficient() const
    {
        if (is_zero())
            throw std::logic_error("leading term of zero polynomial");
        return terms_.front().coef;
    }

    uint32_t total_degree() const
    {
        uint32_t d = 0;
        for (const auto& t : terms_)
            d = std::max(d, t.mono.degree());
        return d;
    }

    bool operator==(const Poly& o) const
    {
        if (nvars_ != o.nvars_ || terms_.size() != o.terms_.size())
            return false;
        for (size_t i = 0; i < terms_.size(); ++i)
            if (terms_[i].mono != o.terms_[i].mono || terms_[i].coef != o.terms_[i].coef)
                return false;
        return true;
    }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly operator-() const
    {
        Poly r = *this;
        for (auto& t : r.terms_)
            t.coef = -t.coef;
        return r;
    }

    Poly operator+(const Poly& o) const
    {
        check_compatible(o);
        Poly r(nvars_);
        r.terms_.reserve(terms_.size() + o.terms_.size());
        size_t i = 0, j = 0;
        while (i < terms_.size() && j < o.terms_.size()) {
            if (terms_[i].mono == o.terms_[j].mono) {
                Rational c = terms_[i].coef + o.terms_[j].coef;
                if (c != 0)
                    r.terms_.push_back({terms_[i].mono, std::move(c)});
                ++i, ++j;
            } else if (degrevlex_greater(terms_[i].mono, o.terms_[j].mono)) {
                r.terms_.push_back(terms_[i]);
                ++i;
            } else {
                r.terms_.push_back(o.terms_[j]);
                ++j;
            }
        }
        for (; i < terms_.size(); ++i)
            r.terms_.push_back(terms_[i]);
        for (; j < o.terms_.size(); ++j)
            r.terms_.push_back(o.terms_[j]);
        return r;
    }

    Poly operator-(const Poly& o) const { return *this + (-o); }

    Poly operator*(const Poly& o) const
    {
        check_compatible(o);
        std::map<Monomial, Rational, decltype(&degrevlex_greater)> acc(&degrevlex_greater);
        for (const auto& a : terms_)
            for (const auto& b : o.terms_) {
                Monomial m = a.mono * b.mono;
                auto it = acc.find(m);
                if (it == acc.end())
                    acc.emplace(std::move(m), a.coef * b.coef);
                else
                    it->second += a.coef * b.coef;
            }
        Poly r(nvars_);
        for (auto& [m, c] : acc)
            if (c != 0)
                r.terms_.push_back({m, std::move(c)});
        return r;
    }

    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    Poly operator*(const Rational& c) const
    {
        Poly r(nvars_);
        if (c == 0)
            return r;
        r.terms_ = terms_;
        for (auto& t : r.terms_)
            t.coef *= c;
        return r;
    }

    /// Multiply by a single term c*m.
    Poly times_term(const Monomial& m, const Rational& c) const
    {
        Poly r(nvars_);
        if (c == 0)
            return r;
        r.terms_.reserve(terms_.size());
        for (const auto& t : terms_)
            r.terms_.push_back({t.mono * m, t.coef * c});
        return r;
    }

    /// Partial derivative with respect to variable i.
    Poly derivative(size_t i) const
    {
        if (i >= nvars_)
            throw std::invalid_argument("derivative: variable index out of range");
        Poly r(nvars_);
        for (const auto& t : terms_) {
            if (t.mono.exps[i] == 0)
                continue;
            Term d;
            d.mono = t.mono;
            d.mono.exps[i] -= 1;
            d.coef = t.coef * Rational(t.mono.exps[i]);
            r.terms_.push_back(std::move(d));
        }
        // term order is preserved by lowering one exponent within a fixed
        // set of distinct monomials only up to ties; re-sort to be safe
        std::sort(r.terms_.begin(), r.terms_.end(),
                  [](const Term& a, const Term& b) { return degrevlex_greater(a.mono, b.mono); });
        return r;
    }

private:
    void check_compatible(const Poly& o) const
    {
        if (nvars_ != o.nvars_)
            throw std::invalid_argument("polynomial variable counts differ");
    }

    size_t nvars_ = 0;
    std::vector<Term> terms_;
};

inline Poly operator*(const Rational& c, const Poly& p) { return p * c; }

} // namespace qfol
