// Test-support code: independent oracle implementations and random input
// generators. The oracles deliberately avoid the library's algorithm paths
// (they share only the value types) so they can stand as referees.
#pragma once

#include <random>

#include "qfol/groebner.hpp"
#include "qfol/ring.hpp"

namespace oracle {

using namespace qfol;

/// Partial derivative computed term by term from the exponent data,
/// independent of Poly::derivative.
inline Poly partial_derivative_termwise(const Poly& f, size_t var)
{
    Poly r(f.nvars());
    for (const auto& t : f.terms()) {
        uint32_t e = t.mono.exps[var];
        if (e == 0)
            continue;
        Monomial m = t.mono;
        m.exps[var] = e - 1;
        r += Poly::monomial(f.nvars(), m, t.coef * Rational(e));
    }
    return r;
}

inline std::optional<ModuleTerm> lead_term(const PolyVector& v)
{
    return leading_module_term(v);
}

/// Full reduction against a list of monic elements, first divisor wins.
inline PolyVector naive_reduce(PolyVector work, const std::vector<PolyVector>& basis)
{
    PolyVector rem(work.rank(), work.nvars());
    while (true) {
        auto lt = lead_term(work);
        if (!lt)
            return rem;
        bool hit = false;
        for (const auto& b : basis) {
            auto bl = lead_term(b);
            if (!bl || !bl->mm.divides(lt->mm))
                continue;
            Monomial q = bl->mm.mono.quotient_of(lt->mm.mono);
            work -= b.times_term(q, lt->coef / bl->coef);
            hit = true;
            break;
        }
        if (!hit) {
            Poly t = Poly::monomial(work.nvars(), lt->mm.mono, lt->coef);
            rem[lt->mm.component] += t;
            work[lt->mm.component] -= t;
        }
    }
}

/// Brute S-pair saturation: recheck every pair each round until all
/// S-vectors reduce to zero. No pair queue, no interreduction, no tracking.
inline std::vector<PolyVector> naive_groebner(size_t rank, size_t nvars,
                                              const std::vector<PolyVector>& gens)
{
    std::vector<PolyVector> basis;
    for (const auto& g : gens)
        if (!g.is_zero()) {
            auto lt = lead_term(g);
            basis.push_back(g * Rational(1 / lt->coef));
        }
    (void)rank;
    (void)nvars;
    bool grew = true;
    while (grew) {
        grew = false;
        size_t count = basis.size();
        for (size_t i = 0; i < count; ++i)
            for (size_t j = i + 1; j < count; ++j) {
                auto li = lead_term(basis[i]), lj = lead_term(basis[j]);
                if (li->mm.component != lj->mm.component)
                    continue;
                Monomial L = Monomial::lcm(li->mm.mono, lj->mm.mono);
                PolyVector s = basis[i].times_term(li->mm.mono.quotient_of(L), 1) -
                               basis[j].times_term(lj->mm.mono.quotient_of(L), 1);
                PolyVector r = naive_reduce(s, basis);
                if (!r.is_zero()) {
                    auto lr = lead_term(r);
                    basis.push_back(r * Rational(1 / lr->coef));
                    grew = true;
                }
            }
    }
    return basis;
}

inline bool naive_member(const PolyVector& v, size_t rank, size_t nvars,
                         const std::vector<PolyVector>& gens)
{
    return naive_reduce(v, naive_groebner(rank, nvars, gens)).is_zero();
}

/// Syzygies through the graph/elimination trick: compute a basis of
/// <g_i + e_i> in A^(rank+k); elements supported entirely on the tail block
/// are exactly the relations. Independent of the Schreyer-trace route.
inline std::vector<PolyVector> naive_syzygies(size_t rank, size_t nvars,
                                              const std::vector<PolyVector>& gens)
{
    size_t k = gens.size();
    std::vector<PolyVector> graph;
    for (size_t i = 0; i < k; ++i) {
        PolyVector h(rank + k, nvars);
        for (size_t c = 0; c < rank; ++c)
            h[c] = gens[i][c];
        h[rank + i] = Poly::constant(nvars, 1);
        graph.push_back(std::move(h));
    }
    std::vector<PolyVector> basis = naive_groebner(rank + k, nvars, graph);
    std::vector<PolyVector> syz;
    for (const auto& b : basis) {
        bool head_zero = true;
        for (size_t c = 0; c < rank; ++c)
            if (!b[c].is_zero()) {
                head_zero = false;
                break;
            }
        if (!head_zero)
            continue;
        PolyVector tail(k, nvars);
        for (size_t i = 0; i < k; ++i)
            tail[i] = b[rank + i];
        syz.push_back(std::move(tail));
    }
    return syz;
}

// ---- random generators (fixed-seed callers) ----

inline Poly random_poly(std::mt19937_64& rng, size_t nvars, uint32_t max_deg,
                        int max_terms, int coef_range = 5)
{
    std::uniform_int_distribution<int> nterms(0, max_terms);
    std::uniform_int_distribution<uint32_t> dexp(0, max_deg);
    std::uniform_int_distribution<int> dcoef(-coef_range, coef_range);
    Poly p(nvars);
    int n = nterms(rng);
    for (int t = 0; t < n; ++t) {
        Monomial m(nvars);
        uint32_t budget = max_deg;
        for (size_t i = 0; i < nvars; ++i) {
            uint32_t e = dexp(rng) % (budget + 1);
            m.exps[i] = e;
            budget -= e;
        }
        int c = dcoef(rng);
        if (c != 0)
            p += Poly::monomial(nvars, m, Rational(c));
    }
    return p;
}

inline VectorField random_vector_field(std::mt19937_64& rng, size_t nvars,
                                       uint32_t max_deg, int max_terms)
{
    PolyVector v(nvars, nvars);
    for (size_t i = 0; i < nvars; ++i)
        v[i] = random_poly(rng, nvars, max_deg, max_terms);
    return VectorField(std::move(v));
}

inline PolyVector random_polyvector(std::mt19937_64& rng, size_t rank, size_t nvars,
                                    uint32_t max_deg, int max_terms)
{
    PolyVector v(rank, nvars);
    for (size_t i = 0; i < rank; ++i)
        v[i] = random_poly(rng, nvars, max_deg, max_terms);
    return v;
}

} // namespace oracle
