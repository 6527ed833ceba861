#pragma once

#include <optional>
#include <set>

#include "qfol/linalg.hpp"

namespace qfol {

struct ModuleTerm {
    ModuleMonomial mm;
    Rational coef;
};

/// Largest term of v under the module order, or nothing for v = 0.
/// Position-over-term with lower components first, so this is the leading
/// term of the first nonzero entry.
inline std::optional<ModuleTerm> leading_module_term(const PolyVector& v)
{
    for (size_t c = 0; c < v.rank(); ++c) {
        if (!v[c].is_zero())
            return ModuleTerm{{c, v[c].leading_monomial()}, v[c].leading_coefficient()};
    }
    return std::nullopt;
}

/// Reduced Groebner basis of a submodule of A^r for the global order
/// (degrevlex + position-over-term). Every element carries its expression in
/// the original generators, which is what powers membership witnesses and
/// syzygies. Plain Buchberger, no pair-elimination criteria: the inputs this
/// library sees are small.
class GroebnerBasis {
public:
    GroebnerBasis(size_t ambient_rank, size_t nvars)
        : rank_(ambient_rank), nvars_(nvars)
    {
    }

    static GroebnerBasis of(size_t ambient_rank, size_t nvars,
                            const std::vector<PolyVector>& generators)
    {
        GroebnerBasis gb(ambient_rank, nvars);
        gb.gens_ = generators;
        gb.build();
        return gb;
    }

    size_t ambient_rank() const { return rank_; }
    size_t nvars() const { return nvars_; }
    size_t size() const { return elems_.size(); }
    const std::vector<PolyVector>& generators() const { return gens_; }

    const PolyVector& element(size_t i) const { return elems_[i].vec; }
    /// Expression of element i in the original generators.
    const PolyVector& representation(size_t i) const { return elems_[i].rep; }

    std::vector<PolyVector> elements() const
    {
        std::vector<PolyVector> r;
        r.reserve(elems_.size());
        for (const auto& e : elems_)
            r.push_back(e.vec);
        return r;
    }

    struct Division {
        PolyVector remainder;
        std::vector<Poly> quotients; // one per basis element
    };

    /// Full division: no term of the remainder is divisible by any leading
    /// term of the basis. Deterministic (first dividing element wins).
    Division divide(const PolyVector& e) const
    {
        Division d{PolyVector(rank_, nvars_), {}};
        d.quotients.assign(elems_.size(), Poly(nvars_));
        PolyVector work = e;
        while (true) {
            auto lt = leading_module_term(work);
            if (!lt)
                break;
            bool reduced = false;
            for (size_t i = 0; i < elems_.size(); ++i) {
                if (!elems_[i].lead.divides(lt->mm))
                    continue;
                Monomial q = elems_[i].lead.mono.quotient_of(lt->mm.mono);
                Rational c = lt->coef; // basis elements are monic
                work -= elems_[i].vec.times_term(q, c);
                d.quotients[i] += Poly::monomial(nvars_, q, c);
                reduced = true;
                break;
            }
            if (!reduced) {
                Poly t = Poly::monomial(nvars_, lt->mm.mono, lt->coef);
                d.remainder[lt->mm.component] += t;
                work[lt->mm.component] -= t;
            }
        }
        return d;
    }

    PolyVector normal_form(const PolyVector& e) const { return divide(e).remainder; }

    bool contains(const PolyVector& e) const { return normal_form(e).is_zero(); }

    /// Coefficients u (in the original generators) with gens * u = e, via the
    /// division-algorithm witness; nothing if e is not in the module.
    std::optional<PolyVector> witness(const PolyVector& e) const
    {
        Division d = divide(e);
        if (!d.remainder.is_zero())
            return std::nullopt;
        PolyVector u(gens_.size(), nvars_);
        for (size_t i = 0; i < elems_.size(); ++i) {
            if (d.quotients[i].is_zero())
                continue;
            u += elems_[i].rep * d.quotients[i];
        }
        return u;
    }

    /// Generators of { c in A^k : sum_j c_j gens_j = 0 }, returned as the
    /// reduced basis of the syzygy module (Schreyer relations from the final
    /// S-pair reductions plus the redundancy relations of the generators).
    std::vector<PolyVector> syzygies() const
    {
        size_t k = gens_.size();
        std::vector<PolyVector> cand;
        // Schreyer: re-reduce every same-component S-pair against the final
        // basis while tracking generator coordinates; each reduces to zero.
        for (size_t i = 0; i < elems_.size(); ++i)
            for (size_t j = i + 1; j < elems_.size(); ++j) {
                if (elems_[i].lead.component != elems_[j].lead.component)
                    continue;
                PolyVector srep(k, nvars_);
                PolyVector s = s_vector(i, j, srep);
                reduce_tracked(s, srep);
                if (!s.is_zero())
                    throw std::logic_error("S-pair of reduced basis did not reduce to zero");
                if (!srep.is_zero())
                    cand.push_back(srep);
            }
        // Columns of I - R*Q: g_j minus its expression through the basis.
        for (size_t j = 0; j < k; ++j) {
            Division d = divide(gens_[j]);
            if (!d.remainder.is_zero())
                throw std::logic_error("generator not contained in its own module");
            PolyVector col = PolyVector::unit(k, nvars_, j);
            for (size_t i = 0; i < elems_.size(); ++i)
                if (!d.quotients[i].is_zero())
                    col -= elems_[i].rep * d.quotients[i];
            if (!col.is_zero())
                cand.push_back(col);
        }
        GroebnerBasis sgb = GroebnerBasis::of(k, nvars_, cand);
        return sgb.elements();
    }

private:
    struct Elem {
        PolyVector vec;
        PolyVector rep;
        ModuleMonomial lead;
    };

    // S-vector of final basis elements i, j; accumulates the generator-level
    // coordinates into srep.
    PolyVector s_vector(size_t i, size_t j, PolyVector& srep) const
    {
        Monomial L = Monomial::lcm(elems_[i].lead.mono, elems_[j].lead.mono);
        Monomial ui = elems_[i].lead.mono.quotient_of(L);
        Monomial uj = elems_[j].lead.mono.quotient_of(L);
        srep += elems_[i].rep.times_term(ui, 1);
        srep -= elems_[j].rep.times_term(uj, 1);
        return elems_[i].vec.times_term(ui, 1) - elems_[j].vec.times_term(uj, 1);
    }

    // Reduce work to its (zero) normal form, mirroring every step on the
    // generator coordinates.
    void reduce_tracked(PolyVector& work, PolyVector& wrep) const
    {
        while (true) {
            auto lt = leading_module_term(work);
            if (!lt)
                return;
            bool reduced = false;
            for (const auto& el : elems_) {
                if (!el.lead.divides(lt->mm))
                    continue;
                Monomial q = el.lead.mono.quotient_of(lt->mm.mono);
                work -= el.vec.times_term(q, lt->coef);
                wrep -= el.rep.times_term(q, lt->coef);
                reduced = true;
                break;
            }
            if (!reduced)
                throw std::logic_error("irreducible term during tracked reduction");
        }
    }

    void build()
    {
        // queue keyed by ascending lcm so small pairs go first
        auto pair_less = [](const std::tuple<ModuleMonomial, size_t, size_t>& a,
                            const std::tuple<ModuleMonomial, size_t, size_t>& b) {
            const auto& [ma, ia, ja] = a;
            const auto& [mb, ib, jb] = b;
            if (!(ma == mb))
                return module_mono_greater(mb, ma);
            if (ia != ib)
                return ia < ib;
            return ja < jb;
        };
        std::set<std::tuple<ModuleMonomial, size_t, size_t>, decltype(pair_less)> queue(
            pair_less);

        auto push_pairs = [&](size_t idx) {
            for (size_t i = 0; i < idx; ++i) {
                if (elems_[i].lead.component != elems_[idx].lead.component)
                    continue;
                Monomial L = Monomial::lcm(elems_[i].lead.mono, elems_[idx].lead.mono);
                queue.insert({ModuleMonomial{elems_[idx].lead.component, L}, i, idx});
            }
        };

        auto append = [&](PolyVector v, PolyVector rep) {
            auto lt = leading_module_term(v);
            Rational c = lt->coef;
            if (c != 1) {
                v = v * Rational(1 / c);
                rep = rep * Rational(1 / c);
            }
            elems_.push_back({std::move(v), std::move(rep), lt->mm});
            push_pairs(elems_.size() - 1);
        };

        for (size_t j = 0; j < gens_.size(); ++j) {
            if (gens_[j].rank() != rank_)
                throw std::invalid_argument("generator rank mismatch");
            if (!gens_[j].is_zero())
                append(gens_[j], PolyVector::unit(gens_.size(), nvars_, j));
        }

        while (!queue.empty()) {
            auto [L, i, j] = *queue.begin();
            queue.erase(queue.begin());
            PolyVector srep(gens_.size(), nvars_);
            PolyVector s = s_vector(i, j, srep);
            // reduce against current basis, moving irreducible lead terms out
            PolyVector rem(rank_, nvars_);
            while (true) {
                auto lt = leading_module_term(s);
                if (!lt)
                    break;
                bool reduced = false;
                for (const auto& el : elems_) {
                    if (!el.lead.divides(lt->mm))
                        continue;
                    Monomial q = el.lead.mono.quotient_of(lt->mm.mono);
                    s -= el.vec.times_term(q, lt->coef);
                    srep -= el.rep.times_term(q, lt->coef);
                    reduced = true;
                    break;
                }
                if (!reduced) {
                    Poly t = Poly::monomial(nvars_, lt->mm.mono, lt->coef);
                    rem[lt->mm.component] += t;
                    s[lt->mm.component] -= t;
                }
            }
            if (!rem.is_zero())
                append(rem, srep); // rem = s-vector minus reductions, rep is exact
        }
        interreduce();
    }

    void interreduce()
    {
        // minimalize: drop elements whose lead is divisible by another lead
        std::vector<Elem> kept;
        for (size_t i = 0; i < elems_.size(); ++i) {
            bool redundant = false;
            for (size_t j = 0; j < elems_.size(); ++j) {
                if (i == j)
                    continue;
                if (!elems_[j].lead.divides(elems_[i].lead))
                    continue;
                if (elems_[j].lead == elems_[i].lead && j > i)
                    continue; // among equal leads keep the earliest
                redundant = true;
                break;
            }
            if (!redundant)
                kept.push_back(elems_[i]);
        }
        elems_ = std::move(kept);
        // canonical order: descending leading monomial
        std::sort(elems_.begin(), elems_.end(), [](const Elem& a, const Elem& b) {
            return module_mono_greater(a.lead, b.lead);
        });
        // tail-reduce each element against the others
        for (size_t i = 0; i < elems_.size(); ++i) {
            PolyVector work = elems_[i].vec;
            PolyVector wrep = elems_[i].rep;
            PolyVector rem(rank_, nvars_);
            while (true) {
                auto lt = leading_module_term(work);
                if (!lt)
                    break;
                bool reduced = false;
                for (size_t j = 0; j < elems_.size(); ++j) {
                    if (j == i)
                        continue;
                    if (!elems_[j].lead.divides(lt->mm))
                        continue;
                    Monomial q = elems_[j].lead.mono.quotient_of(lt->mm.mono);
                    work -= elems_[j].vec.times_term(q, lt->coef);
                    wrep -= elems_[j].rep.times_term(q, lt->coef);
                    reduced = true;
                    break;
                }
                if (!reduced) {
                    Poly t = Poly::monomial(nvars_, lt->mm.mono, lt->coef);
                    rem[lt->mm.component] += t;
                    work[lt->mm.component] -= t;
                }
            }
            elems_[i].vec = rem;
            elems_[i].rep = wrep;
            elems_[i].lead = leading_module_term(rem)->mm;
        }
    }

    size_t rank_;
    size_t nvars_;
    std::vector<PolyVector> gens_;
    std::vector<Elem> elems_;
};

inline GroebnerBasis buchberger_basis(size_t ambient_rank, size_t nvars,
                                      const std::vector<PolyVector>& generators)
{
    return GroebnerBasis::of(ambient_rank, nvars, generators);
}

inline PolyVector normal_form(const PolyVector& e, const GroebnerBasis& gb)
{
    return gb.normal_form(e);
}

/// Solve M*u = t over A. Returns the division-algorithm witness against the
/// reduced basis of the column module, or nothing when t is outside it.
inline std::optional<PolyVector> solve_linear_over_ring(const PolyMatrix& M,
                                                        const PolyVector& t)
{
    if (t.rank() != M.rows())
        throw std::invalid_argument("solve_linear_over_ring: shape mismatch");
    GroebnerBasis gb = GroebnerBasis::of(M.rows(), M.nvars(), M.columns());
    return gb.witness(t);
}

inline std::vector<PolyVector> syzygy_basis(size_t ambient_rank, size_t nvars,
                                            const std::vector<PolyVector>& generators)
{
    return GroebnerBasis::of(ambient_rank, nvars, generators).syzygies();
}

} // namespace qfol
