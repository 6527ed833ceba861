#pragma once

#include <functional>
#include <map>

#include "qfol/certificate.hpp"
#include "qfol/ring.hpp"
#include "qfol/textio.hpp"

namespace qfol {

/// Named graded generators of a finitely generated graded A-module.
struct GradedBasis {
    std::vector<std::string> names;
    std::vector<int> degrees;

    GradedBasis() = default;
    GradedBasis(std::vector<std::string> n, std::vector<int> d)
        : names(std::move(n)), degrees(std::move(d))
    {
        if (names.size() != degrees.size())
            throw std::invalid_argument("basis name/degree count mismatch");
        for (size_t i = 0; i < names.size(); ++i) {
            if (degrees[i] < 0)
                throw std::invalid_argument("negative generator degree");
            for (size_t j = i + 1; j < names.size(); ++j)
                if (names[i] == names[j])
                    throw std::invalid_argument("duplicate generator name " + names[i]);
        }
    }

    size_t size() const { return names.size(); }
    int degree(size_t i) const { return degrees.at(i); }
};

/// A-linear combination of generators, sparse by generator index.
struct GradedElement {
    std::map<size_t, Poly> coeffs;

    bool is_zero() const { return coeffs.empty(); }

    static GradedElement generator(size_t i, size_t nvars)
    {
        GradedElement e;
        e.coeffs[i] = Poly::constant(nvars, 1);
        return e;
    }

    void add_term(size_t i, const Poly& c)
    {
        if (c.is_zero())
            return;
        auto it = coeffs.find(i);
        if (it == coeffs.end()) {
            coeffs.emplace(i, c);
        } else {
            it->second += c;
            if (it->second.is_zero())
                coeffs.erase(it);
        }
    }

    GradedElement operator+(const GradedElement& o) const
    {
        GradedElement r = *this;
        for (const auto& [i, c] : o.coeffs)
            r.add_term(i, c);
        return r;
    }

    GradedElement operator-(const GradedElement& o) const
    {
        GradedElement r = *this;
        for (const auto& [i, c] : o.coeffs)
            r.add_term(i, -c);
        return r;
    }

    GradedElement operator-() const
    {
        GradedElement r;
        for (const auto& [i, c] : coeffs)
            r.coeffs.emplace(i, -c);
        return r;
    }

    GradedElement scaled(const Poly& f) const
    {
        GradedElement r;
        for (const auto& [i, c] : coeffs) {
            Poly p = c * f;
            if (!p.is_zero())
                r.coeffs.emplace(i, std::move(p));
        }
        return r;
    }

    GradedElement scaled(const Rational& q) const
    {
        GradedElement r;
        if (q == 0)
            return r;
        for (const auto& [i, c] : coeffs)
            r.coeffs.emplace(i, c * q);
        return r;
    }

    bool operator==(const GradedElement& o) const { return coeffs == o.coeffs; }
    bool operator!=(const GradedElement& o) const { return !(*this == o); }
};

inline bool is_homogeneous(const GradedElement& e, const GradedBasis& basis)
{
    int deg = -1;
    for (const auto& [i, c] : e.coeffs) {
        if (deg == -1)
            deg = basis.degree(i);
        else if (deg != basis.degree(i))
            return false;
    }
    return true;
}

/// Degree of a homogeneous element; zero elements report `fallback`.
inline int element_degree(const GradedElement& e, const GradedBasis& basis,
                          int fallback = 0)
{
    if (e.is_zero())
        return fallback;
    if (!is_homogeneous(e, basis))
        throw std::invalid_argument("element is not homogeneous");
    return basis.degree(e.coeffs.begin()->first);
}

inline std::string element_to_string(const GradedElement& e, const GradedBasis& basis,
                                     const std::vector<std::string>& vars)
{
    if (e.is_zero())
        return "0";
    std::string s;
    bool first = true;
    for (const auto& [i, c] : e.coeffs) {
        std::string cs = poly_to_string(c, vars);
        bool neg = cs.size() > 0 && cs[0] == '-';
        std::string body = neg ? cs.substr(1) : cs;
        bool simple = body.find(" + ") == std::string::npos &&
                      body.find(" - ") == std::string::npos;
        std::string coefpart;
        if (simple && body == "1")
            coefpart = "";
        else if (simple)
            coefpart = body + "*";
        else
            coefpart = "(" + (neg ? "-" + body : body) + ")*";
        if (!simple)
            neg = false;
        if (first)
            s += neg ? "-" : "";
        else
            s += neg ? " - " : " + ";
        first = false;
        s += coefpart + basis.names[i];
    }
    return s;
}

/// Sign produced when an adjacent pair of degrees (a, b) swaps in a wedge
/// word: -(-1)^(a*b). With the base algebra concentrated in degree 0 this is
/// the only sign rule the library needs; keeping it in one place localizes a
/// future graded-coefficient generalization.
inline int wedge_swap_sign(int deg_a, int deg_b)
{
    return (deg_a * deg_b) % 2 == 0 ? -1 : 1;
}

/// Koszul sign chi(sigma, v): v_1^...^v_k = chi * v_sigma(1)^...^v_sigma(k).
/// Computed by bubble-sorting the permuted word back to identity and
/// accumulating the adjacent-swap signs.
inline int koszul_sign(const std::vector<size_t>& sigma, const std::vector<int>& degrees)
{
    size_t k = sigma.size();
    if (degrees.size() != k)
        throw std::invalid_argument("koszul_sign: degree count mismatch");
    std::vector<size_t> word = sigma; // word[pos] = original index
    {
        std::vector<bool> seen(k, false);
        for (size_t v : word) {
            if (v >= k || seen[v])
                throw std::invalid_argument("koszul_sign: not a permutation");
            seen[v] = true;
        }
    }
    int sign = 1;
    for (size_t pass = 0; pass + 1 < k; ++pass)
        for (size_t p = 0; p + 1 < k; ++p)
            if (word[p] > word[p + 1]) {
                sign *= wedge_swap_sign(degrees[word[p]], degrees[word[p + 1]]);
                std::swap(word[p], word[p + 1]);
            }
    return sign;
}

/// All (i,j)-unshuffles of {0..i+j-1}: ascending on the first i and the last
/// j positions. Lexicographic in the leading block; count = C(i+j, i).
inline std::vector<std::vector<size_t>> unshuffles(size_t i, size_t j)
{
    size_t k = i + j;
    std::vector<std::vector<size_t>> out;
    std::vector<size_t> pick(i);
    for (size_t t = 0; t < i; ++t)
        pick[t] = t;
    while (true) {
        std::vector<size_t> sigma;
        sigma.reserve(k);
        std::vector<bool> used(k, false);
        for (size_t t : pick) {
            sigma.push_back(t);
            used[t] = true;
        }
        for (size_t t = 0; t < k; ++t)
            if (!used[t])
                sigma.push_back(t);
        out.push_back(std::move(sigma));
        if (i == 0)
            break;
        // next combination
        size_t t = i;
        while (t-- > 0) {
            if (pick[t] + (i - t) < k) {
                ++pick[t];
                for (size_t s = t + 1; s < i; ++s)
                    pick[s] = pick[s - 1] + 1;
                break;
            }
            if (t == 0)
                return out;
        }
        if (pick[0] + i > k)
            break;
    }
    return out;
}

/// Arity-indexed table of multibracket values on canonically sorted
/// generator tuples. Lookups of unsorted tuples go through the Koszul sign;
/// tuples with a repeated even-degree generator are zero; absent entries are
/// zero.
struct BracketTable {
    std::map<std::pair<size_t, std::vector<size_t>>, GradedElement> entries;

    void set(size_t arity, const std::vector<size_t>& sorted_tuple, GradedElement value)
    {
        if (sorted_tuple.size() != arity)
            throw std::invalid_argument("bracket tuple size differs from arity");
        if (!std::is_sorted(sorted_tuple.begin(), sorted_tuple.end()))
            throw std::invalid_argument("bracket tuples must be stored sorted");
        if (value.is_zero())
            entries.erase({arity, sorted_tuple});
        else
            entries[{arity, sorted_tuple}] = std::move(value);
    }

    const GradedElement* find(size_t arity, const std::vector<size_t>& sorted_tuple) const
    {
        auto it = entries.find({arity, sorted_tuple});
        return it == entries.end() ? nullptr : &it->second;
    }
};

struct SortedTuple {
    std::vector<size_t> idx;
    int sign = 1;
    bool degenerate = false;
};

inline SortedTuple canonical_tuple(std::vector<size_t> idx, const GradedBasis& basis)
{
    SortedTuple st;
    st.sign = 1;
    size_t k = idx.size();
    for (size_t pass = 0; pass + 1 < k; ++pass)
        for (size_t p = 0; p + 1 < k; ++p)
            if (idx[p] > idx[p + 1]) {
                st.sign *= wedge_swap_sign(basis.degree(idx[p]), basis.degree(idx[p + 1]));
                std::swap(idx[p], idx[p + 1]);
            }
    for (size_t p = 0; p + 1 < k; ++p)
        if (idx[p] == idx[p + 1] && basis.degree(idx[p]) % 2 == 0) {
            st.degenerate = true;
            break;
        }
    st.idx = std::move(idx);
    return st;
}

/// L-infinity algebroid data: graded basis, bracket table, anchor values on
/// degree-0 generators. The structural checks (Jacobi, anchor compatibility)
/// are operations below, not stored facts.
struct LInftyAlgebroid {
    GradedBasis basis;
    BracketTable brackets;
    std::vector<VectorField> anchor; // one entry per generator
    size_t max_arity = 4;
    size_t nvars = 0;

    LInftyAlgebroid() = default;
    LInftyAlgebroid(GradedBasis b, size_t nv, size_t kmax)
        : basis(std::move(b)), max_arity(kmax), nvars(nv)
    {
        anchor.assign(basis.size(), VectorField::zero(nv));
    }

    void set_anchor(size_t gen, VectorField v)
    {
        if (basis.degree(gen) != 0 && !v.is_zero())
            throw std::invalid_argument("anchor must vanish on positive degrees");
        anchor.at(gen) = std::move(v);
    }

    VectorField anchor_of(const GradedElement& e) const
    {
        VectorField r = VectorField::zero(nvars);
        for (const auto& [i, c] : e.coeffs)
            if (basis.degree(i) == 0)
                r = r + anchor[i] * c;
        return r;
    }

    /// The derivation module itself: degree-0 generators d/dx_i, vanishing
    /// table, identity anchor. Its binary bracket evaluates to the commutator
    /// of vector fields and all higher brackets vanish.
    static LInftyAlgebroid derivation_model(size_t nv, size_t kmax = 4)
    {
        GradedBasis b(canonical_der_names(nv), std::vector<int>(nv, 0));
        LInftyAlgebroid L(std::move(b), nv, kmax);
        for (size_t i = 0; i < nv; ++i)
            L.set_anchor(i, VectorField::basis(nv, i));
        return L;
    }

    GradedElement element_of(const VectorField& v) const
    {
        GradedElement e;
        for (size_t i = 0; i < nvars; ++i)
            e.add_term(i, v.components[i]);
        return e;
    }
};

inline GradedElement lookup_bracket(const LInftyAlgebroid& L, size_t arity,
                                    const std::vector<size_t>& tuple)
{
    SortedTuple st = canonical_tuple(tuple, L.basis);
    if (st.degenerate)
        return {};
    const GradedElement* v = L.brackets.find(arity, st.idx);
    if (!v)
        return {};
    return st.sign == 1 ? *v : -(*v);
}

/// Multibracket evaluation on elements. Arities k != 2 are A-linear in every
/// slot; the binary bracket carries the anchor corrections
///   [a g, b h] = ab [g,h] + a rho(g)(b) h - b rho(h)(a) g
/// (the sign prefactors collapse because coefficients sit in degree 0 and
/// the anchor kills positive degrees).
inline GradedElement evaluate_bracket(const LInftyAlgebroid& L, size_t arity,
                                      const std::vector<GradedElement>& inputs)
{
    if (arity == 0 || arity > L.max_arity)
        throw std::invalid_argument("bracket arity out of range");
    if (inputs.size() != arity)
        throw std::invalid_argument("input count differs from arity");
    GradedElement result;
    if (arity == 1) {
        for (const auto& [g, a] : inputs[0].coeffs)
            result = result + lookup_bracket(L, 1, {g}).scaled(a);
        return result;
    }
    if (arity == 2) {
        for (const auto& [g, a] : inputs[0].coeffs)
            for (const auto& [h, b] : inputs[1].coeffs) {
                result = result + lookup_bracket(L, 2, {g, h}).scaled(a * b);
                if (L.basis.degree(g) == 0) {
                    Poly c = a * apply_derivation(L.anchor[g], b);
                    result.add_term(h, c);
                }
                if (L.basis.degree(h) == 0) {
                    Poly c = b * apply_derivation(L.anchor[h], a);
                    result.add_term(g, -c);
                }
            }
        return result;
    }
    // arity >= 3: expand the product of supports
    std::vector<std::vector<std::pair<size_t, Poly>>> supp;
    for (const auto& in : inputs) {
        std::vector<std::pair<size_t, Poly>> s(in.coeffs.begin(), in.coeffs.end());
        if (s.empty())
            return {};
        supp.push_back(std::move(s));
    }
    std::vector<size_t> pos(arity, 0);
    while (true) {
        Poly coef = Poly::constant(L.nvars, 1);
        std::vector<size_t> tuple;
        for (size_t t = 0; t < arity; ++t) {
            tuple.push_back(supp[t][pos[t]].first);
            coef *= supp[t][pos[t]].second;
        }
        result = result + lookup_bracket(L, arity, tuple).scaled(coef);
        size_t t = arity;
        while (t-- > 0) {
            if (++pos[t] < supp[t].size())
                break;
            pos[t] = 0;
            if (t == 0)
                return result;
        }
    }
}

/// The generalized Jacobi sum
///   sum_{i+j=k} (-1)^{ij} sum_{sigma in S_{i,j}} chi(sigma, v)
///     [[v_sigma(1)..v_sigma(i)]_i, v_sigma(i+1), ..., v_sigma(k)]_{j+1}
/// evaluated literally; the structure is valid at (k, inputs) iff this is 0.
inline GradedElement jacobi_residual(const LInftyAlgebroid& L, size_t k,
                                     const std::vector<GradedElement>& inputs)
{
    if (k == 0 || k > L.max_arity)
        throw std::invalid_argument("jacobi arity out of range");
    if (inputs.size() != k)
        throw std::invalid_argument("input count differs from arity");
    for (const auto& in : inputs)
        if (in.is_zero())
            return {};
    std::vector<int> degs;
    for (const auto& in : inputs)
        degs.push_back(element_degree(in, L.basis));
    GradedElement res;
    for (size_t i = 1; i <= k; ++i) {
        size_t j = k - i;
        int outer_sign = (i * j) % 2 == 0 ? 1 : -1;
        for (const auto& sigma : unshuffles(i, j)) {
            int chi = koszul_sign(sigma, degs);
            std::vector<GradedElement> first;
            for (size_t t = 0; t < i; ++t)
                first.push_back(inputs[sigma[t]]);
            GradedElement inner = evaluate_bracket(L, i, first);
            std::vector<GradedElement> outer;
            outer.push_back(std::move(inner));
            for (size_t t = i; t < k; ++t)
                outer.push_back(inputs[sigma[t]]);
            GradedElement term = evaluate_bracket(L, j + 1, outer);
            res = res + term.scaled(Rational(outer_sign * chi));
        }
    }
    return res;
}

/// [v0, a v1] - a [v0, v1] - rho(v0)(a) v1: a coherence check of the
/// evaluator against the anchor axiom (identically zero for consistent
/// structures, nonzero when bracket data and anchor data disagree).
inline GradedElement anchor_compat_residual(const LInftyAlgebroid& L,
                                            const GradedElement& v0,
                                            const GradedElement& v1, const Poly& a)
{
    GradedElement lhs = evaluate_bracket(L, 2, {v0, v1.scaled(a)});
    GradedElement mid = evaluate_bracket(L, 2, {v0, v1}).scaled(a);
    GradedElement rhs = v1.scaled(apply_derivation(L.anchor_of(v0), a));
    return lhs - mid - rhs;
}

/// Higher-arity analogue: [v0,...,a vk]_{k+1} - a [v0,...,vk]_{k+1}.
inline GradedElement anchor_compat_residual_higher(const LInftyAlgebroid& L,
                                                   std::vector<GradedElement> inputs,
                                                   const Poly& a)
{
    if (inputs.size() < 3)
        throw std::invalid_argument("higher residual needs arity >= 3");
    GradedElement plain = evaluate_bracket(L, inputs.size(), inputs);
    inputs.back() = inputs.back().scaled(a);
    GradedElement scaled = evaluate_bracket(L, inputs.size(), inputs);
    return scaled - plain.scaled(a);
}

/// Structural invariants of the stored table: canonically sorted tuples
/// without even-degree repeats, homogeneous values of degree
/// sum(inputs) + k - 2, anchors concentrated in degree 0.
inline Certificate validate_bracket_table(const LInftyAlgebroid& L)
{
    Certificate cert("bracket table well-formed");
    for (const auto& [key, value] : L.brackets.entries) {
        const auto& [arity, tuple] = key;
        int expected = static_cast<int>(arity) - 2;
        for (size_t g : tuple)
            expected += L.basis.degree(g);
        for (size_t t = 0; t + 1 < tuple.size(); ++t)
            if (tuple[t] == tuple[t + 1] && L.basis.degree(tuple[t]) % 2 == 0)
                cert.fail("stored tuple repeats an even-degree generator");
        if (value.is_zero())
            continue;
        if (!is_homogeneous(value, L.basis) ||
            element_degree(value, L.basis) != expected)
            cert.fail("value of an arity-" + std::to_string(arity) +
                      " entry is not homogeneous of degree " + std::to_string(expected));
    }
    for (size_t g = 0; g < L.basis.size(); ++g)
        if (L.basis.degree(g) != 0 && !L.anchor[g].is_zero())
            cert.fail("anchor nonzero on the positive-degree generator " +
                      L.basis.names[g]);
    return cert;
}

/// Degree-0 A-linear map on generators, extended A-linearly to elements.
struct StrictMorphism {
    std::vector<GradedElement> images; // one per source generator

    GradedElement apply(const GradedElement& e) const
    {
        GradedElement r;
        for (const auto& [i, c] : e.coeffs)
            r = r + images.at(i).scaled(c);
        return r;
    }
};

/// Enumerate canonically sorted tuples (ascending indices, repeats only on
/// odd-degree generators) of the given arity.
inline void enumerate_sorted_tuples(const GradedBasis& basis, size_t arity,
                                    const std::function<void(const std::vector<size_t>&)>& fn)
{
    std::vector<size_t> tuple;
    std::function<void(size_t)> rec = [&](size_t start) {
        if (tuple.size() == arity) {
            fn(tuple);
            return;
        }
        for (size_t g = start; g < basis.size(); ++g) {
            if (!tuple.empty() && tuple.back() == g && basis.degree(g) % 2 == 0)
                continue; // even repeats vanish
            tuple.push_back(g);
            rec(g);
            tuple.pop_back();
        }
    };
    rec(0);
}

/// phi preserves every bracket on generator tuples within the arity bound
/// and intertwines the anchors.
inline Certificate check_strict_morphism(const StrictMorphism& phi, const LInftyAlgebroid& L,
                                         const LInftyAlgebroid& Lp, size_t arity_bound)
{
    Certificate cert("strict morphism check");
    if (phi.images.size() != L.basis.size()) {
        cert.fail("image count differs from generator count");
        return cert;
    }
    for (size_t g = 0; g < L.basis.size(); ++g) {
        if (L.anchor[g] != Lp.anchor_of(phi.images[g]))
            cert.fail("anchor mismatch on generator " + L.basis.names[g]);
        if (!phi.images[g].is_zero() &&
            element_degree(phi.images[g], Lp.basis) != L.basis.degree(g))
            cert.fail("image of " + L.basis.names[g] + " is not degree preserving");
    }
    for (size_t k = 1; k <= std::min(arity_bound, L.max_arity); ++k) {
        enumerate_sorted_tuples(L.basis, k, [&](const std::vector<size_t>& tuple) {
            std::vector<GradedElement> src, img;
            for (size_t g : tuple) {
                src.push_back(GradedElement::generator(g, L.nvars));
                img.push_back(phi.images[g]);
            }
            GradedElement lhs = phi.apply(evaluate_bracket(L, k, src));
            GradedElement rhs = evaluate_bracket(Lp, k, img);
            if (!(lhs == rhs)) {
                std::string names;
                for (size_t g : tuple)
                    names += (names.empty() ? "" : ", ") + L.basis.names[g];
                cert.fail("bracket not preserved on [" + names + "]_" + std::to_string(k));
            }
        });
    }
    return cert;
}

} // namespace qfol
