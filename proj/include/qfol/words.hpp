#pragma once

#include "qfol/linfty.hpp"

namespace qfol {

/// Free bracket word over a graded generator set: a leaf (generator) or a
/// bracket node with canonically ordered children. deg([c_1..c_k]_k) =
/// sum deg(c_i) + k - 2; negatively graded words do not exist (they are
/// quotiented away in the recursive construction).
struct LWord {
    bool is_leaf = true;
    size_t gen = 0;
    std::vector<LWord> children;

    static LWord leaf(size_t g)
    {
        LWord w;
        w.is_leaf = true;
        w.gen = g;
        return w;
    }

    static LWord node(std::vector<LWord> cs)
    {
        LWord w;
        w.is_leaf = false;
        w.children = std::move(cs);
        return w;
    }

    static int compare(const LWord& a, const LWord& b)
    {
        if (a.is_leaf != b.is_leaf)
            return a.is_leaf ? -1 : 1;
        if (a.is_leaf)
            return a.gen < b.gen ? -1 : (a.gen > b.gen ? 1 : 0);
        if (a.children.size() != b.children.size())
            return a.children.size() < b.children.size() ? -1 : 1;
        for (size_t i = 0; i < a.children.size(); ++i) {
            int c = compare(a.children[i], b.children[i]);
            if (c != 0)
                return c;
        }
        return 0;
    }

    bool operator<(const LWord& o) const { return compare(*this, o) < 0; }
    bool operator==(const LWord& o) const { return compare(*this, o) == 0; }
    bool operator!=(const LWord& o) const { return compare(*this, o) != 0; }
};

inline int word_degree(const LWord& w, const GradedBasis& gens)
{
    if (w.is_leaf)
        return gens.degree(w.gen);
    int d = static_cast<int>(w.children.size()) - 2;
    for (const auto& c : w.children)
        d += word_degree(c, gens);
    return d;
}

inline size_t word_weight(const LWord& w)
{
    if (w.is_leaf)
        return 0;
    size_t m = 0;
    for (const auto& c : w.children)
        m = std::max(m, word_weight(c));
    return m + 1;
}

inline std::string word_to_string(const LWord& w, const GradedBasis& gens)
{
    if (w.is_leaf)
        return gens.names[w.gen];
    std::string s = "[";
    for (size_t i = 0; i < w.children.size(); ++i) {
        if (i)
            s += ", ";
        s += word_to_string(w.children[i], gens);
    }
    return s + "]";
}

/// Sort children into canonical order, tracking the Koszul sign; a repeated
/// even-degree child makes the whole word vanish.
struct CanonicalWord {
    LWord word;
    int sign = 1;
    bool zero = false;
};

inline CanonicalWord canonical_node(std::vector<LWord> children, const GradedBasis& gens)
{
    CanonicalWord out;
    size_t k = children.size();
    std::vector<int> degs;
    degs.reserve(k);
    for (const auto& c : children)
        degs.push_back(word_degree(c, gens));
    for (size_t pass = 0; pass + 1 < k; ++pass)
        for (size_t p = 0; p + 1 < k; ++p)
            if (LWord::compare(children[p], children[p + 1]) > 0) {
                out.sign *= wedge_swap_sign(degs[p], degs[p + 1]);
                std::swap(children[p], children[p + 1]);
                std::swap(degs[p], degs[p + 1]);
            }
    for (size_t p = 0; p + 1 < k; ++p)
        if (children[p] == children[p + 1] && degs[p] % 2 == 0) {
            out.zero = true;
            return out;
        }
    out.word = LWord::node(std::move(children));
    return out;
}

/// The truncated word module: all canonical words of weight <= W and degree
/// in [0, D], in a deterministic order (by weight, then word order).
struct WordSpan {
    GradedBasis gens;
    size_t weight_bound = 0;
    size_t degree_bound = 0;
    std::vector<LWord> basis;
    std::map<LWord, size_t> index;
    std::vector<int> degrees;

    std::optional<size_t> find(const LWord& w) const
    {
        auto it = index.find(w);
        if (it == index.end())
            return std::nullopt;
        return it->second;
    }
};

inline WordSpan enumerate_words(const GradedBasis& M, size_t W, size_t D)
{
    WordSpan span;
    span.gens = M;
    span.weight_bound = W;
    span.degree_bound = D;
    std::vector<std::vector<LWord>> by_weight(W + 1);
    for (size_t g = 0; g < M.size(); ++g)
        if (M.degree(g) <= static_cast<int>(D))
            by_weight[0].push_back(LWord::leaf(g));

    std::vector<LWord> pool = by_weight[0]; // all words of weight < current
    for (size_t w = 1; w <= W; ++w) {
        std::vector<LWord> fresh;
        // choose sorted child tuples from the pool, at least one of weight w-1
        std::function<void(size_t, size_t, int, bool, std::vector<LWord>&)> rec =
            [&](size_t start, size_t arity, int degsum, bool has_prev_weight,
                std::vector<LWord>& tuple) {
                if (arity >= 1) {
                    int deg = degsum + static_cast<int>(arity) - 2;
                    // unary words on module generators are rewrite-reducible
                    // (they normalize to the differential) and stay out of
                    // the normal-form basis
                    bool reducible = arity == 1 && tuple[0].is_leaf;
                    if (deg >= 0 && deg <= static_cast<int>(D) && has_prev_weight &&
                        !reducible) {
                        CanonicalWord cw = canonical_node(tuple, M);
                        if (!cw.zero && cw.word == LWord::node(tuple))
                            fresh.push_back(cw.word);
                    }
                }
                if (static_cast<int>(arity) - 2 >= static_cast<int>(D) - degsum)
                    return; // adding children cannot keep the degree in range
                for (size_t t = start; t < pool.size(); ++t) {
                    if (!tuple.empty() && tuple.back() == pool[t] &&
                        word_degree(pool[t], M) % 2 == 0)
                        continue;
                    if (!tuple.empty() && LWord::compare(tuple.back(), pool[t]) > 0)
                        continue;
                    tuple.push_back(pool[t]);
                    rec(t, arity + 1, degsum + word_degree(pool[t], M),
                        has_prev_weight || word_weight(pool[t]) == w - 1, tuple);
                    tuple.pop_back();
                }
            };
        std::vector<LWord> tuple;
        rec(0, 0, 0, false, tuple);
        std::sort(fresh.begin(), fresh.end());
        fresh.erase(std::unique(fresh.begin(), fresh.end()), fresh.end());
        by_weight[w] = fresh;
        for (const auto& word : fresh)
            pool.push_back(word);
        std::sort(pool.begin(), pool.end());
    }
    for (size_t w = 0; w <= W; ++w)
        for (const auto& word : by_weight[w]) {
            span.index.emplace(word, span.basis.size());
            span.basis.push_back(word);
            span.degrees.push_back(word_degree(word, M));
        }
    return span;
}

} // namespace qfol
