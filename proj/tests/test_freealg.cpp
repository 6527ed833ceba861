#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "oracles.hpp"
#include "qfol/freealg.hpp"

using namespace qfol;

namespace {

// Independent enumeration oracle: all ordered bracket trees over the pool,
// canonicalized through the tensor-quotient sign rule, deduplicated.
std::set<LWord> brute_words(const GradedBasis& M, size_t W, size_t D)
{
    std::set<LWord> words;
    std::vector<LWord> pool;
    for (size_t g = 0; g < M.size(); ++g)
        if (M.degree(g) <= static_cast<int>(D)) {
            pool.push_back(LWord::leaf(g));
            words.insert(LWord::leaf(g));
        }
    for (size_t w = 1; w <= W; ++w) {
        std::vector<LWord> next = pool;
        // ordered tuples over the current pool, arity up to D + 2
        std::function<void(std::vector<LWord>&)> rec = [&](std::vector<LWord>& tuple) {
            if (!tuple.empty() && !(tuple.size() == 1 && tuple[0].is_leaf)) {
                CanonicalWord cw = canonical_node(tuple, M);
                if (!cw.zero) {
                    int deg = word_degree(cw.word, M);
                    if (deg >= 0 && deg <= static_cast<int>(D) &&
                        word_weight(cw.word) <= w) {
                        if (words.insert(cw.word).second)
                            next.push_back(cw.word);
                    }
                }
            }
            if (tuple.size() == D + 2)
                return;
            for (const auto& cand : pool) {
                tuple.push_back(cand);
                rec(tuple);
                tuple.pop_back();
            }
        };
        std::vector<LWord> tuple;
        rec(tuple);
        pool = std::move(next);
    }
    return words;
}

FreeLR simple_ctx(size_t W, size_t D)
{
    // two degree-0 generators anchored by d/dx and x d/dy over Q[x, y]
    GradedBasis gens({"u", "v"}, {0, 0});
    std::vector<GradedElement> diff(2);
    std::vector<VectorField> anchors = {
        VectorField::basis(2, 0),
        VectorField(PolyVector{{Poly(2), Poly::variable(2, 0)}})};
    return FreeLR(gens, diff, anchors, W, D, 2);
}

} // namespace

TEST_CASE("word degrees follow the degree formula")
{
    GradedBasis M({"a", "b", "c"}, {2, 0, 0});
    LWord leaf_a = LWord::leaf(0);
    REQUIRE(word_degree(LWord::node({leaf_a}), M) == 1); // 2 + 1 - 2
    LWord bc = LWord::node({LWord::leaf(1), LWord::leaf(2)});
    REQUIRE(word_degree(bc, M) == 0);
    REQUIRE(word_degree(LWord::node({LWord::leaf(1), LWord::leaf(2), leaf_a}), M) == 3);
}

TEST_CASE("weight-0 span is exactly the generator set")
{
    GradedBasis M({"a", "b"}, {0, 1});
    WordSpan span = enumerate_words(M, 0, 3);
    REQUIRE(span.basis.size() == 2);
    REQUIRE(span.basis[0] == LWord::leaf(0));
    REQUIRE(span.basis[1] == LWord::leaf(1));
}

TEST_CASE("a single even generator generates no new words")
{
    // [v]_1 is negatively graded, [v,v] and [v,v,v] die by antisymmetry
    GradedBasis M({"v"}, {0});
    WordSpan span = enumerate_words(M, 1, 1);
    REQUIRE(span.basis.size() == 1);
    REQUIRE(span.basis[0] == LWord::leaf(0));
}

TEST_CASE("odd generators pair with themselves")
{
    GradedBasis M({"f"}, {1});
    WordSpan span = enumerate_words(M, 1, 2);
    // f and [f,f] (degree 2); [f]_1 rewrites to the differential and is
    // not a basis word
    REQUIRE(span.basis.size() == 2);
    REQUIRE(span.find(LWord::leaf(0)).has_value());
    REQUIRE_FALSE(span.find(LWord::node({LWord::leaf(0)})).has_value());
    REQUIRE(span.find(LWord::node({LWord::leaf(0), LWord::leaf(0)})).has_value());
}

TEST_CASE("enumeration agrees with the brute-force oracle")
{
    GradedBasis M({"u", "v", "f"}, {0, 0, 1});
    for (size_t W : {1, 2})
        for (size_t D : {1, 2}) {
            WordSpan span = enumerate_words(M, W, D);
            std::set<LWord> mine(span.basis.begin(), span.basis.end());
            REQUIRE(mine == brute_words(M, W, D));
        }
}

TEST_CASE("degree bound zero removes positive-degree words")
{
    GradedBasis M({"u", "v"}, {0, 0});
    WordSpan span = enumerate_words(M, 2, 0);
    for (size_t w = 0; w < span.basis.size(); ++w)
        REQUIRE(span.degrees[w] == 0);
}

TEST_CASE("the filtration is monotone in both bounds")
{
    GradedBasis M({"u", "v", "f"}, {0, 0, 1});
    WordSpan small = enumerate_words(M, 1, 1);
    WordSpan more_weight = enumerate_words(M, 2, 1);
    WordSpan more_degree = enumerate_words(M, 1, 2);
    for (const auto& w : small.basis) {
        REQUIRE(more_weight.find(w).has_value());
        REQUIRE(more_degree.find(w).has_value());
    }
}

TEST_CASE("binary Leibniz rewrite produces the anchor correction")
{
    FreeLR ctx = simple_ctx(2, 2);
    Poly x = Poly::variable(2, 0);
    // [u, x v] = x [u, v] + anchor(u)(x) v = x [u,v] + v
    RawWord raw = RawWord::node(Poly::constant(2, 1),
                                {RawWord::leaf(0, Poly::constant(2, 1)), RawWord::leaf(1, x)});
    SpanElement e = ctx.normalize_word(raw);
    REQUIRE_FALSE(e.escaped);
    auto uv = ctx.span().find(LWord::node({LWord::leaf(0), LWord::leaf(1)}));
    auto v = ctx.span().find(LWord::leaf(1));
    REQUIRE(uv);
    REQUIRE(v);
    REQUIRE(e.coeffs.size() == 2);
    REQUIRE(e.coeffs.at(*uv) == x);
    REQUIRE(e.coeffs.at(*v) == Poly::constant(2, 1));

    // with a = 1 the rewrite is the identity
    RawWord plain = RawWord::node(Poly::constant(2, 1),
                                  {RawWord::leaf(0, Poly::constant(2, 1)),
                                   RawWord::leaf(1, Poly::constant(2, 1))});
    SpanElement p = ctx.normalize_word(plain);
    REQUIRE(p.coeffs.size() == 1);
    REQUIRE(p.coeffs.at(*uv) == Poly::constant(2, 1));
}

TEST_CASE("unary brackets on leaves rewrite to the differential")
{
    // one degree-1 generator f with d(f) = x u for a degree-0 generator u
    GradedBasis gens({"u", "f"}, {0, 1});
    Poly x = Poly::variable(2, 0);
    std::vector<GradedElement> diff(2);
    diff[1].add_term(0, x);
    std::vector<VectorField> anchors = {VectorField::zero(2), VectorField::zero(2)};
    FreeLR ctx(gens, diff, anchors, 2, 2, 2);

    RawWord raw = RawWord::node(Poly::constant(2, 1), {RawWord::leaf(1, Poly::constant(2, 1))});
    SpanElement e = ctx.normalize_word(raw);
    auto u = ctx.span().find(LWord::leaf(0));
    REQUIRE(e.coeffs.size() == 1);
    REQUIRE(e.coeffs.at(*u) == x);

    // normalization is idempotent
    REQUIRE(ctx.normalize_element(e) == e);
    // and the unary-equals-differential relation normalizes to zero
    SpanElement diff_elem;
    diff_elem.add(*u, x);
    REQUIRE((e - diff_elem).is_zero());
}

TEST_CASE("relation span membership verdicts")
{
    FreeLR ctx = simple_ctx(2, 2);
    // zero element is always a member with the zero witness
    auto zero = ctx.relation_span_membership(SpanElement{});
    REQUIRE(zero.verdict == FreeLR::Membership::Verdict::Member);
    REQUIRE(zero.witness.is_zero());

    // a generator never becomes a relation (closure complete at tiny bounds)
    GradedBasis one({"v"}, {0});
    FreeLR tiny(one, {GradedElement{}}, {VectorField::zero(2)}, 1, 1, 2);
    REQUIRE_FALSE(tiny.relation_closure_escaped());
    auto nm = tiny.relation_span_membership(tiny.word_element(0));
    REQUIRE(nm.verdict == FreeLR::Membership::Verdict::NonMember);

    // normalized jacobiators are members by construction; three degree-0
    // generators admit a nonzero arity-3 jacobiator inside (W, D) = (2, 2)
    Poly x = Poly::variable(2, 0), y = Poly::variable(2, 1);
    GradedBasis three({"a", "b", "c"}, {0, 0, 0});
    std::vector<VectorField> anch3 = {
        VectorField::basis(2, 0),
        VectorField(PolyVector{{Poly(2), x}}),
        VectorField(PolyVector{{y, Poly(2)}})};
    FreeLR big(three, std::vector<GradedElement>(3), anch3, 2, 2, 2);
    bool found = false;
    for (const auto& r : big.relation_basis()) {
        auto m = big.relation_span_membership(r);
        REQUIRE(m.verdict == FreeLR::Membership::Verdict::Member);
        found = true;
    }
    REQUIRE(found);

    // an element that escapes the window is inconclusive
    SpanElement esc;
    esc.escaped = true;
    REQUIRE(ctx.relation_span_membership(esc).verdict ==
            FreeLR::Membership::Verdict::Inconclusive);
}

TEST_CASE("strict extension into the derivation model")
{
    // four generators covering the gl2-type vector fields
    Poly x = Poly::variable(2, 0), y = Poly::variable(2, 1);
    VectorField dx = VectorField::basis(2, 0), dy = VectorField::basis(2, 1);
    GradedBasis gens({"e11", "e12", "e21", "e22"}, {0, 0, 0, 0});
    std::vector<VectorField> anchors = {x * dx, y * dx, x * dy, y * dy};
    std::vector<GradedElement> diff(4);
    FreeLR ctx(gens, diff, anchors, 2, 1, 2);

    LInftyAlgebroid T = LInftyAlgebroid::derivation_model(2);
    std::vector<GradedElement> images;
    for (const auto& a : anchors)
        images.push_back(T.element_of(a));
    SpanMorphism phi = extend_strict_morphism(ctx, images, T);
    REQUIRE(phi.cert.ok); // relations land on zero: T satisfies Jacobi

    auto w = ctx.span().find(LWord::node({LWord::leaf(0), LWord::leaf(1)}));
    REQUIRE(w);
    REQUIRE(phi.word_images[*w] == T.element_of(lie_bracket(x * dx, y * dx)));
    REQUIRE(T.anchor_of(phi.word_images[*w]) == -(y * dx));

    // zero assignment kills every node word
    std::vector<GradedElement> zeros(4);
    SpanMorphism zphi = extend_strict_morphism(ctx, zeros, T);
    for (size_t i = 0; i < ctx.span().basis.size(); ++i)
        if (!ctx.span().basis[i].is_leaf)
            REQUIRE(zphi.word_images[i].is_zero());

    // the word anchors are exactly this extension
    for (size_t i = 0; i < ctx.span().basis.size(); ++i)
        REQUIRE(ctx.word_anchor(i) == T.anchor_of(phi.word_images[i]));
}

TEST_CASE("unit triangle: extending the inclusion is the identity")
{
    FreeLR ctx = simple_ctx(2, 2);
    std::vector<SpanElement> incl;
    for (size_t g = 0; g < ctx.generators().size(); ++g) {
        auto idx = ctx.span().find(LWord::leaf(g));
        incl.push_back(ctx.word_element(*idx));
    }
    SpanEndo endo = extend_into_span(ctx, incl);
    for (size_t w = 0; w < ctx.span().basis.size(); ++w) {
        REQUIRE_FALSE(endo.word_images[w].escaped);
        REQUIRE(endo.word_images[w] == ctx.word_element(w));
    }
}

TEST_CASE("extensions are unique: worklist evaluation matches recursion")
{
    Poly x = Poly::variable(2, 0), y = Poly::variable(2, 1);
    VectorField dx = VectorField::basis(2, 0), dy = VectorField::basis(2, 1);
    GradedBasis gens({"u", "v"}, {0, 0});
    std::vector<VectorField> anchors = {x * dx, y * dy};
    FreeLR ctx(gens, std::vector<GradedElement>(2), anchors, 2, 2, 2);
    LInftyAlgebroid T = LInftyAlgebroid::derivation_model(2);
    std::vector<GradedElement> images = {T.element_of(anchors[0]), T.element_of(anchors[1])};
    SpanMorphism phi = extend_strict_morphism(ctx, images, T);

    // independently: process words by increasing weight, using only the
    // bracket-preservation equations
    std::vector<GradedElement> alt(ctx.span().basis.size());
    std::vector<std::pair<size_t, size_t>> by_weight; // (weight, index)
    for (size_t w = 0; w < ctx.span().basis.size(); ++w)
        by_weight.push_back({word_weight(ctx.span().basis[w]), w});
    std::sort(by_weight.begin(), by_weight.end());
    for (auto [wt, w] : by_weight) {
        const LWord& word = ctx.span().basis[w];
        if (word.is_leaf) {
            alt[w] = images[word.gen];
            continue;
        }
        std::vector<GradedElement> cs;
        for (const auto& c : word.children)
            cs.push_back(alt[*ctx.span().find(c)]);
        alt[w] = evaluate_bracket(T, word.children.size(), cs);
    }
    for (size_t w = 0; w < ctx.span().basis.size(); ++w)
        REQUIRE(alt[w] == phi.word_images[w]);
}
