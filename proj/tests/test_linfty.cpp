#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "qfol/linfty.hpp"

using namespace qfol;

namespace {

// brute-force unshuffle filter: all permutations, keep the ascending ones
std::vector<std::vector<size_t>> unshuffles_brute(size_t i, size_t j)
{
    size_t k = i + j;
    std::vector<size_t> perm(k);
    for (size_t t = 0; t < k; ++t)
        perm[t] = t;
    std::vector<std::vector<size_t>> out;
    do {
        bool ok = true;
        for (size_t t = 0; t + 1 < i; ++t)
            ok = ok && perm[t] < perm[t + 1];
        for (size_t t = i; t + 1 < k; ++t)
            ok = ok && perm[t] < perm[t + 1];
        if (ok)
            out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

uint64_t binomial(uint64_t n, uint64_t k)
{
    uint64_t r = 1;
    for (uint64_t t = 1; t <= k; ++t)
        r = r * (n - k + t) / t;
    return r;
}

GradedElement vf_elem(const LInftyAlgebroid& L, const VectorField& v)
{
    return L.element_of(v);
}

} // namespace

TEST_CASE("koszul_sign on frozen swaps")
{
    REQUIRE(koszul_sign({0, 1, 2}, {0, 1, 2}) == 1);
    REQUIRE(koszul_sign({1, 0}, {1, 1}) == 1);  // odd-odd swap
    REQUIRE(koszul_sign({1, 0}, {0, 0}) == -1); // even-even swap
    REQUIRE(koszul_sign({1, 0}, {0, 1}) == -1); // mixed swap
}

TEST_CASE("koszul_sign is independent of the decomposition path")
{
    std::mt19937_64 rng(808);
    for (int iter = 0; iter < 100; ++iter) {
        size_t k = 2 + static_cast<size_t>(rng() % 4);
        std::vector<size_t> sigma(k);
        for (size_t t = 0; t < k; ++t)
            sigma[t] = t;
        std::shuffle(sigma.begin(), sigma.end(), rng);
        std::vector<int> degs(k);
        for (auto& d : degs)
            d = static_cast<int>(rng() % 3);
        int reference = koszul_sign(sigma, degs);

        // random walk of adjacent swaps, then finish by sorting
        std::vector<size_t> word = sigma;
        int sign = 1;
        for (int move = 0; move < 12; ++move) {
            size_t p = rng() % (k - 1);
            sign *= wedge_swap_sign(degs[word[p]], degs[word[p + 1]]);
            std::swap(word[p], word[p + 1]);
        }
        for (size_t pass = 0; pass + 1 < k; ++pass)
            for (size_t p = 0; p + 1 < k; ++p)
                if (word[p] > word[p + 1]) {
                    sign *= wedge_swap_sign(degs[word[p]], degs[word[p + 1]]);
                    std::swap(word[p], word[p + 1]);
                }
        REQUIRE(sign == reference);
    }
}

TEST_CASE("unshuffles match the brute-force filter and the binomial count")
{
    REQUIRE(unshuffles(1, 1).size() == 2);
    REQUIRE(unshuffles(2, 1).size() == 3);
    REQUIRE(unshuffles(0, 3) == std::vector<std::vector<size_t>>{{0, 1, 2}});
    for (size_t i = 0; i <= 5; ++i)
        for (size_t j = 0; i + j <= 6 && j <= 5; ++j) {
            auto fast = unshuffles(i, j);
            auto brute = unshuffles_brute(i, j);
            std::sort(brute.begin(), brute.end());
            auto sorted = fast;
            std::sort(sorted.begin(), sorted.end());
            REQUIRE(sorted == brute);
            REQUIRE(fast.size() == binomial(i + j, i));
        }
}

TEST_CASE("derivation model bracket evaluates to the vector-field commutator")
{
    LInftyAlgebroid L = LInftyAlgebroid::derivation_model(2);
    Poly x = Poly::variable(2, 0), y = Poly::variable(2, 1);
    VectorField dx = VectorField::basis(2, 0);
    GradedElement xdx = vf_elem(L, x * dx);
    GradedElement ydx = vf_elem(L, y * dx);
    GradedElement r = evaluate_bracket(L, 2, {xdx, ydx});
    REQUIRE(L.anchor_of(r) == -(y * dx));
    REQUIRE(r == vf_elem(L, -(y * dx)));

    std::mt19937_64 rng(11);
    for (int iter = 0; iter < 25; ++iter) {
        VectorField v = oracle::random_vector_field(rng, 2, 2, 2);
        VectorField w = oracle::random_vector_field(rng, 2, 2, 2);
        GradedElement b = evaluate_bracket(L, 2, {vf_elem(L, v), vf_elem(L, w)});
        REQUIRE(b == vf_elem(L, lie_bracket(v, w)));
    }

    // higher brackets of the derivation model vanish
    GradedElement e0 = GradedElement::generator(0, 2);
    GradedElement e1 = GradedElement::generator(1, 2);
    REQUIRE(evaluate_bracket(L, 3, {e0, e1, xdx}).is_zero());
    // repeated even-degree generator is degenerate
    REQUIRE(evaluate_bracket(L, 2, {e0, e0}).is_zero());
    // arity overflow is an input error
    REQUIRE_THROWS_AS(evaluate_bracket(L, 5, {e0, e0, e0, e0, e0}), std::invalid_argument);
}

TEST_CASE("jacobi residual vanishes on the derivation model")
{
    LInftyAlgebroid L = LInftyAlgebroid::derivation_model(3);
    std::mt19937_64 rng(12);
    for (int iter = 0; iter < 20; ++iter) {
        std::vector<GradedElement> in;
        for (int t = 0; t < 3; ++t)
            in.push_back(vf_elem(L, oracle::random_vector_field(rng, 3, 2, 2)));
        REQUIRE(jacobi_residual(L, 3, in).is_zero());
        REQUIRE(jacobi_residual(L, 2, {in[0], in[1]}).is_zero());
        REQUIRE(jacobi_residual(L, 4, {in[0], in[1], in[2], in[0]}).is_zero());
    }
    REQUIRE(jacobi_residual(L, 1, {vf_elem(L, VectorField::basis(3, 0))}).is_zero());
}

TEST_CASE("a corrupted binary table is caught by the jacobi residual")
{
    LInftyAlgebroid L = LInftyAlgebroid::derivation_model(2);
    // wrong value: [dx, dy] := dx
    L.brackets.set(2, {0, 1}, GradedElement::generator(0, 2));
    Poly x = Poly::variable(2, 0), y = Poly::variable(2, 1);
    std::vector<GradedElement> probes = {
        GradedElement::generator(0, 2), GradedElement::generator(1, 2),
        vf_elem(L, x * VectorField::basis(2, 0)), vf_elem(L, y * VectorField::basis(2, 0)),
        vf_elem(L, x * VectorField::basis(2, 1))};
    bool found = false;
    for (size_t a = 0; a < probes.size() && !found; ++a)
        for (size_t b = 0; b < probes.size() && !found; ++b)
            for (size_t c = 0; c < probes.size() && !found; ++c)
                if (!jacobi_residual(L, 3, {probes[a], probes[b], probes[c]}).is_zero())
                    found = true;
    REQUIRE(found);
}

TEST_CASE("anchor compatibility residuals")
{
    LInftyAlgebroid L = LInftyAlgebroid::derivation_model(2);
    Poly x = Poly::variable(2, 0);
    GradedElement dx = GradedElement::generator(0, 2);
    GradedElement dy = GradedElement::generator(1, 2);

    // unit coefficient: trivially zero
    REQUIRE(anchor_compat_residual(L, dx, dy, Poly::constant(2, 1)).is_zero());
    // the worked example [dx, x dy] - x [dx, dy] - dx(x) dy = 0
    REQUIRE(anchor_compat_residual(L, dx, dy, x).is_zero());

    std::mt19937_64 rng(13);
    for (int iter = 0; iter < 20; ++iter) {
        GradedElement v = vf_elem(L, oracle::random_vector_field(rng, 2, 2, 2));
        GradedElement w = vf_elem(L, oracle::random_vector_field(rng, 2, 2, 2));
        Poly a = oracle::random_poly(rng, 2, 2, 3);
        REQUIRE(anchor_compat_residual(L, v, w, a).is_zero());
    }

    // corrupting the anchor changes the evaluated bracket away from the
    // commutator: [dx, x dy] becomes 0 instead of dy
    LInftyAlgebroid corrupted = L;
    corrupted.set_anchor(0, VectorField::zero(2));
    corrupted.set_anchor(1, VectorField::zero(2));
    GradedElement xdy = dy.scaled(x);
    REQUIRE(evaluate_bracket(L, 2, {dx, xdy}) == dy);
    REQUIRE(evaluate_bracket(corrupted, 2, {dx, xdy}).is_zero());
    GradedElement diff = evaluate_bracket(L, 2, {dx, xdy}) -
                         evaluate_bracket(corrupted, 2, {dx, xdy});
    REQUIRE(diff == dy);
}

TEST_CASE("antisymmetry and degree bookkeeping on a mixed-degree algebroid")
{
    // generators: e (degree 0, anchor x dx), f (degree 1) with l1(f) = x e
    Poly x = Poly::variable(2, 0);
    GradedBasis basis({"e", "f"}, {0, 1});
    LInftyAlgebroid L(basis, 2, 4);
    L.set_anchor(0, VectorField(PolyVector{{x, Poly(2)}}));
    GradedElement e = GradedElement::generator(0, 2);
    GradedElement f = GradedElement::generator(1, 2);
    L.brackets.set(1, {1}, e.scaled(x));
    L.brackets.set(2, {0, 1}, f.scaled(x)); // [e, f] = x f, degree 1 = 0+1+2-2

    GradedElement ef = evaluate_bracket(L, 2, {e, f});
    GradedElement fe = evaluate_bracket(L, 2, {f, e});
    REQUIRE(fe == -ef); // -(-1)^{0*1} = -1

    // odd generator pairs with itself without vanishing
    L.brackets.set(2, {1, 1}, GradedElement::generator(1, 2).scaled(x));
    REQUIRE_FALSE(evaluate_bracket(L, 2, {f, f}).is_zero());

    // degree bookkeeping: outputs are homogeneous of degree sum + k - 2
    REQUIRE(element_degree(evaluate_bracket(L, 1, {f}), basis) == 0);
    REQUIRE(element_degree(ef, basis) == 1);
    REQUIRE(element_degree(evaluate_bracket(L, 2, {f, f}), basis) == 1);
}

TEST_CASE("strict morphism checks")
{
    LInftyAlgebroid L = LInftyAlgebroid::derivation_model(2);
    // identity morphism passes; it is exactly the anchor of the model
    StrictMorphism id;
    id.images = {GradedElement::generator(0, 2), GradedElement::generator(1, 2)};
    REQUIRE(check_strict_morphism(id, L, L, 3).ok);

    // sign flip on one generator breaks bracket preservation on a
    // nonabelian example (table [dx, dy] = dy after modification)
    LInftyAlgebroid M = L;
    M.brackets.set(2, {0, 1}, GradedElement::generator(1, 2));
    StrictMorphism flip;
    flip.images = {-GradedElement::generator(0, 2), GradedElement::generator(1, 2)};
    Certificate c = check_strict_morphism(flip, M, M, 2);
    REQUIRE_FALSE(c.ok);
}

TEST_CASE("higher anchor compatibility and table validation")
{
    LInftyAlgebroid L = LInftyAlgebroid::derivation_model(2);
    Poly x = Poly::variable(2, 0);
    std::mt19937_64 rng(55);
    for (int iter = 0; iter < 10; ++iter) {
        std::vector<GradedElement> in;
        for (int t = 0; t < 3; ++t)
            in.push_back(L.element_of(oracle::random_vector_field(rng, 2, 2, 2)));
        Poly a = oracle::random_poly(rng, 2, 2, 2);
        REQUIRE(anchor_compat_residual_higher(L, in, a).is_zero());
    }
    REQUIRE(validate_bracket_table(L).ok);

    // a value of the wrong degree is flagged
    GradedBasis basis({"e", "f"}, {0, 1});
    LInftyAlgebroid M(basis, 2, 3);
    M.brackets.set(2, {0, 1}, GradedElement::generator(0, 2)); // degree 0, expected 1
    REQUIRE_FALSE(validate_bracket_table(M).ok);
}
