#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "qfol/textio.hpp"

using namespace qfol;

namespace {

Poly var(size_t nvars, size_t i) { return Poly::variable(nvars, i); }

} // namespace

TEST_CASE("polynomial arithmetic is a commutative ring on random triples")
{
    std::mt19937_64 rng(20240811);
    for (int iter = 0; iter < 60; ++iter) {
        Poly a = oracle::random_poly(rng, 3, 3, 4);
        Poly b = oracle::random_poly(rng, 3, 3, 4);
        Poly c = oracle::random_poly(rng, 3, 3, 4);
        REQUIRE(a + b == b + a);
        REQUIRE(a * b == b * a);
        REQUIRE((a + b) + c == a + (b + c));
        REQUIRE((a * b) * c == a * (b * c));
        REQUIRE(a * (b + c) == a * b + a * c);
        REQUIRE((a - a).is_zero());
    }
}

TEST_CASE("canonical representation makes equality representational")
{
    // same polynomial assembled in two different orders
    Poly p = var(2, 0) * var(2, 0) + var(2, 1) - Poly::constant(2, Rational(1, 2));
    Poly q = -Poly::constant(2, Rational(1, 2)) + var(2, 1) + var(2, 0) * var(2, 0);
    REQUIRE(p == q);
    REQUIRE(poly_to_string(p) == "x^2 + y - 1/2");
}

TEST_CASE("apply_derivation basics")
{
    // d/dx (x^2) = 2x
    VectorField dx = VectorField::basis(1, 0);
    Poly x = var(1, 0);
    REQUIRE(apply_derivation(dx, x * x) == Rational(2) * x);

    // (x d/dy)(y) = x
    size_t n = 2;
    VectorField xdy(PolyVector{{Poly(n), var(n, 0)}});
    REQUIRE(apply_derivation(xdy, var(n, 1)) == var(n, 0));

    // derivations kill constants
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 10; ++iter) {
        VectorField v = oracle::random_vector_field(rng, 2, 2, 3);
        REQUIRE(apply_derivation(v, Poly::constant(2, 17)).is_zero());
    }
}

TEST_CASE("apply_derivation agrees with the termwise-derivative oracle")
{
    std::mt19937_64 rng(101);
    for (int iter = 0; iter < 40; ++iter) {
        VectorField v = oracle::random_vector_field(rng, 3, 2, 3);
        Poly f = oracle::random_poly(rng, 3, 3, 4);
        Poly expected(3);
        for (size_t i = 0; i < 3; ++i)
            expected += v.components[i] * oracle::partial_derivative_termwise(f, i);
        REQUIRE(apply_derivation(v, f) == expected);
    }
}

TEST_CASE("apply_derivation satisfies the Leibniz rule")
{
    std::mt19937_64 rng(102);
    for (int iter = 0; iter < 30; ++iter) {
        VectorField v = oracle::random_vector_field(rng, 2, 2, 3);
        Poly f = oracle::random_poly(rng, 2, 2, 3);
        Poly g = oracle::random_poly(rng, 2, 2, 3);
        REQUIRE(apply_derivation(v, f * g) ==
                apply_derivation(v, f) * g + f * apply_derivation(v, g));
    }
}

TEST_CASE("lie_bracket on frozen examples")
{
    size_t n = 2;
    VectorField dx = VectorField::basis(n, 0);
    VectorField dy = VectorField::basis(n, 1);
    Poly x = var(n, 0), y = var(n, 1);

    REQUIRE(lie_bracket(dx, dy).is_zero());

    // [x dx, dx] = -dx
    VectorField xdx = x * dx;
    REQUIRE(lie_bracket(xdx, dx) == -dx);

    // [x dy, y dx] = x dx - y dy
    VectorField xdy = x * dy;
    VectorField ydx = y * dx;
    REQUIRE(lie_bracket(xdy, ydx) == xdx - y * dy);
    REQUIRE(vectorfield_to_string(lie_bracket(xdy, ydx)) == "x*dx - y*dy");
}

TEST_CASE("lie_bracket is antisymmetric, bilinear and satisfies Jacobi")
{
    std::mt19937_64 rng(103);
    for (int iter = 0; iter < 20; ++iter) {
        VectorField u = oracle::random_vector_field(rng, 2, 2, 2);
        VectorField v = oracle::random_vector_field(rng, 2, 2, 2);
        VectorField w = oracle::random_vector_field(rng, 2, 2, 2);
        REQUIRE(lie_bracket(u, v) == -lie_bracket(v, u));
        REQUIRE(lie_bracket(u + v, w) == lie_bracket(u, w) + lie_bracket(v, w));
        VectorField jac = lie_bracket(lie_bracket(u, v), w) +
                          lie_bracket(lie_bracket(v, w), u) +
                          lie_bracket(lie_bracket(w, u), v);
        REQUIRE(jac.is_zero());
    }
}

TEST_CASE("bracket acts as commutator of derivations")
{
    std::mt19937_64 rng(104);
    for (int iter = 0; iter < 20; ++iter) {
        VectorField v = oracle::random_vector_field(rng, 2, 2, 2);
        VectorField w = oracle::random_vector_field(rng, 2, 2, 2);
        Poly f = oracle::random_poly(rng, 2, 3, 3);
        Poly lhs = apply_derivation(lie_bracket(v, w), f);
        Poly rhs = apply_derivation(v, apply_derivation(w, f)) -
                   apply_derivation(w, apply_derivation(v, f));
        REQUIRE(lhs == rhs);
    }
}

TEST_CASE("dimension mismatches are input errors")
{
    VectorField dx = VectorField::basis(1, 0);
    Poly f = var(2, 0);
    REQUIRE_THROWS_AS(apply_derivation(dx, f), std::invalid_argument);
    REQUIRE_THROWS_AS(lie_bracket(dx, VectorField::basis(2, 0)), std::invalid_argument);
}
