#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "qfol/foliation.hpp"

using namespace qfol;

namespace {

Poly X2() { return Poly::variable(2, 0); }
Poly Y2() { return Poly::variable(2, 1); }
VectorField DX() { return VectorField::basis(2, 0); }
VectorField DY() { return VectorField::basis(2, 1); }

// the gl2-type foliation {x dx, y dx, x dy, y dy}
Foliation gl2()
{
    return Foliation({X2() * DX(), Y2() * DX(), X2() * DY(), Y2() * DY()}, 2);
}

GradedElement gen_elem(size_t i) { return GradedElement::generator(i, 2); }

} // namespace

TEST_CASE("involutivity certificates")
{
    Foliation frame({DX(), DY()}, 2);
    InvolutivityCertificate c1 = check_involutive(frame);
    REQUIRE(c1.cert.ok);
    REQUIRE(c1.structure_coeffs.at({0, 1}).is_zero());

    InvolutivityCertificate c2 = check_involutive(gl2());
    REQUIRE(c2.cert.ok);
    // [x dx, y dx] = -y dx: structure coefficients (0, -1, 0, 0)
    PolyVector c01 = c2.structure_coeffs.at({0, 1});
    REQUIRE(c01[1] == -Poly::constant(2, 1));

    Foliation bad({DX(), X2() * DY()}, 2);
    InvolutivityCertificate c3 = check_involutive(bad);
    REQUIRE_FALSE(c3.cert.ok);
    REQUIRE(c3.cert.to_string().find("dy") != std::string::npos);
}

TEST_CASE("free resolutions by iterated syzygies")
{
    // free module: no syzygies at all
    Resolution rf = free_resolution(Foliation({DX(), DY()}, 2), 2);
    REQUIRE(rf.cert.ok);
    REQUIRE(rf.complex.complex.ranks() == std::vector<size_t>{2, 0, 0});

    // principal, torsion-free
    Resolution rp = free_resolution(Foliation({X2() * DX()}, 2), 1);
    REQUIRE(rp.cert.ok);
    REQUIRE(rp.complex.complex.ranks() == std::vector<size_t>{1, 0});

    // gl2: ranks (4, 2, 0) with the two Koszul columns
    Resolution r = free_resolution(gl2(), 2);
    REQUIRE(r.cert.ok);
    REQUIRE(r.complex.complex.ranks() == std::vector<size_t>{4, 2, 0});
    PolyMatrix d1 = r.complex.complex.differential(1);
    PolyVector col0(4, 2), col1(4, 2);
    col0[0] = Y2();
    col0[1] = -X2();
    col1[2] = Y2();
    col1[3] = -X2();
    REQUIRE(d1.column(0) == col0);
    REQUIRE(d1.column(1) == col1);
    // against the independently coded elimination-oracle syzygies
    auto oracle_syz = oracle::naive_syzygies(2, 2, gl2().generator_matrix().columns());
    GroebnerBasis mine = GroebnerBasis::of(4, 2, d1.columns());
    for (const auto& s : oracle_syz)
        REQUIRE(mine.contains(s));
    GroebnerBasis theirs = GroebnerBasis::of(4, 2, oracle_syz);
    REQUIRE(theirs.contains(col0));
    REQUIRE(theirs.contains(col1));
}

TEST_CASE("universal structure over the commuting frame is abelian")
{
    Foliation frame({DX(), DY()}, 2);
    Resolution r = free_resolution(frame, 2);
    UniversalStructure u = build_universal_structure(r, frame, 3, 2);
    REQUIRE(u.cert.ok);
    REQUIRE(evaluate_bracket(u.algebroid, 2, {gen_elem(0), gen_elem(1)}).is_zero());
}

TEST_CASE("universal structure over gl2 reproduces the structure constants")
{
    Foliation F = gl2();
    Resolution r = free_resolution(F, 3);
    UniversalStructure u = build_universal_structure(r, F, 3, 2);
    REQUIRE(u.cert.ok);

    const LInftyAlgebroid& L = u.algebroid;
    auto l2 = [&](size_t i, size_t j) { return evaluate_bracket(L, 2, {gen_elem(i), gen_elem(j)}); };
    REQUIRE(l2(0, 1) == -gen_elem(1));
    REQUIRE(l2(0, 2) == gen_elem(2));
    REQUIRE(l2(0, 3).is_zero());
    REQUIRE(l2(1, 2) == -gen_elem(0) + gen_elem(3));
    REQUIRE(l2(1, 3) == -gen_elem(1));
    REQUIRE(l2(2, 3) == gen_elem(2));

    // l2 lifts are sound: rho l2 = bracket of the anchors
    for (size_t i = 0; i < 4; ++i)
        for (size_t j = i + 1; j < 4; ++j)
            REQUIRE(L.anchor_of(l2(i, j)) ==
                    lie_bracket(F.generators[i], F.generators[j]));

    // l3 vanishes on degree-0 triples: the defect of constant structure
    // coefficients satisfying Jacobi is zero
    for (size_t i = 0; i < 4; ++i)
        for (size_t j = i + 1; j < 4; ++j)
            for (size_t k = j + 1; k < 4; ++k)
                REQUIRE(evaluate_bracket(L, 3, {gen_elem(i), gen_elem(j), gen_elem(k)})
                            .is_zero());

    // l1 equals the differential
    detail::DegreeIndex ix(r.complex.complex);
    for (size_t j = 0; j < r.complex.complex.rank(1); ++j) {
        GradedElement l1 = evaluate_bracket(L, 1, {gen_elem(ix.flat(1, j))});
        GradedElement dcol = detail::element_from_vector(
            r.complex.complex.differential(1).column(j), 0, ix);
        REQUIRE(l1 == dcol);
    }

    // anchor compatibility residual on random inputs
    std::mt19937_64 rng(31);
    for (int iter = 0; iter < 10; ++iter) {
        Poly a = oracle::random_poly(rng, 2, 2, 3);
        GradedElement v = gen_elem(rng() % 4);
        GradedElement w = gen_elem(rng() % 4);
        REQUIRE(anchor_compat_residual(L, v, w, a).is_zero());
    }
}

TEST_CASE("cofibrant replacement of the zero foliation is empty")
{
    FoliationReplacement q = cofibrant_replacement_linfty(Foliation({}, 2), 2, 2);
    REQUIRE(q.cert.ok);
    REQUIRE(q.cellular.attachments.empty());
    REQUIRE(q.cellular.result.complex.total_rank() == 0);
}

TEST_CASE("cofibrant replacement of the commuting frame needs only spheres")
{
    FoliationReplacement q = cofibrant_replacement_linfty(Foliation({DX(), DY()}, 2), 2, 2);
    REQUIRE(q.cert.ok);
    REQUIRE(q.cellular.attachments.size() == 2);
    for (const auto& cell : q.cellular.attachments)
        REQUIRE(cell.kind == CellKind::EmptyToSphere0);
}

TEST_CASE("cofibrant replacement of gl2 matches the resolution homology")
{
    FoliationReplacement q = cofibrant_replacement_linfty(gl2(), 2, 2);
    REQUIRE(q.cert.ok);
    REQUIRE(q.cellular.verify().ok);
    const AnchoredComplex& M = q.cellular.result;
    REQUIRE(M.complex.rank(0) == 4);
    REQUIRE(M.complex.rank(1) == 2);
    REQUIRE(M.complex.rank(2) == 0);
    // four degree-0 cells, two degree-1 cells along the Koszul cycles
    size_t spheres = 0, discs = 0;
    for (const auto& cell : q.cellular.attachments) {
        if (cell.kind == CellKind::EmptyToSphere0)
            ++spheres;
        else
            ++discs;
    }
    REQUIRE(spheres == 4);
    REQUIRE(discs == 2);
    // same homology as the independently computed free resolution
    Resolution r = free_resolution(gl2(), 2);
    REQUIRE(M.complex.ranks()[0] == r.complex.complex.ranks()[0]);
    REQUIRE(M.complex.ranks()[1] == r.complex.complex.ranks()[1]);
    REQUIRE(exactness_certificate(M.complex, 1, 2).ok);

    // the word span carries the free anchor: binary degree-0 words push to
    // the commutator of the generator anchors
    const FreeLR& ctx = *q.words;
    auto w = ctx.span().find(LWord::node({LWord::leaf(0), LWord::leaf(1)}));
    REQUIRE(w);
    REQUIRE(ctx.word_anchor(*w) ==
            lie_bracket(gl2().generators[0], gl2().generators[1]));
}

TEST_CASE("two replacements with permuted generators are homotopy equivalent")
{
    FoliationReplacement q1 = cofibrant_replacement_linfty(gl2(), 2, 2, false);
    FoliationReplacement q2 = cofibrant_replacement_linfty(gl2(), 2, 2, true);
    REQUIRE(q1.cert.ok);
    REQUIRE(q2.cert.ok);
    ComparisonReport rep = compare_replacements(q1, q2);
    REQUIRE(rep.cert.ok);
    // the comparison maps commute with the anchors and are quasi-isos
    REQUIRE((q2.cellular.result.anchor * rep.phi.component(0)) ==
            q1.cellular.result.anchor);
    REQUIRE(is_quasi_iso(rep.phi, 3).ok);
    REQUIRE(is_quasi_iso(rep.psi, 3).ok);

    // comparing a replacement with itself: phi = psi = id up to homotopy
    ComparisonReport self = compare_replacements(q1, q1);
    REQUIRE(self.cert.ok);
}

TEST_CASE("comparison across different bounds stays positive within the smaller")
{
    FoliationReplacement q1 = cofibrant_replacement_linfty(gl2(), 2, 2);
    FoliationReplacement q3 = cofibrant_replacement_linfty(gl2(), 2, 3);
    REQUIRE(q3.cert.ok);
    ComparisonReport rep = compare_replacements(q1, q3);
    REQUIRE(rep.cert.ok);
}

TEST_CASE("the two constructions agree on the underlying homology data")
{
    // the bracket structure lives on the syzygy resolution, the replacement
    // on attached cells; both rows present the same module
    Foliation F = gl2();
    Resolution R = free_resolution(F, 2);
    FoliationReplacement Q = cofibrant_replacement_linfty(F, 2, 2);
    REQUIRE(R.cert.ok);
    REQUIRE(Q.cert.ok);
    REQUIRE(R.complex.complex.rank(0) == Q.cellular.result.complex.rank(0));
    REQUIRE(R.complex.complex.rank(1) == Q.cellular.result.complex.rank(1));
    // mutual membership of the degree-1 boundary modules
    GroebnerBasis a =
        GroebnerBasis::of(4, 2, R.complex.complex.differential(1).columns());
    GroebnerBasis b =
        GroebnerBasis::of(4, 2, Q.cellular.result.complex.differential(1).columns());
    for (const auto& col : R.complex.complex.differential(1).columns())
        REQUIRE(b.contains(col));
    for (const auto& col : Q.cellular.result.complex.differential(1).columns())
        REQUIRE(a.contains(col));
    // and the anchors agree columnwise on the shared degree-0 generators
    REQUIRE(R.complex.anchor == Q.cellular.result.anchor);
}

TEST_CASE("a length-three resolution: the rank-one foliation with maximal-ideal coefficients")
{
    // {x dx, y dx, z dx} over Q[x,y,z]: the coefficient module is the
    // maximal ideal, whose syzygies run two steps deep
    Poly x = Poly::variable(3, 0), y = Poly::variable(3, 1), z = Poly::variable(3, 2);
    VectorField dx3 = VectorField::basis(3, 0);
    Foliation F({x * dx3, y * dx3, z * dx3}, 3);
    REQUIRE(check_involutive(F).cert.ok);

    Resolution R = free_resolution(F, 3);
    REQUIRE(R.cert.ok);
    REQUIRE(R.complex.complex.ranks() == std::vector<size_t>{3, 3, 1, 0});
    REQUIRE(exactness_certificate(R.complex.complex, 1, 2).ok);

    UniversalStructure U = build_universal_structure(R, F, 3, 2);
    REQUIRE(U.cert.ok); // exhaustive residuals across all three degrees
    const LInftyAlgebroid& L = U.algebroid;
    // rho-soundness of the binary bracket on degree-0 pairs
    for (size_t i = 0; i < 3; ++i)
        for (size_t j = i + 1; j < 3; ++j) {
            GradedElement b = evaluate_bracket(
                L, 2, {GradedElement::generator(i, 3), GradedElement::generator(j, 3)});
            REQUIRE(L.anchor_of(b) == lie_bracket(F.generators[i], F.generators[j]));
        }
    FoliationReplacement Q1 = cofibrant_replacement_linfty(F, 2, 2, false);
    FoliationReplacement Q2 = cofibrant_replacement_linfty(F, 2, 2, true);
    REQUIRE(Q1.cert.ok);
    REQUIRE(Q1.cellular.result.complex.ranks() == std::vector<size_t>{3, 3, 1});
    ComparisonReport rep = compare_replacements(Q1, Q2);
    REQUIRE(rep.cert.ok);
}

TEST_CASE("quadratic-coefficient foliation has nonzero mixed-degree brackets")
{
    Poly x = X2(), y = Y2();
    Foliation F({x * x * DX(), x * y * DX(), y * y * DX()}, 2);
    REQUIRE(check_involutive(F).cert.ok);
    Resolution R = free_resolution(F, 2);
    REQUIRE(R.cert.ok);
    REQUIRE(R.complex.complex.ranks() == std::vector<size_t>{3, 2, 0});
    UniversalStructure U = build_universal_structure(R, F, 3, 2);
    REQUIRE(U.cert.ok);
    const LInftyAlgebroid& L = U.algebroid;

    // non-constant structure coefficients: [v1, v2] lifts to -y v1
    GradedElement v1 = GradedElement::generator(0, 2);
    GradedElement v2 = GradedElement::generator(1, 2);
    REQUIRE(evaluate_bracket(L, 2, {v1, v2}) == (-v1).scaled(y));

    // the defect chain forces a nonzero bracket against the first syzygy:
    // d l2(v1, s1_1) = l2(v1, d s1_1) = x d(s1_1), so the deterministic
    // lift is x s1_1
    GradedElement s1 = GradedElement::generator(3, 2);
    REQUIRE(evaluate_bracket(L, 2, {v1, s1}) == s1.scaled(x));
}
