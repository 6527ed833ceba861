#pragma once

#include <memory>

#include "qfol/freealg.hpp"
#include "qfol/modelcat.hpp"

namespace qfol {

/// Finitely generated module of polynomial vector fields, closed under the
/// Lie bracket (involutivity is certified, not assumed).
struct Foliation {
    std::vector<VectorField> generators;
    std::vector<std::string> names;
    size_t nvars = 0;

    Foliation() = default;
    Foliation(std::vector<VectorField> gens, size_t nv, std::vector<std::string> ns = {})
        : generators(std::move(gens)), names(std::move(ns)), nvars(nv)
    {
        for (const auto& g : generators)
            if (g.nvars() != nvars)
                throw std::invalid_argument("foliation generator over wrong ring");
        if (names.empty())
            for (size_t i = 1; i <= generators.size(); ++i)
                names.push_back("v" + std::to_string(i));
        if (names.size() != generators.size())
            throw std::invalid_argument("foliation name count mismatch");
    }

    size_t size() const { return generators.size(); }

    /// n x k matrix whose columns are the generator components.
    PolyMatrix generator_matrix() const
    {
        PolyMatrix m(nvars, generators.size(), nvars);
        for (size_t j = 0; j < generators.size(); ++j)
            m.set_column(j, generators[j].components);
        return m;
    }
};

struct InvolutivityCertificate {
    Certificate cert{"involutivity"};
    // structure coefficients: [g_i, g_j] = sum_k c[k] g_k for i < j
    std::map<std::pair<size_t, size_t>, PolyVector> structure_coeffs;
};

inline InvolutivityCertificate check_involutive(const Foliation& F)
{
    InvolutivityCertificate out;
    if (F.size() == 0)
        return out;
    GroebnerBasis span = GroebnerBasis::of(F.nvars, F.nvars, F.generator_matrix().columns());
    for (size_t i = 0; i < F.size(); ++i)
        for (size_t j = i + 1; j < F.size(); ++j) {
            VectorField b = lie_bracket(F.generators[i], F.generators[j]);
            auto w = span.witness(b.components);
            if (!w) {
                out.cert.fail("[" + F.names[i] + ", " + F.names[j] + "] = " +
                              vectorfield_to_string(b) + " is not in the generator span");
                continue;
            }
            out.structure_coeffs[{i, j}] = *w;
        }
    return out;
}

/// Free resolution of the foliation module by iterated syzygies: degree 0 is
/// free on the generators with the generator matrix as anchor, each next
/// differential is the syzygy basis of the previous one.
struct Resolution {
    AnchoredComplex complex;
    int length = 0;
    Certificate cert{"resolution invariants"};
};

inline Resolution free_resolution(const Foliation& F, int length)
{
    if (length < 0)
        throw std::invalid_argument("resolution length must be non-negative");
    size_t nvars = F.nvars;
    std::vector<size_t> ranks{F.size()};
    std::vector<PolyMatrix> diffs;
    std::vector<PolyVector> prev_cols = F.generator_matrix().columns();
    size_t prev_rank_ambient = nvars;
    for (int m = 1; m <= length; ++m) {
        std::vector<PolyVector> syz =
            syzygy_basis(prev_rank_ambient, nvars, prev_cols);
        size_t rank = ranks.back();
        PolyMatrix d = PolyMatrix::from_columns(rank, nvars, syz);
        ranks.push_back(syz.size());
        diffs.push_back(d);
        prev_cols = syz;
        prev_rank_ambient = rank;
    }
    Resolution R;
    R.length = length;
    R.complex = AnchoredComplex(GradedComplex::build(nvars, ranks, diffs),
                                F.generator_matrix());
    R.cert.title = "resolution invariants (length " + std::to_string(length) + ")";
    R.cert.absorb(R.complex.validate());
    // H_0: the anchor maps onto the foliation span with kernel im d_1
    GroebnerBasis image = GroebnerBasis::of(nvars, nvars, F.generator_matrix().columns());
    for (size_t j = 0; j < F.size(); ++j)
        if (!image.contains(F.generators[j].components))
            R.cert.fail("generator " + F.names[j] + " not in the anchor image");
    GroebnerBasis d1img =
        GroebnerBasis::of(F.size(), nvars, R.complex.complex.differential(1).columns());
    for (const auto& z : syzygy_basis(nvars, nvars, F.generator_matrix().columns()))
        if (!d1img.contains(z))
            R.cert.fail("anchor kernel element " + polyvector_to_string(z) +
                        " is not a boundary");
    if (length >= 2)
        R.cert.absorb(exactness_certificate(R.complex.complex, 1, length - 1));
    return R;
}

/// L-infinity algebroid structure on a resolution: l1 is the differential,
/// the binary bracket lifts the commutator of anchor images, higher brackets
/// lift the Jacobi defects of the lower ones through the exact rows. Every
/// lift is the deterministic division witness, so the table is reproducible.
struct UniversalStructure {
    Resolution resolution;
    LInftyAlgebroid algebroid;
    size_t K_max = 3;
    int D = 2;
    Certificate cert{"universal structure residuals"};
};

namespace detail {

inline GradedBasis resolution_basis(const Resolution& R, const Foliation& F)
{
    std::vector<std::string> names;
    std::vector<int> degrees;
    for (int d = 0; d <= R.complex.complex.top_degree(); ++d)
        for (size_t j = 0; j < R.complex.complex.rank(d); ++j) {
            if (d == 0)
                names.push_back(F.names[j]);
            else
                names.push_back("s" + std::to_string(d) + "_" + std::to_string(j + 1));
            degrees.push_back(d);
        }
    return GradedBasis(names, degrees);
}

/// (degree, slot) -> flat generator index and back.
struct DegreeIndex {
    std::vector<size_t> offsets;
    explicit DegreeIndex(const GradedComplex& c)
    {
        size_t off = 0;
        for (int d = 0; d <= c.top_degree(); ++d) {
            offsets.push_back(off);
            off += c.rank(d);
        }
    }
    size_t flat(int degree, size_t slot) const { return offsets.at(degree) + slot; }
};

inline GradedElement element_from_vector(const PolyVector& v, int degree,
                                         const DegreeIndex& ix)
{
    GradedElement e;
    for (size_t r = 0; r < v.rank(); ++r)
        e.add_term(ix.flat(degree, r), v[r]);
    return e;
}

inline PolyVector vector_from_element(const GradedElement& e, int degree,
                                      const DegreeIndex& ix, size_t rank, size_t nvars,
                                      const GradedBasis& basis)
{
    PolyVector v(rank, nvars);
    for (const auto& [g, c] : e.coeffs) {
        if (basis.degree(g) != degree)
            throw std::logic_error("element not concentrated in the expected degree");
        v[g - ix.offsets.at(degree)] = c;
    }
    return v;
}

} // namespace detail

inline UniversalStructure build_universal_structure(const Resolution& R, const Foliation& F,
                                                    size_t K_max, int D)
{
    UniversalStructure U;
    U.resolution = R;
    U.K_max = K_max;
    U.D = D;
    size_t nvars = F.nvars;
    const GradedComplex& C = R.complex.complex;
    detail::DegreeIndex ix(C);
    GradedBasis basis = detail::resolution_basis(R, F);
    LInftyAlgebroid L(basis, nvars, K_max);
    for (size_t j = 0; j < F.size(); ++j)
        L.set_anchor(ix.flat(0, j), F.generators[j]);

    // l1 = d
    for (int d = 1; d <= C.top_degree(); ++d)
        for (size_t j = 0; j < C.rank(d); ++j)
            L.brackets.set(1, {ix.flat(d, j)},
                           detail::element_from_vector(C.differential(d).column(j), d - 1, ix));

    // degree-resorted generator lists per degree for tuple enumeration
    std::vector<std::pair<int, size_t>> gens_by_degree; // (degree, slot)
    for (int d = 0; d <= C.top_degree(); ++d)
        for (size_t j = 0; j < C.rank(d); ++j)
            gens_by_degree.push_back({d, j});

    GroebnerBasis anchor_image =
        GroebnerBasis::of(nvars, nvars, F.generator_matrix().columns());
    std::vector<std::optional<GroebnerBasis>> diff_image(
        static_cast<size_t>(C.top_degree()) + 1);
    auto image_at = [&](int m) -> GroebnerBasis& {
        if (!diff_image[static_cast<size_t>(m)])
            diff_image[static_cast<size_t>(m)].emplace(
                GroebnerBasis::of(C.rank(m - 1), nvars, C.differential(m).columns()));
        return *diff_image[static_cast<size_t>(m)];
    };

    // the Jacobi sum with the l1-of-the-new-bracket term removed: what the
    // new table entry must hit under d
    auto defect = [&](size_t k, const std::vector<size_t>& tuple) {
        std::vector<int> degs;
        std::vector<GradedElement> in;
        for (size_t g : tuple) {
            degs.push_back(basis.degree(g));
            in.push_back(GradedElement::generator(g, nvars));
        }
        GradedElement rhs;
        for (size_t i = 1; i < k; ++i) {
            size_t j = k - i;
            int outer_sign = (i * j) % 2 == 0 ? 1 : -1;
            for (const auto& sigma : unshuffles(i, j)) {
                int chi = koszul_sign(sigma, degs);
                std::vector<GradedElement> first;
                for (size_t t = 0; t < i; ++t)
                    first.push_back(in[sigma[t]]);
                GradedElement inner = evaluate_bracket(L, i, first);
                std::vector<GradedElement> outer;
                outer.push_back(std::move(inner));
                for (size_t t = i; t < k; ++t)
                    outer.push_back(in[sigma[t]]);
                rhs = rhs + evaluate_bracket(L, j + 1, outer).scaled(
                                Rational(outer_sign * chi));
            }
        }
        return rhs;
    };

    // arities 2..K_max by ascending total degree; arity 2 at total degree 0
    // lifts the commutators through the anchor, everything else lifts the
    // Jacobi defect through the differential
    for (int t = 0; t <= D; ++t) {
        for (size_t k = 2; k <= K_max; ++k) {
            enumerate_sorted_tuples(basis, k, [&](const std::vector<size_t>& tuple) {
                int total = 0;
                for (size_t g : tuple)
                    total += basis.degree(g);
                if (total != t)
                    return;
                int value_degree = total + static_cast<int>(k) - 2;
                if (k == 2 && t == 0) {
                    VectorField br =
                        lie_bracket(L.anchor[tuple[0]], L.anchor[tuple[1]]);
                    auto w = anchor_image.witness(br.components);
                    if (!w)
                        throw std::logic_error("bracket of anchors left the foliation span");
                    L.brackets.set(2, tuple, detail::element_from_vector(*w, 0, ix));
                    return;
                }
                GradedElement rhs = -defect(k, tuple);
                if (value_degree > C.top_degree()) {
                    if (!rhs.is_zero())
                        throw std::logic_error(
                            "Jacobi defect survives above the resolution length; "
                            "increase the resolution bound");
                    return;
                }
                PolyVector target = detail::vector_from_element(
                    rhs, value_degree - 1, ix, C.rank(value_degree - 1), nvars, basis);
                std::optional<PolyVector> u;
                if (value_degree - 1 == 0) {
                    // the defect must be an anchor-zero boundary
                    u = image_at(1).witness(target);
                } else {
                    u = image_at(value_degree).witness(target);
                }
                if (!u)
                    throw std::logic_error(
                        "Jacobi defect is not a boundary within the resolution bounds");
                L.brackets.set(k, tuple,
                               detail::element_from_vector(*u, value_degree, ix));
            });
        }
    }
    U.algebroid = L;

    // exhaustive residual verification within (K_max, D)
    U.cert.title = "universal structure residuals (K_max = " + std::to_string(K_max) +
                   ", D = " + std::to_string(D) + ")";
    U.cert.absorb(validate_bracket_table(L));
    for (size_t k = 1; k <= K_max; ++k)
        enumerate_sorted_tuples(basis, k, [&](const std::vector<size_t>& tuple) {
            int total = 0;
            for (size_t g : tuple)
                total += basis.degree(g);
            if (total > D)
                return;
            std::vector<GradedElement> in;
            for (size_t g : tuple)
                in.push_back(GradedElement::generator(g, nvars));
            GradedElement res = jacobi_residual(L, k, in);
            if (!res.is_zero()) {
                std::string names;
                for (size_t g : tuple)
                    names += (names.empty() ? "" : ", ") + basis.names[g];
                U.cert.fail("jacobi residual nonzero on [" + names + "]_" +
                            std::to_string(k));
            }
        });
    // the anchor is a strict morphism to the derivation algebroid
    LInftyAlgebroid T = LInftyAlgebroid::derivation_model(nvars, K_max);
    StrictMorphism rho;
    for (size_t g = 0; g < basis.size(); ++g)
        rho.images.push_back(T.element_of(L.anchor[g]));
    Certificate strict = check_strict_morphism(rho, L, T, K_max);
    if (!strict.ok) {
        U.cert.fail("anchor is not a strict morphism onto the derivations");
        U.cert.absorb(strict);
    }
    return U;
}

/// Cofibrant replacement of a foliation built from free cells: one anchored
/// degree-0 generator per foliation generator, then disc cells along the
/// syzygy witnesses degree by degree. The attached complex maps onto the
/// foliation through its anchor; the certificate checks surjectivity,
/// H_0 = F (kernel of the anchor = boundaries) and exactness through D. The
/// free-bracket closure of the cells at (W, D) is the truncated presentation
/// of the free algebroid the cells generate.
struct FoliationReplacement {
    CellularMap cellular;
    size_t W = 2;
    size_t D = 2;
    std::shared_ptr<FreeLR> words;
    Certificate cert{"replacement certificate"};
};

inline FoliationReplacement cofibrant_replacement_linfty(const Foliation& F, size_t W,
                                                         size_t D,
                                                         bool reverse_generators = false)
{
    FoliationReplacement out;
    out.W = W;
    out.D = D;
    size_t nvars = F.nvars;
    InvolutivityCertificate inv = check_involutive(F);
    if (!inv.cert.ok) {
        out.cert.fail("foliation is not involutive");
        out.cert.absorb(inv.cert);
        return out;
    }
    out.cellular.base = AnchoredComplex::zero(nvars);
    AnchoredComplex cur = out.cellular.base;
    std::vector<size_t> order(F.size());
    for (size_t j = 0; j < F.size(); ++j)
        order[j] = reverse_generators ? F.size() - 1 - j : j;
    for (size_t j : order) {
        CellAttachment cell;
        cell.kind = CellKind::EmptyToSphere0;
        cell.anchor_value = F.generators[j];
        cur = attach_cell_pushout(cur, cell);
        out.cellular.attachments.push_back(cell);
    }
    for (int m = 1; m <= static_cast<int>(D) + 1; ++m) {
        std::vector<PolyVector> kernel;
        if (m == 1)
            kernel = syzygy_basis(nvars, nvars, cur.anchor.columns());
        else
            kernel = syzygy_basis(cur.complex.rank(m - 2), nvars,
                                  cur.complex.differential(m - 1).columns());
        for (const auto& z : kernel) {
            CellAttachment cell;
            cell.kind = CellKind::SphereToDisc;
            cell.degree = static_cast<size_t>(m);
            cell.attaching = z;
            cur = attach_cell_pushout(cur, cell);
            out.cellular.attachments.push_back(cell);
        }
    }
    out.cellular.result = cur;

    out.cert.title = "replacement of the foliation, verified up to (W, D) = (" +
                     std::to_string(W) + ", " + std::to_string(D) + ")";
    out.cert.absorb(cur.validate());
    GroebnerBasis image = GroebnerBasis::of(nvars, nvars, cur.anchor.columns());
    for (size_t j = 0; j < F.size(); ++j)
        if (!image.contains(F.generators[j].components))
            out.cert.fail("generator " + F.names[j] + " not hit by the anchor");
    GroebnerBasis span = GroebnerBasis::of(nvars, nvars, F.generator_matrix().columns());
    for (size_t j = 0; j < cur.complex.rank(0); ++j)
        if (!span.contains(cur.anchor.column(j)))
            out.cert.fail("anchor image leaves the foliation span");
    GroebnerBasis d1img =
        GroebnerBasis::of(cur.complex.rank(0), nvars, cur.complex.differential(1).columns());
    for (const auto& z : syzygy_basis(nvars, nvars, cur.anchor.columns()))
        if (!d1img.contains(z))
            out.cert.fail("anchor kernel is larger than the boundaries");
    out.cert.absorb(exactness_certificate(cur.complex, 1, static_cast<int>(D)));

    out.words = std::make_shared<FreeLR>(FreeLR::over_complex(cur, W, D));
    out.cert.note("word span: " + std::to_string(out.words->span().basis.size()) +
                  " basis words at (W, D) = (" + std::to_string(W) + ", " +
                  std::to_string(D) + ")");
    return out;
}

/// Lift of the identity of F through two replacement anchors, built cell by
/// cell with deterministic witnesses.
struct FoliationLift {
    ChainMap map;
    Certificate cert{"replacement lift"};
};

inline FoliationLift lift_replacement(const FoliationReplacement& from,
                                      const FoliationReplacement& to, bool alternate = false)
{
    FoliationLift out;
    const AnchoredComplex& Z = from.cellular.result;
    const AnchoredComplex& Y = to.cellular.result;
    size_t nvars = Z.nvars();
    std::vector<std::vector<PolyVector>> hcols(
        static_cast<size_t>(std::max(Z.complex.top_degree(), 0)) + 1);
    for (int d = 0; d <= Z.complex.top_degree(); ++d)
        hcols[static_cast<size_t>(d)].assign(Z.complex.rank(d),
                                             PolyVector(Y.complex.rank(d), nvars));
    auto h_apply = [&](int degree, const PolyVector& v) {
        PolyVector outv(Y.complex.rank(degree), nvars);
        for (size_t j = 0; j < v.rank(); ++j)
            if (!v[j].is_zero())
                outv += hcols[static_cast<size_t>(degree)][j] * v[j];
        return outv;
    };
    for (const CellAttachment& cell : from.cellular.attachments) {
        switch (cell.kind) {
        case CellKind::EmptyToSphere0: {
            auto [deg, idx] = cell.created[0];
            auto u = detail::solve_columns(Y.anchor.columns(), nvars, nvars,
                                           cell.anchor_value.components, alternate);
            if (!u) {
                out.cert.fail("anchor value " +
                              vectorfield_to_string(cell.anchor_value) +
                              " has no preimage in the target replacement");
                return out;
            }
            hcols[0][idx] = *u;
            break;
        }
        case CellKind::SphereToDisc: {
            auto [deg, idx] = cell.created[0];
            PolyVector z(Z.complex.rank(deg - 1), nvars);
            for (size_t r = 0; r < cell.attaching.rank(); ++r)
                z[r] = cell.attaching[r];
            PolyVector c = h_apply(deg - 1, z);
            auto u = detail::solve_columns(Y.complex.differential(deg).columns(),
                                           Y.complex.rank(deg - 1), nvars, c, alternate);
            if (!u) {
                out.cert.fail("no boundary preimage for the degree-" +
                              std::to_string(deg) + " cell");
                return out;
            }
            hcols[static_cast<size_t>(deg)][idx] = *u;
            break;
        }
        case CellKind::EmptyToDisc: {
            auto [dlow, ilow] = cell.created[0];
            auto [dhi, ihi] = cell.created[1];
            hcols[static_cast<size_t>(dlow)][ilow] = PolyVector(Y.complex.rank(dlow), nvars);
            hcols[static_cast<size_t>(dhi)][ihi] = PolyVector(Y.complex.rank(dhi), nvars);
            break;
        }
        }
    }
    std::vector<PolyMatrix> comps;
    for (int d = 0; d <= Z.complex.top_degree(); ++d) {
        PolyMatrix m(Y.complex.rank(d), Z.complex.rank(d), nvars);
        for (size_t j = 0; j < Z.complex.rank(d); ++j)
            m.set_column(j, hcols[static_cast<size_t>(d)][j]);
        comps.push_back(std::move(m));
    }
    out.map = ChainMap(Z.complex, Y.complex, std::move(comps));
    Certificate v = out.map.validate();
    if (!v.ok) {
        out.cert.fail("lift is not a chain map");
        out.cert.absorb(v);
    }
    if (!(Y.anchor * out.map.component(0) == Z.anchor))
        out.cert.fail("lift does not commute with the anchors");
    return out;
}

/// Full comparison of two replacements of the same foliation: mutually
/// inverse lifts up to verified chain homotopy, plus a homotopy between two
/// independently generated lifts.
struct ComparisonReport {
    ChainMap phi;  // Q1 -> Q2
    ChainMap psi;  // Q2 -> Q1
    ChainMap phi_alt;
    Certificate cert{"replacement comparison"};
};

inline ComparisonReport compare_replacements(const FoliationReplacement& Q1,
                                             const FoliationReplacement& Q2)
{
    ComparisonReport rep;
    if (!Q1.cert.ok || !Q2.cert.ok) {
        rep.cert.fail("inputs lack positive replacement certificates");
        return rep;
    }
    FoliationLift f = lift_replacement(Q1, Q2, false);
    FoliationLift g = lift_replacement(Q2, Q1, false);
    FoliationLift f2 = lift_replacement(Q1, Q2, true);
    if (!f.cert.ok || !g.cert.ok || !f2.cert.ok) {
        rep.cert.fail("lift construction failed");
        rep.cert.absorb(f.cert);
        rep.cert.absorb(g.cert);
        rep.cert.absorb(f2.cert);
        return rep;
    }
    rep.phi = f.map;
    rep.psi = g.map;
    rep.phi_alt = f2.map;
    int top1 = Q1.cellular.result.complex.top_degree();
    int top2 = Q2.cellular.result.complex.top_degree();

    Certificate qphi = is_quasi_iso(rep.phi, std::max(top1, top2) + 1);
    Certificate qpsi = is_quasi_iso(rep.psi, std::max(top1, top2) + 1);
    if (!qphi.ok || !qpsi.ok) {
        rep.cert.fail("a lift failed its quasi-isomorphism certificate");
        rep.cert.absorb(qphi);
        rep.cert.absorb(qpsi);
    }

    auto check_homotopic_to_id = [&](const ChainMap& m, const GradedComplex& c, int top,
                                     const std::string& label) {
        auto h = solve_left_homotopy(m, ChainMap::identity(c), top);
        if (!h) {
            rep.cert.fail(label + " is not visibly homotopic to the identity");
            return;
        }
        Certificate v = verify_homotopy(*h);
        if (!v.ok) {
            rep.cert.fail(label + " homotopy witness failed re-verification");
            rep.cert.absorb(v);
        } else {
            rep.cert.note(label + " ~ id, witness re-verified as matrix identities");
        }
    };
    check_homotopic_to_id(compose(rep.psi, rep.phi), Q1.cellular.result.complex, top1,
                          "psi . phi");
    check_homotopic_to_id(compose(rep.phi, rep.psi), Q2.cellular.result.complex, top2,
                          "phi . psi");

    auto h = solve_left_homotopy(rep.phi, rep.phi_alt, top1);
    if (!h) {
        rep.cert.fail("independent lifts are not homotopic");
    } else {
        Certificate v = verify_homotopy(*h);
        if (!v.ok)
            rep.cert.absorb(v);
        else
            rep.cert.note("two independent lifts are homotopic");
    }
    return rep;
}

} // namespace qfol
