#pragma once

#include "qfol/cells.hpp"
#include "qfol/homotopy.hpp"

namespace qfol {

/// Morphism classes of the projective structure on anchored complexes:
/// fibrations are the surjections in positive degrees (degree 0 is not
/// required; some treatments ask for surjectivity everywhere, this library
/// follows the positive-degree convention), weak equivalences are the
/// quasi-isomorphisms up to the stated bound, trivial fibrations are both
/// plus degree-0 surjectivity.
struct MorphismClassification {
    bool is_fibration = false;
    bool is_weak_equivalence = false;
    bool is_trivial_fibration = false;
    Certificate cert{"morphism classification"};
};

inline bool anchors_commute(const AnchoredComplex& X, const AnchoredComplex& Y,
                            const ChainMap& f)
{
    return (Y.anchor * f.component(0)) == X.anchor;
}

inline bool surjective_in_degree(const ChainMap& f, int i)
{
    size_t tr = f.target.rank(i);
    if (tr == 0)
        return true;
    GroebnerBasis image = GroebnerBasis::of(tr, f.source.nvars(), f.component(i).columns());
    for (size_t j = 0; j < tr; ++j)
        if (!image.contains(PolyVector::unit(tr, f.source.nvars(), j)))
            return false;
    return true;
}

inline MorphismClassification classify_morphism(const AnchoredComplex& X,
                                                const AnchoredComplex& Y,
                                                const ChainMap& f, int bound)
{
    if (!(f.source == X.complex) || !(f.target == Y.complex))
        throw std::invalid_argument("classify_morphism: map endpoints differ from objects");
    if (!anchors_commute(X, Y, f))
        throw std::invalid_argument("classify_morphism: map does not commute with anchors");
    Certificate valid = f.validate();
    if (!valid.ok)
        throw std::invalid_argument("classify_morphism: not a chain map");

    MorphismClassification mc;
    mc.is_fibration = true;
    for (int i = 1; i <= bound; ++i)
        if (!surjective_in_degree(f, i)) {
            mc.is_fibration = false;
            mc.cert.note("not surjective in degree " + std::to_string(i));
            break;
        }
    Certificate qi = is_quasi_iso(f, bound);
    mc.is_weak_equivalence = qi.ok;
    if (!qi.ok)
        mc.cert.absorb(qi);
    mc.is_trivial_fibration =
        mc.is_fibration && mc.is_weak_equivalence && surjective_in_degree(f, 0);
    mc.cert.note(std::string("fibration: ") + (mc.is_fibration ? "yes" : "no"));
    mc.cert.note(std::string("weak equivalence: ") + (mc.is_weak_equivalence ? "yes" : "no"));
    mc.cert.note(std::string("trivial fibration: ") +
                 (mc.is_trivial_fibration ? "yes" : "no"));
    return mc;
}

/// Output of the small-object factorization f = p . i with i cellular.
struct Factorization {
    CellularMap cellular;  // i : X -> Z
    ChainMap projection;   // p : Z -> Y
    Certificate cert;      // re-verified classification of p
};

namespace detail {

struct GrowingFactor {
    AnchoredComplex Z;
    std::vector<std::vector<PolyVector>> pcols; // per degree, columns of p in Y

    explicit GrowingFactor(const AnchoredComplex& start, const ChainMap& f,
                           const AnchoredComplex& Y)
        : Z(start)
    {
        int top = std::max(Z.complex.top_degree(), Y.complex.top_degree());
        pcols.resize(static_cast<size_t>(top < 0 ? 0 : top) + 2);
        for (int i = 0; i <= Z.complex.top_degree(); ++i) {
            PolyMatrix c = f.component(i);
            for (size_t j = 0; j < Z.complex.rank(i); ++j)
                at(i).push_back(c.column(j));
        }
    }

    std::vector<PolyVector>& at(int degree)
    {
        if (degree >= static_cast<int>(pcols.size()))
            pcols.resize(static_cast<size_t>(degree) + 1);
        return pcols[static_cast<size_t>(degree)];
    }

    ChainMap assemble(const AnchoredComplex& Y) const
    {
        std::vector<PolyMatrix> comps;
        for (int i = 0; i <= Z.complex.top_degree(); ++i) {
            PolyMatrix m(Y.complex.rank(i), Z.complex.rank(i), Z.nvars());
            if (i < static_cast<int>(pcols.size()))
                for (size_t j = 0; j < pcols[static_cast<size_t>(i)].size(); ++j)
                    m.set_column(j, pcols[static_cast<size_t>(i)][j]);
            comps.push_back(std::move(m));
        }
        return ChainMap(Z.complex, Y.complex, std::move(comps));
    }
};

} // namespace detail

/// Factor f : X -> Y into a cellular map followed by a trivial fibration,
/// certified up to `bound`. First free cells surject onto the target
/// generators degreewise, then sphere-to-disc cells kill the mapping-cone
/// homology bottom-up until the cone is exact through degree bound + 1.
/// With j_cells_only the first stage runs on positive degrees only and the
/// cone stage is skipped: the result is an acyclic-cell factorization into a
/// fibration (the SM3 second factorization for cofibrant domains).
inline Factorization factor_cof_trivfib(const AnchoredComplex& X, const AnchoredComplex& Y,
                                        const ChainMap& f, int bound,
                                        bool j_cells_only = false)
{
    if (!(f.source == X.complex) || !(f.target == Y.complex))
        throw std::invalid_argument("factor_cof_trivfib: endpoint mismatch");
    if (!anchors_commute(X, Y, f))
        throw std::invalid_argument("factor_cof_trivfib: map not over the derivations");

    CellularMap cm;
    cm.base = X;
    detail::GrowingFactor g(X, f, Y);

    // stage 1: hit every target generator
    int surj_top = j_cells_only ? bound : bound + 1;
    for (int k = j_cells_only ? 1 : 0; k <= surj_top; ++k) {
        size_t tr = Y.complex.rank(k);
        if (tr == 0)
            continue;
        GroebnerBasis image =
            GroebnerBasis::of(tr, Y.nvars(),
                              g.assemble(Y).component(k).columns());
        for (size_t j = 0; j < tr; ++j) {
            PolyVector target_gen = PolyVector::unit(tr, Y.nvars(), j);
            if (image.contains(target_gen))
                continue;
            CellAttachment cell;
            if (k == 0) {
                cell.kind = CellKind::EmptyToSphere0;
                cell.anchor_value = VectorField(Y.anchor.column(j));
                g.Z = attach_cell_pushout(g.Z, cell);
                g.at(0).push_back(target_gen);
            } else {
                cell.kind = CellKind::EmptyToDisc;
                cell.degree = static_cast<size_t>(k);
                g.Z = attach_cell_pushout(g.Z, cell);
                g.at(k - 1).push_back(Y.complex.differential(k).column(j));
                g.at(k).push_back(target_gen);
            }
            cm.attachments.push_back(cell);
        }
    }

    if (!j_cells_only) {
        // stage 2: make the cone of p acyclic, degree by degree
        for (int m = 1; m <= bound + 1; ++m) {
            int guard = 0;
            while (true) {
                if (++guard > 64)
                    throw std::logic_error("factorization did not stabilize at degree " +
                                           std::to_string(m));
                ChainMap p = g.assemble(Y);
                GradedComplex cone = mapping_cone(p);
                std::vector<PolyVector> cycles = cycle_generators(cone, m);
                PolyMatrix dnext = cone.differential(m + 1);
                GroebnerBasis image =
                    GroebnerBasis::of(cone.rank(m), Y.nvars(), dnext.columns());
                size_t ty = Y.complex.rank(m);
                bool clean = true;
                for (const auto& zc : cycles) {
                    if (image.contains(zc))
                        continue;
                    clean = false;
                    PolyVector y(ty, Y.nvars());
                    for (size_t r = 0; r < ty; ++r)
                        y[r] = zc[r];
                    PolyVector x(g.Z.complex.rank(m - 1), Y.nvars());
                    for (size_t r = 0; r < x.rank(); ++r)
                        x[r] = zc[ty + r];
                    CellAttachment cell;
                    cell.kind = CellKind::SphereToDisc;
                    cell.degree = static_cast<size_t>(m);
                    cell.attaching = x;
                    g.Z = attach_cell_pushout(g.Z, cell);
                    g.at(m).push_back(-y);
                    cm.attachments.push_back(cell);
                }
                if (clean)
                    break;
            }
        }
    }

    cm.result = g.Z;
    Factorization fac;
    fac.cellular = cm;
    fac.projection = g.assemble(Y);
    MorphismClassification mc = classify_morphism(g.Z, Y, fac.projection, bound);
    fac.cert = mc.cert;
    fac.cert.title = j_cells_only ? "factorization: acyclic cells then fibration"
                                  : "factorization: cells then trivial fibration";
    if (j_cells_only) {
        if (!mc.is_fibration)
            fac.cert.fail("projection is not a fibration");
        Certificate wi = is_quasi_iso(cm.inclusion(), bound);
        if (!wi.ok) {
            fac.cert.fail("acyclic-cell inclusion is not a weak equivalence");
            fac.cert.absorb(wi);
        }
    } else if (!mc.is_trivial_fibration) {
        fac.cert.fail("projection is not a trivial fibration at the stated bound");
    }
    // p . i = f must hold entrywise on the base
    ChainMap pi = compose(fac.projection, cm.inclusion());
    if (!(pi == f))
        fac.cert.fail("p . i differs from the factored map");
    return fac;
}

/// Cofibrant replacement: factor 0 -> X.
inline Factorization cofibrant_replacement(const AnchoredComplex& X, int bound)
{
    AnchoredComplex zero = AnchoredComplex::zero(X.nvars());
    ChainMap f = ChainMap::zero(zero.complex, X.complex);
    return factor_cof_trivfib(zero, X, f, bound);
}

/// Commutative square: i (cellular) on the left, p on the right.
struct LiftingProblem {
    CellularMap i;      // U -> Z
    AnchoredComplex Y;  // domain of p
    AnchoredComplex W;  // codomain of p
    ChainMap p;         // Y -> W
    ChainMap top;       // U -> Y
    ChainMap bottom;    // Z -> W
    bool p_is_trivial_fibration = true; // else: p fibration, i acyclic cells
};

struct LiftResult {
    std::optional<ChainMap> lift;
    Certificate cert{"lifting"};
};

namespace detail {

inline std::optional<PolyVector> solve_columns(const std::vector<PolyVector>& cols,
                                               size_t rows, size_t nvars,
                                               const PolyVector& rhs, bool reversed)
{
    std::vector<PolyVector> use = cols;
    if (reversed)
        std::reverse(use.begin(), use.end());
    GroebnerBasis gb = GroebnerBasis::of(rows, nvars, use);
    auto w = gb.witness(rhs);
    if (!w)
        return std::nullopt;
    if (!reversed)
        return w;
    PolyVector out(cols.size(), nvars);
    for (size_t j = 0; j < cols.size(); ++j)
        out[j] = (*w)[cols.size() - 1 - j];
    return out;
}

/// Stack p_n and d_n into one system: u with p_n u = b and d_n u = c.
inline std::optional<PolyVector> solve_stacked(const PolyMatrix& pn, const PolyMatrix& dn,
                                               const PolyVector& b, const PolyVector& c,
                                               bool reversed)
{
    size_t rows = pn.rows() + dn.rows();
    size_t nvars = pn.nvars();
    std::vector<PolyVector> cols;
    for (size_t j = 0; j < pn.cols(); ++j) {
        PolyVector col(rows, nvars);
        for (size_t r = 0; r < pn.rows(); ++r)
            col[r] = pn.at(r, j);
        for (size_t r = 0; r < dn.rows(); ++r)
            col[pn.rows() + r] = dn.at(r, j);
        cols.push_back(std::move(col));
    }
    PolyVector rhs(rows, nvars);
    for (size_t r = 0; r < b.rank(); ++r)
        rhs[r] = b[r];
    for (size_t r = 0; r < c.rank(); ++r)
        rhs[pn.rows() + r] = c[r];
    return solve_columns(cols, rows, nvars, rhs, reversed);
}

} // namespace detail

/// Solve the square cell by cell. Each attached generator contributes one
/// linear system over A; the division witness makes the lift deterministic.
/// `alternate` permutes the order of independent same-degree disc cells and
/// reverses the unknown order inside each solve, producing a second
/// deterministic lift for uniqueness-up-to-homotopy experiments.
inline LiftResult solve_lifting(const LiftingProblem& prob, bool alternate = false)
{
    LiftResult res;
    const AnchoredComplex& Z = prob.i.result;
    const AnchoredComplex& Y = prob.Y;
    size_t nvars = Z.nvars();

    if (!(compose(prob.p, prob.top) == compose(prob.bottom, prob.i.inclusion())))
        throw std::invalid_argument("solve_lifting: square does not commute");

    // lift columns per degree; base part is the top map
    std::vector<std::vector<PolyVector>> hcols(
        static_cast<size_t>(std::max(Z.complex.top_degree(), 0)) + 1);
    for (int d = 0; d <= Z.complex.top_degree(); ++d) {
        hcols[static_cast<size_t>(d)].resize(Z.complex.rank(d),
                                             PolyVector(Y.complex.rank(d), nvars));
        for (size_t j = 0; j < prob.i.base.complex.rank(d); ++j)
            hcols[static_cast<size_t>(d)][j] = prob.top.component(d).column(j);
    }

    auto h_apply = [&](int degree, const PolyVector& v) {
        PolyVector out(Y.complex.rank(degree), nvars);
        for (size_t j = 0; j < v.rank(); ++j)
            if (!v[j].is_zero())
                out += hcols[static_cast<size_t>(degree)][j] * v[j];
        return out;
    };

    // processing order: optionally reverse runs of same-degree disc cells
    std::vector<size_t> order(prob.i.attachments.size());
    for (size_t k = 0; k < order.size(); ++k)
        order[k] = k;
    if (alternate) {
        size_t k = 0;
        while (k < order.size()) {
            size_t e = k;
            const auto& a = prob.i.attachments[k];
            while (e < order.size() && prob.i.attachments[e].kind == CellKind::SphereToDisc &&
                   a.kind == CellKind::SphereToDisc &&
                   prob.i.attachments[e].degree == a.degree)
                ++e;
            if (e > k + 1)
                std::reverse(order.begin() + static_cast<long>(k),
                             order.begin() + static_cast<long>(e));
            k = std::max(e, k + 1);
        }
    }

    for (size_t oi : order) {
        const CellAttachment& cell = prob.i.attachments[oi];
        switch (cell.kind) {
        case CellKind::EmptyToSphere0: {
            auto [deg, idx] = cell.created[0];
            PolyVector b = prob.bottom.component(0).column(idx);
            auto u = detail::solve_columns(prob.p.component(0).columns(),
                                           prob.W.complex.rank(0), nvars, b, alternate);
            if (!u) {
                res.cert.fail("no preimage for sphere0 cell generator " + std::to_string(idx));
                return res;
            }
            hcols[0][idx] = *u;
            break;
        }
        case CellKind::EmptyToDisc: {
            auto [dlow, ilow] = cell.created[0];
            auto [dhi, ihi] = cell.created[1];
            PolyVector b = prob.bottom.component(dhi).column(ihi);
            auto u = detail::solve_columns(prob.p.component(dhi).columns(),
                                           prob.W.complex.rank(dhi), nvars, b, alternate);
            if (!u) {
                res.cert.fail("no preimage for disc cell generator at degree " +
                              std::to_string(dhi));
                return res;
            }
            hcols[static_cast<size_t>(dhi)][ihi] = *u;
            hcols[static_cast<size_t>(dlow)][ilow] = Y.complex.differential(dhi).apply(*u);
            break;
        }
        case CellKind::SphereToDisc: {
            auto [deg, idx] = cell.created[0];
            // pad the recorded cycle to the final rank of degree deg-1
            PolyVector z(Z.complex.rank(deg - 1), nvars);
            for (size_t r = 0; r < cell.attaching.rank(); ++r)
                z[r] = cell.attaching[r];
            PolyVector c = h_apply(deg - 1, z);
            PolyVector b = prob.bottom.component(deg).column(idx);
            auto u = detail::solve_stacked(prob.p.component(deg), Y.complex.differential(deg),
                                           b, c, alternate);
            if (!u) {
                res.cert.fail("no compatible preimage for degree-" + std::to_string(deg) +
                              " attachment along " + polyvector_to_string(z));
                return res;
            }
            hcols[static_cast<size_t>(deg)][idx] = *u;
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
    ChainMap h(Z.complex, Y.complex, std::move(comps));

    // re-verify the two commutation identities and chain-map property
    Certificate cm = h.validate();
    if (!cm.ok) {
        res.cert.fail("constructed lift is not a chain map");
        res.cert.absorb(cm);
        return res;
    }
    if (!(compose(h, prob.i.inclusion()) == prob.top))
        res.cert.fail("lift does not restrict to the top map");
    if (!(compose(prob.p, h) == prob.bottom))
        res.cert.fail("p . lift differs from the bottom map");
    if (res.cert.ok)
        res.lift = h;
    return res;
}

/// Lift f : X -> Y through trivial fibrations pX : QX -> X, pY : QY -> Y.
/// Produces the primary lift, a second independently generated lift, and a
/// homotopy between them (uniqueness of the lift up to left homotopy).
struct ReplacementLift {
    ChainMap lift;          // fhat : QX -> QY
    ChainMap second_lift;   // alternate deterministic choice
    std::optional<ChainHomotopy> uniqueness; // lift ~ second_lift
    Certificate cert{"lift between replacements"};
};

inline ReplacementLift lift_between_replacements(const CellularMap& QX, const ChainMap& pX,
                                                 const AnchoredComplex& X,
                                                 const CellularMap& QY, const ChainMap& pY,
                                                 const AnchoredComplex& Y, const ChainMap& f)
{
    ReplacementLift out;
    if (!(pX.source == QX.result.complex) || !(pX.target == X.complex) ||
        !(pY.source == QY.result.complex) || !(pY.target == Y.complex))
        throw std::invalid_argument("lift_between_replacements: endpoint mismatch");
    LiftingProblem prob;
    prob.i = QX;
    prob.Y = QY.result;
    prob.W = Y;
    prob.p = pY;
    prob.top = ChainMap::zero(QX.base.complex, QY.result.complex);
    prob.bottom = compose(f, pX);
    LiftResult first = solve_lifting(prob, false);
    LiftResult second = solve_lifting(prob, true);
    if (!first.lift || !second.lift) {
        out.cert.fail("lift construction failed");
        out.cert.absorb(first.cert);
        out.cert.absorb(second.cert);
        return out;
    }
    out.lift = *first.lift;
    out.second_lift = *second.lift;
    int bound = QX.result.complex.top_degree();
    out.uniqueness = solve_left_homotopy(out.lift, out.second_lift, bound);
    if (!out.uniqueness)
        out.cert.fail("no homotopy between the two lifts");
    else {
        Certificate v = verify_homotopy(*out.uniqueness);
        if (!v.ok)
            out.cert.absorb(v);
        else
            out.cert.note("two deterministic lifts are homotopic; witness verified");
    }
    return out;
}

/// Composition with a trivial fibration p : Y -> W is a bijection on
/// homotopy classes of maps out of a cofibrant A: every sample map lifts,
/// and homotopic samples have homotopic lifts.
inline Certificate pi_l_bijection_check(const CellularMap& A, const AnchoredComplex& Y,
                                        const AnchoredComplex& W, const ChainMap& p,
                                        const std::vector<ChainMap>& samples)
{
    Certificate cert("pi^l bijection under composition with a trivial fibration");
    int bound = A.result.complex.top_degree();
    std::vector<ChainMap> lifts;
    for (size_t k = 0; k < samples.size(); ++k) {
        LiftingProblem prob;
        prob.i = A;
        prob.Y = Y;
        prob.W = W;
        prob.p = p;
        prob.top = ChainMap::zero(A.base.complex, Y.complex);
        prob.bottom = samples[k];
        LiftResult r = solve_lifting(prob);
        if (!r.lift) {
            cert.fail("sample " + std::to_string(k) + " does not lift");
            cert.absorb(r.cert);
            return cert;
        }
        lifts.push_back(*r.lift);
    }
    cert.note("all " + std::to_string(samples.size()) + " samples lift (surjectivity)");
    for (size_t a = 0; a < samples.size(); ++a)
        for (size_t b = a + 1; b < samples.size(); ++b) {
            auto down = solve_left_homotopy(samples[a], samples[b], bound);
            if (!down)
                continue;
            auto up = solve_left_homotopy(lifts[a], lifts[b], bound);
            if (!up) {
                cert.fail("samples " + std::to_string(a) + "," + std::to_string(b) +
                          " homotopic below but their lifts are not");
                continue;
            }
            Certificate v = verify_homotopy(*up);
            if (!v.ok)
                cert.absorb(v);
        }
    if (cert.ok)
        cert.note("homotopic samples have homotopic lifts (injectivity)");
    return cert;
}

} // namespace qfol
