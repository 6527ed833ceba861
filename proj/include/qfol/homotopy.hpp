#pragma once

#include "qfol/complex.hpp"

namespace qfol {

/// Chain homotopy witness for a recorded pair of maps: f - g = dh + hd in
/// degrees <= bound. On degreewise-free complexes this is the same notion as
/// left homotopy through the standard cylinder; the solver works with the
/// chain form directly.
struct ChainHomotopy {
    ChainMap from; // f
    ChainMap to;   // g
    std::vector<PolyMatrix> comps; // h_i : source_i -> target_{i+1}, i = 0..bound
    int bound = -1;

    PolyMatrix component(int i) const
    {
        if (i >= 0 && i < static_cast<int>(comps.size()))
            return comps[static_cast<size_t>(i)];
        return PolyMatrix(from.target.rank(i + 1), from.source.rank(i), from.source.nvars());
    }
};

inline Certificate verify_homotopy(const ChainHomotopy& h)
{
    Certificate cert("chain homotopy identity up to degree " + std::to_string(h.bound));
    if (!(h.from.source == h.to.source) || !(h.from.target == h.to.target)) {
        cert.fail("recorded maps do not share endpoints");
        return cert;
    }
    const GradedComplex& X = h.from.source;
    const GradedComplex& Y = h.from.target;
    for (int i = 0; i <= h.bound; ++i) {
        PolyMatrix lhs = h.from.component(i) - h.to.component(i);
        PolyMatrix rhs = Y.differential(i + 1) * h.component(i) +
                         h.component(i - 1) * X.differential(i);
        if (lhs != rhs)
            cert.fail("identity fails at degree " + std::to_string(i));
    }
    return cert;
}

/// Solve f - g = dh + hd degreewise from degree 0 upward; each degree picks
/// the deterministic division witness. Absent when some degree is infeasible
/// for the previously chosen lower components.
inline std::optional<ChainHomotopy> solve_left_homotopy(const ChainMap& f,
                                                        const ChainMap& g, int bound)
{
    if (!(f.source == g.source) || !(f.target == g.target))
        throw std::invalid_argument("solve_left_homotopy: endpoint mismatch");
    const GradedComplex& X = f.source;
    const GradedComplex& Y = f.target;
    size_t nvars = X.nvars();
    ChainHomotopy h{f, g, {}, bound};
    for (int i = 0; i <= bound; ++i) {
        PolyMatrix residue = (f.component(i) - g.component(i)) -
                             h.component(i - 1) * X.differential(i);
        PolyMatrix dY = Y.differential(i + 1);
        GroebnerBasis image = GroebnerBasis::of(Y.rank(i), nvars, dY.columns());
        PolyMatrix hi(Y.rank(i + 1), X.rank(i), nvars);
        for (size_t j = 0; j < X.rank(i); ++j) {
            auto w = image.witness(residue.column(j));
            if (!w)
                return std::nullopt;
            hi.set_column(j, *w);
        }
        h.comps.push_back(std::move(hi));
    }
    return h;
}

/// h1 witnesses f ~ g and h2 witnesses g ~ k; their sum witnesses f ~ k.
inline ChainHomotopy compose_homotopies(const ChainHomotopy& h1, const ChainHomotopy& h2)
{
    if (!(h1.to == h2.from))
        throw std::invalid_argument("compose_homotopies: middle maps differ");
    ChainHomotopy r{h1.from, h2.to, {}, std::min(h1.bound, h2.bound)};
    for (int i = 0; i <= r.bound; ++i)
        r.comps.push_back(h1.component(i) + h2.component(i));
    return r;
}

inline ChainHomotopy reverse_homotopy(const ChainHomotopy& h)
{
    ChainHomotopy r{h.to, h.from, {}, h.bound};
    for (int i = 0; i <= h.bound; ++i)
        r.comps.push_back(-h.component(i));
    return r;
}

/// Cyl(X)_n = X_n + X_(n-1) + X_n with d(x, s, y) = (dx + s, -ds, dy - s),
/// outer inclusions i0, i1 and the collapse (x, s, y) -> x + y.
struct CylinderObject {
    GradedComplex cyl;
    ChainMap i0;
    ChainMap i1;
    ChainMap proj;
};

inline CylinderObject cylinder_object(const GradedComplex& X)
{
    size_t nvars = X.nvars();
    int top = X.top_degree() + 1;
    if (top < 0)
        top = 0;
    std::vector<size_t> ranks;
    for (int n = 0; n <= top; ++n)
        ranks.push_back(X.rank(n) + X.rank(n - 1) + X.rank(n));
    std::vector<PolyMatrix> diffs;
    for (int n = 1; n <= top; ++n) {
        PolyMatrix d(ranks[n - 1], ranks[n], nvars);
        PolyMatrix dn = X.differential(n);
        PolyMatrix dn1 = X.differential(n - 1);
        size_t rn = X.rank(n), rn1 = X.rank(n - 1);
        size_t rn2 = X.rank(n - 2);
        // row blocks: (X_{n-1}, X_{n-2}, X_{n-1}); col blocks: (X_n, X_{n-1}, X_n)
        for (size_t i = 0; i < rn1; ++i) {
            for (size_t j = 0; j < rn; ++j) {
                d.at(i, j) = dn.at(i, j);
                d.at(rn1 + rn2 + i, rn + rn1 + j) = dn.at(i, j);
            }
            d.at(i, rn + i) = Poly::constant(nvars, 1);
            d.at(rn1 + rn2 + i, rn + i) = -Poly::constant(nvars, 1);
        }
        for (size_t i = 0; i < rn2; ++i)
            for (size_t j = 0; j < rn1; ++j)
                d.at(rn1 + i, rn + j) = -dn1.at(i, j);
        diffs.push_back(std::move(d));
    }
    GradedComplex cyl = GradedComplex::build(nvars, std::move(ranks), std::move(diffs));

    std::vector<PolyMatrix> c0, c1, cp;
    for (int n = 0; n <= X.top_degree(); ++n) {
        size_t rn = X.rank(n), rn1 = X.rank(n - 1);
        PolyMatrix m0(cyl.rank(n), rn, nvars), m1(cyl.rank(n), rn, nvars);
        for (size_t j = 0; j < rn; ++j) {
            m0.at(j, j) = Poly::constant(nvars, 1);
            m1.at(rn + rn1 + j, j) = Poly::constant(nvars, 1);
        }
        c0.push_back(std::move(m0));
        c1.push_back(std::move(m1));
    }
    for (int n = 0; n <= cyl.top_degree(); ++n) {
        size_t rn = X.rank(n), rn1 = X.rank(n - 1);
        PolyMatrix pm(X.rank(n), cyl.rank(n), nvars);
        for (size_t j = 0; j < rn; ++j) {
            pm.at(j, j) = Poly::constant(nvars, 1);
            pm.at(j, rn + rn1 + j) = Poly::constant(nvars, 1);
        }
        cp.push_back(std::move(pm));
    }
    ChainMap i0(X, cyl, std::move(c0));
    ChainMap i1(X, cyl, std::move(c1));
    ChainMap proj(cyl, X, std::move(cp));
    return {std::move(cyl), std::move(i0), std::move(i1), std::move(proj)};
}

/// Path(X)_n = X_n + X_n + X_(n+1) with d(x, y, s) = (dx, dy, x - y - ds)
/// in positive degrees. In degree 0 that formula would double H_0, so the
/// degree-0 part is the good truncation: the cycles {x - y - ds = 0}, a free
/// module isomorphic to X_0 + X_1 via (x, s) -> (x, x - ds, s). Diagonal
/// inclusion; the evaluations p0, p1 read off the two legs.
struct PathObject {
    GradedComplex path;
    ChainMap incl;
    ChainMap p0;
    ChainMap p1;
};

inline PathObject path_object(const GradedComplex& X)
{
    size_t nvars = X.nvars();
    int top = X.top_degree();
    if (top < 0)
        top = 0;
    size_t r0 = X.rank(0), r1 = X.rank(1);
    std::vector<size_t> ranks;
    ranks.push_back(r0 + r1);
    for (int n = 1; n <= top; ++n)
        ranks.push_back(X.rank(n) + X.rank(n) + X.rank(n + 1));
    std::vector<PolyMatrix> diffs;
    for (int n = 1; n <= top; ++n) {
        PolyMatrix d(ranks[n - 1], ranks[n], nvars);
        PolyMatrix dn = X.differential(n);
        PolyMatrix dn1 = X.differential(n + 1);
        size_t rn = X.rank(n), rn1 = X.rank(n - 1), rp = X.rank(n + 1);
        if (n == 1) {
            // (x1, y1, s1) -> (dx1, x1 - y1 - ds1) in the (x, s) coordinates
            for (size_t i = 0; i < r0; ++i)
                for (size_t j = 0; j < rn; ++j)
                    d.at(i, j) = dn.at(i, j);
            for (size_t i = 0; i < rn; ++i) {
                d.at(r0 + i, i) = Poly::constant(nvars, 1);
                d.at(r0 + i, rn + i) = -Poly::constant(nvars, 1);
            }
            for (size_t i = 0; i < rn; ++i)
                for (size_t j = 0; j < rp; ++j)
                    d.at(r0 + i, rn + rn + j) = -dn1.at(i, j);
        } else {
            // row blocks: (X_{n-1}, X_{n-1}, X_n); col blocks: (X_n, X_n, X_{n+1})
            for (size_t i = 0; i < rn1; ++i)
                for (size_t j = 0; j < rn; ++j) {
                    d.at(i, j) = dn.at(i, j);
                    d.at(rn1 + i, rn + j) = dn.at(i, j);
                }
            for (size_t i = 0; i < rn; ++i) {
                d.at(rn1 + rn1 + i, i) = Poly::constant(nvars, 1);
                d.at(rn1 + rn1 + i, rn + i) = -Poly::constant(nvars, 1);
            }
            for (size_t i = 0; i < rn; ++i)
                for (size_t j = 0; j < rp; ++j)
                    d.at(rn1 + rn1 + i, rn + rn + j) = -dn1.at(i, j);
        }
        diffs.push_back(std::move(d));
    }
    GradedComplex path = GradedComplex::build(nvars, std::move(ranks), std::move(diffs));

    std::vector<PolyMatrix> ci, c0, c1;
    for (int n = 0; n <= X.top_degree(); ++n) {
        size_t rn = X.rank(n);
        PolyMatrix mi(path.rank(n), rn, nvars);
        for (size_t j = 0; j < rn; ++j) {
            mi.at(j, j) = Poly::constant(nvars, 1);
            if (n >= 1)
                mi.at(rn + j, j) = Poly::constant(nvars, 1);
        }
        ci.push_back(std::move(mi));
    }
    for (int n = 0; n <= path.top_degree(); ++n) {
        size_t rn = X.rank(n);
        PolyMatrix m0(rn, path.rank(n), nvars), m1(rn, path.rank(n), nvars);
        for (size_t j = 0; j < rn; ++j)
            m0.at(j, j) = Poly::constant(nvars, 1);
        if (n == 0) {
            PolyMatrix d1 = X.differential(1);
            for (size_t j = 0; j < rn; ++j)
                m1.at(j, j) = Poly::constant(nvars, 1);
            for (size_t i = 0; i < rn; ++i)
                for (size_t j = 0; j < r1; ++j)
                    m1.at(i, r0 + j) = -d1.at(i, j);
        } else {
            for (size_t j = 0; j < rn; ++j)
                m1.at(j, rn + j) = Poly::constant(nvars, 1);
        }
        c0.push_back(std::move(m0));
        c1.push_back(std::move(m1));
    }
    ChainMap incl(X, path, std::move(ci));
    ChainMap p0(path, X, std::move(c0));
    ChainMap p1(path, X, std::move(c1));
    return {std::move(path), std::move(incl), std::move(p0), std::move(p1)};
}

} // namespace qfol
