#pragma once

#include "qfol/complex.hpp"

namespace qfol {

/// Generating cells of the projective structure on anchored complexes:
/// sphere-to-disc inclusions S(n-1) -> D(n), the acyclic discs 0 -> D(n),
/// and the degree-0 sphere 0 -> S(0) that creates anchored generators.
enum class CellKind { SphereToDisc, EmptyToDisc, EmptyToSphere0 };

inline const char* cell_kind_name(CellKind k)
{
    switch (k) {
    case CellKind::SphereToDisc: return "disc";
    case CellKind::EmptyToDisc: return "free-disc";
    case CellKind::EmptyToSphere0: return "sphere0";
    }
    return "?";
}

struct CellAttachment {
    CellKind kind = CellKind::EmptyToSphere0;
    size_t degree = 0;        // n for disc kinds (n >= 1); 0 for sphere0
    PolyVector attaching;     // sphere-to-disc: cycle z in degree n-1, in the
                              // coordinates of the complex at attachment time
    VectorField anchor_value; // sphere0 only

    // filled in by attach_cell_pushout: (degree, index) of created generators
    std::vector<std::pair<int, size_t>> created;
};

namespace detail {

/// Append one free generator in `degree` with boundary `dimage` (expressed in
/// the old degree-1-lower basis) and, in degree 0, the given anchor column.
inline AnchoredComplex add_generator(const AnchoredComplex& X, int degree,
                                     const PolyVector& dimage,
                                     const VectorField* anchor, size_t& new_index)
{
    size_t nvars = X.nvars();
    int top = std::max(X.complex.top_degree(), degree);
    std::vector<size_t> ranks;
    for (int i = 0; i <= top; ++i)
        ranks.push_back(X.complex.rank(i) + (i == degree ? 1 : 0));
    new_index = X.complex.rank(degree);
    std::vector<PolyMatrix> diffs;
    for (int i = 1; i <= top; ++i) {
        PolyMatrix d(ranks[i - 1], ranks[i], nvars);
        PolyMatrix old = X.complex.differential(i);
        for (size_t r = 0; r < old.rows(); ++r)
            for (size_t c = 0; c < old.cols(); ++c)
                d.at(r, c) = old.at(r, c);
        if (i == degree)
            for (size_t r = 0; r < dimage.rank(); ++r)
                d.at(r, ranks[i] - 1) = dimage[r];
        diffs.push_back(std::move(d));
    }
    PolyMatrix rho(nvars, ranks[0], nvars);
    for (size_t r = 0; r < X.anchor.rows(); ++r)
        for (size_t c = 0; c < X.anchor.cols(); ++c)
            rho.at(r, c) = X.anchor.at(r, c);
    if (degree == 0 && anchor)
        for (size_t r = 0; r < nvars; ++r)
            rho.at(r, ranks[0] - 1) = anchor->components[r];
    return AnchoredComplex(GradedComplex::build(nvars, std::move(ranks), std::move(diffs)),
                           std::move(rho));
}

} // namespace detail

/// Pushout of a generating cell along its attaching data. Rejects non-cycles
/// and degree-1 attachments whose boundary carries a nonzero anchor.
inline AnchoredComplex attach_cell_pushout(const AnchoredComplex& X, CellAttachment& cell)
{
    size_t nvars = X.nvars();
    cell.created.clear();
    switch (cell.kind) {
    case CellKind::EmptyToSphere0: {
        size_t idx;
        AnchoredComplex r = detail::add_generator(X, 0, PolyVector(0, nvars),
                                                  &cell.anchor_value, idx);
        cell.created.push_back({0, idx});
        return r;
    }
    case CellKind::EmptyToDisc: {
        int n = static_cast<int>(cell.degree);
        if (n < 1)
            throw std::invalid_argument("disc cell needs degree >= 1");
        size_t low_idx;
        VectorField zero_anchor = VectorField::zero(nvars);
        AnchoredComplex mid = detail::add_generator(X, n - 1, PolyVector(X.complex.rank(n - 2), nvars),
                                                    &zero_anchor, low_idx);
        PolyVector dimage(mid.complex.rank(n - 1), nvars);
        dimage[low_idx] = Poly::constant(nvars, 1);
        size_t top_idx;
        AnchoredComplex r = detail::add_generator(mid, n, dimage, nullptr, top_idx);
        cell.created.push_back({n - 1, low_idx});
        cell.created.push_back({n, top_idx});
        return r;
    }
    case CellKind::SphereToDisc: {
        int n = static_cast<int>(cell.degree);
        if (n < 1)
            throw std::invalid_argument("disc cell needs degree >= 1");
        if (cell.attaching.rank() != X.complex.rank(n - 1))
            throw std::invalid_argument("attaching cycle has wrong rank");
        PolyVector bd = X.complex.differential(n - 1).apply(cell.attaching);
        if (!bd.is_zero())
            throw std::invalid_argument("attaching element is not a cycle: d(z) = " +
                                        polyvector_to_string(bd));
        if (n == 1) {
            PolyVector rz = X.anchor.apply(cell.attaching);
            if (!rz.is_zero())
                throw std::invalid_argument("degree-1 attachment needs anchor-zero cycle, "
                                            "got rho(z) = " +
                                            polyvector_to_string(rz));
        }
        size_t idx;
        AnchoredComplex r = detail::add_generator(X, n, cell.attaching, nullptr, idx);
        cell.created.push_back({n, idx});
        return r;
    }
    }
    throw std::logic_error("unknown cell kind");
}

/// A relative cell complex: base, ordered attachments, result. The inclusion
/// is the coordinate embedding (new generators are appended per degree).
struct CellularMap {
    AnchoredComplex base;
    std::vector<CellAttachment> attachments;
    AnchoredComplex result;

    static CellularMap trivial(const AnchoredComplex& X) { return {X, {}, X}; }

    ChainMap inclusion() const
    {
        std::vector<PolyMatrix> comps;
        for (int i = 0; i <= base.complex.top_degree(); ++i) {
            PolyMatrix m(result.complex.rank(i), base.complex.rank(i), base.nvars());
            for (size_t j = 0; j < base.complex.rank(i); ++j)
                m.at(j, j) = Poly::constant(base.nvars(), 1);
            comps.push_back(std::move(m));
        }
        return ChainMap(base.complex, result.complex, std::move(comps));
    }

    /// Structural re-check: replaying the attachments from the base yields
    /// the recorded result, and every intermediate pushout validates.
    Certificate verify() const
    {
        Certificate cert("cellular witness replay");
        AnchoredComplex cur = base;
        for (const auto& a : attachments) {
            CellAttachment copy = a;
            try {
                cur = attach_cell_pushout(cur, copy);
            } catch (const std::exception& e) {
                cert.fail(std::string("attachment rejected on replay: ") + e.what());
                return cert;
            }
            if (copy.created != a.created) {
                cert.fail("attachment created unexpected generator slots");
                return cert;
            }
        }
        if (!(cur == result))
            cert.fail("replayed result differs from recorded result");
        cert.absorb(result.validate());
        return cert;
    }
};

} // namespace qfol
