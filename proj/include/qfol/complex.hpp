#pragma once

#include "qfol/certificate.hpp"
#include "qfol/groebner.hpp"
#include "qfol/textio.hpp"

namespace qfol {

/// Non-negatively graded chain complex of free A-modules with an explicit
/// degree bound: ranks r_0..r_D and differentials d_i : A^{r_i} -> A^{r_i-1}.
/// Ranks outside the recorded range are zero. All statements about a complex
/// are statements up to its recorded bound.
class GradedComplex {
public:
    GradedComplex() = default;
    explicit GradedComplex(size_t nvars) : nvars_(nvars) {}

    /// diffs lists d_1..d_D in order (empty when D <= 0).
    static GradedComplex build(size_t nvars, std::vector<size_t> ranks,
                               std::vector<PolyMatrix> diffs)
    {
        GradedComplex c(nvars);
        c.ranks_ = std::move(ranks);
        size_t expected = c.ranks_.size() > 1 ? c.ranks_.size() - 1 : 0;
        if (diffs.size() != expected)
            throw std::invalid_argument("differential count does not match ranks");
        for (size_t i = 0; i < diffs.size(); ++i) {
            if (diffs[i].rows() != c.ranks_[i] || diffs[i].cols() != c.ranks_[i + 1])
                throw std::invalid_argument("differential shape mismatch at degree " +
                                            std::to_string(i + 1));
            if (diffs[i].nvars() != nvars)
                throw std::invalid_argument("differential over wrong ring");
        }
        c.diffs_ = std::move(diffs);
        return c;
    }

    static GradedComplex zero(size_t nvars) { return GradedComplex(nvars); }

    /// Sphere S(n): rank one in degree n, trivial differentials.
    static GradedComplex sphere(size_t nvars, size_t n)
    {
        std::vector<size_t> ranks(n + 1, 0);
        ranks[n] = 1;
        std::vector<PolyMatrix> diffs;
        for (size_t i = 1; i <= n; ++i)
            diffs.emplace_back(ranks[i - 1], ranks[i], nvars);
        return build(nvars, std::move(ranks), std::move(diffs));
    }

    /// Disc D(n), n >= 1: identity differential from degree n to n-1.
    static GradedComplex disc(size_t nvars, size_t n)
    {
        if (n < 1)
            throw std::invalid_argument("disc requires degree >= 1");
        std::vector<size_t> ranks(n + 1, 0);
        ranks[n] = ranks[n - 1] = 1;
        std::vector<PolyMatrix> diffs;
        for (size_t i = 1; i <= n; ++i) {
            PolyMatrix d(ranks[i - 1], ranks[i], nvars);
            if (i == n)
                d.at(0, 0) = Poly::constant(nvars, 1);
            diffs.push_back(std::move(d));
        }
        return build(nvars, std::move(ranks), std::move(diffs));
    }

    size_t nvars() const { return nvars_; }
    int top_degree() const { return static_cast<int>(ranks_.size()) - 1; }

    size_t rank(int i) const
    {
        if (i < 0 || i > top_degree())
            return 0;
        return ranks_[static_cast<size_t>(i)];
    }

    size_t total_rank() const
    {
        size_t r = 0;
        for (size_t x : ranks_)
            r += x;
        return r;
    }

    const std::vector<size_t>& ranks() const { return ranks_; }

    PolyMatrix differential(int i) const
    {
        if (i >= 1 && i <= top_degree())
            return diffs_[static_cast<size_t>(i) - 1];
        return PolyMatrix(rank(i - 1), rank(i), nvars_);
    }

    bool operator==(const GradedComplex& o) const
    {
        return nvars_ == o.nvars_ && ranks_ == o.ranks_ && diffs_ == o.diffs_;
    }
    bool operator!=(const GradedComplex& o) const { return !(*this == o); }

private:
    size_t nvars_ = 0;
    std::vector<size_t> ranks_;
    std::vector<PolyMatrix> diffs_;
};

/// d^2 = 0 in every degree; a failure names the first bad degree and entry.
inline Certificate validate_complex(const GradedComplex& c)
{
    Certificate cert("complex d^2 = 0");
    for (int i = 2; i <= c.top_degree(); ++i) {
        PolyMatrix comp = c.differential(i - 1) * c.differential(i);
        if (comp.is_zero())
            continue;
        for (size_t r = 0; r < comp.rows(); ++r)
            for (size_t s = 0; s < comp.cols(); ++s)
                if (!comp.at(r, s).is_zero()) {
                    cert.fail("d_" + std::to_string(i - 1) + " d_" + std::to_string(i) +
                              " has entry (" + std::to_string(r) + "," + std::to_string(s) +
                              ") = " + poly_to_string(comp.at(r, s)));
                    return cert;
                }
    }
    return cert;
}

/// Degree-preserving map of complexes; components stored for the degrees
/// where the source lives.
struct ChainMap {
    GradedComplex source;
    GradedComplex target;
    std::vector<PolyMatrix> comps; // degree 0..source.top_degree()

    ChainMap() = default;
    ChainMap(GradedComplex src, GradedComplex tgt, std::vector<PolyMatrix> components)
        : source(std::move(src)), target(std::move(tgt)), comps(std::move(components))
    {
        if (static_cast<int>(comps.size()) != source.top_degree() + 1)
            throw std::invalid_argument("chain map needs one component per source degree");
        for (int i = 0; i <= source.top_degree(); ++i) {
            const auto& m = comps[static_cast<size_t>(i)];
            if (m.rows() != target.rank(i) || m.cols() != source.rank(i))
                throw std::invalid_argument("chain map component shape mismatch at degree " +
                                            std::to_string(i));
        }
    }

    static ChainMap zero(const GradedComplex& src, const GradedComplex& tgt)
    {
        std::vector<PolyMatrix> cs;
        for (int i = 0; i <= src.top_degree(); ++i)
            cs.emplace_back(tgt.rank(i), src.rank(i), src.nvars());
        return ChainMap(src, tgt, std::move(cs));
    }

    static ChainMap identity(const GradedComplex& c)
    {
        std::vector<PolyMatrix> cs;
        for (int i = 0; i <= c.top_degree(); ++i) {
            PolyMatrix m(c.rank(i), c.rank(i), c.nvars());
            for (size_t j = 0; j < c.rank(i); ++j)
                m.at(j, j) = Poly::constant(c.nvars(), 1);
            cs.push_back(std::move(m));
        }
        return ChainMap(c, c, std::move(cs));
    }

    PolyMatrix component(int i) const
    {
        if (i >= 0 && i < static_cast<int>(comps.size()))
            return comps[static_cast<size_t>(i)];
        return PolyMatrix(target.rank(i), source.rank(i), source.nvars());
    }

    Certificate validate() const
    {
        Certificate cert("chain map commutes with differentials");
        for (int i = 1; i <= source.top_degree(); ++i) {
            PolyMatrix lhs = target.differential(i) * component(i);
            PolyMatrix rhs = component(i - 1) * source.differential(i);
            if (lhs != rhs)
                cert.fail("at degree " + std::to_string(i));
        }
        return cert;
    }

    bool operator==(const ChainMap& o) const
    {
        if (source != o.source || target != o.target)
            return false;
        int top = source.top_degree();
        for (int i = 0; i <= top; ++i)
            if (component(i) != o.component(i))
                return false;
        return true;
    }
};

inline ChainMap compose(const ChainMap& g, const ChainMap& f)
{
    if (f.target != g.source)
        throw std::invalid_argument("compose: inner complexes differ");
    std::vector<PolyMatrix> cs;
    for (int i = 0; i <= f.source.top_degree(); ++i)
        cs.push_back(g.component(i) * f.component(i));
    return ChainMap(f.source, g.target, std::move(cs));
}

inline ChainMap map_sum(const ChainMap& f, const ChainMap& g)
{
    if (f.source != g.source || f.target != g.target)
        throw std::invalid_argument("map_sum: endpoint mismatch");
    std::vector<PolyMatrix> cs;
    for (int i = 0; i <= f.source.top_degree(); ++i)
        cs.push_back(f.component(i) + g.component(i));
    return ChainMap(f.source, f.target, std::move(cs));
}

inline ChainMap map_difference(const ChainMap& f, const ChainMap& g)
{
    if (f.source != g.source || f.target != g.target)
        throw std::invalid_argument("map_difference: endpoint mismatch");
    std::vector<PolyMatrix> cs;
    for (int i = 0; i <= f.source.top_degree(); ++i)
        cs.push_back(f.component(i) - g.component(i));
    return ChainMap(f.source, f.target, std::move(cs));
}

/// Complex with a degree-0 map to the derivation module T_A = A^n.
/// The anchor must kill boundaries: rho . d_1 = 0.
struct AnchoredComplex {
    GradedComplex complex;
    PolyMatrix anchor; // nvars x rank(0)

    AnchoredComplex() = default;
    AnchoredComplex(GradedComplex c, PolyMatrix rho)
        : complex(std::move(c)), anchor(std::move(rho))
    {
        if (anchor.rows() != complex.nvars() || anchor.cols() != complex.rank(0))
            throw std::invalid_argument("anchor shape mismatch");
    }

    static AnchoredComplex zero(size_t nvars)
    {
        return AnchoredComplex(GradedComplex::zero(nvars), PolyMatrix(nvars, 0, nvars));
    }

    size_t nvars() const { return complex.nvars(); }

    VectorField anchor_of(const PolyVector& degree0_elem) const
    {
        return VectorField(anchor.apply(degree0_elem));
    }

    Certificate validate() const
    {
        Certificate cert("anchored complex");
        cert.absorb(validate_complex(complex));
        PolyMatrix rd = anchor * complex.differential(1);
        if (!rd.is_zero())
            cert.fail("anchor does not vanish on boundaries: rho*d1 = " +
                      polymatrix_to_string(rd));
        return cert;
    }

    bool operator==(const AnchoredComplex& o) const
    {
        return complex == o.complex && anchor == o.anchor;
    }
};

/// Generators of the degree-i cycles: the syzygies of the columns of d_i.
/// In degree 0 every element is a cycle.
inline std::vector<PolyVector> cycle_generators(const GradedComplex& c, int i)
{
    if (i == 0) {
        std::vector<PolyVector> units;
        for (size_t j = 0; j < c.rank(0); ++j)
            units.push_back(PolyVector::unit(c.rank(0), c.nvars(), j));
        return units;
    }
    PolyMatrix d = c.differential(i);
    if (d.cols() == 0)
        return {};
    return syzygy_basis(d.rows(), c.nvars(), d.columns());
}

/// ker d_i = im d_(i+1) for every degree in [lo, hi]. Negative certificates
/// carry witness cycles that are not boundaries.
inline Certificate exactness_certificate(const GradedComplex& c, int lo, int hi)
{
    Certificate cert("exactness in degrees [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + "]");
    for (int i = lo; i <= hi; ++i) {
        std::vector<PolyVector> cycles = cycle_generators(c, i);
        if (cycles.empty())
            continue;
        PolyMatrix dnext = c.differential(i + 1);
        GroebnerBasis image = GroebnerBasis::of(c.rank(i), c.nvars(), dnext.columns());
        for (const auto& z : cycles) {
            if (!image.contains(z))
                cert.fail("degree " + std::to_string(i) + " cycle " +
                          polyvector_to_string(z) + " is not a boundary");
        }
    }
    return cert;
}

/// cone(f)_n = Y_n + X_(n-1), d(y, x) = (dy + f x, -dx).
inline GradedComplex mapping_cone(const ChainMap& f)
{
    const GradedComplex& X = f.source;
    const GradedComplex& Y = f.target;
    size_t nvars = X.nvars();
    int top = std::max(Y.top_degree(), X.top_degree() + 1);
    if (top < 0)
        return GradedComplex::zero(nvars);
    std::vector<size_t> ranks;
    for (int n = 0; n <= top; ++n)
        ranks.push_back(Y.rank(n) + X.rank(n - 1));
    std::vector<PolyMatrix> diffs;
    for (int n = 1; n <= top; ++n) {
        PolyMatrix d(ranks[n - 1], ranks[n], nvars);
        PolyMatrix dy = Y.differential(n);
        PolyMatrix fm = f.component(n - 1);
        PolyMatrix dx = X.differential(n - 1);
        for (size_t i = 0; i < dy.rows(); ++i)
            for (size_t j = 0; j < dy.cols(); ++j)
                d.at(i, j) = dy.at(i, j);
        for (size_t i = 0; i < fm.rows(); ++i)
            for (size_t j = 0; j < fm.cols(); ++j)
                d.at(i, Y.rank(n) + j) = fm.at(i, j);
        for (size_t i = 0; i < dx.rows(); ++i)
            for (size_t j = 0; j < dx.cols(); ++j)
                d.at(Y.rank(n - 1) + i, Y.rank(n) + j) = -dx.at(i, j);
        diffs.push_back(std::move(d));
    }
    return GradedComplex::build(nvars, std::move(ranks), std::move(diffs));
}

/// Quasi-isomorphism up to the stated bound, decided through acyclicity of
/// the mapping cone in degrees <= bound. To certify H_i(f) iso for all
/// i <= b, call with bound = b + 1.
inline Certificate is_quasi_iso(const ChainMap& f, int bound)
{
    GradedComplex cone = mapping_cone(f);
    Certificate cert("quasi-isomorphism up to degree " + std::to_string(bound));
    cert.absorb(exactness_certificate(cone, 0, bound));
    return cert;
}

/// Finite presentation of H_i(C): generators are the cycle generators,
/// relations are the coordinates of everything that maps into the boundary
/// module (boundaries plus the internal relations among the generators).
struct HomologyPresentation {
    int degree = 0;
    std::vector<PolyVector> generators; // cycles in A^{r_i}
    std::vector<PolyVector> relations;  // coordinate vectors in A^{#generators}
    bool provisional = false;           // top recorded degree: higher cells unknown
};

inline HomologyPresentation homology_presentation(const GradedComplex& c, int i)
{
    HomologyPresentation p;
    p.degree = i;
    p.provisional = (i == c.top_degree());
    p.generators = cycle_generators(c, i);
    PolyMatrix dnext = c.differential(i + 1);
    // relations: syzygies of [K | d_(i+1)] projected to the K block
    std::vector<PolyVector> combined = p.generators;
    for (size_t j = 0; j < dnext.cols(); ++j)
        combined.push_back(dnext.column(j));
    if (combined.empty())
        return p;
    auto syz = syzygy_basis(c.rank(i), c.nvars(), combined);
    size_t s = p.generators.size();
    for (const auto& rel : syz) {
        PolyVector head(s, c.nvars());
        bool nonzero = false;
        for (size_t j = 0; j < s; ++j) {
            head[j] = rel[j];
            nonzero = nonzero || !rel[j].is_zero();
        }
        if (nonzero)
            p.relations.push_back(std::move(head));
    }
    return p;
}

/// The presented module is zero iff every generator is a relation combination.
inline bool presentation_is_zero(const HomologyPresentation& p, size_t nvars)
{
    if (p.generators.empty())
        return true;
    GroebnerBasis rel = GroebnerBasis::of(p.generators.size(), nvars, p.relations);
    for (size_t j = 0; j < p.generators.size(); ++j)
        if (!rel.contains(PolyVector::unit(p.generators.size(), nvars, j)))
            return false;
    return true;
}

} // namespace qfol
