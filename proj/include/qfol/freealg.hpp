#pragma once

#include "qfol/complex.hpp"
#include "qfol/words.hpp"

namespace qfol {

/// A-linear combination of span basis words. `escaped` records that part of
/// a computation left the (W, D) window; coefficients of escaped words are
/// not tracked, so any verdict depending on them is only "up to bounds".
struct SpanElement {
    std::map<size_t, Poly> coeffs;
    bool escaped = false;
    std::vector<std::string> escapes;

    bool is_zero() const { return coeffs.empty() && !escaped; }

    void add(size_t w, const Poly& c)
    {
        if (c.is_zero())
            return;
        auto it = coeffs.find(w);
        if (it == coeffs.end()) {
            coeffs.emplace(w, c);
        } else {
            it->second += c;
            if (it->second.is_zero())
                coeffs.erase(it);
        }
    }

    void absorb_escapes(const SpanElement& o)
    {
        if (o.escaped)
            escaped = true;
        for (const auto& e : o.escapes)
            escapes.push_back(e);
    }

    SpanElement operator+(const SpanElement& o) const
    {
        SpanElement r = *this;
        r.absorb_escapes(o);
        for (const auto& [w, c] : o.coeffs)
            r.add(w, c);
        return r;
    }

    SpanElement operator-(const SpanElement& o) const
    {
        SpanElement r = *this;
        r.absorb_escapes(o);
        for (const auto& [w, c] : o.coeffs)
            r.add(w, -c);
        return r;
    }

    SpanElement scaled(const Poly& f) const
    {
        SpanElement r;
        r.escaped = escaped;
        r.escapes = escapes;
        if (f.is_zero())
            return r;
        for (const auto& [w, c] : coeffs) {
            Poly p = c * f;
            if (!p.is_zero())
                r.coeffs.emplace(w, std::move(p));
        }
        return r;
    }

    SpanElement scaled(const Rational& q) const
    {
        SpanElement r;
        r.escaped = escaped;
        r.escapes = escapes;
        if (q == 0)
            return r;
        for (const auto& [w, c] : coeffs)
            r.coeffs.emplace(w, c * q);
        return r;
    }

    bool operator==(const SpanElement& o) const
    {
        return coeffs == o.coeffs && escaped == o.escaped;
    }
};

/// Input words for normalization: arbitrary bracket trees with a coefficient
/// on every subword.
struct RawWord {
    Poly coef;
    bool is_leaf = true;
    size_t gen = 0;
    std::vector<RawWord> children;

    static RawWord leaf(size_t g, Poly c)
    {
        RawWord w;
        w.coef = std::move(c);
        w.is_leaf = true;
        w.gen = g;
        return w;
    }

    static RawWord node(Poly c, std::vector<RawWord> cs)
    {
        RawWord w;
        w.coef = std::move(c);
        w.is_leaf = false;
        w.children = std::move(cs);
        return w;
    }
};

/// Truncated presentation of the free L-infinity algebroid on an anchored
/// module M: the word span at bounds (W, D), the structural rewrites
/// (coefficient migration, unary-equals-differential, binary Leibniz with
/// the induced anchor), and the enumerated Jacobi relation module with its
/// bracket-wrapping closure. Equality in the quotient is decided by
/// relation-span membership, never by rewriting Jacobi identities.
class FreeLR {
public:
    FreeLR(GradedBasis gens, std::vector<GradedElement> differential,
           std::vector<VectorField> anchors, size_t W, size_t D, size_t nvars)
        : nvars_(nvars), diff_(std::move(differential)), gen_anchor_(std::move(anchors))
    {
        if (diff_.size() != gens.size() || gen_anchor_.size() != gens.size())
            throw std::invalid_argument("FreeLR: differential/anchor size mismatch");
        span_ = enumerate_words(gens, W, D);
        compute_word_anchors();
    }

    /// Generators with the degree data of an anchored complex: one generator
    /// per basis slot, named e<degree>_<index>, differential and anchor read
    /// off the matrices.
    static FreeLR over_complex(const AnchoredComplex& M, size_t W, size_t D);

    const WordSpan& span() const { return span_; }
    size_t nvars() const { return nvars_; }
    const GradedBasis& generators() const { return span_.gens; }

    // the relation module is enumerated on first use; contexts that only
    // need the word span and anchors never pay for it
    const std::vector<SpanElement>& relation_basis() const
    {
        ensure_relations();
        return relations_;
    }

    bool relation_closure_escaped() const
    {
        ensure_relations();
        return closure_escaped_;
    }
    const VectorField& word_anchor(size_t w) const { return word_anchor_.at(w); }
    const GradedElement& generator_differential(size_t g) const { return diff_.at(g); }

    SpanElement word_element(size_t w) const
    {
        SpanElement e;
        e.add(w, Poly::constant(nvars_, 1));
        return e;
    }

    /// The free multibracket on normalized elements: A-multilinear with the
    /// anchor Leibniz corrections in arity 2, unary on leaves rewriting to
    /// the differential. Out-of-window words flag the result as escaped.
    SpanElement bracket(size_t arity, const std::vector<SpanElement>& inputs) const
    {
        if (arity == 0 || inputs.size() != arity)
            throw std::invalid_argument("bracket arity mismatch");
        SpanElement result;
        for (const auto& in : inputs)
            result.absorb_escapes(in);
        if (arity == 1) {
            for (const auto& [w, c] : inputs[0].coeffs)
                result = result + unary_of_word(w).scaled(c);
            return result;
        }
        if (arity == 2) {
            for (const auto& [u, a] : inputs[0].coeffs)
                for (const auto& [w, b] : inputs[1].coeffs) {
                    result = result + pair_word(u, w).scaled(a * b);
                    if (span_.degrees[u] == 0)
                        result.add(w, a * apply_derivation(word_anchor_[u], b));
                    if (span_.degrees[w] == 0)
                        result.add(u, -(b * apply_derivation(word_anchor_[w], a)));
                }
            return result;
        }
        std::vector<std::vector<std::pair<size_t, Poly>>> supp;
        for (const auto& in : inputs) {
            if (in.coeffs.empty())
                return result;
            supp.emplace_back(in.coeffs.begin(), in.coeffs.end());
        }
        std::vector<size_t> pos(arity, 0);
        while (true) {
            Poly coef = Poly::constant(nvars_, 1);
            std::vector<LWord> tuple;
            for (size_t t = 0; t < arity; ++t) {
                tuple.push_back(span_.basis[supp[t][pos[t]].first]);
                coef *= supp[t][pos[t]].second;
            }
            result = result + node_word(std::move(tuple)).scaled(coef);
            size_t t = arity;
            bool done = true;
            while (t-- > 0) {
                if (++pos[t] < supp[t].size()) {
                    done = false;
                    break;
                }
                pos[t] = 0;
            }
            if (done)
                break;
        }
        return result;
    }

    /// Oriented rewriting of a raw word into span coordinates: coefficients
    /// migrate to the root, unary brackets on leaves become the
    /// differential, the binary Leibniz rule inserts anchor terms.
    SpanElement normalize_word(const RawWord& raw) const
    {
        if (raw.is_leaf) {
            SpanElement e;
            auto idx = span_.find(LWord::leaf(raw.gen));
            if (!idx)
                throw std::invalid_argument("unknown generator leaf");
            e.add(*idx, raw.coef);
            return e;
        }
        std::vector<SpanElement> children;
        children.reserve(raw.children.size());
        for (const auto& c : raw.children)
            children.push_back(normalize_word(c));
        return bracket(raw.children.size(), children).scaled(raw.coef);
    }

    SpanElement normalize_element(const SpanElement& e) const
    {
        SpanElement r;
        r.escaped = e.escaped;
        r.escapes = e.escapes;
        for (const auto& [w, c] : e.coeffs)
            r = r + normalize_span_word(w).scaled(c);
        return r;
    }

    struct Membership {
        enum class Verdict { Member, NonMember, Inconclusive } verdict;
        PolyVector witness; // coordinates over the relation basis when Member
        std::string note;
    };

    /// Is e in the A-span of the enumerated relation module? Equality in the
    /// truncated quotient algebra is membership of the difference.
    Membership relation_span_membership(const SpanElement& e) const
    {
        ensure_relations();
        Membership m{Membership::Verdict::NonMember, PolyVector(relations_.size(), nvars_), ""};
        if (e.escaped) {
            m.verdict = Membership::Verdict::Inconclusive;
            m.note = "element escaped the (W, D) window";
            return m;
        }
        ensure_relation_gb();
        auto w = relation_gb_->witness(to_vector(e));
        if (w) {
            m.verdict = Membership::Verdict::Member;
            m.witness = *w;
            return m;
        }
        if (closure_escaped_) {
            m.verdict = Membership::Verdict::Inconclusive;
            m.note = "relation closure exceeded the bounds; non-membership is "
                     "inconclusive at (W, D)";
        }
        return m;
    }

    PolyVector to_vector(const SpanElement& e) const
    {
        PolyVector v(span_.basis.size(), nvars_);
        for (const auto& [w, c] : e.coeffs)
            v[w] = c;
        return v;
    }

    /// Anchor of degree-0 span elements through the free-bracket extension
    /// of the generator anchors (vanishes on positive degrees).
    VectorField anchor_of(const SpanElement& e) const
    {
        VectorField r = VectorField::zero(nvars_);
        for (const auto& [w, c] : e.coeffs)
            if (span_.degrees[w] == 0)
                r = r + word_anchor_[w] * c;
        return r;
    }

private:
    SpanElement out_of_window(const std::string& what) const
    {
        SpanElement e;
        e.escaped = true;
        e.escapes.push_back(what);
        return e;
    }

    SpanElement node_word(std::vector<LWord> children) const
    {
        CanonicalWord cw = canonical_node(std::move(children), span_.gens);
        if (cw.zero)
            return {};
        int deg = word_degree(cw.word, span_.gens);
        if (deg < 0)
            return {}; // negatively graded words are zero by construction
        auto idx = span_.find(cw.word);
        if (!idx)
            return out_of_window("word " + word_to_string(cw.word, span_.gens) +
                                 " outside (W, D)");
        SpanElement e;
        e.add(*idx, Poly::constant(nvars_, cw.sign));
        return e;
    }

    SpanElement pair_word(size_t u, size_t w) const
    {
        return node_word({span_.basis[u], span_.basis[w]});
    }

    SpanElement unary_of_word(size_t w) const
    {
        const LWord& word = span_.basis[w];
        if (word.is_leaf) {
            // [v]_1 = d(v) on module generators
            SpanElement e;
            for (const auto& [g, c] : diff_[word.gen].coeffs) {
                auto idx = span_.find(LWord::leaf(g));
                if (!idx)
                    throw std::logic_error("differential image outside leaf span");
                e.add(*idx, c);
            }
            return e;
        }
        if (span_.degrees[w] == 0)
            return {}; // [w]_1 would be negatively graded
        return node_word({word});
    }

    SpanElement normalize_span_word(size_t w) const
    {
        const LWord& word = span_.basis[w];
        if (word.is_leaf)
            return word_element(w);
        std::vector<SpanElement> children;
        for (const auto& c : word.children) {
            auto idx = span_.find(c);
            if (!idx)
                throw std::logic_error("child word outside span");
            children.push_back(normalize_span_word(*idx));
        }
        return bracket(word.children.size(), children);
    }

    void compute_word_anchors()
    {
        word_anchor_.assign(span_.basis.size(), VectorField::zero(nvars_));
        for (size_t w = 0; w < span_.basis.size(); ++w) {
            if (span_.degrees[w] != 0)
                continue;
            const LWord& word = span_.basis[w];
            if (word.is_leaf) {
                word_anchor_[w] = gen_anchor_[word.gen];
                continue;
            }
            // degree-0 nodes: binary words of degree-0 children push the
            // brackets into the derivation Lie bracket; unary words of
            // degree-1 children map to the (vanishing) differential of T_A
            if (word.children.size() == 2) {
                auto c0 = span_.find(word.children[0]);
                auto c1 = span_.find(word.children[1]);
                if (c0 && c1)
                    word_anchor_[w] = lie_bracket(word_anchor_[*c0], word_anchor_[*c1]);
            }
        }
    }

    void ensure_relations() const
    {
        if (!relations_done_) {
            relations_done_ = true;
            enumerate_relations();
        }
    }

    /// Jacobiators of basis-word tuples plus their bracket-wrapping closure,
    /// kept as long as every term stays inside the window.
    void enumerate_relations() const
    {
        std::vector<SpanElement> pending;
        size_t D = span_.degree_bound;
        // arity-1 jacobiators [[w]_1]_1
        for (size_t w = 0; w < span_.basis.size(); ++w) {
            SpanElement j = bracket(1, {bracket(1, {word_element(w)})});
            if (j.escaped)
                closure_escaped_ = true;
            else if (!j.is_zero())
                pending.push_back(j);
        }
        // higher jacobiators on sorted word tuples; a tuple whose terms all
        // leave the window is skipped and recorded as an escape
        for (size_t k = 2; k <= D + 3; ++k) {
            std::vector<size_t> tuple;
            int degsum = 0;
            std::function<void(size_t)> rec = [&](size_t start) {
                if (tuple.size() == k) {
                    size_t maxwt = 0;
                    for (size_t w : tuple)
                        maxwt = std::max(maxwt, word_weight(span_.basis[w]));
                    if (maxwt + 1 > span_.weight_bound) {
                        closure_escaped_ = true; // every term wraps past W
                        return;
                    }
                    SpanElement j = jacobiator(tuple);
                    if (j.escaped)
                        closure_escaped_ = true;
                    else if (!j.is_zero())
                        pending.push_back(j);
                    return;
                }
                if (degsum + static_cast<int>(k) - 3 > static_cast<int>(D))
                    return; // remaining children only raise the degree
                for (size_t w = start; w < span_.basis.size(); ++w) {
                    if (!tuple.empty() && tuple.back() == w && span_.degrees[w] % 2 == 0)
                        continue;
                    tuple.push_back(w);
                    degsum += span_.degrees[w];
                    rec(w);
                    degsum -= span_.degrees[w];
                    tuple.pop_back();
                }
            };
            rec(0);
        }
        // closure under bracket wrapping, to a fixpoint of the A-span
        relations_ = std::move(pending);
        bool grew = true;
        int guard = 0;
        while (grew && ++guard < 16) {
            grew = false;
            ensure_relation_gb();
            std::vector<SpanElement> wraps;
            for (const auto& r : relations_) {
                SpanElement u = bracket(1, {r});
                if (u.escaped)
                    closure_escaped_ = true;
                else if (!u.is_zero() && !relation_gb_->contains(to_vector(u)))
                    wraps.push_back(u);
                for (size_t w = 0; w < span_.basis.size(); ++w) {
                    SpanElement b = bracket(2, {r, word_element(w)});
                    if (b.escaped) {
                        closure_escaped_ = true;
                        continue;
                    }
                    if (!b.is_zero() && !relation_gb_->contains(to_vector(b)))
                        wraps.push_back(b);
                }
            }
            if (!wraps.empty()) {
                grew = true;
                for (auto& e : wraps)
                    relations_.push_back(std::move(e));
                relation_gb_.reset();
            }
        }
        ensure_relation_gb();
    }

    SpanElement jacobiator(const std::vector<size_t>& tuple) const
    {
        size_t k = tuple.size();
        std::vector<int> degs;
        for (size_t w : tuple)
            degs.push_back(span_.degrees[w]);
        SpanElement res;
        for (size_t i = 1; i <= k; ++i) {
            size_t j = k - i;
            int outer_sign = (i * j) % 2 == 0 ? 1 : -1;
            for (const auto& sigma : unshuffles(i, j)) {
                int chi = koszul_sign(sigma, degs);
                std::vector<SpanElement> first;
                for (size_t t = 0; t < i; ++t)
                    first.push_back(word_element(tuple[sigma[t]]));
                SpanElement inner = bracket(i, first);
                std::vector<SpanElement> outer;
                outer.push_back(std::move(inner));
                for (size_t t = i; t < k; ++t)
                    outer.push_back(word_element(tuple[sigma[t]]));
                res = res + bracket(j + 1, outer).scaled(Rational(outer_sign * chi));
            }
        }
        return res;
    }

    void ensure_relation_gb() const
    {
        if (relation_gb_)
            return;
        std::vector<PolyVector> vecs;
        vecs.reserve(relations_.size());
        for (const auto& r : relations_)
            vecs.push_back(to_vector(r));
        relation_gb_.emplace(GroebnerBasis::of(span_.basis.size(), nvars_, vecs));
    }

    size_t nvars_;
    WordSpan span_;
    std::vector<GradedElement> diff_;        // per generator, in generator coords
    std::vector<VectorField> gen_anchor_;    // per generator
    std::vector<VectorField> word_anchor_;   // per span word
    mutable bool relations_done_ = false;
    mutable std::vector<SpanElement> relations_;
    mutable bool closure_escaped_ = false;
    mutable std::optional<GroebnerBasis> relation_gb_;
};

/// Strict extension of a generator assignment into an algebroid: leaves map
/// through f, nodes through the target brackets. The postcondition check
/// sends every enumerated relation to the target and reports nonzero images
/// (a nonzero image is a witness against the target structure).
struct SpanMorphism {
    std::vector<GradedElement> word_images;
    Certificate cert{"strict extension"};

    GradedElement apply(const SpanElement& e) const
    {
        GradedElement r;
        for (const auto& [w, c] : e.coeffs)
            r = r + word_images.at(w).scaled(c);
        return r;
    }
};

inline SpanMorphism extend_strict_morphism(const FreeLR& ctx,
                                           const std::vector<GradedElement>& images,
                                           const LInftyAlgebroid& L)
{
    if (images.size() != ctx.generators().size())
        throw std::invalid_argument("extend_strict_morphism: one image per generator");
    SpanMorphism phi;
    const WordSpan& span = ctx.span();
    phi.word_images.resize(span.basis.size());
    std::function<GradedElement(const LWord&)> ext = [&](const LWord& w) -> GradedElement {
        if (w.is_leaf)
            return images[w.gen];
        std::vector<GradedElement> cs;
        for (const auto& c : w.children)
            cs.push_back(ext(c));
        return evaluate_bracket(L, w.children.size(), cs);
    };
    for (size_t w = 0; w < span.basis.size(); ++w)
        phi.word_images[w] = ext(span.basis[w]);
    // restriction to the generators is f itself
    for (size_t g = 0; g < ctx.generators().size(); ++g) {
        auto idx = span.find(LWord::leaf(g));
        if (idx && !(phi.word_images[*idx] == images[g]))
            phi.cert.fail("extension does not restrict to f on " + span.gens.names[g]);
    }
    // well-definedness on the quotient: relations map to zero
    size_t bad = 0;
    for (const auto& r : ctx.relation_basis()) {
        GradedElement img = phi.apply(r);
        if (!img.is_zero())
            ++bad;
    }
    if (bad > 0)
        phi.cert.fail(std::to_string(bad) +
                      " relation elements map to nonzero values; the target does not "
                      "satisfy the corresponding Jacobi identities");
    return phi;
}

/// Extension into the span itself (bracket evaluation = free bracket); the
/// counit-style identity extension is the identity on every word.
struct SpanEndo {
    std::vector<SpanElement> word_images;
    Certificate cert{"strict extension into the span"};
};

inline SpanEndo extend_into_span(const FreeLR& ctx, const std::vector<SpanElement>& images)
{
    if (images.size() != ctx.generators().size())
        throw std::invalid_argument("extend_into_span: one image per generator");
    SpanEndo phi;
    const WordSpan& span = ctx.span();
    phi.word_images.resize(span.basis.size());
    std::function<SpanElement(const LWord&)> ext = [&](const LWord& w) -> SpanElement {
        if (w.is_leaf)
            return images[w.gen];
        std::vector<SpanElement> cs;
        for (const auto& c : w.children)
            cs.push_back(ext(c));
        return ctx.bracket(w.children.size(), cs);
    };
    for (size_t w = 0; w < span.basis.size(); ++w)
        phi.word_images[w] = ext(span.basis[w]);
    return phi;
}

/// The anchors of all span words: the unique strict extension of the
/// generator anchors into the derivation algebroid.
inline std::vector<VectorField> free_algebroid_anchor(const FreeLR& ctx)
{
    std::vector<VectorField> out;
    out.reserve(ctx.span().basis.size());
    for (size_t w = 0; w < ctx.span().basis.size(); ++w)
        out.push_back(ctx.word_anchor(w));
    return out;
}

inline FreeLR FreeLR::over_complex(const AnchoredComplex& M, size_t W, size_t D)
{
    size_t nvars = M.nvars();
    std::vector<std::string> names;
    std::vector<int> degrees;
    std::vector<std::pair<int, size_t>> slot; // (degree, index) per generator
    for (int d = 0; d <= M.complex.top_degree(); ++d)
        for (size_t j = 0; j < M.complex.rank(d); ++j) {
            names.push_back("e" + std::to_string(d) + "_" + std::to_string(j + 1));
            degrees.push_back(d);
            slot.push_back({d, j});
        }
    GradedBasis gens(names, degrees);
    auto flat_index = [&](int d, size_t j) {
        size_t idx = 0;
        for (int dd = 0; dd < d; ++dd)
            idx += M.complex.rank(dd);
        return idx + j;
    };
    std::vector<GradedElement> diff(gens.size());
    std::vector<VectorField> anchors(gens.size(), VectorField::zero(nvars));
    for (size_t g = 0; g < gens.size(); ++g) {
        auto [d, j] = slot[g];
        if (d >= 1) {
            PolyVector col = M.complex.differential(d).column(j);
            for (size_t r = 0; r < col.rank(); ++r)
                diff[g].add_term(flat_index(d - 1, r), col[r]);
        }
        if (d == 0)
            anchors[g] = VectorField(M.anchor.column(j));
    }
    return FreeLR(gens, std::move(diff), std::move(anchors), W, D, nvars);
}

} // namespace qfol
