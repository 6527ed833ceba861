#pragma once

#include "qfol/linalg.hpp"

namespace qfol {

/// Polynomial vector field sum_i f_i d/dx_i on affine n-space, i.e. a
/// derivation of A = Q[x_1..x_n]. Components live in A^n.
struct VectorField {
    PolyVector components;

    VectorField() = default;
    explicit VectorField(PolyVector c) : components(std::move(c))
    {
        if (components.rank() != components.nvars())
            throw std::invalid_argument("vector field needs one component per variable");
    }

    static VectorField zero(size_t nvars)
    {
        return VectorField(PolyVector(nvars, nvars));
    }

    /// d/dx_i
    static VectorField basis(size_t nvars, size_t i)
    {
        return VectorField(PolyVector::unit(nvars, nvars, i));
    }

    size_t nvars() const { return components.nvars(); }
    bool is_zero() const { return components.is_zero(); }

    bool operator==(const VectorField& o) const { return components == o.components; }
    bool operator!=(const VectorField& o) const { return !(*this == o); }

    VectorField operator+(const VectorField& o) const
    {
        return VectorField(components + o.components);
    }
    VectorField operator-(const VectorField& o) const
    {
        return VectorField(components - o.components);
    }
    VectorField operator-() const { return VectorField(-components); }
    VectorField operator*(const Poly& f) const { return VectorField(components * f); }
};

inline VectorField operator*(const Poly& f, const VectorField& v) { return v * f; }

/// v(f) = sum_i v_i df/dx_i.
inline Poly apply_derivation(const VectorField& v, const Poly& f)
{
    if (v.nvars() != f.nvars())
        throw std::invalid_argument("apply_derivation: variable counts differ");
    Poly r(f.nvars());
    for (size_t i = 0; i < v.nvars(); ++i) {
        if (v.components[i].is_zero())
            continue;
        r += v.components[i] * f.derivative(i);
    }
    return r;
}

/// Commutator of derivations: [v,w]_j = v(w_j) - w(v_j).
inline VectorField lie_bracket(const VectorField& v, const VectorField& w)
{
    if (v.nvars() != w.nvars())
        throw std::invalid_argument("lie_bracket: variable counts differ");
    PolyVector r(v.nvars(), v.nvars());
    for (size_t j = 0; j < v.nvars(); ++j)
        r[j] = apply_derivation(v, w.components[j]) - apply_derivation(w, v.components[j]);
    return VectorField(std::move(r));
}

} // namespace qfol
