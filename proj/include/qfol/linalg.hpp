#pragma once

#include <stdexcept>
#include <vector>

#include "qfol/poly.hpp"

namespace qfol {

/// Element of a free module A^r, stored as a dense vector of polynomials.
class PolyVector {
public:
    PolyVector() = default;
    PolyVector(size_t rank, size_t nvars) : nvars_(nvars), entries_(rank, Poly(nvars)) {}
    explicit PolyVector(std::vector<Poly> entries) : entries_(std::move(entries))
    {
        nvars_ = entries_.empty() ? 0 : entries_.front().nvars();
        for (const auto& p : entries_)
            if (p.nvars() != nvars_)
                throw std::invalid_argument("mixed variable counts in vector");
    }

    size_t rank() const { return entries_.size(); }
    size_t nvars() const { return nvars_; }

    const Poly& operator[](size_t i) const { return entries_.at(i); }
    Poly& operator[](size_t i) { return entries_.at(i); }

    bool is_zero() const
    {
        for (const auto& p : entries_)
            if (!p.is_zero())
                return false;
        return true;
    }

    bool operator==(const PolyVector& o) const { return entries_ == o.entries_; }
    bool operator!=(const PolyVector& o) const { return !(*this == o); }

    PolyVector operator+(const PolyVector& o) const
    {
        check_shape(o);
        PolyVector r = *this;
        for (size_t i = 0; i < entries_.size(); ++i)
            r.entries_[i] += o.entries_[i];
        return r;
    }

    PolyVector operator-(const PolyVector& o) const
    {
        check_shape(o);
        PolyVector r = *this;
        for (size_t i = 0; i < entries_.size(); ++i)
            r.entries_[i] -= o.entries_[i];
        return r;
    }

    PolyVector operator-() const
    {
        PolyVector r = *this;
        for (auto& p : r.entries_)
            p = -p;
        return r;
    }

    PolyVector operator*(const Poly& f) const
    {
        PolyVector r = *this;
        for (auto& p : r.entries_)
            p *= f;
        return r;
    }

    PolyVector operator*(const Rational& c) const
    {
        PolyVector r = *this;
        for (auto& p : r.entries_)
            p = p * c;
        return r;
    }

    PolyVector times_term(const Monomial& m, const Rational& c) const
    {
        PolyVector r = *this;
        for (auto& p : r.entries_)
            p = p.times_term(m, c);
        return r;
    }

    PolyVector& operator+=(const PolyVector& o) { return *this = *this + o; }
    PolyVector& operator-=(const PolyVector& o) { return *this = *this - o; }

    static PolyVector unit(size_t rank, size_t nvars, size_t i)
    {
        PolyVector v(rank, nvars);
        v[i] = Poly::constant(nvars, 1);
        return v;
    }

private:
    void check_shape(const PolyVector& o) const
    {
        if (rank() != o.rank() || nvars_ != o.nvars_)
            throw std::invalid_argument("vector shapes differ");
    }

    size_t nvars_ = 0;
    std::vector<Poly> entries_;
};

inline PolyVector operator*(const Poly& f, const PolyVector& v) { return v * f; }

/// Matrix over A acting on column vectors.
class PolyMatrix {
public:
    PolyMatrix() = default;
    PolyMatrix(size_t rows, size_t cols, size_t nvars)
        : rows_(rows), cols_(cols), nvars_(nvars), entries_(rows * cols, Poly(nvars))
    {
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    size_t nvars() const { return nvars_; }

    const Poly& at(size_t i, size_t j) const { return entries_.at(i * cols_ + j); }
    Poly& at(size_t i, size_t j) { return entries_.at(i * cols_ + j); }

    bool is_zero() const
    {
        for (const auto& p : entries_)
            if (!p.is_zero())
                return false;
        return true;
    }

    bool operator==(const PolyMatrix& o) const
    {
        return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
    }
    bool operator!=(const PolyMatrix& o) const { return !(*this == o); }

    static PolyMatrix identity(size_t n, size_t nvars)
    {
        PolyMatrix m(n, n, nvars);
        for (size_t i = 0; i < n; ++i)
            m.at(i, i) = Poly::constant(nvars, 1);
        return m;
    }

    PolyVector column(size_t j) const
    {
        PolyVector v(rows_, nvars_);
        for (size_t i = 0; i < rows_; ++i)
            v[i] = at(i, j);
        return v;
    }

    void set_column(size_t j, const PolyVector& v)
    {
        if (v.rank() != rows_)
            throw std::invalid_argument("column rank mismatch");
        for (size_t i = 0; i < rows_; ++i)
            at(i, j) = v[i];
    }

    std::vector<PolyVector> columns() const
    {
        std::vector<PolyVector> cs;
        cs.reserve(cols_);
        for (size_t j = 0; j < cols_; ++j)
            cs.push_back(column(j));
        return cs;
    }

    static PolyMatrix from_columns(size_t rows, size_t nvars,
                                   const std::vector<PolyVector>& cs)
    {
        PolyMatrix m(rows, cs.size(), nvars);
        for (size_t j = 0; j < cs.size(); ++j)
            m.set_column(j, cs[j]);
        return m;
    }

    PolyVector apply(const PolyVector& v) const
    {
        if (v.rank() != cols_)
            throw std::invalid_argument("matrix/vector shape mismatch");
        PolyVector r(rows_, nvars_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j)
                r[i] += at(i, j) * v[j];
        return r;
    }

    PolyMatrix operator*(const PolyMatrix& o) const
    {
        if (cols_ != o.rows_)
            throw std::invalid_argument("matrix shapes incompatible for product");
        PolyMatrix r(rows_, o.cols_, nvars_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t k = 0; k < cols_; ++k) {
                if (at(i, k).is_zero())
                    continue;
                for (size_t j = 0; j < o.cols_; ++j)
                    r.at(i, j) += at(i, k) * o.at(k, j);
            }
        return r;
    }

    PolyMatrix operator+(const PolyMatrix& o) const
    {
        check_shape(o);
        PolyMatrix r = *this;
        for (size_t i = 0; i < entries_.size(); ++i)
            r.entries_[i] += o.entries_[i];
        return r;
    }

    PolyMatrix operator-(const PolyMatrix& o) const
    {
        check_shape(o);
        PolyMatrix r = *this;
        for (size_t i = 0; i < entries_.size(); ++i)
            r.entries_[i] -= o.entries_[i];
        return r;
    }

    PolyMatrix operator-() const
    {
        PolyMatrix r = *this;
        for (auto& p : r.entries_)
            p = -p;
        return r;
    }

private:
    void check_shape(const PolyMatrix& o) const
    {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("matrix shapes differ");
    }

    size_t rows_ = 0, cols_ = 0, nvars_ = 0;
    std::vector<Poly> entries_;
};

} // namespace qfol
