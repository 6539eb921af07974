#pragma once

// Domain types for growth-mixing systems.
//
// An MLMatrix (Metzler / essentially non-negative matrix) has non-negative
// off-diagonal entries and an unconstrained diagonal. A GrowthMixingSystem
// pairs a diagonal matrix of site growth rates D with a mixing pattern A and
// realizes F(m) = D + m*A for a mixing rate m >= 0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "growmix/errors.hpp"
#include "growmix/matrix.hpp"

namespace growmix {

class MLMatrix {
public:
    std::size_t size() const { return m_.size(); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    const Matrix& matrix() const { return m_; }

    // A + cI. Diagonal shifts never touch the off-diagonal sign constraint.
    MLMatrix shifted(double c) const {
        Matrix r = m_;
        for (std::size_t i = 0; i < r.size(); ++i) r(i, i) += c;
        return MLMatrix(std::move(r));
    }

    // s*A for s >= 0.
    MLMatrix scaled(double s) const {
        if (s < 0.0) throw precondition_error("scale factor must be non-negative");
        return MLMatrix(m_ * s);
    }

    MLMatrix transposed() const { return MLMatrix(m_.transposed()); }

    // A + D for a diagonal D of matching dimension.
    MLMatrix plus_diagonal(const class DiagonalGrowth& d) const;

    // Restriction to an index subset (in the given order).
    MLMatrix restricted(const std::vector<std::size_t>& indices) const {
        Matrix r(indices.size());
        for (std::size_t i = 0; i < indices.size(); ++i)
            for (std::size_t j = 0; j < indices.size(); ++j) r(i, j) = m_(indices[i], indices[j]);
        return MLMatrix(std::move(r));
    }

    friend bool operator==(const MLMatrix& a, const MLMatrix& b) { return a.m_ == b.m_; }

    friend MLMatrix validate_ml(Matrix entries);
    friend MLMatrix operator+(const MLMatrix& a, const MLMatrix& b);

private:
    explicit MLMatrix(Matrix m) : m_(std::move(m)) {}
    Matrix m_;
};

// Checks the ML property and wraps the matrix. Entries are preserved exactly;
// structural zeros stay exact zeros (the adjacency pattern is combinatorial,
// not a rounding artifact).
inline MLMatrix validate_ml(Matrix entries) {
    const std::size_t n = entries.size();
    if (n == 0) throw non_square_error(0, 0);
    if (!entries.all_finite()) throw non_finite_error("matrix entries");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && entries(i, j) < 0.0) throw negative_off_diagonal_error(i, j, entries(i, j));
    return MLMatrix(std::move(entries));
}

inline MLMatrix operator+(const MLMatrix& a, const MLMatrix& b) {
    return MLMatrix(a.m_ + b.m_);
}

class DiagonalGrowth {
public:
    explicit DiagonalGrowth(Vector d) : d_(std::move(d)) {
        if (d_.empty()) throw non_square_error(0, 0);
        for (double x : d_)
            if (!std::isfinite(x)) throw non_finite_error("growth rates");
    }

    std::size_t size() const { return d_.size(); }
    double operator[](std::size_t i) const { return d_[i]; }
    const Vector& values() const { return d_; }

    double min() const { return *std::min_element(d_.begin(), d_.end()); }
    double max() const { return *std::max_element(d_.begin(), d_.end()); }
    double mean() const { return sum(d_) / static_cast<double>(d_.size()); }
    double spread() const { return max() - min(); }

    // The degenerate D = cI case.
    bool is_uniform(double tol = 0.0) const { return spread() <= tol; }

    DiagonalGrowth restricted(const std::vector<std::size_t>& indices) const {
        Vector r(indices.size());
        for (std::size_t i = 0; i < indices.size(); ++i) r[i] = d_[indices[i]];
        return DiagonalGrowth(std::move(r));
    }

    DiagonalGrowth scaled(double s) const {
        Vector r(d_);
        for (double& x : r) x *= s;
        return DiagonalGrowth(std::move(r));
    }

    Matrix as_matrix() const {
        Matrix m(d_.size());
        for (std::size_t i = 0; i < d_.size(); ++i) m(i, i) = d_[i];
        return m;
    }

private:
    Vector d_;
};

inline MLMatrix MLMatrix::plus_diagonal(const DiagonalGrowth& d) const {
    if (d.size() != size()) throw dimension_mismatch_error(size(), d.size());
    Matrix r = m_;
    for (std::size_t i = 0; i < r.size(); ++i) r(i, i) += d[i];
    return MLMatrix(std::move(r));
}

class GrowthMixingSystem {
public:
    GrowthMixingSystem(DiagonalGrowth d, MLMatrix a) : d_(std::move(d)), a_(std::move(a)) {
        if (d_.size() != a_.size()) throw dimension_mismatch_error(d_.size(), a_.size());
    }

    std::size_t size() const { return d_.size(); }
    // Ref-qualified so member access on a temporary system hands out a value,
    // never a reference into an expiring object.
    const DiagonalGrowth& growth() const& { return d_; }
    const MLMatrix& mixing() const& { return a_; }
    DiagonalGrowth growth() && { return std::move(d_); }
    MLMatrix mixing() && { return std::move(a_); }

    // F(m) = D + m*A. Non-negative m scales non-negative off-diagonals, so the
    // result is again an MLMatrix; materialize(0) reproduces D exactly.
    MLMatrix materialize(double m) const {
        if (!(m >= 0.0)) throw precondition_error("mixing rate must be >= 0");
        Matrix f(size());
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = 0; j < size(); ++j)
                f(i, j) = (i == j) ? d_[i] + m * a_(i, i) : m * a_(i, j);
        return validate_ml(std::move(f));
    }

    GrowthMixingSystem restricted(const std::vector<std::size_t>& indices) const {
        return GrowthMixingSystem(d_.restricted(indices), a_.restricted(indices));
    }

private:
    DiagonalGrowth d_;
    MLMatrix a_;
};

// Perron data of an irreducible ML-matrix: spectral abscissa r, right vector v
// with e'v = 1, left vector u with u'v = 1, and sensitivity weights p = u.*v
// (the gradient of r with respect to diagonal perturbations).
struct PerronPair {
    double r = 0.0;
    Vector v;
    Vector u;
    Vector p;
};

enum class ConservationClass { Conservative, Lossy, Neither };

// Column sum with the off-diagonal entries accumulated first (increasing row
// index) and the diagonal added last. Constructors in models.hpp build
// conservative matrices with diagonal = -(off-column sum), which makes this
// sum an exact 0.0.
inline Vector column_sums(const MLMatrix& a) {
    const std::size_t n = a.size();
    Vector s(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (i != j) off += a(i, j);
        s[j] = off + a(j, j);
    }
    return s;
}

// Conservative: every column sums to zero exactly (mass is redistributed but
// preserved). Lossy: all column sums <= 0 with at least one strictly negative.
// The comparison is exact on the given entries; conservativity is a modeling
// assertion, not a tolerance question.
inline ConservationClass conservation_class(const MLMatrix& a) {
    const Vector s = column_sums(a);
    bool all_zero = true, all_nonpos = true, some_neg = false;
    for (double v : s) {
        if (v != 0.0) all_zero = false;
        if (v > 0.0) all_nonpos = false;
        if (v < 0.0) some_neg = true;
    }
    if (all_zero) return ConservationClass::Conservative;
    if (all_nonpos && some_neg) return ConservationClass::Lossy;
    return ConservationClass::Neither;
}

} // namespace growmix
