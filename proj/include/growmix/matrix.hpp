#pragma once

// Dense square matrices and small vector helpers. Everything in this library
// operates at desk scale (n up to a few hundred), so storage is a flat
// row-major std::vector<double> and all operations are straightforward loops.

#include <cmath>
#include <cstddef>
#include <vector>

#include "growmix/errors.hpp"

namespace growmix {

using Vector = std::vector<double>;

class Matrix {
public:
    Matrix() = default;

    explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    Matrix(std::size_t n, std::vector<double> data) : n_(n), data_(std::move(data)) {
        if (data_.size() != n_ * n_) throw non_square_error(n_, data_.size() / (n_ ? n_ : 1));
    }

    // Rows given as nested initializer lists; all rows must have equal length.
    Matrix(std::initializer_list<std::initializer_list<double>> rows) : n_(rows.size()) {
        data_.reserve(n_ * n_);
        for (const auto& row : rows) {
            if (row.size() != n_) throw non_square_error(n_, row.size());
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t size() const { return n_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    const std::vector<double>& data() const { return data_; }

    bool all_finite() const {
        for (double x : data_)
            if (!std::isfinite(x)) return false;
        return true;
    }

    Matrix transposed() const {
        Matrix t(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    // Maximum absolute row sum.
    double inf_norm() const {
        double best = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n_; ++j) s += std::fabs((*this)(i, j));
            if (s > best) best = s;
        }
        return best;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.n_ == b.n_ && a.data_ == b.data_;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

inline Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.size() != b.size()) throw dimension_mismatch_error(a.size(), b.size());
    Matrix r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) r(i, j) = a(i, j) + b(i, j);
    return r;
}

inline Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.size() != b.size()) throw dimension_mismatch_error(a.size(), b.size());
    Matrix r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) r(i, j) = a(i, j) - b(i, j);
    return r;
}

inline Matrix operator*(const Matrix& a, double s) {
    Matrix r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) r(i, j) = a(i, j) * s;
    return r;
}

inline Matrix operator*(double s, const Matrix& a) { return a * s; }

inline Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.size() != b.size()) throw dimension_mismatch_error(a.size(), b.size());
    const std::size_t n = a.size();
    Matrix r(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

inline Vector operator*(const Matrix& a, const Vector& x) {
    if (a.size() != x.size()) throw dimension_mismatch_error(a.size(), x.size());
    const std::size_t n = a.size();
    Vector y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

inline double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw dimension_mismatch_error(a.size(), b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double sum(const Vector& x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
}

inline double inf_norm(const Vector& x) {
    double best = 0.0;
    for (double v : x) best = std::max(best, std::fabs(v));
    return best;
}

inline double one_norm(const Vector& x) {
    double s = 0.0;
    for (double v : x) s += std::fabs(v);
    return s;
}

// y = A^T x without forming the transpose.
inline Vector transpose_times(const Matrix& a, const Vector& x) {
    if (a.size() != x.size()) throw dimension_mismatch_error(a.size(), x.size());
    const std::size_t n = a.size();
    Vector y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) y[j] += a(i, j) * xi;
    }
    return y;
}

} // namespace growmix
