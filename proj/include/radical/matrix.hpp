#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "radical/scalar.hpp"

namespace radical {

// Dense row-major matrix over a generic scalar.  Dimensions are fixed at
// construction; every binary operation checks conformance.
template <typename T>
class Mat {
  public:
    Mat() : rows_(0), cols_(0) {}
    Mat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, scalar_traits<T>::zero()) {}

    Mat(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw std::invalid_argument("ragged initializer");
            for (const auto& v : row) data_.push_back(v);
        }
    }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = scalar_traits<T>::one();
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool same_shape(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    Mat operator+(const Mat& o) const {
        check_shape(o);
        Mat r(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] + o.data_[i];
        return r;
    }
    Mat operator-(const Mat& o) const {
        check_shape(o);
        Mat r(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
        return r;
    }
    Mat operator-() const {
        Mat r(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = -data_[i];
        return r;
    }
    Mat operator*(const Mat& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
        Mat r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const T& a = (*this)(i, k);
                if constexpr (scalar_traits<T>::is_exact)
                    if (sgn(a) == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
            }
        return r;
    }
    Mat operator*(const T& s) const {
        Mat r(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] * s;
        return r;
    }
    friend Mat operator*(const T& s, const Mat& m) { return m * s; }

    bool operator==(const Mat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    Mat transpose() const {
        Mat r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    Mat submatrix(const std::vector<std::size_t>& ri, const std::vector<std::size_t>& ci) const {
        Mat r(ri.size(), ci.size());
        for (std::size_t i = 0; i < ri.size(); ++i)
            for (std::size_t j = 0; j < ci.size(); ++j) r(i, j) = (*this)(ri[i], ci[j]);
        return r;
    }

    Mat col(std::size_t j) const {
        Mat r(rows_, 1);
        for (std::size_t i = 0; i < rows_; ++i) r(i, 0) = (*this)(i, j);
        return r;
    }

    void set_block(std::size_t i0, std::size_t j0, const Mat& b) {
        if (i0 + b.rows_ > rows_ || j0 + b.cols_ > cols_)
            throw std::invalid_argument("block out of range");
        for (std::size_t i = 0; i < b.rows_; ++i)
            for (std::size_t j = 0; j < b.cols_; ++j) (*this)(i0 + i, j0 + j) = b(i, j);
    }

    Mat block(std::size_t i0, std::size_t j0, std::size_t nr, std::size_t nc) const {
        if (i0 + nr > rows_ || j0 + nc > cols_) throw std::invalid_argument("block out of range");
        Mat r(nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) r(i, j) = (*this)(i0 + i, j0 + j);
        return r;
    }

    static Mat hstack(const Mat& a, const Mat& b) {
        if (a.rows_ != b.rows_) throw std::invalid_argument("hstack row mismatch");
        Mat r(a.rows_, a.cols_ + b.cols_);
        r.set_block(0, 0, a);
        r.set_block(0, a.cols_, b);
        return r;
    }

    // Column-major flattening, so matrices of linear maps vectorize the way
    // basis coordinates expect.
    std::vector<T> vec() const {
        std::vector<T> v;
        v.reserve(data_.size());
        for (std::size_t j = 0; j < cols_; ++j)
            for (std::size_t i = 0; i < rows_; ++i) v.push_back((*this)(i, j));
        return v;
    }
    static Mat from_vec(const std::vector<T>& v, std::size_t rows, std::size_t cols) {
        if (v.size() != rows * cols) throw std::invalid_argument("from_vec size mismatch");
        Mat r(rows, cols);
        std::size_t k = 0;
        for (std::size_t j = 0; j < cols; ++j)
            for (std::size_t i = 0; i < rows; ++i) r(i, j) = v[k++];
        return r;
    }

    double max_abs() const {
        double m = 0;
        for (const auto& x : data_) m = std::max(m, std::fabs(scalar_traits<T>::to_double(x)));
        return m;
    }

  private:
    void check_shape(const Mat& o) const {
        if (!same_shape(o)) throw std::invalid_argument("matrix shape mismatch");
    }
    std::size_t rows_, cols_;
    std::vector<T> data_;
};

template <typename T>
bool mat_close(const Mat<T>& a, const Mat<T>& b, double rel_tol) {
    if (!a.same_shape(b)) return false;
    if constexpr (scalar_traits<T>::is_exact) {
        (void)rel_tol;
        return a == b;
    } else {
        double scale = std::max({1.0, a.max_abs(), b.max_abs()});
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j)
                if (std::fabs(a(i, j) - b(i, j)) > rel_tol * scale) return false;
        return true;
    }
}

template <typename T>
double residual(const Mat<T>& a, const Mat<T>& b) {
    Mat<T> d = a - b;
    return d.max_abs();
}

namespace detail {
// Row echelon with pivoting; shared by rank, det, solve, kernel.
// For the exact backend the pivot is the first nonzero entry; for the real
// backend partial pivoting with a scale-relative threshold.
template <typename T>
struct Echelon {
    Mat<T> u;                      // reduced rows
    std::vector<std::size_t> pivots;  // pivot column per pivot row
    T det_factor;                  // product of pivots with row-swap sign (square input)
    std::size_t rank;
};

template <typename T>
Echelon<T> echelon(Mat<T> a, double rank_tol) {
    Echelon<T> e{a, {}, scalar_traits<T>::one(), 0};
    const std::size_t m = a.rows(), n = a.cols();
    double scale = 1.0;
    if constexpr (!scalar_traits<T>::is_exact) scale = std::max(1.0, a.max_abs());
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < m; ++col) {
        std::size_t piv = m;
        if constexpr (scalar_traits<T>::is_exact) {
            for (std::size_t i = row; i < m; ++i)
                if (sgn(e.u(i, col)) != 0) { piv = i; break; }
        } else {
            double best = rank_tol * scale;
            for (std::size_t i = row; i < m; ++i) {
                double v = std::fabs(scalar_traits<T>::to_double(e.u(i, col)));
                if (v > best) { best = v; piv = i; }
            }
        }
        if (piv == m) continue;
        if (piv != row) {
            for (std::size_t j = 0; j < n; ++j) std::swap(e.u(piv, j), e.u(row, j));
            e.det_factor = -e.det_factor;
        }
        const T p = e.u(row, col);
        e.det_factor = e.det_factor * p;
        for (std::size_t i = row + 1; i < m; ++i) {
            T f = scalar_traits<T>::div(e.u(i, col), p);
            if constexpr (scalar_traits<T>::is_exact)
                if (sgn(f) == 0) continue;
            e.u(i, col) = scalar_traits<T>::zero();
            for (std::size_t j = col + 1; j < n; ++j) e.u(i, j) -= f * e.u(row, j);
        }
        e.pivots.push_back(col);
        ++row;
    }
    e.rank = row;
    return e;
}
}  // namespace detail

template <typename T>
std::size_t rank(const Mat<T>& a, double rank_tol = 1e-8) {
    return detail::echelon(a, rank_tol).rank;
}

template <typename T>
T det(const Mat<T>& a, double rank_tol = 1e-8) {
    if (a.rows() != a.cols()) throw std::invalid_argument("det of non-square matrix");
    auto e = detail::echelon(a, rank_tol);
    if (e.rank < a.rows()) return scalar_traits<T>::zero();
    return e.det_factor;
}

// Solve A X = B; throws if A is singular.
template <typename T>
Mat<T> solve(const Mat<T>& a, const Mat<T>& b, double rank_tol = 1e-8) {
    if (a.rows() != a.cols()) throw std::invalid_argument("solve needs square A");
    if (a.rows() != b.rows()) throw std::invalid_argument("solve shape mismatch");
    auto e = detail::echelon(Mat<T>::hstack(a, b), rank_tol);
    const std::size_t n = a.rows(), k = b.cols();
    if (e.rank < n || e.pivots.size() < n || e.pivots[n - 1] >= n)
        throw std::domain_error("singular system");
    Mat<T> x(n, k);
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t ii = n; ii-- > 0;) {
            T acc = e.u(ii, n + c);
            for (std::size_t j = ii + 1; j < n; ++j) acc -= e.u(ii, j) * x(j, c);
            x(ii, c) = scalar_traits<T>::div(acc, e.u(ii, ii));
        }
    }
    return x;
}

template <typename T>
Mat<T> inverse(const Mat<T>& a, double rank_tol = 1e-8) {
    return solve(a, Mat<T>::identity(a.rows()), rank_tol);
}

// Basis of the null space of A, returned as columns.
template <typename T>
Mat<T> kernel_basis(const Mat<T>& a, double rank_tol = 1e-8) {
    auto e = detail::echelon(a, rank_tol);
    const std::size_t n = a.cols();
    std::vector<bool> is_pivot(n, false);
    for (auto p : e.pivots) is_pivot[p] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t j = 0; j < n; ++j)
        if (!is_pivot[j]) free_cols.push_back(j);
    Mat<T> k(n, free_cols.size());
    for (std::size_t fc = 0; fc < free_cols.size(); ++fc) {
        k(free_cols[fc], fc) = scalar_traits<T>::one();
        for (std::size_t pr = e.pivots.size(); pr-- > 0;) {
            T acc = scalar_traits<T>::zero();
            for (std::size_t j = e.pivots[pr] + 1; j < n; ++j) acc -= e.u(pr, j) * k(j, fc);
            k(e.pivots[pr], fc) = scalar_traits<T>::div(acc, e.u(pr, e.pivots[pr]));
        }
    }
    return k;
}

}  // namespace radical
