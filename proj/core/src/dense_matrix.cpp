#include "svdup/dense_matrix.hpp"

#include <cmath>
#include <cstdint>

#include "svdup/errors.hpp"
#include "svdup/flops.hpp"

namespace svdup {

DenseMatrix DenseMatrix::identity(index_t n) {
    DenseMatrix eye(n, n);
    for (index_t i = 0; i < n; ++i) eye(i, i) = 1.0;
    return eye;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.ncols != b.nrows) throw DimensionMismatch("multiply: inner dimensions disagree");
    DenseMatrix c(a.nrows, b.ncols);
    for (index_t j = 0; j < b.ncols; ++j) {
        for (index_t l = 0; l < a.ncols; ++l) {
            const double blj = b(l, j);
            if (blj == 0.0) continue;
            const double* acol = a.data.data() + l * a.nrows;
            double* ccol = c.data.data() + j * c.nrows;
            for (index_t i = 0; i < a.nrows; ++i) ccol[i] += acol[i] * blj;
        }
    }
    flops::add(2ull * static_cast<std::uint64_t>(a.nrows) * a.ncols * b.ncols);
    return c;
}

DenseMatrix multiply_adjoint_left(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.nrows != b.nrows) throw DimensionMismatch("multiply_adjoint_left: row counts disagree");
    DenseMatrix c(a.ncols, b.ncols);
    for (index_t j = 0; j < b.ncols; ++j)
        for (index_t i = 0; i < a.ncols; ++i) c(i, j) = dot(a.col(i), b.col(j));
    flops::add(2ull * static_cast<std::uint64_t>(a.ncols) * a.nrows * b.ncols);
    return c;
}

DenseMatrix multiply_adjoint_right(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.ncols != b.ncols) throw DimensionMismatch("multiply_adjoint_right: column counts disagree");
    DenseMatrix c(a.nrows, b.nrows);
    for (index_t l = 0; l < a.ncols; ++l) {
        const double* acol = a.data.data() + l * a.nrows;
        const double* bcol = b.data.data() + l * b.nrows;
        for (index_t j = 0; j < b.nrows; ++j) {
            double* ccol = c.data.data() + j * c.nrows;
            const double blj = bcol[j];
            if (blj == 0.0) continue;
            for (index_t i = 0; i < a.nrows; ++i) ccol[i] += acol[i] * blj;
        }
    }
    flops::add(2ull * static_cast<std::uint64_t>(a.nrows) * a.ncols * b.nrows);
    return c;
}

std::vector<double> apply(const DenseMatrix& a, std::span<const double> x) {
    if (static_cast<index_t>(x.size()) != a.ncols) throw DimensionMismatch("dense apply: length(x) != ncols");
    std::vector<double> y(static_cast<std::size_t>(a.nrows), 0.0);
    for (index_t j = 0; j < a.ncols; ++j) axpy(x[static_cast<std::size_t>(j)], a.col(j), y);
    flops::add(2ull * static_cast<std::uint64_t>(a.nrows) * a.ncols);
    return y;
}

std::vector<double> apply_adjoint(const DenseMatrix& a, std::span<const double> y) {
    if (static_cast<index_t>(y.size()) != a.nrows) throw DimensionMismatch("dense apply_adjoint: length(y) != nrows");
    std::vector<double> x(static_cast<std::size_t>(a.ncols), 0.0);
    for (index_t j = 0; j < a.ncols; ++j) x[static_cast<std::size_t>(j)] = dot(a.col(j), y);
    flops::add(2ull * static_cast<std::uint64_t>(a.nrows) * a.ncols);
    return x;
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix t(a.ncols, a.nrows);
    for (index_t j = 0; j < a.ncols; ++j)
        for (index_t i = 0; i < a.nrows; ++i) t(j, i) = a(i, j);
    return t;
}

DenseMatrix head_cols(const DenseMatrix& a, index_t count) {
    if (count > a.ncols) throw IndexOutOfRange("head_cols: count exceeds ncols");
    DenseMatrix h(a.nrows, count);
    std::copy(a.data.begin(), a.data.begin() + count * a.nrows, h.data.begin());
    return h;
}

DenseMatrix vstack(const DenseMatrix& top, const DenseMatrix& bottom) {
    if (top.ncols != bottom.ncols) throw DimensionMismatch("vstack: column counts disagree");
    DenseMatrix s(top.nrows + bottom.nrows, top.ncols);
    for (index_t j = 0; j < s.ncols; ++j) {
        auto dst = s.col(j);
        auto t = top.col(j);
        auto b = bottom.col(j);
        std::copy(t.begin(), t.end(), dst.begin());
        std::copy(b.begin(), b.end(), dst.begin() + top.nrows);
    }
    return s;
}

DenseMatrix hstack(const DenseMatrix& left, const DenseMatrix& right) {
    if (left.nrows != right.nrows && !left.empty() && !right.empty())
        throw DimensionMismatch("hstack: row counts disagree");
    if (left.empty()) return right;
    if (right.empty()) return left;
    DenseMatrix s(left.nrows, left.ncols + right.ncols);
    std::copy(left.data.begin(), left.data.end(), s.data.begin());
    std::copy(right.data.begin(), right.data.end(), s.data.begin() + left.data.size());
    return s;
}

double frobenius_norm(const DenseMatrix& a) {
    double acc = 0.0;
    for (double v : a.data) acc += v * v;
    return std::sqrt(acc);
}

double orthonormality_defect(const DenseMatrix& a) {
    DenseMatrix g = multiply_adjoint_left(a, a);
    for (index_t i = 0; i < g.nrows; ++i) g(i, i) -= 1.0;
    return frobenius_norm(g);
}

double dot(std::span<const double> x, std::span<const double> y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
    return acc;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(double alpha, std::span<double> x) {
    for (double& v : x) v *= alpha;
}

}  // namespace svdup
