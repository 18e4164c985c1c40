#ifndef SVDUP_DENSE_MATRIX_HPP
#define SVDUP_DENSE_MATRIX_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace svdup {

using index_t = std::int64_t;

/// Column-major dense matrix of doubles. Used for the small factors
/// (singular vector blocks, projected matrices); bulk data stays sparse.
struct DenseMatrix {
    index_t nrows = 0;
    index_t ncols = 0;
    std::vector<double> data;  // column-major, data.size() == nrows * ncols

    DenseMatrix() = default;
    DenseMatrix(index_t m, index_t n) : nrows(m), ncols(n), data(static_cast<std::size_t>(m * n), 0.0) {}

    double& operator()(index_t i, index_t j) { return data[static_cast<std::size_t>(j * nrows + i)]; }
    double operator()(index_t i, index_t j) const { return data[static_cast<std::size_t>(j * nrows + i)]; }

    std::span<double> col(index_t j) { return {data.data() + j * nrows, static_cast<std::size_t>(nrows)}; }
    std::span<const double> col(index_t j) const {
        return {data.data() + j * nrows, static_cast<std::size_t>(nrows)};
    }

    bool empty() const { return nrows == 0 || ncols == 0; }

    static DenseMatrix identity(index_t n);
    static DenseMatrix zeros(index_t m, index_t n) { return DenseMatrix(m, n); }
};

// Small dense kernels. All charge nominal FLOP costs to the side channel.

/// C = A * B
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
/// C = A^H * B (real data: transpose)
DenseMatrix multiply_adjoint_left(const DenseMatrix& a, const DenseMatrix& b);
/// C = A * B^H
DenseMatrix multiply_adjoint_right(const DenseMatrix& a, const DenseMatrix& b);

/// y = A * x
std::vector<double> apply(const DenseMatrix& a, std::span<const double> x);
/// x = A^H * y
std::vector<double> apply_adjoint(const DenseMatrix& a, std::span<const double> y);

DenseMatrix transpose(const DenseMatrix& a);

/// Keep the leading `count` columns.
DenseMatrix head_cols(const DenseMatrix& a, index_t count);

/// Stack [top; bottom] vertically (column counts must match).
DenseMatrix vstack(const DenseMatrix& top, const DenseMatrix& bottom);
/// Concatenate [left, right] horizontally (row counts must match).
DenseMatrix hstack(const DenseMatrix& left, const DenseMatrix& right);

double frobenius_norm(const DenseMatrix& a);

/// ||A^H*A - I||_F, a cheap orthonormality measure.
double orthonormality_defect(const DenseMatrix& a);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void scale(double alpha, std::span<double> x);

}  // namespace svdup

#endif
