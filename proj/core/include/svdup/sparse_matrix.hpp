#ifndef SVDUP_SPARSE_MATRIX_HPP
#define SVDUP_SPARSE_MATRIX_HPP

#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "svdup/dense_matrix.hpp"

namespace svdup {

/// One coordinate-format entry (row, col, value).
struct Triplet {
    index_t row;
    index_t col;
    double value;
};

/// Compressed sparse row matrix, immutable after construction.
///
/// Invariants: row_ptr is nondecreasing with row_ptr[0] == 0 and
/// row_ptr[nrows] == nnz; column indices are strictly increasing within each
/// row and in [0, ncols); no explicitly stored zeros survive construction.
struct SparseMatrix {
    index_t nrows = 0;
    index_t ncols = 0;
    std::vector<index_t> row_ptr{0};
    std::vector<index_t> col_idx;
    std::vector<double> values;

    index_t nnz() const { return static_cast<index_t>(values.size()); }
};

/// Build a CSR matrix from coordinate triples. Duplicates are summed; entries
/// that cancel to exact zero are dropped.
SparseMatrix csr_from_coo(std::span<const Triplet> triples, index_t nrows, index_t ncols);

/// y = A * x. Charges 2*nnz(A) FLOPs.
std::vector<double> matvec(const SparseMatrix& a, std::span<const double> x);
void matvec(const SparseMatrix& a, std::span<const double> x, std::span<double> y);

/// x = A^H * y (real data: transpose). Charges 2*nnz(A) FLOPs.
std::vector<double> rmatvec(const SparseMatrix& a, std::span<const double> y);
void rmatvec(const SparseMatrix& a, std::span<const double> y, std::span<double> x);

/// Split into (A[0:upto, :], A[upto:, :]).
std::pair<SparseMatrix, SparseMatrix> split_rows(const SparseMatrix& a, index_t upto);

/// Explicit transpose (used to mirror a column-update problem into a row one).
SparseMatrix transpose(const SparseMatrix& a);

/// Stack [top; bottom] vertically.
SparseMatrix vstack(const SparseMatrix& top, const SparseMatrix& bottom);

DenseMatrix to_dense(const SparseMatrix& a);

/// Y = A * X for dense X, column by column. Charges 2*nnz(A)*ncols(X).
DenseMatrix matmat(const SparseMatrix& a, const DenseMatrix& x);
/// Y = A^H * X for dense X.
DenseMatrix rmatmat(const SparseMatrix& a, const DenseMatrix& x);

}  // namespace svdup

#endif
