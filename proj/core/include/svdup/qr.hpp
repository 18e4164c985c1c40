#ifndef SVDUP_QR_HPP
#define SVDUP_QR_HPP

#include "svdup/dense_matrix.hpp"

namespace svdup {

struct QrFactors {
    DenseMatrix q;  // orthonormal columns
    DenseMatrix r;  // upper triangular / trapezoidal
};

/// Modified Gram-Schmidt QR with one unconditional reorthogonalization pass.
/// A numerically rank-deficient column yields a zero diagonal entry of R and
/// its Q column is replaced by a deterministic random direction
/// orthogonalized against the columns already accepted.
QrFactors mgs_qr(const DenseMatrix& a);

/// Orthonormal basis of range(A): Gram-Schmidt that *drops* columns falling
/// below drop_tol (relative to the largest column norm of A) instead of
/// replacing them. Returns a matrix with rank(A) columns.
DenseMatrix orthonormal_range(const DenseMatrix& a, double drop_tol = 1e-12);

/// A -= Q * (Q^H * A), one pass. Q must have orthonormal columns.
void project_out(const DenseMatrix& q, DenseMatrix& a);

}  // namespace svdup

#endif
