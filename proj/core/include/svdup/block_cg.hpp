#ifndef SVDUP_BLOCK_CG_HPP
#define SVDUP_BLOCK_CG_HPP

#include <vector>

#include "svdup/dense_matrix.hpp"
#include "svdup/sparse_matrix.hpp"

namespace svdup {

struct CgSettings {
    double tol = 1e-8;      // per-column relative residual target, in (0, 1)
    index_t max_iter = 500;
    bool record_history = false;
};

struct CgResult {
    DenseMatrix x;
    index_t iters = 0;
    std::vector<double> final_residuals;  // per column, relative to the rhs norm
    std::vector<double> history;          // operator norm of the residual block per iteration
};

/// Block Conjugate Gradient on the deflated shifted system
///   (I - U_k U_k^H)(lambda I - B B^H)(I - U_k U_k^H) X = (I - U_k U_k^H) RHS,
/// which is symmetric positive definite on range(I - U_k U_k^H) whenever
/// lambda exceeds the top squared singular value. The operator is applied
/// matrix-free (two sparse products with B plus a rank-k projection); the
/// projector is reapplied to the operator output and to every search
/// direction to suppress drift out of the deflated subspace.
///
/// Throws NotConverged (with per-column residuals) past max_iter and
/// NotPositiveDefinite when a quadratic form p^H K p goes nonpositive, which
/// signals lambda <= sigma_1^2.
CgResult deflated_block_cg(const SparseMatrix& b, const DenseMatrix& u_k, double lambda,
                           const DenseMatrix& rhs, const CgSettings& settings);

}  // namespace svdup

#endif
