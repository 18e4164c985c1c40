#ifndef SVDUP_PROJECTION_BASIS_HPP
#define SVDUP_PROJECTION_BASIS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "svdup/block_cg.hpp"
#include "svdup/dense_matrix.hpp"
#include "svdup/resolvent.hpp"
#include "svdup/sparse_matrix.hpp"
#include "svdup/truncated_svd.hpp"
#include "svdup/update_problem.hpp"

namespace svdup {

/// Structured projection basis
///     Z = [ U_k  X  0 ]
///         [  0   0  I_s ]
/// held in blocks; the dense (m+s) x (k+r+s) form is never materialized.
/// Blocks are mutually orthonormal, so Z^H Z = I.
struct ProjectionBasis {
    DenseMatrix u_block;                 // m x k (V_k-based for column updates)
    std::optional<DenseMatrix> x_block;  // m x r, orthonormal and orthogonal to u_block
    index_t s_identity = 0;
    std::optional<double> lambda;
    bool x_truncated = false;  // the X builder achieved fewer columns than asked

    index_t base_rows() const { return u_block.nrows; }
    index_t total_rows() const { return u_block.nrows + s_identity; }
    index_t x_cols() const { return x_block ? x_block->ncols : 0; }
    index_t total_cols() const { return u_block.ncols + x_cols() + s_identity; }

    /// z = Z * c, blockwise.
    std::vector<double> apply(std::span<const double> coeffs) const;
    /// c = Z^H * z, blockwise.
    std::vector<double> apply_adjoint(std::span<const double> z) const;
    /// Column-block version of apply.
    DenseMatrix apply(const DenseMatrix& coeffs) const;
};

/// Z = blockdiag(U_k, I_s). Structural; charges zero FLOPs.
ProjectionBasis build_z_basic(const TruncatedSvd& base_svd, index_t s);

/// Basic Z enriched with X_{lambda,r}: Z = [U_k, X_{lambda,r}; I_s]. When the
/// achieved X rank is zero the result degenerates to the basic basis (flagged).
ProjectionBasis build_z_enhanced(const UpdateProblem& problem, double lambda, index_t r,
                                 index_t sketch_cols, XBuildMode mode, std::uint64_t seed,
                                 const CgSettings& cg);

}  // namespace svdup

#endif
