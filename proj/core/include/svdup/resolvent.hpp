#ifndef SVDUP_RESOLVENT_HPP
#define SVDUP_RESOLVENT_HPP

#include <cstdint>

#include "svdup/block_cg.hpp"
#include "svdup/sparse_matrix.hpp"
#include "svdup/truncated_svd.hpp"

namespace svdup {

enum class XBuildMode { RandomizedSvd, GklOnProduct };

struct XLambdaResult {
    DenseMatrix x;  // m x achieved_rank; orthonormal columns, orthogonal to U_k
    index_t requested_rank = 0;

    index_t achieved_rank() const { return x.ncols; }
    bool rank_deficient() const { return x.ncols < requested_rank; }
};

/// Orthonormal basis for the r leading left singular directions of
/// -B(lambda) B E^H, where B(lambda) = (I - U_k U_k^H)(B B^H - lambda I)^{-1}.
/// Every application of B(lambda) is a deflated block CG solve.
///
/// RandomizedSvd draws a seeded Gaussian sketch R (m x sketch_cols), pushes it
/// through the product and its adjoint, orthonormalizes, and compresses to the
/// r leading directions by a Rayleigh-Ritz step. GklOnProduct instead runs
/// Lanczos bidiagonalization on the product operator for max(2r, r+10) steps.
///
/// The caller must supply lambda above the top squared singular value of the
/// updated matrix (CG reports NotPositiveDefinite otherwise). Fewer than r
/// numerically independent directions yield a flagged, narrower basis.
XLambdaResult build_x_lambda_r(const SparseMatrix& b, const TruncatedSvd& base_svd,
                               const SparseMatrix& e, double lambda, index_t r, index_t sketch_cols,
                               XBuildMode mode, std::uint64_t seed, const CgSettings& cg);

}  // namespace svdup

#endif
