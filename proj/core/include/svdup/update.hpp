#ifndef SVDUP_UPDATE_HPP
#define SVDUP_UPDATE_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "svdup/lanczos.hpp"
#include "svdup/linear_operator.hpp"
#include "svdup/projection_basis.hpp"
#include "svdup/truncated_svd.hpp"

namespace svdup {

/// Knobs for the projected eigensolve inside the updaters. max_steps == 0
/// picks the default cap min(basis dimension, 6 * k_out).
struct RrSettings {
    double tol = 1e-10;
    index_t max_steps = 0;
    std::uint64_t seed = 0;
    bool reorthogonalize_v = false;  // post-orthonormalize the recovered V (chained updates)
};

/// Ritz data from the projected solve: theta holds the k accepted singular
/// value approximations, f their coordinates in the Z basis.
struct RitzResult {
    std::vector<double> theta;  // nonincreasing, nonnegative
    DenseMatrix f;              // total_cols x k
    index_t steps_used = 0;     // delta, the Lanczos step count
    std::vector<double> residuals;
    bool truncated = false;  // trailing values below 1e-12 * theta_1 were rejected
    std::uint64_t flops_projected_solve = 0;
    std::uint64_t flops_recover = 0;
};

/// The symmetric PSD operator (Z^H A)(Z^H A)^H of dimension total_cols,
/// applied matrix-free. B enters only through the stored triplet (the
/// Sigma_k V_k^H rows) and, when present, the precomputed n x r block B^H X.
/// The returned operator views the problem and basis; both must outlive it.
LinearOperator compose_zha_operator(const UpdateProblem& problem, const ProjectionBasis& basis);

/// Rank-k update for row additions: Rayleigh-Ritz on A A^H restricted to
/// range(Z), then V recovered through one adjoint product with the virtually
/// stacked A. Throws LanczosNotConverged (partial results inside) when the
/// projected solve misses its tolerance.
std::pair<TruncatedSvd, RitzResult> rr_svd_rows(const UpdateProblem& problem,
                                                const ProjectionBasis& basis, index_t k_out,
                                                const RrSettings& settings);

/// Mirror of rr_svd_rows for column additions (roles of U/V and A/A^H swap;
/// the basis carries V_k and has n + s rows).
std::pair<TruncatedSvd, RitzResult> rr_svd_cols(const UpdateProblem& problem,
                                                const ProjectionBasis& basis, index_t k_out,
                                                const RrSettings& settings);

}  // namespace svdup

#endif
