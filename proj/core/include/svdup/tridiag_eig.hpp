#ifndef SVDUP_TRIDIAG_EIG_HPP
#define SVDUP_TRIDIAG_EIG_HPP

#include <span>
#include <utility>
#include <vector>

#include "svdup/dense_matrix.hpp"

namespace svdup {

/// All eigenpairs of the symmetric tridiagonal matrix with diagonal `alpha`
/// and off-diagonal `beta` (len(beta) == len(alpha) - 1), by implicit-shift
/// QL with eigenvector accumulation. Eigenvalues ascending. Throws
/// NotConverged if any eigenvalue needs more than 30 iterations.
std::pair<std::vector<double>, DenseMatrix> tridiag_eig(std::span<const double> alpha,
                                                        std::span<const double> beta);

}  // namespace svdup

#endif
