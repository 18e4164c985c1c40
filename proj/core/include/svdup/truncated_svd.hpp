#ifndef SVDUP_TRUNCATED_SVD_HPP
#define SVDUP_TRUNCATED_SVD_HPP

#include <vector>

#include "svdup/dense_matrix.hpp"

namespace svdup {

/// Rank-k truncated SVD triplet (U_k, Sigma_k, V_k): the input factorization
/// of the base matrix and the output approximation of the updated one.
/// s is nonincreasing and positive; u and v have orthonormal columns.
struct TruncatedSvd {
    DenseMatrix u;
    std::vector<double> s;
    DenseMatrix v;

    index_t rank() const { return static_cast<index_t>(s.size()); }
};

}  // namespace svdup

#endif
