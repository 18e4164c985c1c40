#ifndef SVDUP_JACOBI_SVD_HPP
#define SVDUP_JACOBI_SVD_HPP

#include <vector>

#include "svdup/dense_matrix.hpp"

namespace svdup {

/// Thin SVD with min(m, n) triplets, singular values sorted nonincreasing.
struct FullSvd {
    DenseMatrix u;
    std::vector<double> s;
    DenseMatrix v;
};

/// One-sided Jacobi SVD. Deliberately self-contained and free of any Krylov
/// machinery so it can serve as the verification oracle for everything else.
/// Sweeps until every column pair is orthogonal to 1e-14 relative; throws
/// NotConverged after 60 sweeps. Each singular vector pair is normalized so
/// the largest-magnitude entry of u is positive.
FullSvd jacobi_svd(const DenseMatrix& a);

}  // namespace svdup

#endif
