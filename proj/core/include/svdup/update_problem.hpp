#ifndef SVDUP_UPDATE_PROBLEM_HPP
#define SVDUP_UPDATE_PROBLEM_HPP

#include "svdup/sparse_matrix.hpp"
#include "svdup/truncated_svd.hpp"

namespace svdup {

enum class UpdateDirection { Rows, Columns };

/// A row (or column) update problem: base matrix B with its rank-k truncated
/// SVD, plus the block E of new rows (s x n) or new columns (m x s).
struct UpdateProblem {
    SparseMatrix base;
    TruncatedSvd base_svd;
    SparseMatrix update;
    UpdateDirection direction = UpdateDirection::Rows;

    void validate() const;
};

}  // namespace svdup

#endif
