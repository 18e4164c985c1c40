#include "svdup/projection_basis.hpp"

#include <algorithm>
#include <string>

#include "svdup/errors.hpp"

namespace svdup {

void UpdateProblem::validate() const {
    const index_t k = base_svd.rank();
    if (direction == UpdateDirection::Rows) {
        if (update.ncols != base.ncols)
            throw DimensionMismatch("UpdateProblem: row update must share the column count of B");
    } else {
        if (update.nrows != base.nrows)
            throw DimensionMismatch("UpdateProblem: column update must share the row count of B");
    }
    if (k > std::min(base.nrows, base.ncols))
        throw DimensionMismatch("UpdateProblem: base_svd rank exceeds min(m, n)");
    if (base_svd.u.ncols != k || base_svd.v.ncols != k)
        throw DimensionMismatch("UpdateProblem: base_svd factor widths disagree with rank");
    if (base_svd.u.nrows != base.nrows || base_svd.v.nrows != base.ncols)
        throw DimensionMismatch("UpdateProblem: base_svd factor heights disagree with B");
}

std::vector<double> ProjectionBasis::apply(std::span<const double> coeffs) const {
    if (static_cast<index_t>(coeffs.size()) != total_cols())
        throw DimensionMismatch("ProjectionBasis::apply: coefficient length mismatch");
    const index_t k = u_block.ncols;
    const index_t r = x_cols();
    std::vector<double> z(static_cast<std::size_t>(total_rows()), 0.0);
    std::span<double> top(z.data(), static_cast<std::size_t>(base_rows()));

    for (index_t j = 0; j < k; ++j) axpy(coeffs[static_cast<std::size_t>(j)], u_block.col(j), top);
    if (x_block)
        for (index_t j = 0; j < r; ++j)
            axpy(coeffs[static_cast<std::size_t>(k + j)], x_block->col(j), top);
    for (index_t j = 0; j < s_identity; ++j)
        z[static_cast<std::size_t>(base_rows() + j)] = coeffs[static_cast<std::size_t>(k + r + j)];
    return z;
}

std::vector<double> ProjectionBasis::apply_adjoint(std::span<const double> z) const {
    if (static_cast<index_t>(z.size()) != total_rows())
        throw DimensionMismatch("ProjectionBasis::apply_adjoint: vector length mismatch");
    const index_t k = u_block.ncols;
    const index_t r = x_cols();
    std::span<const double> top(z.data(), static_cast<std::size_t>(base_rows()));
    std::vector<double> c(static_cast<std::size_t>(total_cols()));
    for (index_t j = 0; j < k; ++j) c[static_cast<std::size_t>(j)] = dot(u_block.col(j), top);
    if (x_block)
        for (index_t j = 0; j < r; ++j) c[static_cast<std::size_t>(k + j)] = dot(x_block->col(j), top);
    for (index_t j = 0; j < s_identity; ++j)
        c[static_cast<std::size_t>(k + r + j)] = z[static_cast<std::size_t>(base_rows() + j)];
    return c;
}

DenseMatrix ProjectionBasis::apply(const DenseMatrix& coeffs) const {
    DenseMatrix z(total_rows(), coeffs.ncols);
    for (index_t j = 0; j < coeffs.ncols; ++j) {
        const std::vector<double> col = apply(std::span<const double>(coeffs.col(j)));
        std::copy(col.begin(), col.end(), z.col(j).begin());
    }
    return z;
}

ProjectionBasis build_z_basic(const TruncatedSvd& base_svd, index_t s) {
    if (s < 1) throw DimensionMismatch("build_z_basic: s must be >= 1");
    ProjectionBasis z;
    z.u_block = base_svd.u;
    z.s_identity = s;
    return z;
}

ProjectionBasis build_z_enhanced(const UpdateProblem& problem, double lambda, index_t r,
                                 index_t sketch_cols, XBuildMode mode, std::uint64_t seed,
                                 const CgSettings& cg) {
    problem.validate();
    if (r < 1) throw DimensionMismatch("build_z_enhanced: r must be >= 1");

    const bool rows = (problem.direction == UpdateDirection::Rows);
    XLambdaResult x;
    if (rows) {
        x = build_x_lambda_r(problem.base, problem.base_svd, problem.update, lambda, r, sketch_cols,
                             mode, seed, cg);
    } else {
        // Column update: the basis lives on the right factor, so build X for
        // the transposed (row) problem.
        const SparseMatrix bt = transpose(problem.base);
        const SparseMatrix et = transpose(problem.update);
        const TruncatedSvd mirrored{problem.base_svd.v, problem.base_svd.s, problem.base_svd.u};
        x = build_x_lambda_r(bt, mirrored, et, lambda, r, sketch_cols, mode, seed, cg);
    }

    ProjectionBasis z;
    z.u_block = rows ? problem.base_svd.u : problem.base_svd.v;
    z.s_identity = rows ? problem.update.nrows : problem.update.ncols;
    z.lambda = lambda;
    z.x_truncated = x.rank_deficient();
    if (x.achieved_rank() > 0) z.x_block = std::move(x.x);
    return z;
}

}  // namespace svdup
