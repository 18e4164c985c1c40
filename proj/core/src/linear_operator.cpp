#include "svdup/linear_operator.hpp"

#include <cmath>

#include "svdup/errors.hpp"
#include "svdup/flops.hpp"
#include "svdup/rng.hpp"

namespace svdup {

bool adjoint_consistent(const LinearOperator& op, std::uint64_t seed, double tol, int trials) {
    flops::ScopedPause pause;  // spot check, not algorithmic work
    Rng rng(derive_seed(seed, 0xAD701A7ull));
    for (int t = 0; t < trials; ++t) {
        std::vector<double> x(static_cast<std::size_t>(op.ncols));
        std::vector<double> y(static_cast<std::size_t>(op.nrows));
        for (double& v : x) v = rng.gaussian();
        for (double& v : y) v = rng.gaussian();
        const std::vector<double> ax = op(x);
        const std::vector<double> aty = op.adjoint(y);
        const double lhs = dot(y, ax);
        const double rhs = dot(aty, x);
        const double denom = std::max({std::abs(lhs), std::abs(rhs), 1e-30});
        if (std::abs(lhs - rhs) > tol * denom) return false;
    }
    return true;
}

LinearOperator make_operator(const SparseMatrix& a) {
    LinearOperator op;
    op.nrows = a.nrows;
    op.ncols = a.ncols;
    op.flops_per_apply = 2ull * static_cast<std::uint64_t>(a.nnz());
    op.apply = [&a](std::span<const double> x, std::span<double> y) { matvec(a, x, y); };
    op.apply_adjoint = [&a](std::span<const double> y, std::span<double> x) { rmatvec(a, y, x); };
    if (!adjoint_consistent(op, 17)) throw DimensionMismatch("make_operator: adjoint inconsistency");
    return op;
}

LinearOperator make_stacked_operator(const SparseMatrix& b, const SparseMatrix& e) {
    if (b.ncols != e.ncols) throw DimensionMismatch("make_stacked_operator: column counts disagree");
    LinearOperator op;
    op.nrows = b.nrows + e.nrows;
    op.ncols = b.ncols;
    op.flops_per_apply = 2ull * static_cast<std::uint64_t>(b.nnz() + e.nnz());
    const index_t m = b.nrows;
    op.apply = [&b, &e, m](std::span<const double> x, std::span<double> y) {
        matvec(b, x, y.subspan(0, static_cast<std::size_t>(m)));
        matvec(e, x, y.subspan(static_cast<std::size_t>(m)));
    };
    op.apply_adjoint = [&b, &e, m](std::span<const double> y, std::span<double> x) {
        rmatvec(b, y.subspan(0, static_cast<std::size_t>(m)), x);
        std::vector<double> extra(static_cast<std::size_t>(e.ncols));
        rmatvec(e, y.subspan(static_cast<std::size_t>(m)), extra);
        axpy(1.0, extra, x);
    };
    if (!adjoint_consistent(op, 18)) throw DimensionMismatch("make_stacked_operator: adjoint inconsistency");
    return op;
}

LinearOperator make_gram_operator(const LinearOperator& a) {
    LinearOperator op;
    op.nrows = a.ncols;
    op.ncols = a.ncols;
    op.flops_per_apply = 2ull * a.flops_per_apply;
    op.apply = [a](std::span<const double> x, std::span<double> y) {
        std::vector<double> mid(static_cast<std::size_t>(a.nrows));
        a.apply(x, mid);
        a.apply_adjoint(mid, y);
    };
    op.apply_adjoint = op.apply;
    return op;
}

}  // namespace svdup
