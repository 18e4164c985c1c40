#ifndef SVDUP_LINEAR_OPERATOR_HPP
#define SVDUP_LINEAR_OPERATOR_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "svdup/dense_matrix.hpp"
#include "svdup/sparse_matrix.hpp"

namespace svdup {

/// Matrix-free apply / apply-adjoint contract used by every Krylov kernel.
struct LinearOperator {
    index_t nrows = 0;
    index_t ncols = 0;
    std::function<void(std::span<const double>, std::span<double>)> apply;
    std::function<void(std::span<const double>, std::span<double>)> apply_adjoint;
    std::uint64_t flops_per_apply = 0;

    std::vector<double> operator()(std::span<const double> x) const {
        std::vector<double> y(static_cast<std::size_t>(nrows));
        apply(x, y);
        return y;
    }
    std::vector<double> adjoint(std::span<const double> y) const {
        std::vector<double> x(static_cast<std::size_t>(ncols));
        apply_adjoint(y, x);
        return x;
    }
};

/// Probabilistic adjoint-consistency check: y^H (A x) == (A^H y)^H x on a few
/// seeded random pairs, to `tol` relative. Factories of cheap operators call
/// this at construction; expensive solver-backed operators skip it.
bool adjoint_consistent(const LinearOperator& op, std::uint64_t seed, double tol = 1e-10, int trials = 2);

/// Wrap a sparse matrix. Verifies adjoint consistency at construction.
LinearOperator make_operator(const SparseMatrix& a);

/// Operator for the virtually stacked update [B; E] without materializing it.
LinearOperator make_stacked_operator(const SparseMatrix& b, const SparseMatrix& e);

/// The Gram operator A^H A (square, symmetric PSD) of any operator.
LinearOperator make_gram_operator(const LinearOperator& a);

}  // namespace svdup

#endif
