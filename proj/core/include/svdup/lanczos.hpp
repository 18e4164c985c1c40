#ifndef SVDUP_LANCZOS_HPP
#define SVDUP_LANCZOS_HPP

#include <cstdint>
#include <vector>

#include "svdup/dense_matrix.hpp"
#include "svdup/errors.hpp"
#include "svdup/linear_operator.hpp"
#include "svdup/truncated_svd.hpp"
#include "svdup/update_problem.hpp"

namespace svdup {

/// Golub-Kahan-Lanczos factors: A * v_basis = u_basis * Bd where Bd is the
/// (d+1) x d lower bidiagonal with diagonal alpha and subdiagonal beta.
struct BidiagonalFactors {
    DenseMatrix u_basis;        // m x (d+1)
    DenseMatrix v_basis;        // n x d
    std::vector<double> alpha;  // length d
    std::vector<double> beta;   // length d
    bool breakdown = false;     // d fell short of the requested step count

    index_t steps() const { return static_cast<index_t>(alpha.size()); }
    DenseMatrix bidiagonal() const;
};

/// GKL bidiagonalization with full reorthogonalization. The seed drives the
/// start vector; a fixed seed gives a bit-reproducible run. Early breakdown
/// (alpha or beta below 1e-14 * alpha_1) truncates d and sets the flag.
BidiagonalFactors gkl_bidiagonalize(const LinearOperator& op, index_t steps, std::uint64_t seed);

struct LanczosTopk {
    std::vector<double> theta;   // k largest Ritz values, descending
    DenseMatrix ritz_vecs;       // dim x k
    index_t steps_used = 0;      // delta, for the complexity report
    std::vector<double> residuals;
};

struct LanczosNotConverged : NotConverged {
    LanczosNotConverged(const std::string& what, LanczosTopk best)
        : NotConverged(what, best.residuals), partial(std::move(best)) {}
    LanczosTopk partial;
};

/// Unrestarted symmetric Lanczos with full reorthogonalization for a square
/// symmetric PSD operator. Stops once the k largest Ritz pairs satisfy
/// ||op z - theta z|| <= tol * theta, or the operator's full dimension is
/// spanned. Throws LanczosNotConverged (carrying best-effort pairs) if the
/// step budget runs out first.
LanczosTopk lanczos_sym_topk(const LinearOperator& op, index_t k, index_t max_steps, double tol,
                             std::uint64_t seed);

/// Largest singular value of the virtually stacked [B; E] (or of a single
/// matrix, or of an update problem) from `steps` GKL iterations.
/// Underestimates, monotonically in steps.
double estimate_sigma1(const SparseMatrix& b, const SparseMatrix& e, index_t steps, std::uint64_t seed);
double estimate_sigma1(const SparseMatrix& a, index_t steps, std::uint64_t seed);
double estimate_sigma1(const UpdateProblem& problem, index_t steps, std::uint64_t seed);

/// High-accuracy top-k singular triplets of an operator via GKL, restarting
/// with a doubled step budget until every triplet's two-sided residual falls
/// below tol. Reference-quality; used where the dense oracle does not scale.
TruncatedSvd topk_svd(const LinearOperator& op, index_t k, double tol, std::uint64_t seed);

}  // namespace svdup

#endif
