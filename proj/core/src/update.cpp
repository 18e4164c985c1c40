#include "svdup/update.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "svdup/errors.hpp"
#include "svdup/flops.hpp"
#include "svdup/qr.hpp"

namespace svdup {

LinearOperator compose_zha_operator(const UpdateProblem& problem, const ProjectionBasis& basis) {
    problem.validate();
    if (problem.direction != UpdateDirection::Rows)
        throw DimensionMismatch("compose_zha_operator: expects a row update (columns mirror through rr_svd_cols)");
    const index_t m = problem.base.nrows;
    const index_t n = problem.base.ncols;
    const index_t s = problem.update.nrows;
    if (basis.base_rows() != m || basis.s_identity != s)
        throw DimensionMismatch("compose_zha_operator: basis shape disagrees with the problem");
    if (basis.u_block.ncols != problem.base_svd.rank())
        throw DimensionMismatch("compose_zha_operator: basis U block width disagrees with base_svd");

    const index_t k = basis.u_block.ncols;
    const index_t r = basis.x_cols();

    // U_k^H B never appears: the triplet gives Sigma_k V_k^H directly, and the
    // X part enters through the precomputed n x r block B^H X.
    auto bh_x = std::make_shared<DenseMatrix>(n, 0);
    if (basis.x_block) *bh_x = rmatmat(problem.base, *basis.x_block);

    const DenseMatrix* v = &problem.base_svd.v;
    const std::vector<double>* sig = &problem.base_svd.s;
    const SparseMatrix* e = &problem.update;

    LinearOperator op;
    op.nrows = op.ncols = basis.total_cols();
    op.flops_per_apply = 4ull * static_cast<std::uint64_t>(n * (k + r) + e->nnz());
    op.apply = [v, sig, e, bh_x, k, r, s, n](std::span<const double> in, std::span<double> out) {
        // t = (Z^H A)^H c = V_k Sigma_k c1 + (B^H X) c2 + E^H c3
        std::vector<double> t(static_cast<std::size_t>(n), 0.0);
        for (index_t j = 0; j < k; ++j)
            axpy((*sig)[static_cast<std::size_t>(j)] * in[static_cast<std::size_t>(j)], v->col(j), t);
        for (index_t j = 0; j < r; ++j) axpy(in[static_cast<std::size_t>(k + j)], bh_x->col(j), t);
        if (s > 0) {
            std::vector<double> from_e(static_cast<std::size_t>(n));
            rmatvec(*e, in.subspan(static_cast<std::size_t>(k + r)), from_e);
            axpy(1.0, from_e, t);
        }
        // out = (Z^H A) t
        for (index_t j = 0; j < k; ++j)
            out[static_cast<std::size_t>(j)] = (*sig)[static_cast<std::size_t>(j)] * dot(v->col(j), t);
        for (index_t j = 0; j < r; ++j) out[static_cast<std::size_t>(k + j)] = dot(bh_x->col(j), t);
        if (s > 0) matvec(*e, t, out.subspan(static_cast<std::size_t>(k + r)));
        flops::add(4ull * static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(k + r) +
                   3ull * static_cast<std::uint64_t>(n) + 2ull * static_cast<std::uint64_t>(k));
    };
    op.apply_adjoint = op.apply;  // symmetric by construction
    return op;
}

namespace {

std::pair<TruncatedSvd, RitzResult> rr_svd_rows_impl(const UpdateProblem& problem,
                                                     const ProjectionBasis& basis, index_t k_out,
                                                     const RrSettings& settings) {
    const index_t m = problem.base.nrows;
    const index_t n = problem.base.ncols;
    const index_t q = basis.total_cols();
    if (k_out < 1 || k_out > q)
        throw DimensionMismatch("rr_svd_rows: k_out must lie in [1, total_cols]");

    const LinearOperator op = compose_zha_operator(problem, basis);

    flops::Phase solve_phase;
    index_t cap = settings.max_steps > 0 ? std::min(settings.max_steps, q) : std::min(q, 6 * k_out);
    cap = std::max(cap, k_out);
    const LanczosTopk ritz_pairs = lanczos_sym_topk(op, k_out, cap, settings.tol, settings.seed);
    const std::uint64_t solve_flops = solve_phase.elapsed();

    flops::Phase recover_phase;
    std::vector<double> sigma;
    sigma.reserve(ritz_pairs.theta.size());
    for (double theta : ritz_pairs.theta) sigma.push_back(std::sqrt(std::max(theta, 0.0)));

    // Values the inversion in Step 5 cannot survive are dropped.
    index_t k_eff = static_cast<index_t>(sigma.size());
    bool truncated = false;
    if (!sigma.empty()) {
        const double cutoff = 1e-12 * sigma.front();
        while (k_eff > 0 && sigma[static_cast<std::size_t>(k_eff) - 1] <= cutoff) {
            --k_eff;
            truncated = true;
        }
    }
    sigma.resize(static_cast<std::size_t>(k_eff));
    DenseMatrix f = head_cols(ritz_pairs.ritz_vecs, k_eff);

    DenseMatrix u_bar = basis.apply(f);
    flops::add(2ull * static_cast<std::uint64_t>(basis.base_rows()) *
               static_cast<std::uint64_t>(basis.u_block.ncols + basis.x_cols()) *
               static_cast<std::uint64_t>(k_eff));

    // Sign convention: largest-magnitude entry of each u column positive.
    for (index_t j = 0; j < k_eff; ++j) {
        auto col = u_bar.col(j);
        std::size_t arg = 0;
        for (std::size_t i = 1; i < col.size(); ++i)
            if (std::abs(col[i]) > std::abs(col[arg])) arg = i;
        if (col[arg] < 0.0) {
            scale(-1.0, col);
            scale(-1.0, f.col(j));
        }
    }

    // V = A^H U Sigma^{-1}, one adjoint product with the virtual [B; E] per column.
    DenseMatrix v_bar(n, k_eff);
    std::vector<double> from_e(static_cast<std::size_t>(n));
    for (index_t j = 0; j < k_eff; ++j) {
        auto ucol = u_bar.col(j);
        rmatvec(problem.base, ucol.first(static_cast<std::size_t>(m)), v_bar.col(j));
        rmatvec(problem.update, ucol.subspan(static_cast<std::size_t>(m)), from_e);
        axpy(1.0, from_e, v_bar.col(j));
        scale(1.0 / sigma[static_cast<std::size_t>(j)], v_bar.col(j));
    }
    flops::add(2ull * static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(k_eff));
    if (settings.reorthogonalize_v && k_eff > 0) v_bar = mgs_qr(v_bar).q;

    RitzResult ritz;
    ritz.theta = sigma;
    ritz.f = std::move(f);
    ritz.steps_used = ritz_pairs.steps_used;
    ritz.residuals = ritz_pairs.residuals;
    ritz.truncated = truncated;
    ritz.flops_projected_solve = solve_flops;
    ritz.flops_recover = recover_phase.elapsed();

    TruncatedSvd out;
    out.u = std::move(u_bar);
    out.s = std::move(sigma);
    out.v = std::move(v_bar);
    return {std::move(out), std::move(ritz)};
}

}  // namespace

std::pair<TruncatedSvd, RitzResult> rr_svd_rows(const UpdateProblem& problem,
                                                const ProjectionBasis& basis, index_t k_out,
                                                const RrSettings& settings) {
    problem.validate();
    if (problem.direction != UpdateDirection::Rows)
        throw DimensionMismatch("rr_svd_rows: problem direction must be Rows");
    return rr_svd_rows_impl(problem, basis, k_out, settings);
}

std::pair<TruncatedSvd, RitzResult> rr_svd_cols(const UpdateProblem& problem,
                                                const ProjectionBasis& basis, index_t k_out,
                                                const RrSettings& settings) {
    problem.validate();
    if (problem.direction != UpdateDirection::Columns)
        throw DimensionMismatch("rr_svd_cols: problem direction must be Columns");

    UpdateProblem mirrored;
    mirrored.base = transpose(problem.base);
    mirrored.update = transpose(problem.update);
    mirrored.base_svd = TruncatedSvd{problem.base_svd.v, problem.base_svd.s, problem.base_svd.u};
    mirrored.direction = UpdateDirection::Rows;

    auto [svd, ritz] = rr_svd_rows_impl(mirrored, basis, k_out, settings);
    TruncatedSvd swapped;
    swapped.u = std::move(svd.v);
    swapped.s = std::move(svd.s);
    swapped.v = std::move(svd.u);
    return {std::move(swapped), std::move(ritz)};
}

}  // namespace svdup
