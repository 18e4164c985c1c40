#include "svdup/baselines.hpp"

#include <algorithm>

#include "svdup/errors.hpp"
#include "svdup/flops.hpp"
#include "svdup/jacobi_svd.hpp"
#include "svdup/lanczos.hpp"
#include "svdup/qr.hpp"

namespace svdup {

void BaselineChoice::validate() const {
    if (method == BaselineMethod::VecharynskiSV && !rank_r)
        throw DimensionMismatch("BaselineChoice: VecharynskiSV requires rank_r");
    if (method == BaselineMethod::ZhaSimon && rank_r)
        throw DimensionMismatch("BaselineChoice: rank_r only applies to VecharynskiSV");
}

namespace {

// Dense E^H (n x s) straight from the CSR of E (s x n).
DenseMatrix dense_adjoint(const SparseMatrix& e) {
    DenseMatrix out(e.ncols, e.nrows);
    for (index_t i = 0; i < e.nrows; ++i)
        for (index_t p = e.row_ptr[static_cast<std::size_t>(i)]; p < e.row_ptr[static_cast<std::size_t>(i) + 1]; ++p)
            out(e.col_idx[static_cast<std::size_t>(p)], i) = e.values[static_cast<std::size_t>(p)];
    return out;
}

// U_hat = blockdiag(U_k, I_s) * F_k for the row-update rotations.
DenseMatrix rotate_left_factor(const DenseMatrix& u, index_t s, const DenseMatrix& f, index_t k_out) {
    const index_t k = u.ncols;
    DenseMatrix top_coeffs(k, k_out), bottom(s, k_out);
    for (index_t j = 0; j < k_out; ++j)
        for (index_t i = 0; i < k; ++i) top_coeffs(i, j) = f(i, j);
    for (index_t j = 0; j < k_out; ++j)
        for (index_t i = 0; i < s; ++i) bottom(i, j) = f(k + i, j);
    return vstack(multiply(u, top_coeffs), bottom);
}

TruncatedSvd zha_simon_rows_impl(const UpdateProblem& problem, BaselinePhases* phases) {
    const index_t s = problem.update.nrows;
    const index_t k = problem.base_svd.rank();
    const SparseMatrix& e = problem.update;
    const DenseMatrix& u = problem.base_svd.u;
    const DenseMatrix& v = problem.base_svd.v;

    // Building W: project E^H against V_k and take its QR.
    flops::Phase build_phase;
    const DenseMatrix ev = matmat(e, v);  // s x k
    DenseMatrix projected = dense_adjoint(e);
    if (k > 0) {
        // (I - V V^H) E^H = E^H - V (E V)^H
        const DenseMatrix correction = multiply_adjoint_right(v, ev);
        for (std::size_t i = 0; i < projected.data.size(); ++i) projected.data[i] -= correction.data[i];
        flops::add(static_cast<std::uint64_t>(projected.data.size()));
    }
    const QrFactors qr = mgs_qr(projected);
    if (phases) phases->build_w = build_phase.elapsed();

    // Inner (k+s) x (k+s) matrix [Sigma_k 0; E V_k R^H] and its SVD.
    flops::Phase solve_phase;
    DenseMatrix inner(k + s, k + s);
    for (index_t i = 0; i < k; ++i) inner(i, i) = problem.base_svd.s[static_cast<std::size_t>(i)];
    for (index_t i = 0; i < s; ++i)
        for (index_t j = 0; j < k; ++j) inner(k + i, j) = ev(i, j);
    for (index_t i = 0; i < s; ++i)
        for (index_t j = 0; j < s; ++j) inner(k + i, k + j) = qr.r(j, i);
    const FullSvd small = jacobi_svd(inner);
    if (phases) phases->solve = solve_phase.elapsed();

    flops::Phase other_phase;
    TruncatedSvd out;
    out.s.assign(small.s.begin(), small.s.begin() + k);
    out.u = rotate_left_factor(u, s, small.u, k);
    // V_hat = [V_k Q] G_k
    DenseMatrix g_top(k, k), g_bottom(s, k);
    for (index_t j = 0; j < k; ++j) {
        for (index_t i = 0; i < k; ++i) g_top(i, j) = small.v(i, j);
        for (index_t i = 0; i < s; ++i) g_bottom(i, j) = small.v(k + i, j);
    }
    out.v = multiply(v, g_top);
    const DenseMatrix qg = multiply(qr.q, g_bottom);
    for (std::size_t i = 0; i < out.v.data.size(); ++i) out.v.data[i] += qg.data[i];
    flops::add(static_cast<std::uint64_t>(out.v.data.size()));
    if (phases) phases->other = other_phase.elapsed();
    return out;
}

}  // namespace

TruncatedSvd zha_simon_rows(const UpdateProblem& problem, BaselinePhases* phases) {
    problem.validate();
    if (problem.direction != UpdateDirection::Rows)
        throw DimensionMismatch("zha_simon_rows: problem direction must be Rows");
    return zha_simon_rows_impl(problem, phases);
}

TruncatedSvd zha_simon_cols(const UpdateProblem& problem, BaselinePhases* phases) {
    problem.validate();
    if (problem.direction != UpdateDirection::Columns)
        throw DimensionMismatch("zha_simon_cols: problem direction must be Columns");
    UpdateProblem mirrored;
    mirrored.base = transpose(problem.base);
    mirrored.update = transpose(problem.update);
    mirrored.base_svd = TruncatedSvd{problem.base_svd.v, problem.base_svd.s, problem.base_svd.u};
    mirrored.direction = UpdateDirection::Rows;
    TruncatedSvd t = zha_simon_rows_impl(mirrored, phases);
    return TruncatedSvd{std::move(t.v), std::move(t.s), std::move(t.u)};
}

TruncatedSvd vecharynski_rows(const UpdateProblem& problem, index_t r, std::uint64_t seed,
                              BaselinePhases* phases) {
    problem.validate();
    if (problem.direction != UpdateDirection::Rows)
        throw DimensionMismatch("vecharynski_rows: problem direction must be Rows");
    const index_t n = problem.base.ncols;
    const index_t s = problem.update.nrows;
    const index_t k = problem.base_svd.rank();
    if (r > s) throw DimensionMismatch("vecharynski_rows: r must not exceed the update size");
    const SparseMatrix& e = problem.update;
    const DenseMatrix& v = problem.base_svd.v;

    // X_r: leading left directions of (I - V_k V_k^H) E^H, matrix-free GKL
    // with exactly r steps.
    flops::Phase build_phase;
    LinearOperator projected;
    projected.nrows = n;
    projected.ncols = s;
    projected.flops_per_apply = 2ull * static_cast<std::uint64_t>(e.nnz() + n * k);
    projected.apply = [&](std::span<const double> w, std::span<double> out) {
        rmatvec(e, w, out);
        if (k > 0) {
            const std::vector<double> coeffs = apply_adjoint(v, out);
            for (index_t j = 0; j < k; ++j) axpy(-coeffs[static_cast<std::size_t>(j)], v.col(j), out);
            flops::add(2ull * static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(k));
        }
    };
    projected.apply_adjoint = [&](std::span<const double> z, std::span<double> out) {
        std::vector<double> t(z.begin(), z.end());
        if (k > 0) {
            const std::vector<double> coeffs = apply_adjoint(v, t);
            for (index_t j = 0; j < k; ++j) axpy(-coeffs[static_cast<std::size_t>(j)], v.col(j), t);
            flops::add(2ull * static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(k));
        }
        matvec(e, t, out);
    };

    const BidiagonalFactors f = gkl_bidiagonalize(projected, std::min(r, std::min(n, s)), seed);
    DenseMatrix x_r(n, 0);
    if (f.steps() > 0) {
        const FullSvd small = jacobi_svd(f.bidiagonal());
        index_t r_eff = 0;
        const double cutoff = small.s.empty() ? 0.0 : 1e-12 * small.s.front();
        while (r_eff < std::min<index_t>(r, static_cast<index_t>(small.s.size())) &&
               small.s[static_cast<std::size_t>(r_eff)] > cutoff)
            ++r_eff;
        if (r_eff > 0) x_r = multiply(f.u_basis, head_cols(small.u, r_eff));
    }
    const index_t r_eff = x_r.ncols;
    if (phases) phases->build_w = build_phase.elapsed();

    // Projected (k+s) x (k+r) matrix [Sigma_k 0; E V_k  E X_r]; the top-right
    // block vanishes because X_r is orthogonal to V_k.
    flops::Phase solve_phase;
    const DenseMatrix ev = matmat(e, v);
    const DenseMatrix ex = matmat(e, x_r);
    DenseMatrix inner(k + s, k + r_eff);
    for (index_t i = 0; i < k; ++i) inner(i, i) = problem.base_svd.s[static_cast<std::size_t>(i)];
    for (index_t i = 0; i < s; ++i) {
        for (index_t j = 0; j < k; ++j) inner(k + i, j) = ev(i, j);
        for (index_t j = 0; j < r_eff; ++j) inner(k + i, k + j) = ex(i, j);
    }
    const FullSvd small = jacobi_svd(inner);
    if (phases) phases->solve = solve_phase.elapsed();

    flops::Phase other_phase;
    const index_t k_out = std::min<index_t>(k, static_cast<index_t>(small.s.size()));
    TruncatedSvd out;
    out.s.assign(small.s.begin(), small.s.begin() + k_out);
    out.u = rotate_left_factor(problem.base_svd.u, s, small.u, k_out);
    DenseMatrix g_top(k, k_out), g_bottom(r_eff, k_out);
    for (index_t j = 0; j < k_out; ++j) {
        for (index_t i = 0; i < k; ++i) g_top(i, j) = small.v(i, j);
        for (index_t i = 0; i < r_eff; ++i) g_bottom(i, j) = small.v(k + i, j);
    }
    out.v = multiply(v, g_top);
    if (r_eff > 0) {
        const DenseMatrix xg = multiply(x_r, g_bottom);
        for (std::size_t i = 0; i < out.v.data.size(); ++i) out.v.data[i] += xg.data[i];
    }
    if (phases) phases->other = other_phase.elapsed();
    return out;
}

}  // namespace svdup
