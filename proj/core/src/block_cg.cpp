#include "svdup/block_cg.hpp"

#include <algorithm>
#include <cmath>

#include "svdup/errors.hpp"
#include "svdup/flops.hpp"
#include "svdup/jacobi_svd.hpp"
#include "svdup/qr.hpp"

namespace svdup {

namespace {

// X += (pseudo)inverse(G) applied implicitly: returns G^+ * M for a small
// symmetric PSD G, cutting singular values below a relative threshold so
// directions that have already converged do not blow up.
DenseMatrix psd_pinv_apply(const DenseMatrix& g, const DenseMatrix& m) {
    const FullSvd svd = jacobi_svd(g);
    const double cutoff = 1e-13 * (svd.s.empty() ? 0.0 : svd.s.front());
    DenseMatrix ut_m = multiply_adjoint_left(svd.u, m);
    for (index_t i = 0; i < ut_m.nrows; ++i) {
        const double si = svd.s[static_cast<std::size_t>(i)];
        const double inv = (si > cutoff && si > 0.0) ? 1.0 / si : 0.0;
        for (index_t j = 0; j < ut_m.ncols; ++j) ut_m(i, j) *= inv;
    }
    return multiply(svd.v, ut_m);
}

}  // namespace

CgResult deflated_block_cg(const SparseMatrix& b, const DenseMatrix& u_k, double lambda,
                           const DenseMatrix& rhs, const CgSettings& settings) {
    if (settings.tol <= 0.0 || settings.tol >= 1.0) throw DimensionMismatch("deflated_block_cg: tol must be in (0,1)");
    if (settings.max_iter < 1) throw DimensionMismatch("deflated_block_cg: max_iter must be >= 1");
    const index_t m = b.nrows;
    if (rhs.nrows != m) throw DimensionMismatch("deflated_block_cg: rhs row count mismatch");
    if (!u_k.empty() && u_k.nrows != m) throw DimensionMismatch("deflated_block_cg: u_k row count mismatch");
    const index_t c = rhs.ncols;

    auto project = [&](DenseMatrix& x) {
        if (!u_k.empty()) project_out(u_k, x);
    };

    // K X = (I-P)(lambda X - B B^H X), column block at a time.
    auto apply_k = [&](const DenseMatrix& x) {
        DenseMatrix bhx = rmatmat(b, x);
        DenseMatrix y = matmat(b, bhx);
        for (std::size_t i = 0; i < y.data.size(); ++i) y.data[i] = lambda * x.data[i] - y.data[i];
        flops::add(2ull * static_cast<std::uint64_t>(m) * c);
        project(y);
        return y;
    };

    CgResult out;
    out.x = DenseMatrix(m, c);
    if (c == 0) return out;

    DenseMatrix r = rhs;
    project(r);  // defensive: keep everything inside range(I - P)

    std::vector<double> rhs_norms(static_cast<std::size_t>(c));
    bool all_zero = true;
    for (index_t j = 0; j < c; ++j) {
        rhs_norms[static_cast<std::size_t>(j)] = norm2(r.col(j));
        if (rhs_norms[static_cast<std::size_t>(j)] > 0.0) all_zero = false;
    }
    out.final_residuals.assign(static_cast<std::size_t>(c), 0.0);
    if (all_zero) return out;  // X = 0, zero iterations

    DenseMatrix p = r;
    auto converged = [&]() {
        for (index_t j = 0; j < c; ++j) {
            const double denom = rhs_norms[static_cast<std::size_t>(j)];
            if (denom == 0.0) continue;
            out.final_residuals[static_cast<std::size_t>(j)] = norm2(r.col(j)) / denom;
            if (out.final_residuals[static_cast<std::size_t>(j)] > settings.tol) return false;
        }
        return true;
    };

    for (index_t iter = 0; iter < settings.max_iter; ++iter) {
        project(p);
        DenseMatrix kp = apply_k(p);

        // Indefiniteness guard: quadratic forms along the current directions.
        for (index_t j = 0; j < c; ++j) {
            const double pnorm = norm2(p.col(j));
            if (pnorm == 0.0) continue;
            const double quad = dot(p.col(j), kp.col(j));
            if (quad <= 0.0)
                throw NotPositiveDefinite("deflated_block_cg: p^H K p <= 0; lambda is not above sigma_1^2");
        }

        const DenseMatrix gram = multiply_adjoint_left(p, kp);
        const DenseMatrix ptr = multiply_adjoint_left(p, r);
        const DenseMatrix alpha = psd_pinv_apply(gram, ptr);

        // X += P alpha; R -= KP alpha
        const DenseMatrix dx = multiply(p, alpha);
        const DenseMatrix dr = multiply(kp, alpha);
        for (std::size_t i = 0; i < out.x.data.size(); ++i) {
            out.x.data[i] += dx.data[i];
            r.data[i] -= dr.data[i];
        }
        flops::add(2ull * static_cast<std::uint64_t>(m) * c);
        out.iters = iter + 1;

        if (settings.record_history) {
            const FullSvd rs = jacobi_svd(r);
            out.history.push_back(rs.s.empty() ? 0.0 : rs.s.front());
        }
        if (converged()) return out;

        // P <- R + P beta with beta chosen to keep the block A-conjugate.
        const DenseMatrix kptr = multiply_adjoint_left(kp, r);
        const DenseMatrix beta = psd_pinv_apply(gram, kptr);
        DenseMatrix pnext = multiply(p, beta);
        for (std::size_t i = 0; i < pnext.data.size(); ++i) pnext.data[i] = r.data[i] - pnext.data[i];
        p = std::move(pnext);
    }
    throw NotConverged("deflated_block_cg: residual tolerance not reached", out.final_residuals);
}

}  // namespace svdup
