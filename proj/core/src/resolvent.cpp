#include "svdup/resolvent.hpp"

#include <algorithm>
#include <cmath>

#include "svdup/errors.hpp"
#include "svdup/flops.hpp"
#include "svdup/jacobi_svd.hpp"
#include "svdup/lanczos.hpp"
#include "svdup/qr.hpp"
#include "svdup/rng.hpp"

namespace svdup {

namespace {

// Numerical rank of a nonincreasing singular value list.
index_t rank_from_singular_values(const std::vector<double>& s, double rel_tol = 1e-12) {
    if (s.empty()) return 0;
    const double cutoff = std::max(rel_tol * s.front(), 1e-300);
    index_t r = 0;
    while (r < static_cast<index_t>(s.size()) && s[static_cast<std::size_t>(r)] > cutoff) ++r;
    return r;
}

// Final hygiene shared by both modes: one explicit projection against U_k
// plus reorthonormalization, guaranteeing the block-orthogonality the
// projection basis requires.
XLambdaResult finalize(DenseMatrix x, const DenseMatrix& u_k, index_t requested) {
    if (!x.empty() && !u_k.empty()) project_out(u_k, x);
    XLambdaResult out;
    out.requested_rank = requested;
    out.x = x.empty() ? DenseMatrix(x.nrows, 0) : orthonormal_range(x, 1e-10);
    if (out.x.ncols > requested) out.x = head_cols(out.x, requested);
    return out;
}

XLambdaResult build_randomized(const SparseMatrix& b, const DenseMatrix& u_k, const SparseMatrix& e,
                               double lambda, index_t r, index_t sketch_cols, std::uint64_t seed,
                               const CgSettings& cg) {
    const index_t m = b.nrows;

    // Gaussian sketch, i.i.d. standard normal, fully determined by the seed.
    DenseMatrix sketch(m, sketch_cols);
    Rng rng(derive_seed(seed, 0x5E7C4ull));
    for (double& v : sketch.data) v = rng.gaussian();
    flops::add(static_cast<std::uint64_t>(sketch.data.size()));

    // With M = -B(lambda) B E^H and K the deflated shifted operator,
    // M w = K^+ (I-P) B E^H w, so the sketch pass Y = M M^H R unrolls into
    // two block solves sandwiching the sparse products.
    const DenseMatrix s1 = deflated_block_cg(b, u_k, lambda, sketch, cg).x;     // = -B(lambda) R
    const DenseMatrix mh_r = matmat(e, rmatmat(b, s1));                         // = M^H R
    const DenseMatrix core = matmat(b, rmatmat(e, mh_r));                       // = B E^H M^H R
    const DenseMatrix y = deflated_block_cg(b, u_k, lambda, core, cg).x;        // = M M^H R

    const DenseMatrix q = orthonormal_range(y, 1e-10);
    if (q.ncols == 0) return finalize(DenseMatrix(m, 0), u_k, r);

    // Rayleigh-Ritz compression: W = M^H Q, SVD of W, leading right vectors
    // rotate Q onto the leading left singular directions of M.
    const DenseMatrix s2 = deflated_block_cg(b, u_k, lambda, q, cg).x;
    const DenseMatrix w = matmat(e, rmatmat(b, s2));  // s x q.ncols
    const FullSvd ws = jacobi_svd(w);
    const index_t r_eff = std::min(r, rank_from_singular_values(ws.s));
    if (r_eff == 0) return finalize(DenseMatrix(m, 0), u_k, r);

    const DenseMatrix x = multiply(q, head_cols(ws.v, r_eff));
    return finalize(x, u_k, r);
}

XLambdaResult build_gkl(const SparseMatrix& b, const DenseMatrix& u_k, const SparseMatrix& e,
                        double lambda, index_t r, std::uint64_t seed, const CgSettings& cg) {
    const index_t m = b.nrows;
    const index_t s = e.nrows;

    LinearOperator product;
    product.nrows = m;
    product.ncols = s;
    product.flops_per_apply = 2ull * static_cast<std::uint64_t>(b.nnz() + e.nnz());
    product.apply = [&](std::span<const double> x, std::span<double> y) {
        DenseMatrix rhs(m, 1);
        const std::vector<double> bex = matvec(b, rmatvec(e, x));
        std::copy(bex.begin(), bex.end(), rhs.col(0).begin());
        const CgResult sol = deflated_block_cg(b, u_k, lambda, rhs, cg);
        std::copy(sol.x.col(0).begin(), sol.x.col(0).end(), y.begin());
    };
    product.apply_adjoint = [&](std::span<const double> y, std::span<double> x) {
        DenseMatrix rhs(m, 1);
        std::copy(y.begin(), y.end(), rhs.col(0).begin());
        const CgResult sol = deflated_block_cg(b, u_k, lambda, rhs, cg);
        const std::vector<double> out = matvec(e, rmatvec(b, sol.x.col(0)));
        std::copy(out.begin(), out.end(), x.begin());
    };

    const index_t steps = std::min(std::max(2 * r, r + 10), std::min(m, s));
    const BidiagonalFactors f = gkl_bidiagonalize(product, steps, seed);
    if (f.steps() == 0) return finalize(DenseMatrix(m, 0), u_k, r);

    const FullSvd small = jacobi_svd(f.bidiagonal());
    const index_t r_eff = std::min(r, rank_from_singular_values(small.s));
    if (r_eff == 0) return finalize(DenseMatrix(m, 0), u_k, r);
    const DenseMatrix x = multiply(f.u_basis, head_cols(small.u, r_eff));
    return finalize(x, u_k, r);
}

}  // namespace

namespace {

// The product -B(lambda) B E^H has the same range as (I - P) B E^H. When the
// deflation projector annihilates B E^H (zero update, or a base of exactly
// rank k), everything downstream would be built from roundoff noise; a couple
// of random probes detect that case up front.
bool product_vanishes(const SparseMatrix& b, const DenseMatrix& u_k, const SparseMatrix& e,
                      std::uint64_t seed) {
    flops::ScopedPause pause;
    Rng rng(derive_seed(seed, 0x980BEull));
    for (int trial = 0; trial < 2; ++trial) {
        std::vector<double> g(static_cast<std::size_t>(e.nrows));
        for (double& v : g) v = rng.gaussian();
        const std::vector<double> t = matvec(b, rmatvec(e, g));
        std::vector<double> projected = t;
        for (index_t j = 0; j < u_k.ncols; ++j) {
            const double coeff = dot(u_k.col(j), projected);
            axpy(-coeff, u_k.col(j), projected);
        }
        if (norm2(projected) > 1e-12 * norm2(t) + 1e-300) return false;
    }
    return true;
}

}  // namespace

XLambdaResult build_x_lambda_r(const SparseMatrix& b, const TruncatedSvd& base_svd,
                               const SparseMatrix& e, double lambda, index_t r, index_t sketch_cols,
                               XBuildMode mode, std::uint64_t seed, const CgSettings& cg) {
    if (r < 1) throw DimensionMismatch("build_x_lambda_r: r must be >= 1");
    if (sketch_cols < r) throw DimensionMismatch("build_x_lambda_r: sketch_cols must be >= r");
    if (e.ncols != b.ncols) throw DimensionMismatch("build_x_lambda_r: E column count must match B");

    if (e.nnz() == 0 || product_vanishes(b, base_svd.u, e, seed)) {
        XLambdaResult out;
        out.requested_rank = r;
        out.x = DenseMatrix(b.nrows, 0);
        return out;
    }

    if (mode == XBuildMode::RandomizedSvd)
        return build_randomized(b, base_svd.u, e, lambda, r, sketch_cols, seed, cg);
    return build_gkl(b, base_svd.u, e, lambda, r, seed, cg);
}

}  // namespace svdup
