#include <doctest.h>

#include <cmath>

#include "svdup/block_cg.hpp"
#include "svdup/errors.hpp"
#include "svdup/lanczos.hpp"
#include "svdup/linear_operator.hpp"
#include "svdup/resolvent.hpp"
#include "test_support.hpp"

using namespace svdup;

TEST_SUITE("krylov") {

TEST_CASE("gkl: diagonal operator reproduces the spectrum exactly") {
    const SparseMatrix d = testsup::diagonal_sparse({3, 2, 1}, 3, 3);
    const LinearOperator op = make_operator(d);
    const BidiagonalFactors f = gkl_bidiagonalize(op, 3, 5);
    REQUIRE(f.steps() == 3);
    const FullSvd svd = jacobi_svd(f.bidiagonal());
    CHECK(std::abs(svd.s[0] - 3.0) < 1e-12);
    CHECK(std::abs(svd.s[1] - 2.0) < 1e-12);
    CHECK(std::abs(svd.s[2] - 1.0) < 1e-12);
}

TEST_CASE("gkl: rank-1 operator breaks down after one step with alpha = ||u|| ||v||") {
    // A = u v^H with ||u|| = 3, ||v|| = 2.
    svdup::Rng rng(7);
    std::vector<double> u(6), v(4);
    for (double& x : u) x = rng.gaussian();
    for (double& x : v) x = rng.gaussian();
    scale(3.0 / norm2(u), u);
    scale(2.0 / norm2(v), v);
    DenseMatrix a(6, 4);
    for (index_t i = 0; i < 6; ++i)
        for (index_t j = 0; j < 4; ++j) a(i, j) = u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
    const SparseMatrix as = testsup::dense_to_sparse(a);
    const LinearOperator op = make_operator(as);

    const BidiagonalFactors f = gkl_bidiagonalize(op, 4, 11);
    CHECK(f.breakdown);
    REQUIRE(f.steps() == 1);
    CHECK(std::abs(f.alpha[0] - 6.0) < 1e-12);
    CHECK(std::abs(f.beta[0]) < 1e-12);
}

TEST_CASE("gkl: full-length run matches the dense oracle to 1e-9") {
    const SparseMatrix a = testsup::random_sparse(30, 20, 0.3, 13);
    const LinearOperator op = make_operator(a);
    const BidiagonalFactors f = gkl_bidiagonalize(op, 20, 17);
    REQUIRE(f.steps() == 20);
    CHECK(orthonormality_defect(f.u_basis) < 1e-12);
    CHECK(orthonormality_defect(f.v_basis) < 1e-12);

    const FullSvd small = jacobi_svd(f.bidiagonal());
    const FullSvd oracle = jacobi_svd(to_dense(a));
    for (index_t i = 0; i < 20; ++i)
        CHECK(std::abs(small.s[static_cast<std::size_t>(i)] - oracle.s[static_cast<std::size_t>(i)]) <=
              1e-9 * std::max(1.0, oracle.s[0]));
}

TEST_CASE("gkl: factorization identity A V = U Bd") {
    const SparseMatrix a = testsup::random_sparse(15, 11, 0.4, 19);
    const LinearOperator op = make_operator(a);
    const BidiagonalFactors f = gkl_bidiagonalize(op, 7, 23);
    const DenseMatrix av = matmat(a, f.v_basis);
    const DenseMatrix ubd = multiply(f.u_basis, f.bidiagonal());
    double diff = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < av.data.size(); ++i) {
        diff += (av.data[i] - ubd.data[i]) * (av.data[i] - ubd.data[i]);
        ref += av.data[i] * av.data[i];
    }
    CHECK(std::sqrt(diff) <= 1e-10 * std::sqrt(ref));
}

TEST_CASE("gkl: deterministic for a fixed seed") {
    const SparseMatrix a = testsup::random_sparse(12, 9, 0.5, 29);
    const LinearOperator op = make_operator(a);
    const BidiagonalFactors f1 = gkl_bidiagonalize(op, 5, 31);
    const BidiagonalFactors f2 = gkl_bidiagonalize(op, 5, 31);
    CHECK(f1.alpha == f2.alpha);
    CHECK(f1.beta == f2.beta);
    CHECK(f1.u_basis.data == f2.u_basis.data);
}

TEST_CASE("lanczos_sym_topk: diagonal operator") {
    const SparseMatrix d = testsup::diagonal_sparse({9, 4, 1}, 3, 3);
    const LinearOperator op = make_operator(d);
    const LanczosTopk r = lanczos_sym_topk(op, 2, 3, 1e-12, 3);
    REQUIRE(r.theta.size() == 2);
    CHECK(r.theta[0] == doctest::Approx(9.0));
    CHECK(r.theta[1] == doctest::Approx(4.0));
}

TEST_CASE("lanczos_sym_topk: identity operator needs invariant-subspace restarts") {
    const SparseMatrix eye = testsup::diagonal_sparse({1, 1, 1, 1, 1}, 5, 5);
    const LinearOperator op = make_operator(eye);
    const LanczosTopk r = lanczos_sym_topk(op, 3, 5, 1e-12, 5);
    REQUIRE(r.theta.size() == 3);
    for (double t : r.theta) CHECK(t == doctest::Approx(1.0));
    CHECK(orthonormality_defect(r.ritz_vecs) < 1e-10);
}

TEST_CASE("lanczos_sym_topk: random PSD operator matches the dense oracle") {
    const DenseMatrix g = testsup::random_dense(40, 40, 37);
    const SparseMatrix gs = testsup::dense_to_sparse(g);
    const LinearOperator op = make_gram_operator(make_operator(gs));
    const LanczosTopk r = lanczos_sym_topk(op, 5, 40, 1e-10, 41);

    const DenseMatrix gram = multiply_adjoint_left(g, g);
    const auto [evals, evecs] = testsup::sym_jacobi_eig(gram);
    const double scale_ref = evals[0];
    for (index_t i = 0; i < 5; ++i)
        CHECK(std::abs(r.theta[static_cast<std::size_t>(i)] - evals[static_cast<std::size_t>(i)]) <=
              1e-9 * scale_ref);

    // Ritz values approach from below, never exceeding the top eigenvalue.
    for (double t : r.theta) CHECK(t <= evals[0] + 1e-9 * scale_ref);
}

TEST_CASE("lanczos_sym_topk: step budget exhaustion carries partial results") {
    const DenseMatrix g = testsup::random_dense(30, 30, 43);
    const SparseMatrix gs = testsup::dense_to_sparse(g);
    const LinearOperator op = make_gram_operator(make_operator(gs));
    try {
        lanczos_sym_topk(op, 4, 5, 1e-14, 47);
        // Tight tolerance with 5 steps normally fails; if it passed, fine.
    } catch (const LanczosNotConverged& e) {
        CHECK(e.partial.theta.size() == 4);
        CHECK(e.partial.steps_used == 5);
        CHECK_FALSE(e.partial.residuals.empty());
    }
}

TEST_CASE("deflated_block_cg: identity system solves in one iteration") {
    const SparseMatrix b = csr_from_coo({}, 8, 5);  // B = 0
    const DenseMatrix rhs = testsup::random_dense(8, 3, 51);
    CgSettings settings;
    const CgResult r = deflated_block_cg(b, DenseMatrix(8, 0), 1.0, rhs, settings);
    CHECK(r.iters == 1);
    for (std::size_t i = 0; i < rhs.data.size(); ++i) CHECK(r.x.data[i] == doctest::Approx(rhs.data[i]));
}

TEST_CASE("deflated_block_cg: zero rhs returns instantly") {
    const SparseMatrix b = testsup::random_sparse(10, 6, 0.4, 53);
    const CgResult r = deflated_block_cg(b, DenseMatrix(10, 0), 100.0, DenseMatrix(10, 2), CgSettings{});
    CHECK(r.iters == 0);
    CHECK(frobenius_norm(r.x) == 0.0);
}

TEST_CASE("deflated_block_cg: matches the dense pseudoinverse and honors the kappa bound") {
    const index_t m = 25, n = 15, k = 3;
    const SparseMatrix b = testsup::random_sparse(m, n, 0.5, 59);
    const FullSvd oracle = jacobi_svd(to_dense(b));
    const DenseMatrix u_k = head_cols(oracle.u, k);
    const double sigma1 = oracle.s[0];
    const double lambda = 1.01 * sigma1 * sigma1;

    // Random rhs, projected inside range(I - U_k U_k^H).
    DenseMatrix rhs = testsup::random_dense(m, 4, 61);
    project_out(u_k, rhs);

    CgSettings settings;
    settings.tol = 1e-10;
    const CgResult r = deflated_block_cg(b, u_k, lambda, rhs, settings);

    // Dense oracle solve of the deflated system.
    DenseMatrix kmat(m, m);
    {
        const DenseMatrix bd = to_dense(b);
        const DenseMatrix bbh = multiply_adjoint_right(bd, bd);
        for (index_t i = 0; i < m; ++i)
            for (index_t j = 0; j < m; ++j) kmat(i, j) = (i == j ? lambda : 0.0) - bbh(i, j);
        DenseMatrix left = kmat;
        project_out(u_k, left);
        DenseMatrix leftt = transpose(left);
        project_out(u_k, leftt);
        kmat = transpose(leftt);
    }
    const DenseMatrix x_ref = multiply(testsup::dense_pinv(kmat), rhs);
    double diff = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < x_ref.data.size(); ++i) {
        diff += (r.x.data[i] - x_ref.data[i]) * (r.x.data[i] - x_ref.data[i]);
        ref += x_ref.data[i] * x_ref.data[i];
    }
    CHECK(std::sqrt(diff) <= 1e-8 * std::sqrt(ref));

    const double sk1 = oracle.s[static_cast<std::size_t>(k)];
    const double kappa = lambda / (lambda - sk1 * sk1);
    const double bound = std::ceil(std::sqrt(kappa) * std::log(2.0 / settings.tol) / 2.0) + 1.0;
    CHECK(static_cast<double>(r.iters) <= bound);
}

TEST_CASE("deflated_block_cg: indefiniteness is reported, not iterated through") {
    const index_t m = 12, n = 8;
    const SparseMatrix b = testsup::random_sparse(m, n, 0.6, 67);
    const FullSvd oracle = jacobi_svd(to_dense(b));
    const double lambda = 0.5 * oracle.s[0] * oracle.s[0];  // below sigma_1^2
    DenseMatrix rhs = testsup::random_dense(m, 2, 69);
    CHECK_THROWS_AS(deflated_block_cg(b, DenseMatrix(m, 0), lambda, rhs, CgSettings{}),
                    NotPositiveDefinite);
}

TEST_CASE("deflated_block_cg: residual history is monotone in the operator norm") {
    const index_t m = 20, n = 12, k = 2;
    const SparseMatrix b = testsup::random_sparse(m, n, 0.5, 71);
    const FullSvd oracle = jacobi_svd(to_dense(b));
    const DenseMatrix u_k = head_cols(oracle.u, k);
    const double lambda = 1.01 * oracle.s[0] * oracle.s[0];
    DenseMatrix rhs = testsup::random_dense(m, 3, 73);
    project_out(u_k, rhs);
    CgSettings settings;
    settings.tol = 1e-10;
    settings.record_history = true;
    const CgResult r = deflated_block_cg(b, u_k, lambda, rhs, settings);
    for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] <= r.history[i - 1] * (1.0 + 1e-12));
}

TEST_CASE("resolvent geometric series contracts at max |gamma|") {
    const index_t m = 12, n = 8, k = 3;
    const SparseMatrix b_sparse = testsup::random_sparse(m, n, 0.7, 77);
    const SparseMatrix e = testsup::random_sparse(4, n, 0.7, 79);
    const SparseMatrix a = vstack(b_sparse, e);
    const FullSvd b_svd = jacobi_svd(to_dense(b_sparse));
    const FullSvd a_svd = jacobi_svd(to_dense(a));

    const double sigma_hat_1 = a_svd.s[0];
    const double lambda = 1.01 * sigma_hat_1 * sigma_hat_1;
    const index_t i = k;  // the triplet closest to the tail: slowest contraction
    const double shift = a_svd.s[static_cast<std::size_t>(i - 1)] * a_svd.s[static_cast<std::size_t>(i - 1)];

    double gamma_max = 0.0;
    for (index_t j = k; j < static_cast<index_t>(b_svd.s.size()); ++j) {
        const double sj2 = b_svd.s[static_cast<std::size_t>(j)] * b_svd.s[static_cast<std::size_t>(j)];
        gamma_max = std::max(gamma_max, std::abs((shift - lambda) / (sj2 - lambda)));
    }
    // The complement block of BB^H contributes sigma = 0 entries.
    gamma_max = std::max(gamma_max, std::abs((shift - lambda) / (0.0 - lambda)));

    const DenseMatrix b_lambda = testsup::dense_resolvent(b_svd, m, k, lambda);
    const DenseMatrix target = testsup::dense_resolvent(b_svd, m, k, shift);

    DenseMatrix partial(m, m);
    DenseMatrix term = b_lambda;  // B(lambda) * [(shift - lambda) B(lambda)]^rho
    double prev_err = -1.0;
    for (int p = 0; p < 6; ++p) {
        for (std::size_t t = 0; t < partial.data.size(); ++t) partial.data[t] += term.data[t];
        DenseMatrix err = target;
        for (std::size_t t = 0; t < err.data.size(); ++t) err.data[t] -= partial.data[t];
        const double err_norm = testsup::spectral_norm(err);
        if (prev_err > 0.0) CHECK(err_norm / prev_err <= gamma_max + 1e-8);
        prev_err = err_norm;
        term = multiply(term, b_lambda);
        for (double& t : term.data) t *= (shift - lambda);
    }
}

TEST_CASE("build_x_lambda_r: zero update yields rank zero") {
    const SparseMatrix b = testsup::random_sparse(12, 8, 0.5, 83);
    const SparseMatrix e = csr_from_coo({}, 3, 8);
    const FullSvd oracle = jacobi_svd(to_dense(b));
    TruncatedSvd base;
    base.u = head_cols(oracle.u, 2);
    base.v = head_cols(oracle.v, 2);
    base.s.assign(oracle.s.begin(), oracle.s.begin() + 2);
    const double lambda = 1.01 * oracle.s[0] * oracle.s[0];
    const XLambdaResult r =
        build_x_lambda_r(b, base, e, lambda, 2, 4, XBuildMode::RandomizedSvd, 5, CgSettings{});
    CHECK(r.achieved_rank() == 0);
    CHECK(r.rank_deficient());
}

TEST_CASE("build_x_lambda_r: exactly rank-k base degenerates to rank zero") {
    const SparseMatrix b = testsup::with_spectrum(14, 9, {5, 3, 2}, 87);  // rank exactly 3
    const SparseMatrix e = testsup::random_sparse(4, 9, 0.6, 89);
    const FullSvd oracle = jacobi_svd(to_dense(b));
    TruncatedSvd base;
    base.u = head_cols(oracle.u, 3);
    base.v = head_cols(oracle.v, 3);
    base.s.assign(oracle.s.begin(), oracle.s.begin() + 3);
    const SparseMatrix a = vstack(b, e);
    const FullSvd a_svd = jacobi_svd(to_dense(a));
    const double lambda = 1.01 * a_svd.s[0] * a_svd.s[0];
    const XLambdaResult r =
        build_x_lambda_r(b, base, e, lambda, 2, 4, XBuildMode::RandomizedSvd, 7, CgSettings{});
    CHECK(r.achieved_rank() == 0);
}

TEST_CASE("build_x_lambda_r: captures the leading directions of the dense product") {
    const index_t m = 30, n = 20, k = 4, r = 4;
    const SparseMatrix b = testsup::random_sparse(m, n, 0.4, 91);
    const SparseMatrix e = testsup::random_sparse(8, n, 0.5, 93);
    const FullSvd b_svd = jacobi_svd(to_dense(b));
    TruncatedSvd base;
    base.u = head_cols(b_svd.u, k);
    base.v = head_cols(b_svd.v, k);
    base.s.assign(b_svd.s.begin(), b_svd.s.begin() + k);

    const SparseMatrix a = vstack(b, e);
    const FullSvd a_svd = jacobi_svd(to_dense(a));
    const double lambda = 1.01 * a_svd.s[0] * a_svd.s[0];

    // Dense construction of -B(lambda) B E^H through the oracle SVD.
    const DenseMatrix b_lambda = testsup::dense_resolvent(b_svd, m, k, lambda);
    const DenseMatrix be = multiply(b_lambda, to_dense(b));
    DenseMatrix product = multiply_adjoint_right(be, to_dense(e));
    for (double& v : product.data) v = -v;
    const FullSvd product_svd = jacobi_svd(product);
    const DenseMatrix leading = head_cols(product_svd.u, r);

    CgSettings cg;
    cg.tol = 1e-10;
    for (XBuildMode mode : {XBuildMode::RandomizedSvd, XBuildMode::GklOnProduct}) {
        const XLambdaResult xr = build_x_lambda_r(b, base, e, lambda, r, 2 * r, mode, 95, cg);
        REQUIRE(xr.achieved_rank() == r);
        CHECK(orthonormality_defect(xr.x) < 1e-8);
        // Orthogonal to U_k.
        const DenseMatrix cross = multiply_adjoint_left(base.u, xr.x);
        CHECK(frobenius_norm(cross) < 1e-8);
        const auto angles = testsup::principal_angles(xr.x, leading);
        for (double angle : angles) CHECK(angle < 0.15);
    }
}

TEST_CASE("estimate_sigma1: exact on tiny spectra, within 1% at desk scale") {
    const SparseMatrix d = testsup::diagonal_sparse({5, 1}, 2, 2);
    CHECK(std::abs(estimate_sigma1(d, 2, 1) - 5.0) < 1e-12);

    const SparseMatrix eye = testsup::diagonal_sparse({1, 1, 1, 1}, 4, 4);
    CHECK(estimate_sigma1(eye, 2, 1) == doctest::Approx(1.0));

    const SparseMatrix a = testsup::random_sparse(40, 25, 0.3, 97);
    const FullSvd oracle = jacobi_svd(to_dense(a));
    const double est = estimate_sigma1(a, 12, 3);
    CHECK(est <= oracle.s[0] * (1.0 + 1e-12));
    CHECK(est >= oracle.s[0] * 0.99);

    // Split form agrees with the stacked matrix.
    const auto [b, e] = split_rows(a, 20);
    const double est2 = estimate_sigma1(b, e, 12, 3);
    CHECK(est2 == doctest::Approx(est).epsilon(1e-12));
}

TEST_CASE("topk_svd: reference accuracy on a random instance") {
    const SparseMatrix a = testsup::random_sparse(60, 35, 0.25, 101);
    const LinearOperator op = make_operator(a);
    const TruncatedSvd top = topk_svd(op, 6, 1e-12, 7);
    const FullSvd oracle = jacobi_svd(to_dense(a));
    for (index_t i = 0; i < 6; ++i)
        CHECK(std::abs(top.s[static_cast<std::size_t>(i)] - oracle.s[static_cast<std::size_t>(i)]) <=
              1e-10 * oracle.s[0]);
}

}  // TEST_SUITE
