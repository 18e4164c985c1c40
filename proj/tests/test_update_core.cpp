#include <doctest.h>

#include <cmath>

#include "svdup/errors.hpp"
#include "svdup/projection_basis.hpp"
#include "svdup/update.hpp"
#include "test_support.hpp"

using namespace svdup;

namespace {

TruncatedSvd truncate_oracle(const FullSvd& svd, index_t k) {
    TruncatedSvd out;
    out.u = head_cols(svd.u, k);
    out.v = head_cols(svd.v, k);
    out.s.assign(svd.s.begin(), svd.s.begin() + k);
    return out;
}

UpdateProblem make_row_problem(const SparseMatrix& b, const SparseMatrix& e, index_t k) {
    UpdateProblem p;
    p.base = b;
    p.base_svd = truncate_oracle(jacobi_svd(to_dense(b)), k);
    p.update = e;
    p.direction = UpdateDirection::Rows;
    return p;
}

// Basic-Z distance bound of the proposition, with the explicit
// sqrt(min(m,n)-k) constant.
double basic_bound(const FullSvd& b_svd, const SparseMatrix& e, const FullSvd& a_svd, index_t m,
                   index_t n, index_t k, index_t i) {
    const index_t s_rows = e.nrows;
    std::vector<double> y_hat(static_cast<std::size_t>(s_rows));
    for (index_t row = 0; row < s_rows; ++row) y_hat[static_cast<std::size_t>(row)] = a_svd.u(m + row, i);
    const double ey = norm2(rmatvec(e, y_hat));
    const double omega = std::sqrt(static_cast<double>(std::min(m, n) - k)) * ey;
    const double sk1 = b_svd.s[static_cast<std::size_t>(k)];
    const double shat = a_svd.s[static_cast<std::size_t>(i)];
    return omega * std::abs(sk1 / (sk1 * sk1 - shat * shat));
}

}  // namespace

TEST_SUITE("update-core") {

TEST_CASE("build_z_basic: block bookkeeping and orthonormality") {
    const SparseMatrix b = testsup::random_sparse(10, 7, 0.5, 3);
    const TruncatedSvd base = truncate_oracle(jacobi_svd(to_dense(b)), 2);
    const ProjectionBasis z = build_z_basic(base, 3);
    CHECK(z.total_cols() == 5);
    CHECK(z.total_rows() == 13);
    CHECK_FALSE(z.x_block.has_value());

    // Z^H Z = I, checked through the blockwise apply on canonical vectors.
    for (index_t j = 0; j < 5; ++j) {
        std::vector<double> ej(5, 0.0);
        ej[static_cast<std::size_t>(j)] = 1.0;
        const auto round_trip = z.apply_adjoint(z.apply(ej));
        for (index_t i = 0; i < 5; ++i)
            CHECK(std::abs(round_trip[static_cast<std::size_t>(i)] - ej[static_cast<std::size_t>(i)]) < 1e-12);
    }
}

TEST_CASE("basic-Z distance bound holds with the explicit constant") {
    const index_t m = 12, n = 8, k = 3;
    const SparseMatrix b = testsup::random_sparse(m, n, 0.7, 5);
    const SparseMatrix e = testsup::random_sparse(5, n, 0.6, 7);
    const FullSvd b_svd = jacobi_svd(to_dense(b));
    const FullSvd a_svd = jacobi_svd(to_dense(vstack(b, e)));
    const DenseMatrix u_k = head_cols(b_svd.u, k);

    for (index_t i = 0; i < k; ++i) {
        std::vector<double> u_hat(a_svd.u.col(i).begin(), a_svd.u.col(i).end());
        const double dist = testsup::distance_to_basis(u_hat, u_k, nullptr, m);
        const double bound = basic_bound(b_svd, e, a_svd, m, n, k, i);
        CHECK(dist <= bound + 1e-10);
    }
}

TEST_CASE("build_z_enhanced: zero update degenerates to the basic basis") {
    const SparseMatrix b = testsup::random_sparse(12, 8, 0.5, 9);
    const SparseMatrix e = csr_from_coo({}, 4, 8);
    UpdateProblem p = make_row_problem(b, e, 3);
    const FullSvd a_svd = jacobi_svd(to_dense(vstack(b, e)));
    const double lambda = 1.01 * a_svd.s[0] * a_svd.s[0];
    const ProjectionBasis z = build_z_enhanced(p, lambda, 2, 4, XBuildMode::RandomizedSvd, 11, CgSettings{});
    CHECK_FALSE(z.x_block.has_value());
    CHECK(z.x_truncated);
    CHECK(z.total_cols() == 3 + 4);
}

TEST_CASE("build_z_enhanced: rank-k base degenerates to the basic basis") {
    const SparseMatrix b = testsup::with_spectrum(14, 9, {4, 2, 1}, 13);
    const SparseMatrix e = testsup::random_sparse(5, 9, 0.5, 15);
    UpdateProblem p = make_row_problem(b, e, 3);
    const FullSvd a_svd = jacobi_svd(to_dense(vstack(b, e)));
    const double lambda = 1.01 * a_svd.s[0] * a_svd.s[0];
    const ProjectionBasis z = build_z_enhanced(p, lambda, 2, 4, XBuildMode::RandomizedSvd, 17, CgSettings{});
    CHECK_FALSE(z.x_block.has_value());
}

TEST_CASE("enhanced basis is at least as close to every target vector") {
    const index_t m = 30, n = 20, k = 4, r = 4;
    const SparseMatrix b = testsup::random_sparse(m, n, 0.4, 19);
    const SparseMatrix e = testsup::random_sparse(7, n, 0.5, 21);
    UpdateProblem p = make_row_problem(b, e, k);
    const FullSvd a_svd = jacobi_svd(to_dense(vstack(b, e)));
    const double lambda = 1.01 * a_svd.s[0] * a_svd.s[0];
    CgSettings cg;
    cg.tol = 1e-10;
    const ProjectionBasis z = build_z_enhanced(p, lambda, r, 2 * r, XBuildMode::RandomizedSvd, 23, cg);
    REQUIRE(z.x_block.has_value());
    CHECK(orthonormality_defect(*z.x_block) < 1e-8);
    CHECK(frobenius_norm(multiply_adjoint_left(p.base_svd.u, *z.x_block)) < 1e-8);

    for (index_t i = 0; i < k; ++i) {
        std::vector<double> u_hat(a_svd.u.col(i).begin(), a_svd.u.col(i).end());
        const double basic = testsup::distance_to_basis(u_hat, p.base_svd.u, nullptr, m);
        const double enhanced = testsup::distance_to_basis(u_hat, p.base_svd.u, &*z.x_block, m);
        CHECK(enhanced <= basic + 1e-10);
    }
}

TEST_CASE("compose_zha_operator: zero update with basic Z decouples into blockdiag(Sigma^2, 0)") {
    const SparseMatrix b = testsup::random_sparse(10, 8, 0.6, 25);
    const SparseMatrix e = csr_from_coo({}, 3, 8);
    UpdateProblem p = make_row_problem(b, e, 2);
    const ProjectionBasis z = build_z_basic(p.base_svd, 3);
    const LinearOperator op = compose_zha_operator(p, z);
    REQUIRE(op.nrows == 5);

    std::vector<double> e1(5, 0.0);
    e1[0] = 1.0;
    const auto y = op(e1);
    const double s1 = p.base_svd.s[0];
    CHECK(y[0] == doctest::Approx(s1 * s1));
    for (std::size_t i = 1; i < y.size(); ++i) CHECK(std::abs(y[i]) < 1e-12 * s1 * s1);
}

TEST_CASE("compose_zha_operator: empty base SVD reduces to E E^H") {
    const SparseMatrix b = csr_from_coo({}, 6, 5);
    const SparseMatrix e = testsup::random_sparse(4, 5, 0.6, 27);
    UpdateProblem p;
    p.base = b;
    p.base_svd = TruncatedSvd{DenseMatrix(6, 0), {}, DenseMatrix(5, 0)};
    p.update = e;
    p.direction = UpdateDirection::Rows;
    const ProjectionBasis z = build_z_basic(p.base_svd, 4);
    const LinearOperator op = compose_zha_operator(p, z);
    REQUIRE(op.nrows == 4);

    const DenseMatrix ed = to_dense(e);
    const DenseMatrix eeh = multiply_adjoint_right(ed, ed);
    for (index_t j = 0; j < 4; ++j) {
        std::vector<double> ej(4, 0.0);
        ej[static_cast<std::size_t>(j)] = 1.0;
        const auto y = op(ej);
        for (index_t i = 0; i < 4; ++i)
            CHECK(y[static_cast<std::size_t>(i)] == doctest::Approx(eeh(i, j)).epsilon(1e-10));
    }
}

TEST_CASE("compose_zha_operator: action matches the dense assembly") {
    const index_t m = 16, n = 11, k = 3, s = 5, r = 2;
    const SparseMatrix b = testsup::random_sparse(m, n, 0.5, 29);
    const SparseMatrix e = testsup::random_sparse(s, n, 0.5, 31);
    UpdateProblem p = make_row_problem(b, e, k);
    const FullSvd a_svd = jacobi_svd(to_dense(vstack(b, e)));
    const double lambda = 1.01 * a_svd.s[0] * a_svd.s[0];
    CgSettings cg;
    cg.tol = 1e-12;
    const ProjectionBasis z = build_z_enhanced(p, lambda, r, 2 * r, XBuildMode::RandomizedSvd, 33, cg);
    REQUIRE(z.x_block.has_value());
    const LinearOperator op = compose_zha_operator(p, z);
    const index_t q = z.total_cols();

    // Dense Z, dense A, dense W = (Z^H A)(Z^H A)^H.
    DenseMatrix zd(m + s, q);
    for (index_t j = 0; j < k; ++j)
        for (index_t i = 0; i < m; ++i) zd(i, j) = p.base_svd.u(i, j);
    for (index_t j = 0; j < r; ++j)
        for (index_t i = 0; i < m; ++i) zd(i, k + j) = (*z.x_block)(i, j);
    for (index_t j = 0; j < s; ++j) zd(m + j, k + r + j) = 1.0;
    const DenseMatrix ad = to_dense(vstack(b, e));
    const DenseMatrix za = multiply_adjoint_left(zd, ad);
    const DenseMatrix w = multiply_adjoint_right(za, za);

    svdup::Rng rng(35);
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<double> x(static_cast<std::size_t>(q));
        for (double& v : x) v = rng.gaussian();
        const auto fast = op(x);
        const auto ref = testsup::dense_ref_matvec(w, x);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < ref.size(); ++i) {
            num += (fast[i] - ref[i]) * (fast[i] - ref[i]);
            den += ref[i] * ref[i];
        }
        CHECK(std::sqrt(num) <= 1e-10 * std::sqrt(den));
    }
    CHECK(adjoint_consistent(op, 37));
}

TEST_CASE("rr_svd_rows: exact when the base has rank exactly k") {
    const index_t m = 18, n = 12, k = 3;
    const SparseMatrix b = testsup::with_spectrum(m, n, {6, 4, 2.5}, 39);
    const SparseMatrix e = testsup::random_sparse(6, n, 0.5, 41);
    UpdateProblem p = make_row_problem(b, e, k);
    const ProjectionBasis z = build_z_basic(p.base_svd, 6);

    RrSettings settings;
    settings.tol = 1e-12;
    settings.max_steps = z.total_cols();
    settings.seed = 43;
    const auto [svd, ritz] = rr_svd_rows(p, z, k, settings);

    const FullSvd oracle = jacobi_svd(to_dense(vstack(b, e)));
    for (index_t i = 0; i < k; ++i)
        CHECK(testsup::rel_gap(svd.s[static_cast<std::size_t>(i)], oracle.s[static_cast<std::size_t>(i)]) <=
              1e-9);
    const auto angles = testsup::principal_angles(svd.u, head_cols(oracle.u, k));
    for (double a : angles) CHECK(a < 1e-6);
    const auto vangles = testsup::principal_angles(svd.v, head_cols(oracle.v, k));
    for (double a : vangles) CHECK(a < 1e-6);
    CHECK(ritz.steps_used >= k);
}

TEST_CASE("rr_svd_rows: zero rows leave the spectrum unchanged") {
    const index_t m = 14, n = 9, k = 3, s = 4;
    const SparseMatrix b = testsup::random_sparse(m, n, 0.6, 45);
    const SparseMatrix e = csr_from_coo({}, s, n);
    UpdateProblem p = make_row_problem(b, e, k);
    const ProjectionBasis z = build_z_basic(p.base_svd, s);
    RrSettings settings;
    settings.tol = 1e-12;
    settings.max_steps = z.total_cols();
    settings.seed = 47;
    const auto [svd, ritz] = rr_svd_rows(p, z, k, settings);

    for (index_t i = 0; i < k; ++i)
        CHECK(testsup::rel_gap(svd.s[static_cast<std::size_t>(i)], p.base_svd.s[static_cast<std::size_t>(i)]) <
              1e-10);
    // U extends with zero rows, up to sign.
    for (index_t j = 0; j < k; ++j) {
        double overlap = 0.0;
        for (index_t i = 0; i < m; ++i) overlap += svd.u(i, j) * p.base_svd.u(i, j);
        CHECK(std::abs(std::abs(overlap) - 1.0) < 1e-9);
        for (index_t i = 0; i < s; ++i) CHECK(std::abs(svd.u(m + i, j)) < 1e-9);
    }
}

TEST_CASE("rr_svd_cols: zero columns leave the spectrum unchanged") {
    const index_t m = 11, n = 9, k = 3, s = 3;
    const SparseMatrix b = testsup::random_sparse(m, n, 0.6, 49);
    const SparseMatrix e = csr_from_coo({}, m, s);
    UpdateProblem p;
    p.base = b;
    p.base_svd = truncate_oracle(jacobi_svd(to_dense(b)), k);
    p.update = e;
    p.direction = UpdateDirection::Columns;
    const ProjectionBasis z =
        build_z_basic(TruncatedSvd{p.base_svd.v, p.base_svd.s, p.base_svd.u}, s);
    RrSettings settings;
    settings.tol = 1e-12;
    settings.max_steps = z.total_cols();
    const auto [svd, ritz] = rr_svd_cols(p, z, k, settings);
    for (index_t i = 0; i < k; ++i)
        CHECK(testsup::rel_gap(svd.s[static_cast<std::size_t>(i)], p.base_svd.s[static_cast<std::size_t>(i)]) <
              1e-10);
    for (index_t j = 0; j < k; ++j)
        for (index_t i = 0; i < s; ++i) CHECK(std::abs(svd.v(n + i, j)) < 1e-9);
}

TEST_CASE("rr_svd_cols: transpose of a row problem gives identical theta") {
    const index_t m = 13, n = 8, k = 3, s = 4;
    const SparseMatrix b = testsup::random_sparse(m, n, 0.6, 51);
    const SparseMatrix e = testsup::random_sparse(s, n, 0.6, 53);
    UpdateProblem rows = make_row_problem(b, e, k);
    const ProjectionBasis z_rows = build_z_basic(rows.base_svd, s);

    UpdateProblem cols;
    cols.base = transpose(b);
    cols.update = transpose(e);
    cols.base_svd = TruncatedSvd{rows.base_svd.v, rows.base_svd.s, rows.base_svd.u};
    cols.direction = UpdateDirection::Columns;
    const ProjectionBasis z_cols = build_z_basic(rows.base_svd, s);

    RrSettings settings;
    settings.tol = 1e-12;
    settings.max_steps = z_rows.total_cols();
    settings.seed = 55;
    const auto [svd_r, ritz_r] = rr_svd_rows(rows, z_rows, k, settings);
    const auto [svd_c, ritz_c] = rr_svd_cols(cols, z_cols, k, settings);
    for (index_t i = 0; i < k; ++i)
        CHECK(std::abs(svd_r.s[static_cast<std::size_t>(i)] - svd_c.s[static_cast<std::size_t>(i)]) <=
              1e-10 * svd_r.s[0]);
}

TEST_CASE("rr_svd_cols: random column update stays close to the oracle") {
    const index_t m = 20, n = 12, k = 5, s = 4;
    const SparseMatrix b = testsup::random_sparse(m, n, 0.5, 57);
    const SparseMatrix e = testsup::random_sparse(m, s, 0.5, 59);
    UpdateProblem p;
    p.base = b;
    p.base_svd = truncate_oracle(jacobi_svd(to_dense(b)), k);
    p.update = e;
    p.direction = UpdateDirection::Columns;
    const ProjectionBasis z =
        build_z_basic(TruncatedSvd{p.base_svd.v, p.base_svd.s, p.base_svd.u}, s);
    RrSettings settings;
    settings.tol = 1e-12;
    settings.max_steps = z.total_cols();
    const auto [svd, ritz] = rr_svd_cols(p, z, k, settings);

    // Stacked dense (B E) for the oracle.
    DenseMatrix ad(m, n + s);
    const DenseMatrix bd = to_dense(b);
    const DenseMatrix ed = to_dense(e);
    for (index_t j = 0; j < n; ++j)
        for (index_t i = 0; i < m; ++i) ad(i, j) = bd(i, j);
    for (index_t j = 0; j < s; ++j)
        for (index_t i = 0; i < m; ++i) ad(i, n + j) = ed(i, j);
    const FullSvd oracle = jacobi_svd(ad);

    for (index_t i = 0; i < k; ++i) {
        CHECK(svd.s[static_cast<std::size_t>(i)] <= oracle.s[static_cast<std::size_t>(i)] + 1e-8);
        // Scaled residual stays moderate for a basic-Z projection.
        std::vector<double> av = testsup::dense_ref_matvec(ad, std::vector<double>(svd.v.col(i).begin(),
                                                                                   svd.v.col(i).end()));
        axpy(-svd.s[static_cast<std::size_t>(i)], svd.u.col(i), av);
        CHECK(norm2(av) / svd.s[static_cast<std::size_t>(i)] < 0.3);
    }
}

TEST_CASE("expansion identity: chi coefficients reconstruct the updated left vectors") {
    const index_t m = 10, n = 6, s = 4;
    const SparseMatrix b = testsup::random_sparse(m, n, 0.8, 61);
    const SparseMatrix e = testsup::random_sparse(s, n, 0.8, 63);
    const FullSvd b_svd = jacobi_svd(to_dense(b));
    const FullSvd a_svd = jacobi_svd(to_dense(vstack(b, e)));
    const index_t nsv = static_cast<index_t>(b_svd.s.size());

    for (index_t i = 0; i < 3; ++i) {
        const double shat = a_svd.s[static_cast<std::size_t>(i)];
        std::vector<double> y_hat(static_cast<std::size_t>(s));
        for (index_t row = 0; row < s; ++row) y_hat[static_cast<std::size_t>(row)] = a_svd.u(m + row, i);

        std::vector<double> reconstructed(static_cast<std::size_t>(m), 0.0);
        for (index_t j = 0; j < nsv; ++j) {
            const double sj = b_svd.s[static_cast<std::size_t>(j)];
            std::vector<double> v_j(b_svd.v.col(j).begin(), b_svd.v.col(j).end());
            const double ev_y = dot(matvec(e, v_j), y_hat);
            const double chi = -ev_y * sj / (sj * sj - shat * shat);
            axpy(chi, b_svd.u.col(j), reconstructed);
        }
        // y_hat came from the same oracle column, so signs line up already.
        for (index_t row = 0; row < m; ++row)
            CHECK(std::abs(reconstructed[static_cast<std::size_t>(row)] - a_svd.u(row, i)) < 1e-8);
    }
}

TEST_CASE("invariants: interlacing, Ritz from below, orthonormality, enhanced >= basic") {
    const index_t m = 24, n = 16, k = 4, s = 8;
    const SparseMatrix b = testsup::random_sparse(m, n, 0.45, 65);
    const SparseMatrix e = testsup::random_sparse(s, n, 0.45, 67);
    UpdateProblem p = make_row_problem(b, e, k);
    const FullSvd b_svd = jacobi_svd(to_dense(b));
    const FullSvd a_svd = jacobi_svd(to_dense(vstack(b, e)));
    const double lambda = 1.01 * a_svd.s[0] * a_svd.s[0];

    RrSettings settings;
    settings.tol = 1e-12;
    settings.seed = 69;

    const ProjectionBasis z_basic = build_z_basic(p.base_svd, s);
    RrSettings basic_settings = settings;
    basic_settings.max_steps = z_basic.total_cols();
    const auto [svd_basic, ritz_basic] = rr_svd_rows(p, z_basic, k, basic_settings);

    CgSettings cg;
    cg.tol = 1e-10;
    const ProjectionBasis z_enh = build_z_enhanced(p, lambda, k, 2 * k, XBuildMode::RandomizedSvd, 71, cg);
    RrSettings enh_settings = settings;
    enh_settings.max_steps = z_enh.total_cols();
    const auto [svd_enh, ritz_enh] = rr_svd_rows(p, z_enh, k, enh_settings);

    const double sk1 = b_svd.s[static_cast<std::size_t>(k)];
    for (index_t i = 0; i < k; ++i) {
        const double basic_sigma = svd_basic.s[static_cast<std::size_t>(i)];
        const double enh_sigma = svd_enh.s[static_cast<std::size_t>(i)];
        const double exact = a_svd.s[static_cast<std::size_t>(i)];
        CHECK(basic_sigma >= sk1 - 1e-8);          // interlacing floor
        CHECK(basic_sigma <= exact + 1e-8);        // Ritz from below
        CHECK(enh_sigma <= exact + 1e-8);
        const double basic_err = (exact - basic_sigma) / exact;
        const double enh_err = (exact - enh_sigma) / exact;
        CHECK(enh_err <= basic_err + 1e-12);
    }
    CHECK(orthonormality_defect(svd_basic.u) < 1e-8);
    CHECK(orthonormality_defect(svd_enh.u) < 1e-8);
}

TEST_CASE("rr_svd_rows: settings validation") {
    const SparseMatrix b = testsup::random_sparse(8, 6, 0.5, 73);
    const SparseMatrix e = testsup::random_sparse(2, 6, 0.5, 75);
    UpdateProblem p = make_row_problem(b, e, 2);
    const ProjectionBasis z = build_z_basic(p.base_svd, 2);
    CHECK_THROWS_AS(rr_svd_rows(p, z, 5, RrSettings{}), DimensionMismatch);  // k_out > total_cols
    p.direction = UpdateDirection::Columns;
    CHECK_THROWS_AS(rr_svd_rows(p, z, 2, RrSettings{}), DimensionMismatch);
}

}  // TEST_SUITE
