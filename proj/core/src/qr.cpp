#include "svdup/qr.hpp"

#include <algorithm>
#include <cmath>

#include "svdup/errors.hpp"
#include "svdup/flops.hpp"
#include "svdup/rng.hpp"

namespace svdup {

namespace {

// One MGS sweep of column j of q against columns [0, j); accumulates the
// coefficients into r when given.
void orthogonalize_once(DenseMatrix& q, index_t j, DenseMatrix* r) {
    auto col = q.col(j);
    for (index_t i = 0; i < j; ++i) {
        const double coeff = dot(q.col(i), col);
        axpy(-coeff, q.col(i), col);
        if (r) (*r)(i, j) += coeff;
    }
    flops::add(4ull * static_cast<std::uint64_t>(q.nrows) * static_cast<std::uint64_t>(j));
}

// Deterministic fallback direction for a dead column.
void fill_random_unit(DenseMatrix& q, index_t j, std::uint64_t salt) {
    Rng rng(derive_seed(0x51D0C0DEull, salt));
    auto col = q.col(j);
    for (double& v : col) v = rng.gaussian();
    for (int pass = 0; pass < 2; ++pass) {
        orthogonalize_once(q, j, nullptr);
        const double nrm = norm2(col);
        if (nrm > 1e-8) {
            scale(1.0 / nrm, col);
            return;
        }
        // Astronomically unlikely; redraw.
        for (double& v : col) v = rng.gaussian();
    }
}

}  // namespace

QrFactors mgs_qr(const DenseMatrix& a) {
    if (a.nrows < 1) throw DimensionMismatch("mgs_qr: empty input");
    QrFactors f{a, DenseMatrix(a.ncols, a.ncols)};
    DenseMatrix& q = f.q;
    DenseMatrix& r = f.r;

    for (index_t j = 0; j < a.ncols; ++j) {
        const double initial = norm2(q.col(j));
        orthogonalize_once(q, j, &r);
        orthogonalize_once(q, j, &r);  // twice is enough
        const double nrm = norm2(q.col(j));
        flops::add(2ull * static_cast<std::uint64_t>(q.nrows));
        if (nrm <= 1e-13 * std::max(initial, 1e-300) || nrm == 0.0) {
            r(j, j) = 0.0;
            fill_random_unit(q, j, static_cast<std::uint64_t>(j));
        } else {
            r(j, j) = nrm;
            scale(1.0 / nrm, q.col(j));
        }
    }
    return f;
}

DenseMatrix orthonormal_range(const DenseMatrix& a, double drop_tol) {
    double max_norm = 0.0;
    for (index_t j = 0; j < a.ncols; ++j) max_norm = std::max(max_norm, norm2(a.col(j)));
    if (max_norm == 0.0) return DenseMatrix(a.nrows, 0);

    DenseMatrix basis(a.nrows, a.ncols);
    index_t rank = 0;
    std::vector<double> work(static_cast<std::size_t>(a.nrows));
    for (index_t j = 0; j < a.ncols; ++j) {
        auto src = a.col(j);
        std::copy(src.begin(), src.end(), work.begin());
        for (int pass = 0; pass < 2; ++pass) {
            for (index_t i = 0; i < rank; ++i) {
                const double coeff = dot(basis.col(i), work);
                axpy(-coeff, basis.col(i), work);
            }
        }
        flops::add(8ull * static_cast<std::uint64_t>(a.nrows) * static_cast<std::uint64_t>(rank));
        const double nrm = norm2(work);
        if (nrm > drop_tol * max_norm) {
            auto dst = basis.col(rank);
            for (std::size_t i = 0; i < work.size(); ++i) dst[i] = work[i] / nrm;
            ++rank;
        }
    }
    return head_cols(basis, rank);
}

void project_out(const DenseMatrix& q, DenseMatrix& a) {
    if (q.ncols == 0) return;
    if (q.nrows != a.nrows) throw DimensionMismatch("project_out: row counts disagree");
    const DenseMatrix coeffs = multiply_adjoint_left(q, a);
    for (index_t j = 0; j < a.ncols; ++j)
        for (index_t i = 0; i < q.ncols; ++i) axpy(-coeffs(i, j), q.col(i), a.col(j));
    flops::add(2ull * static_cast<std::uint64_t>(q.nrows) * q.ncols * a.ncols);
}

}  // namespace svdup
