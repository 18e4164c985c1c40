#include "svdup/jacobi_svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "svdup/errors.hpp"
#include "svdup/flops.hpp"
#include "svdup/rng.hpp"

namespace svdup {

namespace {

constexpr int kMaxSweeps = 60;
constexpr double kOrthTol = 1e-14;

void rotate_pair(DenseMatrix& m, index_t p, index_t q, double c, double s) {
    auto colp = m.col(p);
    auto colq = m.col(q);
    for (std::size_t i = 0; i < colp.size(); ++i) {
        const double vp = colp[i];
        const double vq = colq[i];
        colp[i] = c * vp - s * vq;
        colq[i] = s * vp + c * vq;
    }
}

// Orthonormal completion for columns whose singular value is (numerically)
// zero, deterministic across runs.
void fill_null_column(DenseMatrix& u, index_t j) {
    Rng rng(derive_seed(0x0A11C0DEull, static_cast<std::uint64_t>(j)));
    auto col = u.col(j);
    for (int attempt = 0; attempt < 4; ++attempt) {
        for (double& v : col) v = rng.gaussian();
        for (int pass = 0; pass < 2; ++pass) {
            for (index_t i = 0; i < u.ncols; ++i) {
                if (i == j) continue;
                const double coeff = dot(u.col(i), col);
                axpy(-coeff, u.col(i), col);
            }
        }
        const double nrm = norm2(col);
        if (nrm > 1e-8) {
            scale(1.0 / nrm, col);
            return;
        }
    }
}

FullSvd jacobi_svd_tall(const DenseMatrix& a) {
    const index_t m = a.nrows;
    const index_t n = a.ncols;
    DenseMatrix w = a;
    DenseMatrix v = DenseMatrix::identity(n);

    double scale0 = 0.0;
    for (index_t j = 0; j < n; ++j) scale0 = std::max(scale0, norm2(w.col(j)));
    const double negligible = 1e-15 * scale0;

    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        converged = true;
        for (index_t p = 0; p + 1 < n; ++p) {
            for (index_t q = p + 1; q < n; ++q) {
                const double app = dot(w.col(p), w.col(p));
                const double aqq = dot(w.col(q), w.col(q));
                const double norm_p = std::sqrt(app);
                const double norm_q = std::sqrt(aqq);
                // Pairs of noise-scale columns carry zero singular values and
                // only thrash the sweep; leave them for the null-space fill.
                if (norm_p <= negligible && norm_q <= negligible) continue;
                const double apq = dot(w.col(p), w.col(q));
                // sqrt factored to survive underflow of app * aqq.
                if (std::abs(apq) <= kOrthTol * norm_p * norm_q + 1e-290) continue;
                converged = false;
                const double zeta = (aqq - app) / (2.0 * apq);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                rotate_pair(w, p, q, c, s);
                rotate_pair(v, p, q, c, s);
            }
        }
    }
    if (!converged) throw NotConverged("jacobi_svd: no convergence after 60 sweeps");

    std::vector<double> sigma(static_cast<std::size_t>(n));
    for (index_t j = 0; j < n; ++j) sigma[static_cast<std::size_t>(j)] = norm2(w.col(j));

    std::vector<index_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), index_t{0});
    std::stable_sort(order.begin(), order.end(), [&](index_t x, index_t y) {
        return sigma[static_cast<std::size_t>(x)] > sigma[static_cast<std::size_t>(y)];
    });

    FullSvd out;
    out.u = DenseMatrix(m, n);
    out.v = DenseMatrix(n, n);
    out.s.resize(static_cast<std::size_t>(n));
    const double smax = sigma[static_cast<std::size_t>(order[0])];
    for (index_t j = 0; j < n; ++j) {
        const index_t src = order[static_cast<std::size_t>(j)];
        const double sj = sigma[static_cast<std::size_t>(src)];
        out.s[static_cast<std::size_t>(j)] = sj;
        auto vdst = out.v.col(j);
        auto vsrc = v.col(src);
        std::copy(vsrc.begin(), vsrc.end(), vdst.begin());
        if (sj > 1e-300 && sj > 1e-15 * smax) {
            auto udst = out.u.col(j);
            auto wsrc = w.col(src);
            for (std::size_t i = 0; i < udst.size(); ++i) udst[i] = wsrc[i] / sj;
        }
    }
    for (index_t j = 0; j < n; ++j) {
        if (norm2(out.u.col(j)) < 0.5) fill_null_column(out.u, j);
    }

    flops::add(2ull * static_cast<std::uint64_t>(m) * n * n + static_cast<std::uint64_t>(n) * n * n);
    return out;
}

// Largest-magnitude entry of each u column made positive; v flipped in step.
void apply_sign_convention(FullSvd& f) {
    for (index_t j = 0; j < f.u.ncols; ++j) {
        auto ucol = f.u.col(j);
        std::size_t arg = 0;
        for (std::size_t i = 1; i < ucol.size(); ++i)
            if (std::abs(ucol[i]) > std::abs(ucol[arg])) arg = i;
        if (ucol[arg] < 0.0) {
            scale(-1.0, ucol);
            scale(-1.0, f.v.col(j));
        }
    }
}

}  // namespace

FullSvd jacobi_svd(const DenseMatrix& a) {
    if (a.nrows == 0 || a.ncols == 0) throw DimensionMismatch("jacobi_svd: empty input");
    FullSvd out;
    if (a.nrows >= a.ncols) {
        out = jacobi_svd_tall(a);
    } else {
        FullSvd t = jacobi_svd_tall(transpose(a));
        out = FullSvd{std::move(t.v), std::move(t.s), std::move(t.u)};
    }
    apply_sign_convention(out);
    return out;
}

}  // namespace svdup
