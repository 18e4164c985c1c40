#include "svdup/lanczos.hpp"

#include <algorithm>
#include <cmath>

#include "svdup/flops.hpp"
#include "svdup/jacobi_svd.hpp"
#include "svdup/rng.hpp"
#include "svdup/tridiag_eig.hpp"

namespace svdup {

namespace {

// One MGS pass of `w` against the leading `count` columns of `basis`, with a
// second pass when the norm drops enough to suggest cancellation. The first
// pass is the modeled orthogonalization work; the defensive second pass is
// accounted like other safety checks and left uncharged.
void full_reorthogonalize(const DenseMatrix& basis, index_t count, std::span<double> w) {
    if (count == 0) return;
    const double before = norm2(w);
    for (int pass = 0; pass < 2; ++pass) {
        for (index_t i = 0; i < count; ++i) {
            const double coeff = dot(basis.col(i), w);
            axpy(-coeff, basis.col(i), w);
        }
        if (pass == 0)
            flops::add(4ull * static_cast<std::uint64_t>(basis.nrows) * static_cast<std::uint64_t>(count));
        if (norm2(w) > 0.7071 * before) break;
    }
}

void seeded_gaussian(std::span<double> x, Rng& rng) {
    for (double& v : x) v = rng.gaussian();
}

}  // namespace

DenseMatrix BidiagonalFactors::bidiagonal() const {
    const index_t d = steps();
    DenseMatrix bd(d + 1, d);
    for (index_t i = 0; i < d; ++i) {
        bd(i, i) = alpha[static_cast<std::size_t>(i)];
        bd(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    return bd;
}

BidiagonalFactors gkl_bidiagonalize(const LinearOperator& op, index_t steps, std::uint64_t seed) {
    const index_t m = op.nrows;
    const index_t n = op.ncols;
    steps = std::min(steps, std::min(m, n));

    BidiagonalFactors f;
    f.u_basis = DenseMatrix(m, steps + 1);
    f.v_basis = DenseMatrix(n, steps);

    Rng rng(derive_seed(seed, 0x6B1Dull));
    std::vector<double> start(static_cast<std::size_t>(n));
    std::vector<double> work_m(static_cast<std::size_t>(m));
    std::vector<double> work_n(static_cast<std::size_t>(n));

    // u_0 = normalized A * (random start): puts u_0 in range(A) so that exact
    // low rank shows up as clean breakdown.
    double unorm = 0.0;
    for (int attempt = 0; attempt < 3 && unorm == 0.0; ++attempt) {
        seeded_gaussian(start, rng);
        op.apply(start, work_m);
        unorm = norm2(work_m);
    }
    if (unorm == 0.0) {  // zero operator
        f.u_basis = DenseMatrix(m, 1);
        if (m > 0) f.u_basis(0, 0) = 1.0;
        f.v_basis = DenseMatrix(n, 0);
        f.breakdown = true;
        return f;
    }
    {
        auto u0 = f.u_basis.col(0);
        for (std::size_t i = 0; i < work_m.size(); ++i) u0[i] = work_m[i] / unorm;
    }

    double breakdown_tol = 0.0;  // set once alpha_0 is known
    index_t d = 0;
    for (index_t i = 0; i < steps; ++i) {
        // alpha_i, v_i
        op.apply_adjoint(f.u_basis.col(i), work_n);
        if (i > 0) axpy(-f.beta[static_cast<std::size_t>(i) - 1], f.v_basis.col(i - 1), work_n);
        full_reorthogonalize(f.v_basis, i, work_n);
        const double a = norm2(work_n);
        if (i == 0) breakdown_tol = 1e-14 * a;
        if (a <= breakdown_tol) {
            f.breakdown = true;
            break;
        }
        f.alpha.push_back(a);
        {
            auto vi = f.v_basis.col(i);
            for (std::size_t t = 0; t < work_n.size(); ++t) vi[t] = work_n[t] / a;
        }

        // beta_i, u_{i+1}
        op.apply(f.v_basis.col(i), work_m);
        axpy(-a, f.u_basis.col(i), work_m);
        full_reorthogonalize(f.u_basis, i + 1, work_m);
        const double b = norm2(work_m);
        d = i + 1;
        if (b <= breakdown_tol) {
            f.beta.push_back(0.0);
            // Pad u_{i+1} with a deterministic unit vector so the basis keeps
            // its (d+1)-column shape; beta = 0 keeps Bd consistent.
            Rng pad(derive_seed(seed, 0xBADC01ull + static_cast<std::uint64_t>(i)));
            auto pad_col = f.u_basis.col(i + 1);
            for (int attempt = 0; attempt < 4; ++attempt) {
                seeded_gaussian(pad_col, pad);
                full_reorthogonalize(f.u_basis, i + 1, pad_col);
                const double nrm = norm2(pad_col);
                if (nrm > 1e-8) {
                    scale(1.0 / nrm, pad_col);
                    break;
                }
            }
            f.breakdown = true;
            break;
        }
        f.beta.push_back(b);
        auto unext = f.u_basis.col(i + 1);
        for (std::size_t t = 0; t < work_m.size(); ++t) unext[t] = work_m[t] / b;
    }

    if (d < steps) {
        f.u_basis = head_cols(f.u_basis, d + 1);
        f.v_basis = head_cols(f.v_basis, d);
        f.breakdown = true;
    }
    return f;
}

LanczosTopk lanczos_sym_topk(const LinearOperator& op, index_t k, index_t max_steps, double tol,
                             std::uint64_t seed) {
    if (op.nrows != op.ncols) throw DimensionMismatch("lanczos_sym_topk: operator must be square");
    const index_t dim = op.nrows;
    if (k > dim) throw DimensionMismatch("lanczos_sym_topk: k exceeds operator dimension");
    if (k == 0) return LanczosTopk{{}, DenseMatrix(dim, 0), 0, {}};
    max_steps = std::clamp(max_steps, k, dim);

    DenseMatrix basis(dim, max_steps);
    std::vector<double> alpha, beta;  // beta[j] couples v_j and v_{j+1}
    alpha.reserve(static_cast<std::size_t>(max_steps));
    beta.reserve(static_cast<std::size_t>(max_steps));

    Rng rng(derive_seed(seed, 0x7A9Cull));
    std::vector<double> w(static_cast<std::size_t>(dim));

    {
        auto v0 = basis.col(0);
        seeded_gaussian(v0, rng);
        scale(1.0 / norm2(v0), v0);
    }

    // Ritz extraction doubles as the convergence monitor, so it runs under a
    // counter pause; the final extraction is charged explicitly on return.
    auto extract = [&](index_t j) -> LanczosTopk {
        flops::ScopedPause pause;
        auto [evals, evecs] = tridiag_eig(std::span<const double>(alpha.data(), static_cast<std::size_t>(j)),
                                          std::span<const double>(beta.data(), static_cast<std::size_t>(j - 1)));
        LanczosTopk out;
        out.steps_used = j;
        const index_t take = std::min(k, j);
        out.theta.resize(static_cast<std::size_t>(take));
        out.residuals.resize(static_cast<std::size_t>(take));
        out.ritz_vecs = DenseMatrix(dim, take);
        // beta[j-1] couples the j-step section to the next basis vector; it
        // gives the classic Ritz residual bound |beta_j * s_last|.
        const double next_beta =
            (static_cast<index_t>(beta.size()) >= j) ? beta[static_cast<std::size_t>(j) - 1] : 0.0;
        for (index_t i = 0; i < take; ++i) {
            const index_t src = j - 1 - i;  // descending
            out.theta[static_cast<std::size_t>(i)] = evals[static_cast<std::size_t>(src)];
            auto dst = out.ritz_vecs.col(i);
            for (index_t row = 0; row < dim; ++row) {
                double acc = 0.0;
                for (index_t l = 0; l < j; ++l) acc += basis(row, l) * evecs(l, src);
                dst[static_cast<std::size_t>(row)] = acc;
            }
            out.residuals[static_cast<std::size_t>(i)] = std::abs(next_beta * evecs(j - 1, src));
        }
        return out;
    };

    index_t j = 0;
    bool exhausted = false;
    while (j < max_steps) {
        op.apply(basis.col(j), w);
        const double a = dot(basis.col(j), w);
        alpha.push_back(a);
        axpy(-a, basis.col(j), w);
        if (j > 0) axpy(-beta[static_cast<std::size_t>(j) - 1], basis.col(j - 1), w);
        full_reorthogonalize(basis, j + 1, w);
        double b = norm2(w);
        ++j;

        const double scale_ref = std::max(std::abs(alpha[0]), 1e-300);
        if (b <= 1e-13 * scale_ref) {
            // Invariant subspace found. Either the whole space is spanned
            // (exact) or we continue from a fresh orthogonal direction.
            b = 0.0;
            if (j >= dim) {
                exhausted = true;
            } else if (j < max_steps) {
                auto vnext = basis.col(j);
                Rng fresh(derive_seed(seed, 0xF5E5ull + static_cast<std::uint64_t>(j)));
                double nrm = 0.0;
                for (int attempt = 0; attempt < 4 && nrm <= 1e-8; ++attempt) {
                    seeded_gaussian(vnext, fresh);
                    full_reorthogonalize(basis, j, vnext);
                    nrm = norm2(vnext);
                }
                scale(1.0 / nrm, vnext);
            }
            beta.push_back(0.0);
        } else {
            if (j < max_steps) {
                auto vnext = basis.col(j);
                for (std::size_t t = 0; t < w.size(); ++t) vnext[t] = w[t] / b;
            }
            beta.push_back(b);
        }
        if (j >= dim) exhausted = true;

        if (j >= k) {
            LanczosTopk candidate = extract(j);
            bool ok = exhausted;
            if (!ok) {
                ok = true;
                for (index_t i = 0; i < static_cast<index_t>(candidate.theta.size()); ++i) {
                    const double th = candidate.theta[static_cast<std::size_t>(i)];
                    const double res = candidate.residuals[static_cast<std::size_t>(i)];
                    if (res > tol * std::max(th, 0.0)) {
                        ok = false;
                        break;
                    }
                }
            }
            if ((ok && static_cast<index_t>(candidate.theta.size()) == k) || exhausted) return candidate;
        }
        if (exhausted) break;
    }

    LanczosTopk best = extract(j);
    throw LanczosNotConverged("lanczos_sym_topk: tolerance not reached within step budget", std::move(best));
}

double estimate_sigma1(const SparseMatrix& b, const SparseMatrix& e, index_t steps, std::uint64_t seed) {
    const LinearOperator op = make_stacked_operator(b, e);
    const BidiagonalFactors f = gkl_bidiagonalize(op, std::max<index_t>(steps, 2), seed);
    if (f.steps() == 0) return 0.0;
    const FullSvd s = jacobi_svd(f.bidiagonal());
    return s.s.front();
}

double estimate_sigma1(const SparseMatrix& a, index_t steps, std::uint64_t seed) {
    const LinearOperator op = make_operator(a);
    const BidiagonalFactors f = gkl_bidiagonalize(op, std::max<index_t>(steps, 2), seed);
    if (f.steps() == 0) return 0.0;
    const FullSvd s = jacobi_svd(f.bidiagonal());
    return s.s.front();
}

double estimate_sigma1(const UpdateProblem& problem, index_t steps, std::uint64_t seed) {
    if (problem.direction == UpdateDirection::Rows)
        return estimate_sigma1(problem.base, problem.update, steps, seed);
    return estimate_sigma1(transpose(problem.base), transpose(problem.update), steps, seed);
}

TruncatedSvd topk_svd(const LinearOperator& op, index_t k, double tol, std::uint64_t seed) {
    const index_t cap = std::min(op.nrows, op.ncols);
    if (k > cap) throw DimensionMismatch("topk_svd: k exceeds min(m, n)");

    index_t steps = std::min(cap, std::max<index_t>(2 * k + 10, 30));
    while (true) {
        const BidiagonalFactors f = gkl_bidiagonalize(op, steps, seed);
        const index_t d = f.steps();
        if (d < k && !f.breakdown) throw NotConverged("topk_svd: bidiagonalization stalled");
        const FullSvd small = jacobi_svd(f.bidiagonal());
        const index_t have = std::min<index_t>(k, static_cast<index_t>(small.s.size()));

        TruncatedSvd out;
        out.u = multiply(f.u_basis, head_cols(small.u, have));
        out.v = multiply(f.v_basis, head_cols(small.v, have));
        out.s.assign(small.s.begin(), small.s.begin() + have);

        // Two-sided residual check against the operator itself (monitoring).
        flops::ScopedPause pause;
        bool converged = (have == k) || f.breakdown;
        if (converged) {
            for (index_t i = 0; i < have; ++i) {
                const double si = out.s[static_cast<std::size_t>(i)];
                if (si <= 0.0) continue;
                std::vector<double> av(static_cast<std::size_t>(op.nrows));
                op.apply(out.v.col(i), av);
                axpy(-si, out.u.col(i), av);
                std::vector<double> atu(static_cast<std::size_t>(op.ncols));
                op.apply_adjoint(out.u.col(i), atu);
                axpy(-si, out.v.col(i), atu);
                if (norm2(av) > tol * si || norm2(atu) > tol * si) {
                    converged = false;
                    break;
                }
            }
        }
        if (converged || steps >= cap) {
            if (!converged) throw NotConverged("topk_svd: residual tolerance unreachable");
            return out;
        }
        steps = std::min(cap, steps * 2);
    }
}

}  // namespace svdup
