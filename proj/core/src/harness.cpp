#include "svdup/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "svdup/errors.hpp"
#include "svdup/flops.hpp"
#include "svdup/lanczos.hpp"
#include "svdup/rng.hpp"

namespace svdup {

double UpdateReport::max_rel_err() const {
    if (!rel_err || rel_err->empty()) return 0.0;
    return *std::max_element(rel_err->begin(), rel_err->end());
}

double UpdateReport::max_residual() const {
    if (!residual || residual->empty()) return 0.0;
    return *std::max_element(residual->begin(), residual->end());
}

void SequenceConfig::validate() const {
    if (phi < 1) throw DimensionMismatch("SequenceConfig: phi must be >= 1");
    if (k < 1) throw DimensionMismatch("SequenceConfig: k must be >= 1");
    if (lambda_factor <= 1.0) throw DimensionMismatch("SequenceConfig: lambda_factor must exceed 1");
    if (method == UpdateMethod::VecharynskiSV && r && *r < 1)
        throw DimensionMismatch("SequenceConfig: r must be >= 1");
}

UpdateReport evaluate(const TruncatedSvd& result, const SparseMatrix& a,
                      const std::vector<double>* reference_sigma) {
    const index_t k = result.rank();
    if (result.u.nrows != a.nrows || result.v.nrows != a.ncols)
        throw DimensionMismatch("evaluate: triplet shapes disagree with the matrix");
    if (reference_sigma && static_cast<index_t>(reference_sigma->size()) < k)
        throw DimensionMismatch("evaluate: reference carries fewer than k values");

    UpdateReport report;
    report.sigma = result.s;
    std::vector<double> residuals(static_cast<std::size_t>(k));
    std::vector<double> av(static_cast<std::size_t>(a.nrows));
    for (index_t i = 0; i < k; ++i) {
        matvec(a, result.v.col(i), av);
        const double si = result.s[static_cast<std::size_t>(i)];
        axpy(-si, result.u.col(i), av);
        residuals[static_cast<std::size_t>(i)] = (si > 0.0) ? norm2(av) / si : norm2(av);
    }
    report.residual = std::move(residuals);

    if (reference_sigma) {
        std::vector<double> errs(static_cast<std::size_t>(k));
        for (index_t i = 0; i < k; ++i) {
            const double ref = (*reference_sigma)[static_cast<std::size_t>(i)];
            errs[static_cast<std::size_t>(i)] =
                (ref > 0.0) ? std::abs(result.s[static_cast<std::size_t>(i)] - ref) / ref : 0.0;
        }
        report.rel_err = std::move(errs);
    }
    return report;
}

namespace {

constexpr index_t kOracleLimit = 500;

}  // namespace

TruncatedSvd reference_truncated_svd(const SparseMatrix& a, index_t k, std::uint64_t seed) {
    if (k > std::min(a.nrows, a.ncols))
        throw DimensionMismatch("reference_truncated_svd: k exceeds min(m, n)");
    if (a.nrows <= kOracleLimit && a.ncols <= kOracleLimit) {
        const FullSvd dense = jacobi_svd(to_dense(a));
        TruncatedSvd out;
        out.u = head_cols(dense.u, k);
        out.v = head_cols(dense.v, k);
        out.s.assign(dense.s.begin(), dense.s.begin() + k);
        return out;
    }
    const LinearOperator op = make_operator(a);
    return topk_svd(op, k, 1e-12, seed);
}

std::vector<double> reference_singular_values(const SparseMatrix& a, index_t k, std::uint64_t seed) {
    return reference_truncated_svd(a, k, seed).s;
}

std::pair<TruncatedSvd, UpdateReport> run_update(const UpdateProblem& problem,
                                                 const SequenceConfig& cfg, bool chained) {
    problem.validate();
    cfg.validate();
    const bool rows = (problem.direction == UpdateDirection::Rows);
    const index_t s = rows ? problem.update.nrows : problem.update.ncols;
    const index_t k_out = cfg.k;

    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t flops_start = flops::now();

    UpdateReport report;
    TruncatedSvd result;

    RrSettings rr;
    rr.tol = cfg.lanczos_tol;
    rr.max_steps = cfg.lanczos_cap;
    rr.seed = derive_seed(cfg.seed, 0x1A2Cull);
    rr.reorthogonalize_v = cfg.reorthogonalize_v.value_or(chained);

    switch (cfg.method) {
        case UpdateMethod::RrsvdBasic: {
            // Column updates project on the right factor, so the basis block
            // comes from V_k there.
            const ProjectionBasis basis =
                rows ? build_z_basic(problem.base_svd, s)
                     : build_z_basic(TruncatedSvd{problem.base_svd.v, problem.base_svd.s,
                                                  problem.base_svd.u},
                                     s);  // structural: zero FLOPs
            auto [svd, ritz] = rows ? rr_svd_rows(problem, basis, k_out, rr)
                                    : rr_svd_cols(problem, basis, k_out, rr);
            result = std::move(svd);
            report.lanczos_steps = ritz.steps_used;
            report.flops.projected_solve = ritz.flops_projected_solve;
            report.flops.recover_v = ritz.flops_recover;
            break;
        }
        case UpdateMethod::RrsvdEnhanced: {
            flops::Phase build_phase;
            const index_t r = cfg.r.value_or(k_out);
            const index_t sketch = std::max<index_t>(2 * k_out, r);
            CgSettings cg;
            cg.tol = cfg.cg_tol;
            cg.max_iter = cfg.cg_max_iter;
            const double sigma1 =
                estimate_sigma1(problem, cfg.sigma1_steps, derive_seed(cfg.seed, 0x51Aull));
            const double lambda = cfg.lambda_factor * sigma1 * sigma1;
            const ProjectionBasis basis = build_z_enhanced(problem, lambda, r, sketch, cfg.x_mode,
                                                           derive_seed(cfg.seed, 0xE42ull), cg);
            report.flops.build_z = build_phase.elapsed();
            auto [svd, ritz] = rows ? rr_svd_rows(problem, basis, k_out, rr)
                                    : rr_svd_cols(problem, basis, k_out, rr);
            result = std::move(svd);
            report.lanczos_steps = ritz.steps_used;
            report.flops.projected_solve = ritz.flops_projected_solve;
            report.flops.recover_v = ritz.flops_recover;
            break;
        }
        case UpdateMethod::ZhaSimon: {
            BaselinePhases phases;
            result = rows ? zha_simon_rows(problem, &phases) : zha_simon_cols(problem, &phases);
            report.flops.build_z = phases.build_w;
            report.flops.projected_solve = phases.solve;
            report.flops.recover_v = phases.other;
            break;
        }
        case UpdateMethod::VecharynskiSV: {
            if (!rows)
                throw DimensionMismatch("run_update: the SV baseline is implemented for row updates");
            BaselinePhases phases;
            result = vecharynski_rows(problem, cfg.r.value_or(k_out), derive_seed(cfg.seed, 0x5Eull),
                                      &phases);
            report.flops.build_z = phases.build_w;
            report.flops.projected_solve = phases.solve;
            report.flops.recover_v = phases.other;
            break;
        }
    }

    report.flops.total = flops::now() - flops_start;
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.sigma = result.s;
    return {std::move(result), std::move(report)};
}

UpdateReport run_single_update(const SparseMatrix& a, const SequenceConfig& cfg) {
    cfg.validate();
    if (a.nrows < 4) throw DimensionMismatch("run_single_update: matrix must have at least 4 rows");
    const index_t split = cfg.split_at.value_or((a.nrows + 1) / 2);

    auto [base, update] = split_rows(a, split);
    UpdateProblem problem;
    problem.base_svd = reference_truncated_svd(base, cfg.k, derive_seed(cfg.seed, 0xBA5Eull));
    problem.base = std::move(base);
    problem.update = std::move(update);
    problem.direction = UpdateDirection::Rows;

    auto [result, report] = run_update(problem, cfg, /*chained=*/false);
    const std::vector<double> reference =
        reference_singular_values(a, result.rank(), derive_seed(cfg.seed, 0x0FACull));
    UpdateReport metrics = evaluate(result, a, &reference);
    metrics.flops = report.flops;
    metrics.lanczos_steps = report.lanczos_steps;
    metrics.wall_time = report.wall_time;
    return metrics;
}

std::vector<UpdateReport> run_sequence(const SparseMatrix& a, const SequenceConfig& cfg) {
    cfg.validate();
    const index_t m = a.nrows;
    const index_t m0 = (m + 1) / 2;
    if (cfg.phi > m - m0)
        throw DimensionMismatch("run_sequence: phi exceeds the number of rows available to append");
    const index_t t = std::max<index_t>(1, m0 / cfg.phi);

    SequenceConfig local = cfg;
    local.reorthogonalize_v = cfg.reorthogonalize_v.value_or(cfg.phi > 1);

    auto [base0, rest] = split_rows(a, m0);
    TruncatedSvd current = reference_truncated_svd(base0, cfg.k, derive_seed(cfg.seed, 0xBA5Eull));
    SparseMatrix accumulated = std::move(base0);

    std::vector<UpdateReport> reports;
    reports.reserve(static_cast<std::size_t>(cfg.phi));
    index_t row = m0;
    for (index_t batch = 0; batch < cfg.phi; ++batch) {
        const index_t end = (batch + 1 == cfg.phi) ? m : std::min<index_t>(row + t, m);
        SparseMatrix e;
        if (end >= m) {
            e = std::move(rest);
            rest = SparseMatrix{};
        } else {
            auto [head, tail] = split_rows(rest, end - row);
            e = std::move(head);
            rest = std::move(tail);
        }

        UpdateProblem problem;
        problem.base = accumulated;  // the stacked matrix so far
        problem.base_svd = current;
        problem.update = e;
        problem.direction = UpdateDirection::Rows;

        auto [result, run_report] = run_update(problem, local, /*chained=*/cfg.phi > 1);

        accumulated = vstack(accumulated, e);
        row = end;

        const std::vector<double> reference = reference_singular_values(
            accumulated, result.rank(), derive_seed(cfg.seed, 0x0FACull + static_cast<std::uint64_t>(batch)));
        UpdateReport metrics = evaluate(result, accumulated, &reference);
        metrics.flops = run_report.flops;
        metrics.lanczos_steps = run_report.lanczos_steps;
        metrics.wall_time = run_report.wall_time;
        reports.push_back(std::move(metrics));

        current = std::move(result);
    }
    return reports;
}

std::vector<ComplexityRow> complexity_report(const UpdateReport& report, UpdateMethod method,
                                             const ProblemDims& dims) {
    const double m = static_cast<double>(dims.m);
    const double n = static_cast<double>(dims.n);
    const double s = static_cast<double>(dims.s);
    const double k = static_cast<double>(dims.k);
    const double r = static_cast<double>(dims.r);
    const double nnz_a = static_cast<double>(dims.nnz_a);
    const double nnz_e = static_cast<double>(dims.nnz_e);

    double build = 0.0, solve = 0.0, other = 0.0;
    switch (method) {
        case UpdateMethod::ZhaSimon:
            build = n * s * s + n * s * k;
            solve = (k + s) * (k + s) * (k + s);
            other = k * k * (m + n) + n * s * k;
            break;
        case UpdateMethod::VecharynskiSV:
            build = (nnz_e + n * k) * k + (n + s) * k * k;
            solve = (k + s) * (k + r) * (k + r) + nnz_e * k + r * s;
            other = k * k * (m + n) + n * r * k;
            break;
        case UpdateMethod::RrsvdBasic:
            build = 0.0;
            solve = (nnz_e + n * k) * k + (k + s) * k * k;
            other = k * k * m + (nnz_a + n) * k;
            break;
        case UpdateMethod::RrsvdEnhanced:
            build = nnz_a * k + m * k * k;
            solve = (nnz_e + (n + r) * k) * k + (k + r + s) * k * k;
            other = k * k * m + (nnz_a + n) * k;
            break;
    }

    auto row = [](std::string phase, std::uint64_t measured, double predicted) {
        ComplexityRow out{std::move(phase), measured, predicted, 0.0};
        if (predicted > 0.0) out.ratio = static_cast<double>(measured) / predicted;
        return out;
    };
    return {row("build_z", report.flops.build_z, build),
            row("projected_solve", report.flops.projected_solve, solve),
            row("recover_v", report.flops.recover_v, other),
            row("total", report.flops.total, build + solve + other)};
}

}  // namespace svdup
