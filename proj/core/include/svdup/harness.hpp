#ifndef SVDUP_HARNESS_HPP
#define SVDUP_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "svdup/baselines.hpp"
#include "svdup/jacobi_svd.hpp"
#include "svdup/sparse_matrix.hpp"
#include "svdup/truncated_svd.hpp"
#include "svdup/update.hpp"

namespace svdup {

enum class UpdateMethod { RrsvdBasic, RrsvdEnhanced, ZhaSimon, VecharynskiSV };

struct FlopPhases {
    std::uint64_t build_z = 0;
    std::uint64_t projected_solve = 0;
    std::uint64_t recover_v = 0;
    std::uint64_t total = 0;
};

/// Per-update metrics: approximate singular values, relative errors and
/// scaled residual norms against a reference, FLOP phase counters, the
/// Lanczos step count delta, and wall time.
struct UpdateReport {
    std::vector<double> sigma;
    std::optional<std::vector<double>> rel_err;   // |sigma_i - ref_i| / ref_i
    std::optional<std::vector<double>> residual;  // ||A v_i - sigma_i u_i|| / sigma_i
    FlopPhases flops;
    index_t lanczos_steps = 0;
    double wall_time = 0.0;

    double max_rel_err() const;
    double max_residual() const;
};

struct SequenceConfig {
    index_t phi = 1;
    index_t k = 10;
    UpdateMethod method = UpdateMethod::RrsvdBasic;
    std::optional<index_t> r;          // defaults to k
    double lambda_factor = 1.01;       // lambda = factor * sigma_1^2 estimate
    std::uint64_t seed = 0;
    std::optional<bool> reorthogonalize_v;  // default: off for one update, on for chains
    std::optional<index_t> split_at;        // default: ceil(m/2)

    // Solver knobs shared by every method.
    double lanczos_tol = 1e-10;
    index_t lanczos_cap = 0;  // 0 means min(basis dim, 6k)
    index_t sigma1_steps = 12;
    double cg_tol = 1e-8;
    index_t cg_max_iter = 2000;
    XBuildMode x_mode = XBuildMode::RandomizedSvd;

    void validate() const;
};

/// Residual and relative-error metrics of a computed triplet set against the
/// (materialized) updated matrix, plus an optional reference spectrum.
UpdateReport evaluate(const TruncatedSvd& result, const SparseMatrix& a,
                      const std::vector<double>* reference_sigma);

/// Reference top-k singular values: the dense Jacobi oracle at desk scale
/// (both sides <= 500), high-accuracy GKL above it.
std::vector<double> reference_singular_values(const SparseMatrix& a, index_t k, std::uint64_t seed = 1);

/// Reference top-k triplets with vectors, same oracle split.
TruncatedSvd reference_truncated_svd(const SparseMatrix& a, index_t k, std::uint64_t seed = 1);

/// One configured update on the base/update pair, reporting metrics and
/// FLOP phases. The returned triplets feed chained updates.
std::pair<TruncatedSvd, UpdateReport> run_update(const UpdateProblem& problem,
                                                 const SequenceConfig& cfg, bool chained);

/// Single-update protocol: split A at ceil(m/2) (or cfg.split_at), take the
/// exact rank-k factorization of the top part, update, and score against a
/// reference spectrum of A.
UpdateReport run_single_update(const SparseMatrix& a, const SequenceConfig& cfg);

/// Batched protocol: the bottom half of A is appended in phi batches of
/// t = ceil(m/2)/phi rows (the last batch absorbs any remainder), feeding
/// each result back as the next base factorization.
std::vector<UpdateReport> run_sequence(const SparseMatrix& a, const SequenceConfig& cfg);

struct ComplexityRow {
    std::string phase;
    std::uint64_t measured = 0;
    double predicted = 0.0;
    double ratio = 0.0;  // measured / predicted (0 when predicted is 0)
};

struct ProblemDims {
    index_t m = 0, n = 0, s = 0, k = 0, r = 0;
    std::uint64_t nnz_a = 0, nnz_e = 0;
};

/// Measured phase FLOPs next to the asymptotic model evaluated at
/// (m, n, s, k, r, delta -> k), one row per phase.
std::vector<ComplexityRow> complexity_report(const UpdateReport& report, UpdateMethod method,
                                             const ProblemDims& dims);

}  // namespace svdup

#endif
