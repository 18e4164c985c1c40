#ifndef SVDUP_BASELINES_HPP
#define SVDUP_BASELINES_HPP

#include <cstdint>
#include <optional>

#include "svdup/projection_basis.hpp"
#include "svdup/truncated_svd.hpp"

namespace svdup {

enum class BaselineMethod { ZhaSimon, VecharynskiSV };

struct BaselineChoice {
    BaselineMethod method = BaselineMethod::ZhaSimon;
    std::optional<index_t> rank_r;  // GKL steps for the SV variant; required there

    void validate() const;
};

/// FLOP split of a baseline run, for the complexity report.
struct BaselinePhases {
    std::uint64_t build_w = 0;  // projected update block and its QR / GKL factorization
    std::uint64_t solve = 0;    // inner dense SVD (including assembly)
    std::uint64_t other = 0;    // rotations recovering U and V
};

/// Classic rank-k update for row additions: QR of (I - V_k V_k^H) E^H, dense
/// SVD of the (k+s) x (k+s) inner matrix, then rotation of the outer factors.
TruncatedSvd zha_simon_rows(const UpdateProblem& problem, BaselinePhases* phases = nullptr);

/// Column-addition mirror, built on (I - U_k U_k^H) E = QR.
TruncatedSvd zha_simon_cols(const UpdateProblem& problem, BaselinePhases* phases = nullptr);

/// The "SV" variant: the projected update block is replaced by its rank-r
/// approximation from exactly r Lanczos bidiagonalization steps, shrinking
/// the inner problem to (k+s) x (k+r). Breakdown reduces r.
TruncatedSvd vecharynski_rows(const UpdateProblem& problem, index_t r, std::uint64_t seed,
                              BaselinePhases* phases = nullptr);

}  // namespace svdup

#endif
