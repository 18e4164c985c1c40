#ifndef SVDUP_FLOPS_HPP
#define SVDUP_FLOPS_HPP

#include <atomic>
#include <cstdint>

namespace svdup::flops {

// Process-wide FLOP side channel. Kernels charge nominal model costs, not
// per-scalar actuals: a sparse matrix-vector product charges 2*nnz, a dense
// m x k x n product charges 2*m*k*n, a Gram-Schmidt pass over an m x n matrix
// charges 2*m*n^2, and a dense SVD of an m x n matrix charges
// 2*m*n*min(m,n) + min(m,n)^3 (the conventional budget for an economy SVD,
// standing in for whatever production solver would be used at scale).
// Convergence monitoring and self-validation (Ritz residual probes, adjoint
// spot checks) run under a ScopedPause and are not charged: the counter
// tracks algorithmic work, which is what the asymptotic models describe.
// Harness code snapshots the counter around phases to split totals.

inline std::atomic<std::uint64_t>& counter() {
    static std::atomic<std::uint64_t> c{0};
    return c;
}

inline thread_local int pause_depth = 0;

inline void add(std::uint64_t n) {
    if (pause_depth == 0) counter().fetch_add(n, std::memory_order_relaxed);
}

/// Suppresses charging for the enclosing scope (monitoring, spot checks).
struct ScopedPause {
    ScopedPause() { ++pause_depth; }
    ~ScopedPause() { --pause_depth; }
    ScopedPause(const ScopedPause&) = delete;
    ScopedPause& operator=(const ScopedPause&) = delete;
};

inline std::uint64_t now() { return counter().load(std::memory_order_relaxed); }

inline void reset() { counter().store(0, std::memory_order_relaxed); }

/// Snapshot helper: `Phase p; ... ; p.elapsed()` yields FLOPs charged since construction.
struct Phase {
    std::uint64_t start = now();
    std::uint64_t elapsed() const { return now() - start; }
};

}  // namespace svdup::flops

#endif
