#include "svdup/tridiag_eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "svdup/errors.hpp"
#include "svdup/flops.hpp"

namespace svdup {

std::pair<std::vector<double>, DenseMatrix> tridiag_eig(std::span<const double> alpha,
                                                        std::span<const double> beta) {
    const index_t n = static_cast<index_t>(alpha.size());
    if (n == 0) throw DimensionMismatch("tridiag_eig: empty diagonal");
    if (static_cast<index_t>(beta.size()) != n - 1)
        throw DimensionMismatch("tridiag_eig: len(beta) must be len(alpha) - 1");

    std::vector<double> d(alpha.begin(), alpha.end());
    std::vector<double> e(beta.begin(), beta.end());
    e.push_back(0.0);
    DenseMatrix z = DenseMatrix::identity(n);

    auto dv = [&](index_t i) -> double& { return d[static_cast<std::size_t>(i)]; };
    auto ev = [&](index_t i) -> double& { return e[static_cast<std::size_t>(i)]; };

    // Implicit-shift QL with eigenvector accumulation (EISPACK tql2 lineage).
    for (index_t l = 0; l < n; ++l) {
        int iterations = 0;
        index_t m = l;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(dv(m)) + std::abs(dv(m + 1));
                if (std::abs(ev(m)) <= std::numeric_limits<double>::epsilon() * dd + 1e-300) break;
            }
            if (m != l) {
                if (++iterations > 30) throw NotConverged("tridiag_eig: QL iteration cap hit");
                double g = (dv(l + 1) - dv(l)) / (2.0 * ev(l));
                double r = std::hypot(g, 1.0);
                g = dv(m) - dv(l) + ev(l) / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (index_t i = m - 1; i >= l; --i) {
                    double f = s * ev(i);
                    const double b = c * ev(i);
                    r = std::hypot(f, g);
                    ev(i + 1) = r;
                    if (r == 0.0) {
                        dv(i + 1) -= p;
                        ev(m) = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = dv(i + 1) - p;
                    r = (dv(i) - g) * s + 2.0 * c * b;
                    p = s * r;
                    dv(i + 1) = g + p;
                    g = c * r - b;
                    for (index_t k = 0; k < n; ++k) {
                        f = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * f;
                        z(k, i) = c * z(k, i) - s * f;
                    }
                    if (i == l) break;
                }
                if (underflow) continue;
                dv(l) -= p;
                ev(l) = g;
                ev(m) = 0.0;
            }
        } while (m != l);
    }

    // Ascending sort with eigenvector permutation.
    std::vector<index_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), index_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](index_t a, index_t b) { return d[static_cast<std::size_t>(a)] < d[static_cast<std::size_t>(b)]; });
    std::vector<double> values(static_cast<std::size_t>(n));
    DenseMatrix vectors(n, n);
    for (index_t j = 0; j < n; ++j) {
        const index_t src = order[static_cast<std::size_t>(j)];
        values[static_cast<std::size_t>(j)] = d[static_cast<std::size_t>(src)];
        auto dst = vectors.col(j);
        auto srccol = z.col(src);
        std::copy(srccol.begin(), srccol.end(), dst.begin());
    }
    flops::add(static_cast<std::uint64_t>(n) * n * n);
    return {std::move(values), std::move(vectors)};
}

}  // namespace svdup
