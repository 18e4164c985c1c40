#ifndef SVDUP_ERRORS_HPP
#define SVDUP_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace svdup {

struct DimensionMismatch : std::invalid_argument {
    explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

struct IndexOutOfRange : std::out_of_range {
    explicit IndexOutOfRange(const std::string& what) : std::out_of_range(what) {}
};

/// Matrix Market (and raw dataset) parsing failure; carries the 1-based line number.
struct ParseError : std::runtime_error {
    ParseError(const std::string& what, long line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_number(line) {}
    long line_number;
};

struct UnsupportedFormat : std::runtime_error {
    explicit UnsupportedFormat(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative kernel ran out of its iteration budget. Carries whatever
/// best-effort data the kernel produced; callers that can live with partial
/// results catch it and inspect the payload.
struct NotConverged : std::runtime_error {
    explicit NotConverged(const std::string& what) : std::runtime_error(what) {}
    NotConverged(const std::string& what, std::vector<double> achieved)
        : std::runtime_error(what), achieved_residuals(std::move(achieved)) {}
    std::vector<double> achieved_residuals;
};

/// The shifted operator lost positive definiteness (a quadratic form went
/// nonpositive), which signals that the shift was not above the top squared
/// singular value.
struct NotPositiveDefinite : std::runtime_error {
    explicit NotPositiveDefinite(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace svdup

#endif
