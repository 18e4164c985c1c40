#ifndef SVDUP_MATRIX_MARKET_HPP
#define SVDUP_MATRIX_MARKET_HPP

#include <string>

#include "svdup/sparse_matrix.hpp"

namespace svdup {

/// Read a Matrix Market coordinate file (real, integer, or pattern; general
/// symmetry only). Indices are 1-based on disk and converted to 0-based.
/// Throws ParseError with the offending line number, or UnsupportedFormat for
/// complex/symmetric/array headers.
SparseMatrix read_matrix_market(const std::string& path);

/// Write in "matrix coordinate real general" form with 1-based indices.
void write_matrix_market(const std::string& path, const SparseMatrix& a);

/// Normalize a raw triple-per-line dataset into a SparseMatrix. Accepts
/// whitespace- or "::"-separated records of "row col [value]" (value defaults
/// to 1.0; extra fields such as timestamps are ignored); 1-based indices.
SparseMatrix read_raw_triples(const std::string& path);

}  // namespace svdup

#endif
