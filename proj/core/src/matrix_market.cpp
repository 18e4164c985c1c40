#include "svdup/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "svdup/errors.hpp"

namespace svdup {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace

SparseMatrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0);

    std::string line;
    long lineno = 0;

    if (!std::getline(in, line)) throw ParseError("empty file '" + path + "'", 1);
    ++lineno;

    std::istringstream header(line);
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket") throw ParseError("missing %%MatrixMarket banner", lineno);
    object = lower(object);
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    if (object != "matrix" || format != "coordinate")
        throw UnsupportedFormat("only 'matrix coordinate' files are supported: " + path);
    if (field != "real" && field != "integer" && field != "pattern")
        throw UnsupportedFormat("unsupported field '" + field + "' in " + path);
    if (symmetry != "general")
        throw UnsupportedFormat("unsupported symmetry '" + symmetry + "' in " + path);

    // Size line: first non-comment, non-blank line.
    index_t nrows = 0, ncols = 0;
    long declared_nnz = -1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '%') continue;
        std::istringstream sz(line);
        if (!(sz >> nrows >> ncols >> declared_nnz)) throw ParseError("malformed size line", lineno);
        break;
    }
    if (declared_nnz < 0) throw ParseError("missing size line", lineno);

    std::vector<Triplet> triples;
    triples.reserve(static_cast<std::size_t>(declared_nnz));
    const bool pattern = (field == "pattern");
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '%') continue;
        std::istringstream entry(line);
        index_t r, c;
        double v = 1.0;
        if (!(entry >> r >> c)) throw ParseError("malformed entry", lineno);
        if (!pattern && !(entry >> v)) throw ParseError("missing value", lineno);
        if (r < 1 || r > nrows || c < 1 || c > ncols) throw ParseError("index out of declared shape", lineno);
        triples.push_back({r - 1, c - 1, v});
    }
    if (static_cast<long>(triples.size()) != declared_nnz)
        throw ParseError("entry count " + std::to_string(triples.size()) + " does not match declared " +
                             std::to_string(declared_nnz),
                         lineno);
    return csr_from_coo(triples, nrows, ncols);
}

void write_matrix_market(const std::string& path, const SparseMatrix& a) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open '" + path + "' for writing", 0);
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << a.nrows << " " << a.ncols << " " << a.nnz() << "\n";
    char buf[64];
    for (index_t i = 0; i < a.nrows; ++i) {
        for (index_t p = a.row_ptr[static_cast<std::size_t>(i)]; p < a.row_ptr[static_cast<std::size_t>(i) + 1]; ++p) {
            std::snprintf(buf, sizeof(buf), "%.17g", a.values[static_cast<std::size_t>(p)]);
            out << (i + 1) << " " << (a.col_idx[static_cast<std::size_t>(p)] + 1) << " " << buf << "\n";
        }
    }
}

SparseMatrix read_raw_triples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0);

    std::vector<Triplet> triples;
    index_t max_row = 0, max_col = 0;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '%' || line[0] == '#') continue;
        // MovieLens-style files separate fields with "::".
        std::string normalized = line;
        std::size_t pos = 0;
        while ((pos = normalized.find("::", pos)) != std::string::npos) {
            normalized.replace(pos, 2, " ");
        }
        std::istringstream entry(normalized);
        index_t r, c;
        double v = 1.0;
        if (!(entry >> r >> c)) throw ParseError("malformed record", lineno);
        entry >> v;  // optional; extra trailing fields ignored
        if (r < 1 || c < 1) throw ParseError("indices must be 1-based positive", lineno);
        max_row = std::max(max_row, r);
        max_col = std::max(max_col, c);
        triples.push_back({r - 1, c - 1, v});
    }
    return csr_from_coo(triples, max_row, max_col);
}

}  // namespace svdup
