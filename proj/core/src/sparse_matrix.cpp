#include "svdup/sparse_matrix.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "svdup/errors.hpp"
#include "svdup/flops.hpp"

namespace svdup {

SparseMatrix csr_from_coo(std::span<const Triplet> triples, index_t nrows, index_t ncols) {
    for (const auto& t : triples) {
        if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols)
            throw IndexOutOfRange("csr_from_coo: entry (" + std::to_string(t.row) + "," +
                                  std::to_string(t.col) + ") outside " + std::to_string(nrows) + "x" +
                                  std::to_string(ncols));
    }

    std::vector<std::size_t> order(triples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::tie(triples[a].row, triples[a].col) < std::tie(triples[b].row, triples[b].col);
    });

    SparseMatrix m;
    m.nrows = nrows;
    m.ncols = ncols;
    m.row_ptr.assign(static_cast<std::size_t>(nrows) + 1, 0);
    m.col_idx.reserve(triples.size());
    m.values.reserve(triples.size());

    std::size_t pos = 0;
    while (pos < order.size()) {
        const Triplet& head = triples[order[pos]];
        double sum = head.value;
        std::size_t next = pos + 1;
        while (next < order.size() && triples[order[next]].row == head.row &&
               triples[order[next]].col == head.col) {
            sum += triples[order[next]].value;
            ++next;
        }
        if (sum != 0.0) {
            m.col_idx.push_back(head.col);
            m.values.push_back(sum);
            ++m.row_ptr[static_cast<std::size_t>(head.row) + 1];
        }
        pos = next;
    }
    for (index_t r = 0; r < nrows; ++r)
        m.row_ptr[static_cast<std::size_t>(r) + 1] += m.row_ptr[static_cast<std::size_t>(r)];
    return m;
}

void matvec(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
    if (static_cast<index_t>(x.size()) != a.ncols || static_cast<index_t>(y.size()) != a.nrows)
        throw DimensionMismatch("matvec: shape " + std::to_string(a.nrows) + "x" + std::to_string(a.ncols) +
                                " vs len(x)=" + std::to_string(x.size()));
    for (index_t i = 0; i < a.nrows; ++i) {
        double acc = 0.0;
        for (index_t p = a.row_ptr[static_cast<std::size_t>(i)]; p < a.row_ptr[static_cast<std::size_t>(i) + 1]; ++p)
            acc += a.values[static_cast<std::size_t>(p)] * x[static_cast<std::size_t>(a.col_idx[static_cast<std::size_t>(p)])];
        y[static_cast<std::size_t>(i)] = acc;
    }
    flops::add(2ull * static_cast<std::uint64_t>(a.nnz()));
}

std::vector<double> matvec(const SparseMatrix& a, std::span<const double> x) {
    std::vector<double> y(static_cast<std::size_t>(a.nrows));
    matvec(a, x, y);
    return y;
}

void rmatvec(const SparseMatrix& a, std::span<const double> y, std::span<double> x) {
    if (static_cast<index_t>(y.size()) != a.nrows || static_cast<index_t>(x.size()) != a.ncols)
        throw DimensionMismatch("rmatvec: shape " + std::to_string(a.nrows) + "x" + std::to_string(a.ncols) +
                                " vs len(y)=" + std::to_string(y.size()));
    std::fill(x.begin(), x.end(), 0.0);
    for (index_t i = 0; i < a.nrows; ++i) {
        const double yi = y[static_cast<std::size_t>(i)];
        if (yi == 0.0) continue;
        for (index_t p = a.row_ptr[static_cast<std::size_t>(i)]; p < a.row_ptr[static_cast<std::size_t>(i) + 1]; ++p)
            x[static_cast<std::size_t>(a.col_idx[static_cast<std::size_t>(p)])] += a.values[static_cast<std::size_t>(p)] * yi;
    }
    flops::add(2ull * static_cast<std::uint64_t>(a.nnz()));
}

std::vector<double> rmatvec(const SparseMatrix& a, std::span<const double> y) {
    std::vector<double> x(static_cast<std::size_t>(a.ncols));
    rmatvec(a, y, x);
    return x;
}

std::pair<SparseMatrix, SparseMatrix> split_rows(const SparseMatrix& a, index_t upto) {
    if (upto <= 0 || upto >= a.nrows) throw IndexOutOfRange("split_rows: upto must be in (0, nrows)");

    SparseMatrix top, bottom;
    top.nrows = upto;
    top.ncols = a.ncols;
    bottom.nrows = a.nrows - upto;
    bottom.ncols = a.ncols;

    const index_t cut = a.row_ptr[static_cast<std::size_t>(upto)];
    top.row_ptr.assign(a.row_ptr.begin(), a.row_ptr.begin() + upto + 1);
    top.col_idx.assign(a.col_idx.begin(), a.col_idx.begin() + cut);
    top.values.assign(a.values.begin(), a.values.begin() + cut);

    bottom.row_ptr.resize(static_cast<std::size_t>(bottom.nrows) + 1);
    for (index_t i = 0; i <= bottom.nrows; ++i)
        bottom.row_ptr[static_cast<std::size_t>(i)] = a.row_ptr[static_cast<std::size_t>(upto + i)] - cut;
    bottom.col_idx.assign(a.col_idx.begin() + cut, a.col_idx.end());
    bottom.values.assign(a.values.begin() + cut, a.values.end());
    return {std::move(top), std::move(bottom)};
}

SparseMatrix transpose(const SparseMatrix& a) {
    SparseMatrix t;
    t.nrows = a.ncols;
    t.ncols = a.nrows;
    t.row_ptr.assign(static_cast<std::size_t>(a.ncols) + 1, 0);
    t.col_idx.resize(static_cast<std::size_t>(a.nnz()));
    t.values.resize(static_cast<std::size_t>(a.nnz()));

    for (index_t c : a.col_idx) ++t.row_ptr[static_cast<std::size_t>(c) + 1];
    for (index_t r = 0; r < t.nrows; ++r)
        t.row_ptr[static_cast<std::size_t>(r) + 1] += t.row_ptr[static_cast<std::size_t>(r)];

    std::vector<index_t> fill(t.row_ptr.begin(), t.row_ptr.end() - 1);
    for (index_t i = 0; i < a.nrows; ++i) {
        for (index_t p = a.row_ptr[static_cast<std::size_t>(i)]; p < a.row_ptr[static_cast<std::size_t>(i) + 1]; ++p) {
            const index_t c = a.col_idx[static_cast<std::size_t>(p)];
            const index_t dst = fill[static_cast<std::size_t>(c)]++;
            t.col_idx[static_cast<std::size_t>(dst)] = i;
            t.values[static_cast<std::size_t>(dst)] = a.values[static_cast<std::size_t>(p)];
        }
    }
    return t;
}

SparseMatrix vstack(const SparseMatrix& top, const SparseMatrix& bottom) {
    if (top.ncols != bottom.ncols) throw DimensionMismatch("vstack: column counts disagree");
    SparseMatrix s;
    s.nrows = top.nrows + bottom.nrows;
    s.ncols = top.ncols;
    s.row_ptr = top.row_ptr;
    s.row_ptr.reserve(static_cast<std::size_t>(s.nrows) + 1);
    const index_t cut = top.nnz();
    for (std::size_t i = 1; i < bottom.row_ptr.size(); ++i) s.row_ptr.push_back(bottom.row_ptr[i] + cut);
    s.col_idx = top.col_idx;
    s.col_idx.insert(s.col_idx.end(), bottom.col_idx.begin(), bottom.col_idx.end());
    s.values = top.values;
    s.values.insert(s.values.end(), bottom.values.begin(), bottom.values.end());
    return s;
}

DenseMatrix to_dense(const SparseMatrix& a) {
    DenseMatrix d(a.nrows, a.ncols);
    for (index_t i = 0; i < a.nrows; ++i)
        for (index_t p = a.row_ptr[static_cast<std::size_t>(i)]; p < a.row_ptr[static_cast<std::size_t>(i) + 1]; ++p)
            d(i, a.col_idx[static_cast<std::size_t>(p)]) = a.values[static_cast<std::size_t>(p)];
    return d;
}

DenseMatrix matmat(const SparseMatrix& a, const DenseMatrix& x) {
    if (x.nrows != a.ncols) throw DimensionMismatch("matmat: inner dimensions disagree");
    DenseMatrix y(a.nrows, x.ncols);
    for (index_t j = 0; j < x.ncols; ++j) matvec(a, x.col(j), y.col(j));
    return y;
}

DenseMatrix rmatmat(const SparseMatrix& a, const DenseMatrix& x) {
    if (x.nrows != a.nrows) throw DimensionMismatch("rmatmat: inner dimensions disagree");
    DenseMatrix y(a.ncols, x.ncols);
    for (index_t j = 0; j < x.ncols; ++j) rmatvec(a, x.col(j), y.col(j));
    return y;
}

}  // namespace svdup
