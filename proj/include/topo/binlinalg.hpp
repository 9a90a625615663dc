#pragma once

// Linear algebra over GF(2) on packed bits, plus exact integer rank for
// oriented boundary matrices.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "topo/error.hpp"

namespace topo {

/// Dense GF(2) matrix, row-major, 64 entries per word. Addition is xor.
class BitMatrix {
public:
    using Word = std::uint64_t;
    static constexpr std::size_t kWordBits = 64;

    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), stride_((cols + kWordBits - 1) / kWordBits),
          words_(rows_ * stride_, 0) {}

    /// Builds from nested 0/1 rows; all rows must have the same length.
    static BitMatrix from_rows(const std::vector<std::vector<int>>& rows) {
        const std::size_t cols = rows.empty() ? 0 : rows.front().size();
        BitMatrix m(rows.size(), cols);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != cols)
                throw Error(ErrorCode::InvalidArgument, "ragged rows in BitMatrix::from_rows");
            for (std::size_t c = 0; c < cols; ++c)
                if (rows[r][c] & 1) m.set(r, c, true);
        }
        return m;
    }

    static BitMatrix identity(std::size_t n) {
        BitMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    bool get(std::size_t r, std::size_t c) const {
        return (words_[r * stride_ + c / kWordBits] >> (c % kWordBits)) & 1u;
    }

    void set(std::size_t r, std::size_t c, bool value) {
        Word& w = words_[r * stride_ + c / kWordBits];
        const Word mask = Word{1} << (c % kWordBits);
        w = value ? (w | mask) : (w & ~mask);
    }

    void flip(std::size_t r, std::size_t c) {
        words_[r * stride_ + c / kWordBits] ^= Word{1} << (c % kWordBits);
    }

    std::span<Word> row_words(std::size_t r) { return {words_.data() + r * stride_, stride_}; }
    std::span<const Word> row_words(std::size_t r) const {
        return {words_.data() + r * stride_, stride_};
    }

    /// row(dst) += row(src)
    void add_row(std::size_t dst, std::size_t src) {
        Word* d = words_.data() + dst * stride_;
        const Word* s = words_.data() + src * stride_;
        for (std::size_t k = 0; k < stride_; ++k) d[k] ^= s[k];
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        std::swap_ranges(words_.begin() + static_cast<std::ptrdiff_t>(a * stride_),
                         words_.begin() + static_cast<std::ptrdiff_t>((a + 1) * stride_),
                         words_.begin() + static_cast<std::ptrdiff_t>(b * stride_));
    }

    bool row_is_zero(std::size_t r) const {
        const auto w = row_words(r);
        return std::all_of(w.begin(), w.end(), [](Word x) { return x == 0; });
    }

    bool is_zero() const {
        return std::all_of(words_.begin(), words_.end(), [](Word x) { return x == 0; });
    }

    std::size_t count_ones() const {
        std::size_t n = 0;
        for (Word w : words_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }

    BitMatrix transposed() const {
        BitMatrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                if (get(r, c)) t.set(c, r, true);
        return t;
    }

    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t stride_ = 0;
    std::vector<Word> words_;
};

/// GF(2) product a*b.
inline BitMatrix multiply(const BitMatrix& a, const BitMatrix& b) {
    if (a.cols() != b.rows())
        throw Error(ErrorCode::InvalidArgument, "BitMatrix product shape mismatch");
    BitMatrix out(a.rows(), b.cols());
    // Row r of the product is the xor of the rows of b selected by row r of a.
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto dst = out.row_words(r);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (!a.get(r, k)) continue;
            const auto src = b.row_words(k);
            for (std::size_t w = 0; w < dst.size(); ++w) dst[w] ^= src[w];
        }
    }
    return out;
}

inline std::size_t gf2_rank(const BitMatrix& m) {
    BitMatrix work = m;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < work.cols() && rank < work.rows(); ++c) {
        std::size_t pivot = rank;
        while (pivot < work.rows() && !work.get(pivot, c)) ++pivot;
        if (pivot == work.rows()) continue;
        work.swap_rows(rank, pivot);
        for (std::size_t r = rank + 1; r < work.rows(); ++r)
            if (work.get(r, c)) work.add_row(r, rank);
        ++rank;
    }
    return rank;
}

inline std::size_t gf2_nullity(const BitMatrix& m) { return m.cols() - gf2_rank(m); }

/// Outcome of left-to-right column reduction. `low[j]` is the lowest nonzero
/// row of reduced column j, or empty when the column reduced to zero.
struct ColumnReduction {
    BitMatrix reduced;
    std::vector<std::optional<std::size_t>> low;

    std::size_t nonzero_columns() const {
        return static_cast<std::size_t>(
            std::count_if(low.begin(), low.end(), [](const auto& l) { return l.has_value(); }));
    }
};

/// Standard persistence-style reduction: while column j shares its low with an
/// earlier column, add that earlier column to it. Only earlier columns are ever
/// added to later ones.
inline ColumnReduction gf2_column_reduce(const BitMatrix& m) {
    // Work on the transpose so each column is a contiguous packed row.
    BitMatrix cols = m.transposed();
    const std::size_t n_rows = m.rows();
    auto lowest = [&](std::size_t j) -> std::optional<std::size_t> {
        const auto w = cols.row_words(j);
        for (std::size_t k = w.size(); k-- > 0;)
            if (w[k] != 0)
                return k * BitMatrix::kWordBits + (BitMatrix::kWordBits - 1 -
                                                   static_cast<std::size_t>(std::countl_zero(w[k])));
        return std::nullopt;
    };

    std::vector<std::optional<std::size_t>> low(m.cols());
    std::vector<std::optional<std::size_t>> owner(n_rows);
    for (std::size_t j = 0; j < m.cols(); ++j) {
        auto l = lowest(j);
        while (l && owner[*l]) {
            cols.add_row(j, *owner[*l]);
            l = lowest(j);
        }
        low[j] = l;
        if (l) owner[*l] = j;
    }
    return {cols.transposed(), std::move(low)};
}

/// Sparse GF(2) column: strictly increasing row indices.
using SparseColumn = std::vector<std::uint32_t>;

/// column(dst) += column(src), as a symmetric difference of sorted index sets.
inline void add_sparse_column(SparseColumn& dst, const SparseColumn& src, SparseColumn& scratch) {
    scratch.clear();
    scratch.reserve(dst.size() + src.size());
    auto a = dst.begin();
    auto b = src.begin();
    while (a != dst.end() && b != src.end()) {
        if (*a < *b) scratch.push_back(*a++);
        else if (*b < *a) scratch.push_back(*b++);
        else { ++a; ++b; }
    }
    scratch.insert(scratch.end(), a, dst.end());
    scratch.insert(scratch.end(), b, src.end());
    dst.swap(scratch);
}

/// Column reduction on sparse columns with the same semantics as
/// gf2_column_reduce. Columns may be reduced in any order as long as every
/// column that can share a low with column j and precedes it has been reduced
/// first; clear() declares a column zero without reducing it, which is valid
/// only for columns that would reduce to zero anyway.
class SparseColumnReducer {
public:
    SparseColumnReducer(std::vector<SparseColumn> columns, std::size_t num_rows)
        : columns_(std::move(columns)), low_(columns_.size()), owner_(num_rows, -1) {}

    std::optional<std::size_t> reduce(std::size_t j) {
        SparseColumn& col = columns_[j];
        while (!col.empty() && owner_[col.back()] >= 0)
            add_sparse_column(col, columns_[static_cast<std::size_t>(owner_[col.back()])], scratch_);
        if (!col.empty()) {
            low_[j] = col.back();
            owner_[col.back()] = static_cast<std::int64_t>(j);
        }
        return low_[j];
    }

    void clear(std::size_t j) {
        columns_[j].clear();
        low_[j].reset();
    }

    /// Column whose reduced low is row i, if any.
    std::optional<std::size_t> owner_of(std::size_t i) const {
        if (owner_[i] < 0) return std::nullopt;
        return static_cast<std::size_t>(owner_[i]);
    }

    const std::vector<SparseColumn>& columns() const noexcept { return columns_; }
    const std::vector<std::optional<std::size_t>>& lows() const noexcept { return low_; }

private:
    std::vector<SparseColumn> columns_;
    std::vector<std::optional<std::size_t>> low_;
    std::vector<std::int64_t> owner_;
    SparseColumn scratch_;
};

/// Plain left-to-right reduction; returns the reduced columns and their lows.
inline std::pair<std::vector<SparseColumn>, std::vector<std::optional<std::size_t>>>
sparse_column_reduce(std::vector<SparseColumn> columns, std::size_t num_rows) {
    SparseColumnReducer reducer(std::move(columns), num_rows);
    for (std::size_t j = 0; j < reducer.columns().size(); ++j) reducer.reduce(j);
    return {reducer.columns(), reducer.lows()};
}

/// Dense signed integer matrix, row-major.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    static IntMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
        const std::size_t cols = rows.empty() ? 0 : rows.front().size();
        IntMatrix m(rows.size(), cols);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != cols)
                throw Error(ErrorCode::InvalidArgument, "ragged rows in IntMatrix::from_rows");
            for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
        }
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    std::int64_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    std::int64_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](std::int64_t v) { return v == 0; });
    }

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::int64_t> data_;
};

inline IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.rows())
        throw Error(ErrorCode::InvalidArgument, "IntMatrix product shape mismatch");
    IntMatrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const std::int64_t v = a(r, k);
            if (v == 0) continue;
            for (std::size_t c = 0; c < b.cols(); ++c) out(r, c) += v * b(k, c);
        }
    return out;
}

/// Rank over the rationals by Bareiss fraction-free elimination. Intermediate
/// values are minors of the input; overflow is reported rather than wrapped.
inline std::size_t int_rank(const IntMatrix& m) {
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    std::vector<__int128> a(rows * cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) a[r * cols + c] = m(r, c);
    auto at = [&](std::size_t r, std::size_t c) -> __int128& { return a[r * cols + c]; };
    constexpr __int128 kLimit = static_cast<__int128>(1) << 62;

    __int128 prev = 1;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t pivot = rank;
        while (pivot < rows && at(pivot, c) == 0) ++pivot;
        if (pivot == rows) continue;
        if (pivot != rank)
            for (std::size_t k = 0; k < cols; ++k) std::swap(at(pivot, k), at(rank, k));
        const __int128 p = at(rank, c);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            const __int128 f = at(r, c);
            for (std::size_t k = c; k < cols; ++k) {
                // Exact division holds by Sylvester's identity.
                at(r, k) = (p * at(r, k) - f * at(rank, k)) / prev;
                if (at(r, k) > kLimit || at(r, k) < -kLimit)
                    throw Error(ErrorCode::InvalidArgument, "int_rank: entry growth exceeds 62 bits");
            }
        }
        prev = p;
        ++rank;
    }
    return rank;
}

} // namespace topo
