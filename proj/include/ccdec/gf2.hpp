#ifndef CCDEC_GF2_HPP
#define CCDEC_GF2_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ccdec {

// Dense bit-packed matrix over GF(2).
class Gf2Matrix {
  public:
    Gf2Matrix(size_t rows, size_t cols)
        : rows_(rows), cols_(cols), words_((cols + 63) / 64), data_(rows * words_, 0) {}

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    bool get(size_t r, size_t c) const {
        return (data_[r * words_ + c / 64] >> (c % 64)) & 1;
    }
    void set(size_t r, size_t c, bool v) {
        uint64_t& w = data_[r * words_ + c / 64];
        uint64_t m = 1ULL << (c % 64);
        w = v ? (w | m) : (w & ~m);
    }
    void xor_rows(size_t dst, size_t src) {
        uint64_t* d = &data_[dst * words_];
        const uint64_t* s = &data_[src * words_];
        for (size_t i = 0; i < words_; ++i) d[i] ^= s[i];
    }
    void swap_rows(size_t a, size_t b) {
        if (a == b) return;
        for (size_t i = 0; i < words_; ++i)
            std::swap(data_[a * words_ + i], data_[b * words_ + i]);
    }

    // In-place row echelon form; returns the rank.
    size_t row_reduce() {
        size_t r = 0;
        for (size_t c = 0; c < cols_ && r < rows_; ++c) {
            size_t pivot = r;
            while (pivot < rows_ && !get(pivot, c)) ++pivot;
            if (pivot == rows_) continue;
            swap_rows(r, pivot);
            for (size_t i = 0; i < rows_; ++i)
                if (i != r && get(i, c)) xor_rows(i, r);
            ++r;
        }
        return r;
    }

    size_t rank() const {
        Gf2Matrix copy = *this;
        return copy.row_reduce();
    }

  private:
    size_t rows_, cols_, words_;
    std::vector<uint64_t> data_;
};

// True if v lies in the row span of rows.
inline bool gf2_in_span(const std::vector<std::vector<uint8_t>>& rows,
                        const std::vector<uint8_t>& v) {
    if (rows.empty()) {
        for (uint8_t b : v)
            if (b) return false;
        return true;
    }
    size_t cols = v.size();
    Gf2Matrix m(rows.size() + 1, cols);
    for (size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw std::invalid_argument("gf2_in_span: ragged input");
        for (size_t c = 0; c < cols; ++c) m.set(r, c, rows[r][c]);
    }
    size_t base_rank = m.rank();
    for (size_t c = 0; c < cols; ++c) m.set(rows.size(), c, v[c]);
    return m.rank() == base_rank;
}

}  // namespace ccdec

#endif
