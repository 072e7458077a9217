#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace perron {

/**
 * Compressed sparse row matrix with sorted, duplicate-free column indices.
 *
 * Instances are immutable; edits return a modified copy. Stored values are
 * never zero: writing 0 through with_value() drops the entry.
 */
class CsrMatrix {
public:
    struct Triplet {
        int row;
        int col;
        double value;
    };

    CsrMatrix() = default;
    CsrMatrix(int rows, int cols);

    /// Builds from unsorted triplets. Throws std::invalid_argument on a
    /// duplicate position, an out-of-range index or a zero value.
    static CsrMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    std::size_t nnz() const noexcept { return values_.size(); }

    std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
    std::span<const int> col_idx() const noexcept { return col_idx_; }
    std::span<const double> values() const noexcept { return values_; }

    /// Stored value at (row, col), or 0 when absent.
    double at(int row, int col) const;
    bool contains(int row, int col) const;

    CsrMatrix with_value(int row, int col, double value) const;
    CsrMatrix transposed() const;

    std::vector<Triplet> triplets() const;

    template <class F>
    void for_each(F&& f) const {
        for (int r = 0; r < rows_; ++r) {
            for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
                f(r, col_idx_[p], values_[p]);
            }
        }
    }

    bool operator==(const CsrMatrix&) const = default;

private:
    std::ptrdiff_t find(int row, int col) const;

    int rows_ = 0;
    int cols_ = 0;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<int> col_idx_;
    std::vector<double> values_;
};

} // namespace perron
