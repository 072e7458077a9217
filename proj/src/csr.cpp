#include "perron/csr.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace perron {

CsrMatrix::CsrMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), row_ptr_(static_cast<std::size_t>(rows) + 1, 0) {
    if (rows < 0 || cols < 0) {
        throw std::invalid_argument("negative matrix dimension");
    }
}

CsrMatrix CsrMatrix::from_triplets(int rows, int cols, std::vector<Triplet> triplets) {
    CsrMatrix m(rows, cols);
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    m.col_idx_.reserve(triplets.size());
    m.values_.reserve(triplets.size());
    for (std::size_t t = 0; t < triplets.size(); ++t) {
        const auto& e = triplets[t];
        if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols) {
            throw std::invalid_argument("triplet index out of range: (" + std::to_string(e.row) +
                                        ", " + std::to_string(e.col) + ")");
        }
        if (e.value == 0.0) {
            throw std::invalid_argument("zero value stored explicitly");
        }
        if (t > 0 && triplets[t - 1].row == e.row && triplets[t - 1].col == e.col) {
            throw std::invalid_argument("duplicate entry at (" + std::to_string(e.row) + ", " +
                                        std::to_string(e.col) + ")");
        }
        ++m.row_ptr_[static_cast<std::size_t>(e.row) + 1];
        m.col_idx_.push_back(e.col);
        m.values_.push_back(e.value);
    }
    for (int r = 0; r < rows; ++r) {
        m.row_ptr_[r + 1] += m.row_ptr_[r];
    }
    return m;
}

std::ptrdiff_t CsrMatrix::find(int row, int col) const {
    if (row < 0 || row >= rows_ || col < 0 || col >= cols_) {
        throw std::out_of_range("matrix index out of range");
    }
    const auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row]);
    const auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row + 1]);
    const auto it = std::lower_bound(first, last, col);
    if (it == last || *it != col) {
        return -1;
    }
    return it - col_idx_.begin();
}

double CsrMatrix::at(int row, int col) const {
    const auto p = find(row, col);
    return p < 0 ? 0.0 : values_[static_cast<std::size_t>(p)];
}

bool CsrMatrix::contains(int row, int col) const { return find(row, col) >= 0; }

CsrMatrix CsrMatrix::with_value(int row, int col, double value) const {
    CsrMatrix out = *this;
    const auto p = find(row, col);
    if (p >= 0) {
        const auto pos = static_cast<std::size_t>(p);
        if (value == 0.0) {
            out.col_idx_.erase(out.col_idx_.begin() + p);
            out.values_.erase(out.values_.begin() + p);
            for (int r = row + 1; r <= rows_; ++r) {
                --out.row_ptr_[r];
            }
        } else {
            out.values_[pos] = value;
        }
        return out;
    }
    if (value == 0.0) {
        return out;
    }
    const auto first = out.col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row]);
    const auto last = out.col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row + 1]);
    const auto offset = std::lower_bound(first, last, col) - out.col_idx_.begin();
    out.col_idx_.insert(out.col_idx_.begin() + offset, col);
    out.values_.insert(out.values_.begin() + offset, value);
    for (int r = row + 1; r <= rows_; ++r) {
        ++out.row_ptr_[r];
    }
    return out;
}

CsrMatrix CsrMatrix::transposed() const {
    CsrMatrix t(cols_, rows_);
    t.col_idx_.resize(nnz());
    t.values_.resize(nnz());
    for (int c : col_idx_) {
        ++t.row_ptr_[static_cast<std::size_t>(c) + 1];
    }
    for (int c = 0; c < cols_; ++c) {
        t.row_ptr_[c + 1] += t.row_ptr_[c];
    }
    std::vector<std::size_t> next(t.row_ptr_.begin(), t.row_ptr_.end() - 1);
    // Row-major traversal keeps each transposed row sorted.
    for (int r = 0; r < rows_; ++r) {
        for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
            const auto dst = next[col_idx_[p]]++;
            t.col_idx_[dst] = r;
            t.values_[dst] = values_[p];
        }
    }
    return t;
}

std::vector<CsrMatrix::Triplet> CsrMatrix::triplets() const {
    std::vector<Triplet> out;
    out.reserve(nnz());
    for_each([&](int r, int c, double v) { out.push_back({r, c, v}); });
    return out;
}

} // namespace perron
