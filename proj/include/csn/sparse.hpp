#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "csn/error.hpp"

namespace csn {

struct SparseEntry {
    std::uint32_t column = 0;
    double value = 0.0;

    friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Square matrix stored row by row; each row sorted by column with no
/// duplicate columns. Absent entries are zero.
class SparseRowMatrix {
public:
    SparseRowMatrix() : offsets_(1, 0) {}

    explicit SparseRowMatrix(std::size_t dim) : offsets_(dim + 1, 0) {}

    /// Rows are sorted in place; duplicate columns are rejected.
    static SparseRowMatrix from_rows(std::vector<std::vector<SparseEntry>> rows) {
        SparseRowMatrix m;
        m.offsets_.assign(rows.size() + 1, 0);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            m.offsets_[r + 1] = m.offsets_[r] + rows[r].size();
        }
        m.entries_.reserve(m.offsets_.back());
        for (auto& row : rows) {
            std::sort(row.begin(), row.end(),
                      [](const SparseEntry& a, const SparseEntry& b) { return a.column < b.column; });
            for (std::size_t k = 0; k < row.size(); ++k) {
                if (row[k].column >= rows.size()) {
                    throw InvalidArgument("similarity", "column index out of range");
                }
                if (k > 0 && row[k - 1].column == row[k].column) {
                    throw InvalidArgument("similarity", "duplicate column in sparse row");
                }
            }
            m.entries_.insert(m.entries_.end(), row.begin(), row.end());
        }
        return m;
    }

    std::size_t dim() const noexcept { return offsets_.size() - 1; }
    std::size_t nonzeros() const noexcept { return entries_.size(); }

    std::span<const SparseEntry> row(std::size_t r) const noexcept {
        return {entries_.data() + offsets_[r], entries_.data() + offsets_[r + 1]};
    }

    double at(std::size_t r, std::uint32_t c) const noexcept {
        const auto cells = row(r);
        const auto it = std::lower_bound(
            cells.begin(), cells.end(), c,
            [](const SparseEntry& e, std::uint32_t col) { return e.column < col; });
        return (it != cells.end() && it->column == c) ? it->value : 0.0;
    }

    double row_sum(std::size_t r) const noexcept {
        double total = 0.0;
        for (const auto& e : row(r)) {
            total += e.value;
        }
        return total;
    }

    SparseRowMatrix transposed() const {
        std::vector<std::vector<SparseEntry>> rows(dim());
        for (std::size_t r = 0; r < dim(); ++r) {
            for (const auto& e : row(r)) {
                rows[e.column].push_back({static_cast<std::uint32_t>(r), e.value});
            }
        }
        return from_rows(std::move(rows));
    }

    friend bool operator==(const SparseRowMatrix&, const SparseRowMatrix&) = default;

private:
    std::vector<std::size_t> offsets_;
    std::vector<SparseEntry> entries_;
};

}  // namespace csn
