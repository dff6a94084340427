#ifndef MDAG_DATASET_HPP
#define MDAG_DATASET_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdag {

/// Rectangular numeric data with a per-cell observed mask. Values are kept
/// underneath unobserved cells (they come from a generator), so the same
/// object supports both masked analyses and full-data oracle fits; masked
/// analyses must consult `observed`.
struct Dataset {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;         // column-major
    std::vector<std::vector<std::uint8_t>> observed;  // parallel to columns

    std::size_t rows() const { return columns.empty() ? 0 : columns[0].size(); }
    std::size_t cols() const { return columns.size(); }

    std::size_t col(const std::string& name) const {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] == name) return i;
        }
        throw std::invalid_argument("dataset has no column '" + name + "'");
    }

    bool is_observed(std::size_t row, std::size_t column) const {
        return observed[column][row] != 0;
    }

    std::size_t count_observed(const std::string& name) const {
        const auto& mask = observed[col(name)];
        std::size_t k = 0;
        for (auto v : mask) k += v != 0;
        return k;
    }
};

/// Copy of the selected rows, in the given order.
inline Dataset subset(const Dataset& ds, const std::vector<std::uint32_t>& rows_) {
    Dataset out;
    out.names = ds.names;
    out.columns.resize(ds.cols());
    out.observed.resize(ds.cols());
    for (std::size_t c = 0; c < ds.cols(); ++c) {
        out.columns[c].reserve(rows_.size());
        out.observed[c].reserve(rows_.size());
        for (std::uint32_t r : rows_) {
            out.columns[c].push_back(ds.columns[c][r]);
            out.observed[c].push_back(ds.observed[c][r]);
        }
    }
    return out;
}

}  // namespace mdag

#endif
