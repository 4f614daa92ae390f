#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "trolllens/error.hpp"

namespace trolllens {

// Dense row-major matrix; rows are samples.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double* row(std::size_t r) { return data.data() + r * cols; }
    const double* row(std::size_t r) const { return data.data() + r * cols; }
    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    static Matrix from_rows(const std::vector<std::vector<double>>& rows_in) {
        Matrix m(rows_in.size(), rows_in.empty() ? 0 : rows_in.front().size());
        for (std::size_t r = 0; r < rows_in.size(); ++r) {
            if (rows_in[r].size() != m.cols) raise("DimensionMismatch", "ragged feature rows");
            std::copy(rows_in[r].begin(), rows_in[r].end(), m.row(r));
        }
        return m;
    }
};

} // namespace trolllens
