#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "netgov/errors.hpp"

namespace netgov::nn {

using Vector = std::vector<double>;

/// Dense row-major float64 matrix. All the linear algebra the project needs
/// lives in the handful of kernels below.
struct Matrix {
    int rows = 0;
    int cols = 0;
    Vector data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

    std::span<double> row(int r) { return {data.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)}; }
    std::span<const double> row(int r) const { return {data.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)}; }

    std::size_t size() const { return data.size(); }
    void fill(double v) { data.assign(data.size(), v); }

    bool operator==(const Matrix&) const = default;
};

/// out = W x
inline void matvec(const Matrix& w, std::span<const double> x, std::span<double> out) {
    assert(static_cast<int>(x.size()) == w.cols && static_cast<int>(out.size()) == w.rows);
    for (int r = 0; r < w.rows; ++r) {
        const double* wr = w.data.data() + static_cast<std::size_t>(r) * w.cols;
        double acc = 0.0;
        for (int c = 0; c < w.cols; ++c) acc += wr[c] * x[static_cast<std::size_t>(c)];
        out[static_cast<std::size_t>(r)] = acc;
    }
}

/// out += W x
inline void matvec_accum(const Matrix& w, std::span<const double> x, std::span<double> out) {
    assert(static_cast<int>(x.size()) == w.cols && static_cast<int>(out.size()) == w.rows);
    for (int r = 0; r < w.rows; ++r) {
        const double* wr = w.data.data() + static_cast<std::size_t>(r) * w.cols;
        double acc = 0.0;
        for (int c = 0; c < w.cols; ++c) acc += wr[c] * x[static_cast<std::size_t>(c)];
        out[static_cast<std::size_t>(r)] += acc;
    }
}

/// dx += W^T dy
inline void matvec_transposed_accum(const Matrix& w, std::span<const double> dy,
                                    std::span<double> dx) {
    assert(static_cast<int>(dy.size()) == w.rows && static_cast<int>(dx.size()) == w.cols);
    for (int r = 0; r < w.rows; ++r) {
        const double g = dy[static_cast<std::size_t>(r)];
        if (g == 0.0) continue;
        const double* wr = w.data.data() + static_cast<std::size_t>(r) * w.cols;
        for (int c = 0; c < w.cols; ++c) dx[static_cast<std::size_t>(c)] += g * wr[c];
    }
}

/// dW += dy x^T
inline void outer_accum(Matrix& dw, std::span<const double> dy, std::span<const double> x) {
    assert(static_cast<int>(dy.size()) == dw.rows && static_cast<int>(x.size()) == dw.cols);
    for (int r = 0; r < dw.rows; ++r) {
        const double g = dy[static_cast<std::size_t>(r)];
        if (g == 0.0) continue;
        double* wr = dw.data.data() + static_cast<std::size_t>(r) * dw.cols;
        for (int c = 0; c < dw.cols; ++c) wr[c] += g * x[static_cast<std::size_t>(c)];
    }
}

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
    assert(x.size() == y.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

inline bool all_finite(std::span<const double> xs) {
    for (double x : xs) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

}  // namespace netgov::nn
