#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace rdesn::linalg {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    double* row(std::size_t r) { return data_.data() + r * cols_; }
    const double* row(std::size_t r) const { return data_.data() + r * cols_; }
    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    const std::vector<double>& values() const { return data_; }

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// y = a * x for row-major a (rows x cols), |x| = cols.
std::vector<double> matvec(const Matrix& a, const std::vector<double>& x);

/// In-place lower Cholesky factorization of a symmetric positive-definite
/// matrix (upper triangle ignored). Throws NumericError with advice to raise
/// the ridge parameter when a pivot is not strictly positive.
void cholesky_inplace(Matrix& a);

/// Solve L L^T Z = B for Z in place, where l is the lower Cholesky factor
/// and b holds one right-hand side per column (n x m). Row-oriented sweeps
/// so wide right-hand-side blocks stream through the kernels.
void cholesky_solve_inplace(const Matrix& l, Matrix& b);

/// Replace every row r of b (m x n) with (L L^T)^{-1} r. Rows are
/// independent and processed in parallel; within a row the sweeps are
/// sequential, so results do not depend on the thread count.
void cholesky_solve_rows(const Matrix& l, Matrix& b);

struct SpectralEstimate {
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Largest-|eigenvalue| estimate by power iteration with a trailing
/// geometric-mean window (handles complex dominant pairs, whose growth
/// factors oscillate). Deterministic for a given seed.
SpectralEstimate spectral_radius(const Matrix& w, std::uint64_t seed,
                                 int min_iters = 200, int max_iters = 4096,
                                 double tol = 1e-12);

}  // namespace rdesn::linalg
