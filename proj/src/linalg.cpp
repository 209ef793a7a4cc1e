#include "rdesn/linalg.hpp"

#include <cmath>
#include <deque>

#include "rdesn/errors.hpp"
#include "rdesn/kernels.hpp"
#include "rdesn/rng.hpp"

namespace rdesn::linalg {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) {
        throw ConfigError("matrix data length does not match dimensions");
    }
}

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
    if (x.size() != a.cols()) throw ConfigError("matvec dimension mismatch");
    std::vector<double> y(a.rows());
    kernels::matvec(a.data(), a.rows(), a.cols(), x.data(), y.data());
    return y;
}

void cholesky_inplace(Matrix& a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw ConfigError("cholesky requires a square matrix");
    for (std::size_t j = 0; j < n; ++j) {
        double d = a.at(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= a.at(j, k) * a.at(j, k);
        if (!(d > 0.0)) {
            throw NumericError(
                "ridge system is numerically singular; use a regularization "
                "lambda > 0");
        }
        const double ljj = std::sqrt(d);
        a.at(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a.at(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= a.at(i, k) * a.at(j, k);
            a.at(i, j) = s / ljj;
        }
        for (std::size_t k = j + 1; k < n; ++k) a.at(j, k) = 0.0;
    }
}

void cholesky_solve_inplace(const Matrix& l, Matrix& b) {
    const std::size_t n = l.rows();
    if (b.rows() != n) throw ConfigError("cholesky solve dimension mismatch");
    const std::size_t m = b.cols();
    // Threads split the right-hand-side columns; each column block runs the
    // same sequential sweep, so results do not depend on the thread count.
    kernels::parallel_ranges(m, 1024, [&](std::size_t c0, std::size_t c1) {
        const std::size_t w = c1 - c0;
        // forward: L z = b
        for (std::size_t i = 0; i < n; ++i) {
            double* bi = b.row(i) + c0;
            for (std::size_t k = 0; k < i; ++k) {
                kernels::axpy(-l.at(i, k), b.row(k) + c0, bi, w);
            }
            const double inv = 1.0 / l.at(i, i);
            for (std::size_t j = 0; j < w; ++j) bi[j] *= inv;
        }
        // backward: L^T x = z
        for (std::size_t ii = n; ii-- > 0;) {
            double* bi = b.row(ii) + c0;
            for (std::size_t k = ii + 1; k < n; ++k) {
                kernels::axpy(-l.at(k, ii), b.row(k) + c0, bi, w);
            }
            const double inv = 1.0 / l.at(ii, ii);
            for (std::size_t j = 0; j < w; ++j) bi[j] *= inv;
        }
    });
}

void cholesky_solve_rows(const Matrix& l, Matrix& b) {
    const std::size_t n = l.rows();
    if (b.cols() != n) throw ConfigError("cholesky row-solve dimension mismatch");
    // transposed factor so the backward sweep reads contiguous memory
    Matrix lt(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) lt.at(j, i) = l.at(i, j);
    }
    kernels::parallel_ranges(b.rows(), 64, [&](std::size_t r0, std::size_t r1) {
        for (std::size_t r = r0; r < r1; ++r) {
            double* x = b.row(r);
            for (std::size_t i = 0; i < n; ++i) {  // L y = x
                const double* li = l.row(i);
                double acc = x[i];
                for (std::size_t k = 0; k < i; ++k) acc -= li[k] * x[k];
                x[i] = acc / li[i];
            }
            for (std::size_t ii = n; ii-- > 0;) {  // L^T w = y
                const double* ti = lt.row(ii);
                double acc = x[ii];
                for (std::size_t k = ii + 1; k < n; ++k) acc -= ti[k] * x[k];
                x[ii] = acc / ti[ii];
            }
        }
    });
}

SpectralEstimate spectral_radius(const Matrix& w, std::uint64_t seed,
                                 int min_iters, int max_iters, double tol) {
    const std::size_t n = w.rows();
    if (w.cols() != n) throw ConfigError("spectral radius requires a square matrix");
    if (n == 0) return {0.0, 0, true};

    auto gen = rng::engine(rng::derive_seed(seed, "power-iteration"));
    std::vector<double> v(n);
    double norm0 = 0.0;
    for (auto& vi : v) {
        vi = rng::uniform(gen, -1.0, 1.0);
        norm0 += vi * vi;
    }
    norm0 = std::sqrt(norm0);
    for (auto& vi : v) vi /= norm0;

    std::vector<double> wv(n);
    constexpr int kWindow = 256;
    std::deque<double> logs;
    double log_sum = 0.0;
    double prev_est = -1.0;
    int stable = 0;

    SpectralEstimate est;
    for (int it = 1; it <= max_iters; ++it) {
        kernels::matvec(w.data(), n, n, v.data(), wv.data());
        double norm = 0.0;
        for (double x : wv) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) return {0.0, it, true};  // reached the null space
        for (std::size_t i = 0; i < n; ++i) v[i] = wv[i] / norm;

        logs.push_back(std::log(norm));
        log_sum += logs.back();
        if (logs.size() > kWindow) {
            log_sum -= logs.front();
            logs.pop_front();
        }
        est.value = std::exp(log_sum / static_cast<double>(logs.size()));
        est.iterations = it;
        if (it >= min_iters) {
            if (prev_est > 0.0 && std::abs(est.value - prev_est) <= tol * est.value) {
                if (++stable >= 16) {
                    est.converged = true;
                    return est;
                }
            } else {
                stable = 0;
            }
        }
        prev_est = est.value;
    }
    return est;
}

}  // namespace rdesn::linalg
