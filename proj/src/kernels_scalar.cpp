// Scalar reference kernels. These are the semantic ground truth the SIMD
// variants are equivalence-tested against; keep them straightforward.

#include "rdesn/kernels.hpp"

namespace rdesn::kernels {
namespace {

void laplacian7_scalar(const double* f, double* out, int nx, int ny, int nz,
                       double inv_d2, int x0, int x1) {
    const std::size_t sx = static_cast<std::size_t>(ny) * nz;
    const std::size_t sy = static_cast<std::size_t>(nz);
    for (int x = x0; x < x1; ++x) {
        const int xp = (x + 1 < nx) ? x + 1 : x;
        const int xm = (x > 0) ? x - 1 : x;
        for (int y = 0; y < ny; ++y) {
            const int yp = (y + 1 < ny) ? y + 1 : y;
            const int ym = (y > 0) ? y - 1 : y;
            const double* c = f + x * sx + y * sy;
            const double* px = f + xp * sx + y * sy;
            const double* mx = f + xm * sx + y * sy;
            const double* py = f + x * sx + yp * sy;
            const double* my = f + x * sx + ym * sy;
            double* o = out + x * sx + y * sy;
            for (int z = 0; z < nz; ++z) {
                const int zp = (z + 1 < nz) ? z + 1 : z;
                const int zm = (z > 0) ? z - 1 : z;
                double acc = px[z] - c[z];
                acc += mx[z] - c[z];
                acc += py[z] - c[z];
                acc += my[z] - c[z];
                acc += c[zp] - c[z];
                acc += c[zm] - c[z];
                o[z] = acc * inv_d2;
            }
        }
    }
}

void field_update_scalar(const double* s, const double* lap, const double* react,
                         double dt, double diff, double* out,
                         std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) {
        out[i] = s[i] + dt * (diff * lap[i] + react[i]);
    }
}

void matvec_scalar(const double* a, std::size_t cols, const double* x, double* y,
                   std::size_t r0, std::size_t r1) {
    for (std::size_t r = r0; r < r1; ++r) {
        const double* row = a + r * cols;
        double acc = 0.0;
        for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
}

void gemm_atb_scalar(const double* a, const double* b, double* c,
                     std::size_t t, std::size_t m, std::size_t n,
                     std::size_t m0, std::size_t m1) {
    for (std::size_t r = m0; r < m1; ++r) {
        double* crow = c + r * n;
        for (std::size_t j = 0; j < n; ++j) crow[j] = 0.0;
    }
    // blocked over output rows so b's row stays hot while a is streamed
    constexpr std::size_t kBlock = 64;
    for (std::size_t rb = m0; rb < m1; rb += kBlock) {
        const std::size_t re = (rb + kBlock < m1) ? rb + kBlock : m1;
        for (std::size_t k = 0; k < t; ++k) {
            const double* arow = a + k * m;
            const double* brow = b + k * n;
            for (std::size_t r = rb; r < re; ++r) {
                const double alpha = arow[r];
                double* crow = c + r * n;
                for (std::size_t j = 0; j < n; ++j) crow[j] += alpha * brow[j];
            }
        }
    }
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{
        "scalar",         laplacian7_scalar, field_update_scalar,
        matvec_scalar,    gemm_atb_scalar,   axpy_scalar,
    };
    return ops;
}

}  // namespace rdesn::kernels
