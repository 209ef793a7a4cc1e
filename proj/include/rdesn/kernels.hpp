#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

namespace rdesn::kernels {

// Numeric inner loops live behind this table. Every kernel comes in a scalar
// reference variant and (on capable x86-64) an AVX2 variant selected at
// runtime. All kernels take explicit output ranges so a single threading
// driver can partition work; each output element is written by exactly one
// call with a fixed per-element operation order, which makes results
// identical for any thread count.
//
// Bitwise contract between variants (equivalence-tested):
//   laplacian7, field_update, gemm_atb, axpy  -> bit-identical to scalar
//   matvec                                    -> reassociated accumulation,
//                                                equal to scalar within 1e-12
struct Ops {
    const char* name;

    // 7-point Laplacian with zero-flux (mirrored ghost) boundaries on a
    // z-fastest grid, computed on x-slabs [x0, x1). Neighbor differences are
    // accumulated in the fixed order +x, -x, +y, -y, +z, -z and scaled by
    // inv_d2; the difference form keeps the constant-field result exactly 0.
    void (*laplacian7)(const double* f, double* out, int nx, int ny, int nz,
                       double inv_d2, int x0, int x1);

    // out[i] = s[i] + dt*(diff*lap[i] + react[i]) on [i0, i1)
    void (*field_update)(const double* s, const double* lap, const double* react,
                         double dt, double diff, double* out,
                         std::size_t i0, std::size_t i1);

    // y[r] = dot(a[r*cols .. ], x) for rows [r0, r1); a is row-major rows x cols
    void (*matvec)(const double* a, std::size_t cols, const double* x, double* y,
                   std::size_t r0, std::size_t r1);

    // c (m x n, row-major) = a^T * b with a (t x m) and b (t x n) row-major,
    // computed for output rows [m0, m1). Accumulation over t is sequential
    // per output element (no reassociation).
    void (*gemm_atb)(const double* a, const double* b, double* c,
                     std::size_t t, std::size_t m, std::size_t n,
                     std::size_t m0, std::size_t m1);

    // y[i] += alpha * x[i]
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

const Ops& scalar_ops();
const Ops* avx2_ops();   // nullptr when unsupported at runtime or not compiled in
const Ops& active_ops();

/// Force a variant ("scalar", "avx2", "auto"). Throws ConfigError for an
/// unknown name or an unavailable variant. Honors RDESN_KERNELS env var on
/// first use.
void set_active(std::string_view name);

int num_threads();
void set_num_threads(int n);  // n >= 1

/// Split [0, n) into contiguous chunks and run body(lo, hi) on worker
/// threads. Deterministic given the kernel contracts above.
void parallel_ranges(std::size_t n, std::size_t grain,
                     const std::function<void(std::size_t, std::size_t)>& body);

// Threaded drivers over the active variant.
void laplacian7(const double* f, double* out, int nx, int ny, int nz, double inv_d2);
void field_update(const double* s, const double* lap, const double* react,
                  double dt, double diff, double* out, std::size_t n);
void matvec(const double* a, std::size_t rows, std::size_t cols,
            const double* x, double* y);
void gemm_atb(const double* a, const double* b, double* c,
              std::size_t t, std::size_t m, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);

}  // namespace rdesn::kernels
