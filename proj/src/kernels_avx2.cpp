// AVX2 kernel variants. This translation unit is compiled with -mavx2; the
// dispatcher only hands these out after a runtime CPUID check.
//
// laplacian7, field_update, gemm_atb and axpy perform the exact per-element
// operation sequence of the scalar reference (mul/add/sub only, no FMA), so
// their results are bit-identical to it. matvec uses 4-lane accumulators and
// is only tolerance-equal.

#include "rdesn/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

namespace rdesn::kernels {
namespace {

void laplacian7_avx2(const double* f, double* out, int nx, int ny, int nz,
                     double inv_d2, int x0, int x1) {
    const std::size_t sx = static_cast<std::size_t>(ny) * nz;
    const std::size_t sy = static_cast<std::size_t>(nz);
    const __m256d vinv = _mm256_set1_pd(inv_d2);
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

            auto cell = [&](int z) {
                const int zp = (z + 1 < nz) ? z + 1 : z;
                const int zm = (z > 0) ? z - 1 : z;
                double acc = px[z] - c[z];
                acc += mx[z] - c[z];
                acc += py[z] - c[z];
                acc += my[z] - c[z];
                acc += c[zp] - c[z];
                acc += c[zm] - c[z];
                o[z] = acc * inv_d2;
            };

            cell(0);
            int z = 1;
            for (; z + 4 <= nz - 1; z += 4) {
                const __m256d vc = _mm256_loadu_pd(c + z);
                __m256d acc = _mm256_sub_pd(_mm256_loadu_pd(px + z), vc);
                acc = _mm256_add_pd(acc, _mm256_sub_pd(_mm256_loadu_pd(mx + z), vc));
                acc = _mm256_add_pd(acc, _mm256_sub_pd(_mm256_loadu_pd(py + z), vc));
                acc = _mm256_add_pd(acc, _mm256_sub_pd(_mm256_loadu_pd(my + z), vc));
                acc = _mm256_add_pd(acc, _mm256_sub_pd(_mm256_loadu_pd(c + z + 1), vc));
                acc = _mm256_add_pd(acc, _mm256_sub_pd(_mm256_loadu_pd(c + z - 1), vc));
                _mm256_storeu_pd(o + z, _mm256_mul_pd(acc, vinv));
            }
            for (; z < nz; ++z) cell(z);
        }
    }
}

void field_update_avx2(const double* s, const double* lap, const double* react,
                       double dt, double diff, double* out,
                       std::size_t i0, std::size_t i1) {
    const __m256d vdt = _mm256_set1_pd(dt);
    const __m256d vdiff = _mm256_set1_pd(diff);
    std::size_t i = i0;
    for (; i + 4 <= i1; i += 4) {
        const __m256d term = _mm256_add_pd(
            _mm256_mul_pd(vdiff, _mm256_loadu_pd(lap + i)), _mm256_loadu_pd(react + i));
        _mm256_storeu_pd(out + i,
                         _mm256_add_pd(_mm256_loadu_pd(s + i), _mm256_mul_pd(vdt, term)));
    }
    for (; i < i1; ++i) out[i] = s[i] + dt * (diff * lap[i] + react[i]);
}

void matvec_avx2(const double* a, std::size_t cols, const double* x, double* y,
                 std::size_t r0, std::size_t r1) {
    for (std::size_t r = r0; r < r1; ++r) {
        const double* row = a + r * cols;
        __m256d acc0 = _mm256_setzero_pd();
        __m256d acc1 = _mm256_setzero_pd();
        std::size_t c = 0;
        for (; c + 8 <= cols; c += 8) {
            acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(row + c),
                                                     _mm256_loadu_pd(x + c)));
            acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(row + c + 4),
                                                     _mm256_loadu_pd(x + c + 4)));
        }
        __m256d acc = _mm256_add_pd(acc0, acc1);
        alignas(32) double lanes[4];
        _mm256_store_pd(lanes, acc);
        double sum = ((lanes[0] + lanes[1]) + lanes[2]) + lanes[3];
        for (; c < cols; ++c) sum += row[c] * x[c];
        y[r] = sum;
    }
}

void gemm_atb_avx2(const double* a, const double* b, double* c,
                   std::size_t t, std::size_t m, std::size_t n,
                   std::size_t m0, std::size_t m1) {
    for (std::size_t r = m0; r < m1; ++r) {
        double* crow = c + r * n;
        for (std::size_t j = 0; j < n; ++j) crow[j] = 0.0;
    }
    constexpr std::size_t kBlock = 64;
    for (std::size_t rb = m0; rb < m1; rb += kBlock) {
        const std::size_t re = (rb + kBlock < m1) ? rb + kBlock : m1;
        for (std::size_t k = 0; k < t; ++k) {
            const double* arow = a + k * m;
            const double* brow = b + k * n;
            for (std::size_t r = rb; r < re; ++r) {
                const __m256d valpha = _mm256_set1_pd(arow[r]);
                double* crow = c + r * n;
                std::size_t j = 0;
                for (; j + 4 <= n; j += 4) {
                    const __m256d prod = _mm256_mul_pd(valpha, _mm256_loadu_pd(brow + j));
                    _mm256_storeu_pd(crow + j,
                                     _mm256_add_pd(_mm256_loadu_pd(crow + j), prod));
                }
                for (; j < n; ++j) crow[j] += arow[r] * brow[j];
            }
        }
    }
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d valpha = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d prod = _mm256_mul_pd(valpha, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const Ops* avx2_ops_impl() {
    static const Ops ops{
        "avx2",       laplacian7_avx2, field_update_avx2,
        matvec_avx2,  gemm_atb_avx2,   axpy_avx2,
    };
    return &ops;
}

}  // namespace rdesn::kernels

#else

namespace rdesn::kernels {
const Ops* avx2_ops_impl() { return nullptr; }
}  // namespace rdesn::kernels

#endif  // __AVX2__
