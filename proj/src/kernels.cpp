// Kernel dispatch and the threading driver.

#include "rdesn/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>
#include <vector>

#include "rdesn/errors.hpp"

namespace rdesn::kernels {

const Ops* avx2_ops_impl();  // defined in kernels_avx2.cpp

const Ops* avx2_ops() {
#if defined(__x86_64__) || defined(__i386__)
    if (__builtin_cpu_supports("avx2")) return avx2_ops_impl();
#endif
    return nullptr;
}

namespace {

std::atomic<const Ops*> g_active{nullptr};
std::atomic<int> g_threads{0};
std::once_flag g_init_once;

void init_from_env() {
    const char* env = std::getenv("RDESN_KERNELS");
    const Ops* pick = avx2_ops();
    if (!pick) pick = &scalar_ops();
    if (env) {
        std::string_view v(env);
        if (v == "scalar") pick = &scalar_ops();
        else if (v == "avx2" && avx2_ops()) pick = avx2_ops();
        // anything else (incl. "auto"): keep best available
    }
    g_active.store(pick, std::memory_order_release);
}

const Ops& active_locked() {
    std::call_once(g_init_once, init_from_env);
    return *g_active.load(std::memory_order_acquire);
}

}  // namespace

const Ops& active_ops() { return active_locked(); }

void set_active(std::string_view name) {
    std::call_once(g_init_once, init_from_env);
    if (name == "scalar") {
        g_active.store(&scalar_ops());
    } else if (name == "avx2") {
        const Ops* ops = avx2_ops();
        if (!ops) throw ConfigError("avx2 kernels are not available on this CPU/build");
        g_active.store(ops);
    } else if (name == "auto") {
        const Ops* pick = avx2_ops();
        g_active.store(pick ? pick : &scalar_ops());
    } else {
        throw ConfigError("unknown kernel variant: " + std::string(name));
    }
}

int num_threads() {
    int n = g_threads.load(std::memory_order_relaxed);
    if (n <= 0) {
        unsigned hw = std::thread::hardware_concurrency();
        n = hw ? static_cast<int>(hw) : 1;
        g_threads.store(n, std::memory_order_relaxed);
    }
    return n;
}

void set_num_threads(int n) {
    if (n < 1) throw ConfigError("thread count must be >= 1");
    g_threads.store(n, std::memory_order_relaxed);
}

void parallel_ranges(std::size_t n, std::size_t grain,
                     const std::function<void(std::size_t, std::size_t)>& body) {
    if (n == 0) return;
    const int want = num_threads();
    std::size_t chunks = static_cast<std::size_t>(want);
    if (grain > 0) {
        const std::size_t max_chunks = (n + grain - 1) / grain;
        if (chunks > max_chunks) chunks = max_chunks;
    }
    if (chunks <= 1) {
        body(0, n);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(chunks - 1);
    const std::size_t per = n / chunks;
    const std::size_t rem = n % chunks;
    std::size_t lo = 0;
    for (std::size_t i = 0; i < chunks; ++i) {
        const std::size_t hi = lo + per + (i < rem ? 1 : 0);
        if (i + 1 == chunks) {
            body(lo, hi);
        } else {
            workers.emplace_back([&body, lo, hi] { body(lo, hi); });
        }
        lo = hi;
    }
    for (auto& w : workers) w.join();
}

void laplacian7(const double* f, double* out, int nx, int ny, int nz, double inv_d2) {
    const Ops& ops = active_ops();
    parallel_ranges(static_cast<std::size_t>(nx), 4,
                    [&](std::size_t lo, std::size_t hi) {
                        ops.laplacian7(f, out, nx, ny, nz, inv_d2,
                                       static_cast<int>(lo), static_cast<int>(hi));
                    });
}

void field_update(const double* s, const double* lap, const double* react,
                  double dt, double diff, double* out, std::size_t n) {
    const Ops& ops = active_ops();
    parallel_ranges(n, 4096, [&](std::size_t lo, std::size_t hi) {
        ops.field_update(s, lap, react, dt, diff, out, lo, hi);
    });
}

void matvec(const double* a, std::size_t rows, std::size_t cols,
            const double* x, double* y) {
    const Ops& ops = active_ops();
    parallel_ranges(rows, 16, [&](std::size_t lo, std::size_t hi) {
        ops.matvec(a, cols, x, y, lo, hi);
    });
}

void gemm_atb(const double* a, const double* b, double* c,
              std::size_t t, std::size_t m, std::size_t n) {
    const Ops& ops = active_ops();
    parallel_ranges(m, 64, [&](std::size_t lo, std::size_t hi) {
        ops.gemm_atb(a, b, c, t, m, n, lo, hi);
    });
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    active_ops().axpy(alpha, x, y, n);
}

}  // namespace rdesn::kernels
