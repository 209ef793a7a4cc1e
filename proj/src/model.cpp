#include "rdesn/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "rdesn/errors.hpp"
#include "rdesn/kernels.hpp"
#include "rdesn/rng.hpp"

namespace rdesn {

void ModelParams::validate() const {
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (D_c < 0.0 || D_v < 0.0 || D_h < 0.0) {
        throw ConfigError("diffusion coefficients must be non-negative");
    }
    const double dmax = std::max({D_c, D_v, D_h});
    const double cfl = dt * dmax * 6.0 / (dims.d * dims.d);
    if (!(cfl < 1.0)) {
        throw ConfigError("explicit diffusion unstable: dt*max(D)*6/d^2 = " +
                          std::to_string(cfl) + " >= 1");
    }
}

ModelParams ModelParams::preset(int version) {
    ModelParams p;
    p.dims = GridDims(30, 30, 30, 1.0);
    p.gamma = 2.5;
    p.delta = 2.0;
    p.eta = 1.5;
    p.kappa = 1.0;
    p.sigma = 2.0;
    switch (version) {
        case 1:
            p.dt = 0.01;
            p.D_c = 0.2;
            p.D_v = 1.2;
            p.D_h = 0.4;
            p.chi = 1.0;
            break;
        case 2:
            p.dt = 0.01;
            p.D_c = 0.2;
            p.D_v = 0.4;
            p.D_h = 1.9;
            p.chi = 9.1;
            break;
        case 3:
            p.dt = 0.002;
            p.D_c = 0.1;
            p.D_v = 0.4;
            p.D_h = 1.4;
            p.chi = 8.5;
            break;
        default:
            throw ConfigError("unknown model version " + std::to_string(version) +
                              " (expected 1, 2 or 3)");
    }
    return p;
}

ReactionRates reaction_terms(double c, double v, double h, const ModelParams& p) {
    ReactionRates r;
    r.f = p.sigma * v * std::sin(c) - p.gamma * c * h;
    r.g = p.sigma * std::sin(p.chi * c * v) - p.kappa * h;
    r.k = p.delta * c - p.eta * h;
    return r;
}

std::vector<double> SystemState::flatten() const {
    std::vector<double> out(flat_size());
    flatten_into(out.data());
    return out;
}

void SystemState::flatten_into(double* out) const {
    const std::size_t n = c.size();
    std::memcpy(out, c.data(), n * sizeof(double));
    std::memcpy(out + n, v.data(), n * sizeof(double));
    std::memcpy(out + 2 * n, h.data(), n * sizeof(double));
}

SystemState SystemState::unflatten(const GridDims& dims, const double* x, long t) {
    const std::size_t n = dims.cells();
    SystemState s;
    s.c = Field3(dims, std::vector<double>(x, x + n));
    s.v = Field3(dims, std::vector<double>(x + n, x + 2 * n));
    s.h = Field3(dims, std::vector<double>(x + 2 * n, x + 3 * n));
    s.t = t;
    return s;
}

SystemState init_state(const GridDims& dims, std::uint64_t seed,
                       std::array<double, 3> baseline, double amplitude) {
    if (amplitude < 0.0) throw ConfigError("init amplitude must be >= 0");
    SystemState s;
    s.c = Field3(dims);
    s.v = Field3(dims);
    s.h = Field3(dims);
    s.t = 0;
    auto gen = rng::engine(seed);
    Field3* fields[3] = {&s.c, &s.v, &s.h};
    for (int fi = 0; fi < 3; ++fi) {
        double* data = fields[fi]->data();
        const std::size_t n = fields[fi]->size();
        for (std::size_t i = 0; i < n; ++i) {
            data[i] = baseline[fi] + rng::uniform(gen, -amplitude, amplitude);
        }
    }
    return s;
}

namespace {

// Bulk reaction terms over three aligned arrays. Pure per cell, so threading
// over disjoint ranges keeps results identical for any thread count.
void reaction_bulk(const double* c, const double* v, const double* h,
                   const ModelParams& p, double* f, double* g, double* k,
                   std::size_t n) {
    kernels::parallel_ranges(n, 2048, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const double ci = c[i];
            const double vi = v[i];
            const double hi_ = h[i];
            f[i] = p.sigma * vi * std::sin(ci) - p.gamma * ci * hi_;
            g[i] = p.sigma * std::sin(p.chi * ci * vi) - p.kappa * hi_;
            k[i] = p.delta * ci - p.eta * hi_;
        }
    });
}

}  // namespace

SystemState euler_step(const SystemState& s, const ModelParams& p) {
    if (s.dims() != p.dims) throw ConfigError("state dims do not match params");
    if (!s.all_finite()) {
        throw NumericError("non-finite state entering step " + std::to_string(s.t));
    }
    const std::size_t n = s.c.size();
    const GridDims& d = p.dims;
    const double inv_d2 = 1.0 / (d.d * d.d);

    Field3 lap_c(d), lap_v(d), lap_h(d);
    kernels::laplacian7(s.c.data(), lap_c.data(), d.nx, d.ny, d.nz, inv_d2);
    kernels::laplacian7(s.v.data(), lap_v.data(), d.nx, d.ny, d.nz, inv_d2);
    kernels::laplacian7(s.h.data(), lap_h.data(), d.nx, d.ny, d.nz, inv_d2);

    std::vector<double> f(n), g(n), k(n);
    reaction_bulk(s.c.data(), s.v.data(), s.h.data(), p, f.data(), g.data(),
                  k.data(), n);

    SystemState out;
    out.c = Field3(d);
    out.v = Field3(d);
    out.h = Field3(d);
    out.t = s.t + 1;
    kernels::field_update(s.c.data(), lap_c.data(), f.data(), p.dt, p.D_c,
                          out.c.data(), n);
    kernels::field_update(s.v.data(), lap_v.data(), g.data(), p.dt, p.D_v,
                          out.v.data(), n);
    kernels::field_update(s.h.data(), lap_h.data(), k.data(), p.dt, p.D_h,
                          out.h.data(), n);

    if (!out.all_finite()) {
        throw NumericError("integration blow-up at step " + std::to_string(out.t));
    }
    return out;
}

bool Trajectory::contiguous() const {
    for (std::size_t i = 1; i < steps.size(); ++i) {
        if (steps[i] != steps[i - 1] + 1) return false;
    }
    return true;
}

std::size_t Trajectory::row_of_step(long step) const {
    auto it = std::lower_bound(steps.begin(), steps.end(), step);
    if (it == steps.end() || *it != step) {
        throw ConfigError("trajectory does not contain step " + std::to_string(step));
    }
    return static_cast<std::size_t>(it - steps.begin());
}

SystemState Trajectory::state_at(std::size_t i) const {
    return SystemState::unflatten(dims, row(i), steps[i]);
}

Trajectory simulate(const SystemState& s0, const ModelParams& p, long steps,
                    long record_every) {
    if (steps < 1) throw ConfigError("simulate requires steps >= 1");
    if (record_every < 1) throw ConfigError("record_every must be >= 1");
    p.validate();

    Trajectory traj;
    traj.dims = p.dims;
    traj.dt = p.dt;
    const std::size_t dim = traj.state_dim();
    const std::size_t expected = 2 + static_cast<std::size_t>(steps - 1) / record_every;
    traj.data.reserve(expected * dim);

    auto record = [&](const SystemState& s) {
        traj.steps.push_back(s.t);
        const std::size_t off = traj.data.size();
        traj.data.resize(off + dim);
        s.flatten_into(traj.data.data() + off);
    };

    SystemState s = s0;
    record(s);
    for (long t = 1; t <= steps; ++t) {
        s = euler_step(s, p);
        if (t % record_every == 0 || t == steps) record(s);
    }
    return traj;
}

}  // namespace rdesn
