#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rdesn/grid.hpp"

namespace rdesn {

/// Diffusion coefficients, reaction constants, grid and time step for the
/// three-field excitable reaction-diffusion system
///   dc/dt = D_c lap(c) + sigma*v*sin(c) - gamma*c*h
///   dv/dt = D_v lap(v) + sigma*sin(chi*c*v) - kappa*h
///   dh/dt = D_h lap(h) + delta*c - eta*h
struct ModelParams {
    GridDims dims{30, 30, 30, 1.0};
    double dt = 0.01;
    double D_c = 0.2;
    double D_v = 1.2;
    double D_h = 0.4;
    double gamma = 2.5;
    double delta = 2.0;
    double eta = 1.5;
    double kappa = 1.0;
    double sigma = 2.0;
    double chi = 1.0;

    /// Validates dt > 0, non-negative diffusion and the explicit-diffusion
    /// stability guard dt * max(D) * 6 / d^2 < 1.
    void validate() const;

    /// Bundled parameter sets for the three model versions.
    static ModelParams preset(int version);
};

struct ReactionRates {
    double f = 0.0;  // chemical
    double g = 0.0;  // electrical
    double k = 0.0;  // inhibitor
};

/// Pointwise reaction terms; pure, total on finite inputs.
ReactionRates reaction_terms(double c, double v, double h, const ModelParams& p);

/// The (c, v, h) field triple at one time step.
struct SystemState {
    Field3 c;
    Field3 v;
    Field3 h;
    long t = 0;

    const GridDims& dims() const { return c.dims(); }
    std::size_t flat_size() const { return 3 * c.size(); }
    /// Concatenated [C, V, H] flat vector.
    std::vector<double> flatten() const;
    void flatten_into(double* out) const;
    static SystemState unflatten(const GridDims& dims, const double* x, long t);

    bool all_finite() const {
        return c.all_finite() && v.all_finite() && h.all_finite();
    }
};

/// Seeded uniform noise of the given amplitude around a per-field baseline.
/// Identical (dims, seed, baseline, amplitude) give a bitwise-identical state.
SystemState init_state(const GridDims& dims, std::uint64_t seed,
                       std::array<double, 3> baseline, double amplitude);

/// One fully explicit Euler step; all Laplacians and reaction terms are
/// evaluated on the input state (simultaneous update). Throws NumericError
/// carrying the step index if any cell goes non-finite.
SystemState euler_step(const SystemState& s, const ModelParams& p);

/// Recorded flattened states of a run: row i is the concatenated [C, V, H]
/// vector at step steps[i].
struct Trajectory {
    GridDims dims;
    double dt = 0.0;
    std::vector<long> steps;
    std::vector<double> data;  // steps.size() x (3 * cells), row-major

    std::size_t state_dim() const { return 3 * dims.cells(); }
    std::size_t count() const { return steps.size(); }
    const double* row(std::size_t i) const { return data.data() + i * state_dim(); }
    double* row(std::size_t i) { return data.data() + i * state_dim(); }
    /// True when the recorded step indices are consecutive integers.
    bool contiguous() const;
    /// Index of the row recorded at simulation step `step`; throws if absent.
    std::size_t row_of_step(long step) const;
    SystemState state_at(std::size_t i) const;
};

/// Run `steps` Euler steps from s0, recording every record_every-th state.
/// Step 0 and the final step are always recorded.
Trajectory simulate(const SystemState& s0, const ModelParams& p, long steps,
                    long record_every = 1);

}  // namespace rdesn
