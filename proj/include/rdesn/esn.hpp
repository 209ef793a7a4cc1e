#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "rdesn/linalg.hpp"
#include "rdesn/model.hpp"

namespace rdesn {

/// Reservoir and readout hyperparameters (Table-2 style naming in configs:
/// UNITS, LEAK_RATE, SPECTRAL_RADIUS, WARM_UP, RIDGE).
struct EsnConfig {
    int units = 343;
    double leak_rate = 0.0002;
    double spectral_radius = 0.9;
    double ridge = 1e-7;
    int warm_up = 50;
    double input_scaling = 0.1;
    double recurrent_density = 0.1;
    std::uint64_t seed = 1;
    bool use_bias = false;
    bool normalize_input = false;

    void validate() const;
    static EsnConfig preset(int version);
};

/// Fixed random recurrent and input weights plus the running state vector.
struct Reservoir {
    EsnConfig config;
    linalg::Matrix w;      // N x N, rescaled to the target spectral radius
    linalg::Matrix w_in;   // N x D
    std::vector<double> state;  // x, length N

    std::size_t units() const { return w.rows(); }
    std::size_t input_dim() const { return w_in.cols(); }
};

/// Trained affine readout y = W_out * x + b.
struct Readout {
    linalg::Matrix w_out;      // D_out x N
    std::vector<double> bias;  // length D_out (zeros when bias is disabled)

    std::size_t output_dim() const { return w_out.rows(); }
};

/// Borrowed row-major block of vectors (e.g. trajectory rows).
struct RowsView {
    const double* data = nullptr;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t stride = 0;  // doubles between row starts

    const double* row(std::size_t i) const { return data + i * stride; }
};

/// Post-washout reservoir states (one per row) with the aligned targets.
struct StateMatrix {
    std::size_t t = 0;  // retained time steps
    std::size_t n = 0;  // reservoir units
    std::vector<double> states;  // t x n row-major
    RowsView targets;            // t x d_out

    const double* state_row(std::size_t i) const { return states.data() + i * n; }
};

/// Draw W (sparse uniform, rescaled to the target spectral radius by power
/// iteration) and W_in (dense uniform in +-input_scaling); state starts at
/// zero. Deterministic per seed; retries degenerate zero-radius draws on
/// derived substreams, up to 5 attempts.
Reservoir build_reservoir(const EsnConfig& cfg, std::size_t input_dim);

/// Leaky-integrator update x' = (1-a)x + a tanh(W x + W_in u); replaces the
/// reservoir state and returns a reference to it.
const std::vector<double>& update(Reservoir& r, std::span<const double> u);

/// Pure single-step form used by rollouts: x_out from x_in without touching
/// reservoir state.
void reservoir_forward(const Reservoir& r, std::span<const double> u,
                       const std::vector<double>& x_in, std::vector<double>& x_out,
                       std::vector<double>& scratch);

/// Drive the reservoir from a zero state over all input rows and keep the
/// states after the first warm_up steps.
StateMatrix collect_states(Reservoir& r, const RowsView& inputs, int warm_up);

/// Ridge readout W_out = Y X^T (X X^T + lambda I)^-1 via Cholesky on the SPD
/// system (never an explicit inverse). With use_bias the state is augmented
/// by a constant 1 and the last column becomes b; otherwise b = 0.
Readout fit_ridge(const StateMatrix& sm, double lambda, bool use_bias = false);

/// y = W_out x + b.
std::vector<double> predict_one(const Readout& ro, std::span<const double> state);
void predict_into(const Readout& ro, const double* state, double* out);

/// A trained surrogate: reservoir is left at its post-training state so an
/// autoregressive rollout continues the same run.
struct TrainedEsn {
    Reservoir reservoir;
    Readout readout;
    // per-field min-max normalization (identity when disabled)
    bool normalized = false;
    std::array<double, 3> norm_min{{0.0, 0.0, 0.0}};
    std::array<double, 3> norm_max{{0.0, 0.0, 0.0}};
    // teacher-forced one-step error over the post-washout training window,
    // pooled RMSE / pooled truth range
    double fit_nrmse = 0.0;
};

/// One-step-ahead training on a contiguous trajectory: inputs X^0..X^{T-1},
/// targets X^1..X^T, washout per cfg, ridge readout.
TrainedEsn train_surrogate(const Trajectory& traj, const EsnConfig& cfg);

/// Closed-loop prediction: y = readout(update(x, u)), u <- y. seed_input is
/// the true state at the rollout start; returns predicted states for steps
/// start_step+1 .. start_step+n_steps. Throws NumericError (with the step
/// index) if a prediction goes non-finite. Does not modify the trained pair.
Trajectory run_autoregressive(const TrainedEsn& esn, std::span<const double> seed_input,
                              long n_steps, long start_step, const GridDims& dims,
                              double dt);

}  // namespace rdesn
