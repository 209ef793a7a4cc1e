#include "rdesn/esn.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include "rdesn/errors.hpp"
#include "rdesn/kernels.hpp"
#include "rdesn/rng.hpp"

namespace rdesn {

void EsnConfig::validate() const {
    if (units < 1) throw ConfigError("reservoir units must be >= 1");
    if (!(leak_rate > 0.0) || leak_rate > 1.0) {
        throw ConfigError("leak_rate must be in (0, 1]");
    }
    if (!(spectral_radius > 0.0)) throw ConfigError("spectral_radius must be positive");
    if (ridge < 0.0) throw ConfigError("ridge must be >= 0");
    if (warm_up < 0) throw ConfigError("warm_up must be >= 0");
    if (!(input_scaling > 0.0)) throw ConfigError("input_scaling must be positive");
    if (!(recurrent_density > 0.0) || recurrent_density > 1.0) {
        throw ConfigError("recurrent_density must be in (0, 1]");
    }
}

EsnConfig EsnConfig::preset(int version) {
    EsnConfig c;
    c.units = 343;
    c.input_scaling = 0.1;
    c.recurrent_density = 0.1;
    switch (version) {
        case 1:
            c.leak_rate = 0.0002;
            c.spectral_radius = 0.9;
            c.warm_up = 50;
            c.ridge = 1e-7;
            break;
        case 2:
            c.leak_rate = 0.0002;
            c.spectral_radius = 1.2;
            c.warm_up = 45;
            c.ridge = 1e-11;
            break;
        case 3:
            c.leak_rate = 0.0001;
            c.spectral_radius = 1.4;
            c.warm_up = 275;
            c.ridge = 1e-11;
            break;
        default:
            throw ConfigError("unknown ESN preset version " + std::to_string(version));
    }
    return c;
}

Reservoir build_reservoir(const EsnConfig& cfg, std::size_t input_dim) {
    cfg.validate();
    if (input_dim < 1) throw ConfigError("reservoir input dimension must be >= 1");
    const std::size_t n = static_cast<std::size_t>(cfg.units);

    Reservoir r;
    r.config = cfg;

    constexpr int kMaxAttempts = 5;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        linalg::Matrix w(n, n);
        auto gen = rng::engine(rng::derive_seed(cfg.seed, "reservoir-w", attempt));
        for (std::size_t i = 0; i < n; ++i) {
            double* row = w.row(i);
            for (std::size_t j = 0; j < n; ++j) {
                if (rng::uniform01(gen) < cfg.recurrent_density) {
                    row[j] = rng::uniform(gen, -1.0, 1.0);
                }
            }
        }
        const auto est = linalg::spectral_radius(
            w, rng::derive_seed(cfg.seed, "reservoir-rho", attempt));
        if (est.value > 1e-12) {
            const double scale = cfg.spectral_radius / est.value;
            for (std::size_t i = 0; i < n * n; ++i) w.data()[i] *= scale;
            r.w = std::move(w);
            break;
        }
        if (attempt + 1 == kMaxAttempts) {
            throw NumericError(
                "reservoir draw degenerate (zero spectral radius) after 5 attempts");
        }
    }

    r.w_in = linalg::Matrix(n, input_dim);
    auto gen_in = rng::engine(rng::derive_seed(cfg.seed, "reservoir-w-in"));
    double* win = r.w_in.data();
    const std::size_t total = n * input_dim;
    for (std::size_t i = 0; i < total; ++i) {
        win[i] = rng::uniform(gen_in, -cfg.input_scaling, cfg.input_scaling);
    }
    r.state.assign(n, 0.0);
    return r;
}

void reservoir_forward(const Reservoir& r, std::span<const double> u,
                       const std::vector<double>& x_in, std::vector<double>& x_out,
                       std::vector<double>& scratch) {
    const std::size_t n = r.units();
    if (u.size() != r.input_dim()) {
        throw ConfigError("reservoir input length " + std::to_string(u.size()) +
                          " != expected " + std::to_string(r.input_dim()));
    }
    scratch.resize(2 * n);
    double* pre_rec = scratch.data();
    double* pre_in = scratch.data() + n;
    kernels::matvec(r.w.data(), n, n, x_in.data(), pre_rec);
    kernels::matvec(r.w_in.data(), n, r.input_dim(), u.data(), pre_in);
    x_out.resize(n);
    const double a = r.config.leak_rate;
    for (std::size_t i = 0; i < n; ++i) {
        x_out[i] = (1.0 - a) * x_in[i] + a * std::tanh(pre_rec[i] + pre_in[i]);
    }
}

const std::vector<double>& update(Reservoir& r, std::span<const double> u) {
    static thread_local std::vector<double> scratch;
    static thread_local std::vector<double> next;
    reservoir_forward(r, u, r.state, next, scratch);
    r.state.swap(next);
    return r.state;
}

StateMatrix collect_states(Reservoir& r, const RowsView& inputs, int warm_up) {
    if (inputs.rows <= static_cast<std::size_t>(warm_up)) {
        throw ConfigError("training sequence length " + std::to_string(inputs.rows) +
                          " must exceed warm_up " + std::to_string(warm_up));
    }
    const std::size_t n = r.units();
    StateMatrix sm;
    sm.n = n;
    sm.t = inputs.rows - warm_up;
    sm.states.resize(sm.t * n);

    std::fill(r.state.begin(), r.state.end(), 0.0);
    for (std::size_t t = 0; t < inputs.rows; ++t) {
        update(r, std::span<const double>(inputs.row(t), inputs.cols));
        if (t >= static_cast<std::size_t>(warm_up)) {
            std::memcpy(sm.states.data() + (t - warm_up) * n, r.state.data(),
                        n * sizeof(double));
        }
    }
    return sm;
}

namespace {

// Augment states with a trailing constant-1 column (bias fitting).
std::vector<double> augment_states(const StateMatrix& sm) {
    std::vector<double> aug(sm.t * (sm.n + 1));
    for (std::size_t t = 0; t < sm.t; ++t) {
        std::memcpy(aug.data() + t * (sm.n + 1), sm.state_row(t), sm.n * sizeof(double));
        aug[t * (sm.n + 1) + sm.n] = 1.0;
    }
    return aug;
}

}  // namespace

Readout fit_ridge(const StateMatrix& sm, double lambda, bool use_bias) {
    if (sm.t < 1) throw ConfigError("fit_ridge requires at least one state column");
    if (lambda < 0.0) throw ConfigError("ridge lambda must be >= 0");
    if (sm.targets.rows != sm.t) {
        throw ConfigError("state/target column count mismatch");
    }
    if (sm.targets.stride != sm.targets.cols) {
        throw ConfigError("fit_ridge requires densely packed target rows");
    }

    const std::size_t d_out = sm.targets.cols;
    const std::size_t na = sm.n + (use_bias ? 1 : 0);
    std::vector<double> aug;
    const double* s_data = sm.states.data();
    if (use_bias) {
        aug = augment_states(sm);
        s_data = aug.data();
    }

    // G = X X^T + lambda I (SPD), in the t-rows-as-columns layout G = S^T S
    linalg::Matrix g(na, na);
    kernels::gemm_atb(s_data, s_data, g.data(), sm.t, na, na);
    for (std::size_t i = 0; i < na; ++i) g.at(i, i) += lambda;
    linalg::cholesky_inplace(g);

    // W_out = (Y X^T) G^-1, computed as row-wise solves on Y^T S (d_out x na)
    linalg::Matrix rhs(d_out, na);
    kernels::gemm_atb(sm.targets.data, s_data, rhs.data(), sm.t, d_out, na);
    linalg::cholesky_solve_rows(g, rhs);

    Readout ro;
    ro.bias.assign(d_out, 0.0);
    if (use_bias) {
        ro.w_out = linalg::Matrix(d_out, sm.n);
        for (std::size_t m = 0; m < d_out; ++m) {
            std::memcpy(ro.w_out.row(m), rhs.row(m), sm.n * sizeof(double));
            ro.bias[m] = rhs.at(m, sm.n);
        }
    } else {
        ro.w_out = std::move(rhs);
    }
    return ro;
}

std::vector<double> predict_one(const Readout& ro, std::span<const double> state) {
    if (state.size() != ro.w_out.cols()) {
        throw ConfigError("readout state length mismatch");
    }
    std::vector<double> y(ro.output_dim());
    predict_into(ro, state.data(), y.data());
    return y;
}

void predict_into(const Readout& ro, const double* state, double* out) {
    kernels::matvec(ro.w_out.data(), ro.w_out.rows(), ro.w_out.cols(), state, out);
    for (std::size_t i = 0; i < ro.bias.size(); ++i) out[i] += ro.bias[i];
}

namespace {

struct FieldNorm {
    bool enabled = false;
    std::size_t cells = 0;
    std::array<double, 3> lo{};
    std::array<double, 3> hi{};

    double fwd(double x, int f) const {
        const double range = hi[f] - lo[f];
        if (range <= 0.0) return 0.0;
        return 2.0 * (x - lo[f]) / range - 1.0;
    }
    double bwd(double y, int f) const {
        const double range = hi[f] - lo[f];
        if (range <= 0.0) return lo[f];
        return lo[f] + (y + 1.0) * range / 2.0;
    }
    void fwd_row(const double* src, double* dst) const {
        for (int f = 0; f < 3; ++f) {
            for (std::size_t i = 0; i < cells; ++i) {
                dst[f * cells + i] = fwd(src[f * cells + i], f);
            }
        }
    }
    void bwd_row(const double* src, double* dst) const {
        for (int f = 0; f < 3; ++f) {
            for (std::size_t i = 0; i < cells; ++i) {
                dst[f * cells + i] = bwd(src[f * cells + i], f);
            }
        }
    }
};

FieldNorm norm_from_window(const Trajectory& traj, std::size_t row_count) {
    FieldNorm nm;
    nm.enabled = true;
    nm.cells = traj.dims.cells();
    for (int f = 0; f < 3; ++f) {
        nm.lo[f] = std::numeric_limits<double>::infinity();
        nm.hi[f] = -std::numeric_limits<double>::infinity();
    }
    for (std::size_t t = 0; t < row_count; ++t) {
        const double* row = traj.row(t);
        for (int f = 0; f < 3; ++f) {
            for (std::size_t i = 0; i < nm.cells; ++i) {
                const double x = row[f * nm.cells + i];
                nm.lo[f] = std::min(nm.lo[f], x);
                nm.hi[f] = std::max(nm.hi[f], x);
            }
        }
    }
    return nm;
}

}  // namespace

TrainedEsn train_surrogate(const Trajectory& traj, const EsnConfig& cfg) {
    cfg.validate();
    if (traj.count() < static_cast<std::size_t>(cfg.warm_up) + 2) {
        throw ConfigError("trajectory must contain at least warm_up + 2 recorded steps");
    }
    if (!traj.contiguous()) {
        throw ConfigError("training requires a trajectory recorded at every step");
    }
    const std::size_t dim = traj.state_dim();
    const std::size_t t_in = traj.count() - 1;  // inputs X^0 .. X^{T-1}

    TrainedEsn te;
    te.reservoir = build_reservoir(cfg, dim);

    FieldNorm nm;
    std::vector<double> norm_inputs;
    std::vector<double> norm_targets;
    RowsView inputs{traj.data.data(), t_in, dim, dim};
    if (cfg.normalize_input) {
        nm = norm_from_window(traj, traj.count());
        te.normalized = true;
        te.norm_min = nm.lo;
        te.norm_max = nm.hi;
        norm_inputs.resize(t_in * dim);
        for (std::size_t t = 0; t < t_in; ++t) {
            nm.fwd_row(traj.row(t), norm_inputs.data() + t * dim);
        }
        inputs = RowsView{norm_inputs.data(), t_in, dim, dim};
    }

    StateMatrix sm = collect_states(te.reservoir, inputs, cfg.warm_up);
    const std::size_t t_eff = sm.t;
    const std::size_t first_target = cfg.warm_up + 1;
    if (cfg.normalize_input) {
        norm_targets.resize(t_eff * dim);
        for (std::size_t t = 0; t < t_eff; ++t) {
            nm.fwd_row(traj.row(first_target + t), norm_targets.data() + t * dim);
        }
        sm.targets = RowsView{norm_targets.data(), t_eff, dim, dim};
    } else {
        sm.targets = RowsView{traj.row(first_target), t_eff, dim, dim};
    }

    te.readout = fit_ridge(sm, cfg.ridge, cfg.use_bias);

    // teacher-forced one-step error over the training window (raw space)
    std::vector<double> pred(dim);
    std::vector<double> denorm(dim);
    double sum_sq = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < t_eff; ++t) {
        predict_into(te.readout, sm.state_row(t), pred.data());
        const double* truth = traj.row(first_target + t);
        const double* p = pred.data();
        if (cfg.normalize_input) {
            nm.bwd_row(pred.data(), denorm.data());
            p = denorm.data();
        }
        for (std::size_t i = 0; i < dim; ++i) {
            const double r = p[i] - truth[i];
            sum_sq += r * r;
            lo = std::min(lo, truth[i]);
            hi = std::max(hi, truth[i]);
        }
    }
    const double rmse = std::sqrt(sum_sq / (static_cast<double>(t_eff) * dim));
    te.fit_nrmse = (hi > lo) ? rmse / (hi - lo) : rmse;
    return te;
}

Trajectory run_autoregressive(const TrainedEsn& esn, std::span<const double> seed_input,
                              long n_steps, long start_step, const GridDims& dims,
                              double dt) {
    if (n_steps < 0) throw ConfigError("rollout length must be >= 0");
    const std::size_t dim = esn.reservoir.input_dim();
    if (seed_input.size() != dim) {
        throw ConfigError("rollout seed input has wrong length");
    }

    Trajectory out;
    out.dims = dims;
    out.dt = dt;
    if (n_steps == 0) return out;
    out.steps.reserve(n_steps);
    out.data.resize(static_cast<std::size_t>(n_steps) * dim);

    FieldNorm nm;
    nm.enabled = esn.normalized;
    nm.cells = dims.cells();
    nm.lo = esn.norm_min;
    nm.hi = esn.norm_max;

    std::vector<double> u(dim);
    if (esn.normalized) {
        nm.fwd_row(seed_input.data(), u.data());
    } else {
        std::copy(seed_input.begin(), seed_input.end(), u.begin());
    }

    std::vector<double> x = esn.reservoir.state;  // continue the training run
    std::vector<double> x_next;
    std::vector<double> scratch;
    std::vector<double> y(dim);
    for (long k = 0; k < n_steps; ++k) {
        reservoir_forward(esn.reservoir, u, x, x_next, scratch);
        x.swap(x_next);
        predict_into(esn.readout, x.data(), y.data());
        double* row = out.data.data() + static_cast<std::size_t>(k) * dim;
        if (esn.normalized) {
            nm.bwd_row(y.data(), row);
        } else {
            std::memcpy(row, y.data(), dim * sizeof(double));
        }
        for (std::size_t i = 0; i < dim; ++i) {
            if (!std::isfinite(row[i])) {
                throw NumericError("rollout diverged at step " +
                                   std::to_string(start_step + k + 1));
            }
        }
        u.swap(y);  // feedback uses the readout output directly (normalized space when enabled)
        out.steps.push_back(start_step + k + 1);
    }
    return out;
}

}  // namespace rdesn
