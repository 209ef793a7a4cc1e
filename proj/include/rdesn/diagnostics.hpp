#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rdesn/esn.hpp"
#include "rdesn/grid.hpp"
#include "rdesn/model.hpp"

namespace rdesn {

enum class FieldId : int { C = 0, V = 1, H = 2 };

const char* field_name(FieldId f);
FieldId field_from_name(const std::string& name);

/// A probed grid point for prediction-vs-truth comparison.
struct EvalPoint {
    int x = 0;
    int y = 0;
    int z = 0;
    FieldId field = FieldId::C;
};

/// The Table-4 style default probe sets on the z = 7 plane, expanded over
/// all three fields per point.
std::vector<EvalPoint> default_eval_points(int version);

struct NrmseResult {
    double value = 0.0;
    /// False when the truth series was constant and the plain RMSE was
    /// returned instead of the range-normalized form.
    bool normalized = true;
};

/// RMSE(pred, truth) / (max(truth) - min(truth)).
NrmseResult nrmse(std::span<const double> pred, std::span<const double> truth);

struct PointError {
    EvalPoint point;
    double nrmse = 0.0;
    bool normalized = true;
};

struct EvalReport {
    std::vector<PointError> entries;
    /// Pooled residual RMSE over all probed series divided by the pooled
    /// truth range.
    double total = 0.0;
    bool total_normalized = true;
    long step_begin = 0;
    long step_end = 0;
};

/// Per-point-per-field NRMSE between two aligned sequences of flattened
/// [C, V, H] states, plus the pooled total.
EvalReport evaluate_rollout(const RowsView& pred, const RowsView& truth,
                            const std::vector<EvalPoint>& points, const GridDims& dims);

/// Shannon entropy (bits) of the value histogram over n_bins equal-width
/// bins spanning [min, max]; a constant field has entropy 0.
double spatial_entropy(std::span<const double> values, int n_bins);
double spatial_entropy(const Field3& f, int n_bins = 64);

enum class PerturbField : int { All = -1, C = 0, V = 1, H = 2 };
enum class PerturbMode { GraveBasis, Random };

/// Largest finite-time Lyapunov exponent (per unit time) by the two-trajectory
/// Benettin method: co-integrate perturbed copies, renormalize every
/// renorm_every steps, accumulate window growth. Perturbations span the
/// spatially-uniform per-field directions (the gravest modes, which diffusion
/// cannot damp); the window propagator on that subspace is accumulated via QR
/// and its largest singular value reported. A system whose perturbations
/// carry no growth information at all (frozen dynamics) raises NumericError
/// rather than returning a fake finite exponent.
double lyapunov_estimate(const SystemState& s, const ModelParams& p, long horizon,
                         double eps, long renorm_every, std::uint64_t seed,
                         PerturbField perturb = PerturbField::All,
                         PerturbMode mode = PerturbMode::GraveBasis);

/// Conventional default perturbation size: 1e-8 times the flattened state norm.
double default_lyapunov_eps(const SystemState& s);

}  // namespace rdesn
