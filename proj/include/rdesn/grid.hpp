#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rdesn/linalg.hpp"

namespace rdesn {

/// Regular 3D grid extents with a single isotropic spacing d.
struct GridDims {
    int nx = 0;
    int ny = 0;
    int nz = 0;
    double d = 1.0;

    GridDims() = default;
    GridDims(int nx_, int ny_, int nz_, double d_);

    std::size_t cells() const {
        return static_cast<std::size_t>(nx) * ny * nz;
    }
    /// Canonical flat index, z fastest: (x*ny + y)*nz + z.
    std::size_t index(int x, int y, int z) const {
        return (static_cast<std::size_t>(x) * ny + y) * nz + z;
    }
    bool contains(int x, int y, int z) const {
        return x >= 0 && x < nx && y >= 0 && y < ny && z >= 0 && z < nz;
    }
    bool operator==(const GridDims&) const = default;
};

/// One scalar field on a regular 3D grid, stored flat in canonical order.
class Field3 {
public:
    Field3() = default;
    explicit Field3(GridDims dims, double fill = 0.0);
    Field3(GridDims dims, std::vector<double> values);

    const GridDims& dims() const { return dims_; }
    std::size_t size() const { return values_.size(); }
    double at(int x, int y, int z) const { return values_[dims_.index(x, y, z)]; }
    double& at(int x, int y, int z) { return values_[dims_.index(x, y, z)]; }
    const double* data() const { return values_.data(); }
    double* data() { return values_.data(); }
    std::span<const double> values() const { return values_; }
    std::vector<double>& mutable_values() { return values_; }

    bool all_finite() const;
    bool operator==(const Field3&) const = default;

private:
    GridDims dims_;
    std::vector<double> values_;
};

/// 7-point finite-difference Laplacian with zero-flux (Neumann) boundaries:
/// an out-of-domain neighbor mirrors the boundary cell itself. The result is
/// [sum of the six axis neighbors - 6*f]/d^2, evaluated in a fixed
/// neighbor-difference order so runs are bit-reproducible and a constant
/// field maps to exactly zero. Rejects non-finite input.
Field3 laplacian(const Field3& f);

/// Extract the z = const cross-section as an nx x ny matrix, out(x, y) = f(x, y, z).
linalg::Matrix slice_z(const Field3& f, int z);

}  // namespace rdesn
