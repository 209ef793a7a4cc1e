#include "rdesn/grid.hpp"

#include <cmath>
#include <string>

#include "rdesn/errors.hpp"
#include "rdesn/kernels.hpp"

namespace rdesn {

GridDims::GridDims(int nx_, int ny_, int nz_, double d_)
    : nx(nx_), ny(ny_), nz(nz_), d(d_) {
    if (nx < 3 || ny < 3 || nz < 3) {
        throw ConfigError("grid dims must be at least 3 per axis (7-point stencil)");
    }
    if (!(d > 0.0)) throw ConfigError("grid spacing d must be positive");
}

Field3::Field3(GridDims dims, double fill)
    : dims_(dims), values_(dims.cells(), fill) {}

Field3::Field3(GridDims dims, std::vector<double> values)
    : dims_(dims), values_(std::move(values)) {
    if (values_.size() != dims_.cells()) {
        throw ConfigError("field length " + std::to_string(values_.size()) +
                          " does not match dims (" + std::to_string(dims_.cells()) +
                          " cells)");
    }
}

bool Field3::all_finite() const {
    for (double v : values_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

Field3 laplacian(const Field3& f) {
    if (!f.all_finite()) {
        throw NumericError("laplacian input contains non-finite values");
    }
    const GridDims& d = f.dims();
    Field3 out(d);
    const double inv_d2 = 1.0 / (d.d * d.d);
    kernels::laplacian7(f.data(), out.data(), d.nx, d.ny, d.nz, inv_d2);
    return out;
}

linalg::Matrix slice_z(const Field3& f, int z) {
    const GridDims& d = f.dims();
    if (z < 0 || z >= d.nz) {
        throw ConfigError("slice_z index " + std::to_string(z) + " out of range [0, " +
                          std::to_string(d.nz) + ")");
    }
    linalg::Matrix plane(d.nx, d.ny);
    for (int x = 0; x < d.nx; ++x) {
        for (int y = 0; y < d.ny; ++y) plane.at(x, y) = f.at(x, y, z);
    }
    return plane;
}

}  // namespace rdesn
