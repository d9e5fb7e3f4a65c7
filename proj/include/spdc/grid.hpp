#pragma once

#include <complex>
#include <vector>

#include "spdc/modes.hpp"

namespace spdc {

/// Square sampling grid: n x n pixels spanning [-extent/2, extent/2) in both
/// axes, sample (ix, iy) at x = (ix - n/2) * extent / n.
struct GridSpec {
    int n = 256;
    double extent = 8.0;

    double pixel() const { return extent / n; }
    double coord(int i) const { return (i - n / 2) * pixel(); }
};

/// Complex scalar field sampled on a GridSpec, row-major [iy * n + ix].
struct Field2D {
    GridSpec grid;
    std::vector<std::complex<double>> v;

    explicit Field2D(const GridSpec& g = {})
        : grid(g), v(static_cast<std::size_t>(g.n) * g.n) {}

    std::complex<double>& at(int ix, int iy) { return v[std::size_t(iy) * grid.n + ix]; }
    const std::complex<double>& at(int ix, int iy) const {
        return v[std::size_t(iy) * grid.n + ix];
    }

    bool same_grid(const Field2D& other) const {
        return grid.n == other.grid.n && grid.extent == other.grid.extent;
    }

    double norm_sq() const;
};

/// LG mode sampled at the waist plane.
Field2D sample_mode(const ModeSpec& mode, const GridSpec& grid);

/// In-place 2-D DFT; sign = -1 forward, +1 backward (unnormalized, FFTW
/// conventions). Plans are created with deterministic heuristics.
void fft2(Field2D& field, int sign);

} // namespace spdc
