#include "spdc/holograms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spdc/errors.hpp"

namespace spdc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

/// sinc value table at 4097 equispaced abscissae on [-pi, 0]; inverted by
/// binary search for the bracketing cell, then bisection inside it.
struct SincInvTable {
    static constexpr int kSize = 4097;
    std::array<double, kSize> value;

    SincInvTable() {
        for (int i = 0; i < kSize; ++i) value[i] = sinc(x_at(i));
    }

    static double x_at(int i) { return -kPi + kPi * i / (kSize - 1); }

    double invert(double a) const {
        // values increase monotonically from 0 at x=-pi to 1 at x=0
        auto it = std::lower_bound(value.begin(), value.end(), a);
        int hi = static_cast<int>(it - value.begin());
        hi = std::clamp(hi, 1, kSize - 1);
        double lo_x = x_at(hi - 1), hi_x = x_at(hi);
        for (int iter = 0; iter < 60; ++iter) {
            const double mid = 0.5 * (lo_x + hi_x);
            if (hi_x - lo_x < 1e-12 * (1.0 + std::abs(mid))) break;
            if (sinc(mid) < a)
                lo_x = mid;
            else
                hi_x = mid;
        }
        return 0.5 * (lo_x + hi_x);
    }
};

double mod_two_pi(double x) {
    double m = std::fmod(x, kTwoPi);
    if (m < 0.0) m += kTwoPi;
    if (m >= kTwoPi) m = 0.0; // rounding of tiny negative inputs
    return m;
}

} // namespace

double sinc_inv(double a) {
    if (a < 0.0 || a > 1.0)
        throw std::domain_error("sinc_inv: argument must lie in [0, 1]");
    if (a >= 1.0) return 0.0;
    if (a <= 0.0) return -kPi;
    static const SincInvTable table;
    return table.invert(a);
}

TargetField target_from_field(const Field2D& field) {
    TargetField target;
    target.grid = field.grid;
    const std::size_t size = field.v.size();
    target.amplitude.resize(size);
    target.phase.resize(size);
    double peak = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
        target.amplitude[i] = std::abs(field.v[i]);
        target.phase[i] = std::arg(field.v[i]);
        peak = std::max(peak, target.amplitude[i]);
    }
    if (peak > 0.0)
        for (double& a : target.amplitude) a /= peak;
    return target;
}

TargetField target_from_mode(const ModeSpec& mode, const GridSpec& grid,
                             bool conjugate) {
    Field2D field = sample_mode(mode, grid);
    if (conjugate)
        for (auto& z : field.v) z = std::conj(z);
    return target_from_field(field);
}

PhaseMask synthesize_mask(const TargetField& target, double grating_period_px,
                          Exec exec) {
    if (grating_period_px < 2.0)
        throw ResolutionError("synthesize_mask: grating period must be >= 2 pixels");
    for (const double a : target.amplitude)
        if (a < 0.0 || a > 1.0)
            throw std::domain_error("synthesize_mask: amplitude outside [0, 1]");

    PhaseMask mask;
    mask.grid = target.grid;
    mask.grating_period = grating_period_px;
    mask.pixel_pitch = target.grid.pixel();
    mask.phase.assign(target.amplitude.size(), 0.0);

    const int n = target.grid.n;
    parallel_for(static_cast<long>(mask.phase.size()), exec, [&](long idx) {
        const int ix = static_cast<int>(idx) % n;
        const double x = ix - n / 2; // grating phase counted in pixels
        const double depth = 1.0 + sinc_inv(target.amplitude[idx]) / kPi;
        const double offset = target.phase[idx] - kPi * depth;
        mask.phase[idx] = depth * mod_two_pi(kTwoPi * x / grating_period_px + offset);
    });
    return mask;
}

PhaseMask projection_mask(const ModeSpec& mode, double grating_period_px,
                          const GridSpec& grid, Exec exec) {
    return synthesize_mask(target_from_mode(mode, grid, /*conjugate=*/true),
                           grating_period_px, exec);
}

Field2D first_order_field(const PhaseMask& mask, int window_halfwidth,
                          const Field2D* input) {
    if (mask.grating_period < 2.0)
        throw ResolutionError("first_order_field: grating period below 2 pixels");
    const int n = mask.grid.n;
    if (input && (input->grid.n != n || input->grid.extent != mask.grid.extent))
        throw GridMismatch("first_order_field: input grid differs from mask grid");

    Field2D field(mask.grid);
    for (std::size_t i = 0; i < field.v.size(); ++i) {
        const std::complex<double> illum = input ? input->v[i] : 1.0;
        field.v[i] = illum * std::polar(1.0, mask.phase[i]);
    }
    fft2(field, -1);

    // first order sits at kx = n / Lambda; orders 1 +- 8k alias onto the same
    // carrier at Lambda-pixel sampling, so the window is kept well inside the
    // order spacing to exclude their broadband residue
    const int carrier = static_cast<int>(std::lround(n / mask.grating_period));
    int half = window_halfwidth;
    if (half <= 0)
        half = std::max(static_cast<int>(std::lround(n / (8.0 * mask.grating_period))), 8);

    Field2D windowed(mask.grid);
    for (int dy = -half; dy <= half; ++dy) {
        const int src_y = (dy + n) % n;
        for (int dx = -half; dx <= half; ++dx) {
            const int src_x = (carrier + dx + n) % n;
            const int dst_x = (dx + n) % n;
            windowed.at(dst_x, src_y) = field.at(src_x, src_y);
        }
    }
    fft2(windowed, +1);
    const double scale = 1.0 / (static_cast<double>(n) * n);
    for (auto& z : windowed.v) z *= scale;
    return windowed;
}

TargetField simulate_first_order(const PhaseMask& mask, int window_halfwidth,
                                 const Field2D* input) {
    return target_from_field(first_order_field(mask, window_halfwidth, input));
}

double overlap_fidelity(const TargetField& a, const TargetField& b) {
    if (a.grid.n != b.grid.n || a.grid.extent != b.grid.extent)
        throw GridMismatch("overlap_fidelity: fields on different grids");
    std::complex<double> inner = 0.0;
    double norm_a = 0.0, norm_b = 0.0;
    for (std::size_t i = 0; i < a.amplitude.size(); ++i) {
        const std::complex<double> za = std::polar(a.amplitude[i], a.phase[i]);
        const std::complex<double> zb = std::polar(b.amplitude[i], b.phase[i]);
        inner += std::conj(za) * zb;
        norm_a += std::norm(za);
        norm_b += std::norm(zb);
    }
    if (norm_a <= 0.0 || norm_b <= 0.0) return 0.0;
    return std::norm(inner) / (norm_a * norm_b);
}

} // namespace spdc
