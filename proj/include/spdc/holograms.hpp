#pragma once

#include <vector>

#include "spdc/exec.hpp"
#include "spdc/grid.hpp"
#include "spdc/modes.hpp"

namespace spdc {

/// Amplitude (normalized to max 1) and phase of a beam to encode or compare.
struct TargetField {
    GridSpec grid;
    std::vector<double> amplitude;
    std::vector<double> phase;
};

/// Phase-only hologram: values in [0, 2 pi), blazed along x.
struct PhaseMask {
    GridSpec grid;
    std::vector<double> phase;
    double pixel_pitch = 1.0;
    double grating_period = 8.0; // in pixels
};

/// Inverse of sinc(x) = sin(x)/x on the branch x in [-pi, 0], where sinc maps
/// bijectively onto [0, 1]. Table-accelerated, refined to 1e-12.
double sinc_inv(double a);

/// Amplitude/phase pair of a sampled LG mode (amplitude scaled to max 1).
TargetField target_from_mode(const ModeSpec& mode, const GridSpec& grid,
                             bool conjugate = false);
TargetField target_from_field(const Field2D& field);

/// Intensity-masked blazed grating encoding the target exactly in its first
/// diffraction order:
///   g = M Mod(2 pi x / Lambda + F, 2 pi),  F = Psi - pi M,
/// with the modulation depth M fixed by sinc^-1 of the target amplitude so
/// that M(0) = 0 and M(1) = 1. Throws std::domain_error if any amplitude
/// falls outside [0, 1] and ResolutionError if the grating period is below
/// 2 pixels.
PhaseMask synthesize_mask(const TargetField& target, double grating_period_px,
                          Exec exec = Exec::Parallel);

/// Convenience wrapper: mask that projects on a mode (conjugate target).
PhaseMask projection_mask(const ModeSpec& mode, double grating_period_px,
                          const GridSpec& grid, Exec exec = Exec::Parallel);

/// Illuminate the mask (plane wave unless an input field is given), isolate
/// the first diffraction order in the Fourier plane with a centered square
/// window, recenter it and transform back. window_halfwidth is in frequency
/// bins; pass 0 to use the default max(n/(8 Lambda), 8).
Field2D first_order_field(const PhaseMask& mask, int window_halfwidth = 0,
                          const Field2D* input = nullptr);

/// first_order_field reduced to amplitude (max 1) and phase.
TargetField simulate_first_order(const PhaseMask& mask, int window_halfwidth = 0,
                                 const Field2D* input = nullptr);

/// Squared normalized overlap |<a|b>|^2 of two amplitude/phase fields.
double overlap_fidelity(const TargetField& a, const TargetField& b);

} // namespace spdc
