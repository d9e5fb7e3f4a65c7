#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "spdc/exec.hpp"
#include "spdc/grid.hpp"
#include "spdc/overlap.hpp"

namespace spdc {

/// Gaussian model of the collection fiber mode; sigma is its waist on the
/// Fourier (fiber-tip) plane in the grid's frequency units, so sigma -> 0 is
/// the ideal-projection limit.
struct FiberSpec {
    double sigma = 0.3;
};

/// Plain rectangular matrix of non-negative count/rate values.
struct CountMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> v;

    CountMatrix() = default;
    CountMatrix(int r, int c) : rows(r), cols(c), v(std::size_t(r) * c, 0.0) {}
    double& at(int i, int j) { return v[std::size_t(i) * cols + j]; }
    double at(int i, int j) const { return v[std::size_t(i) * cols + j]; }
};

/// Generate-i / project-j response matrix; its normalized diagonal gives the
/// mode-dependent detection efficiencies.
struct CrosstalkMatrix {
    std::vector<ModeIndex> modes;
    CountMatrix values;

    /// Diagonal scaled to max 1.
    std::vector<double> efficiencies() const;
};

/// Detected single-arm count rate for input field X projected on mode Pi via
/// a phase mask and fiber: R = |integral F(X Pi*)(u) exp(-u^2/sigma^2) d^2u|^2
/// (normalized by pi sigma^2 and the field norms, so the sigma -> 0 limit is
/// exactly |<Pi|X>|^2). The Gaussian-windowed Fourier overlap is evaluated
/// through its Parseval-equivalent form, the mask-plane overlap against the
/// envelope exp(-sigma^2 r^2 / 4); sampling the kernel on the discrete
/// frequency grid would be meaningless for sigma below one frequency bin.
double single_rate(const Field2D& input, const Field2D& projector,
                   const FiberSpec& fiber);

/// Projection state expressed in the LG basis (coefficients need not be
/// normalized; they are normalized internally).
struct ProjectorState {
    std::vector<std::pair<ModeIndex, std::complex<double>>> terms;

    static ProjectorState basis(const ModeIndex& index) { return {{{index, 1.0}}}; }
};

/// Coincidence rate C = |sum c <Pi_1|l_i,p_i> <Pi_2|l_s,p_s>|^2 for ideal
/// (coefficient-level) projections; equals |c|^2 when projecting on a basis
/// mode pair.
double coincidence_rate(std::span<const BiphotonAmplitude> coefficients,
                        const ProjectorState& idler_projector,
                        const ProjectorState& signal_projector);

/// Crosstalk matrix of single_rate over all ordered mode pairs, mimicking the
/// back-propagated-laser calibration (generate mode i, project mode j).
CrosstalkMatrix build_crosstalk_matrix(const std::vector<ModeSpec>& modes,
                                       const FiberSpec& fiber, const GridSpec& grid,
                                       Exec exec = Exec::Parallel);

/// corrected[i][j] = raw[i][j] / (eta_s[i] * eta_i[j]); optionally rescaled to
/// preserve the total mass of the raw matrix.
CountMatrix efficiency_correct(const CountMatrix& raw,
                               const std::vector<double>& eta_s,
                               const std::vector<double>& eta_i,
                               bool renormalize = false);

/// Synthetic Poisson counts for a rate matrix: counts ~ Poisson(rate * scale
/// + dark_mean), one independent RNG stream per cell derived from (seed,i,j).
CountMatrix sample_counts(const CountMatrix& rates, double scale, double dark_mean,
                          std::uint64_t seed, Exec exec = Exec::Parallel);

} // namespace spdc
