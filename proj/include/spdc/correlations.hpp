#pragma once

#include <vector>

#include "spdc/exec.hpp"
#include "spdc/overlap.hpp"

namespace spdc {

/// Closed integer range [lo, hi].
struct IndexRange {
    int lo = 0;
    int hi = 3;

    int size() const { return hi - lo + 1; }
};

/// Grid of |c|^2 values over signal/idler index pairs. Row index runs over
/// the signal axis, column index over the idler axis.
struct CorrelationMatrix {
    enum class Norm { MaxNormalized, Raw };

    std::vector<int> axis_s;
    std::vector<int> axis_i;
    std::vector<double> values; // row-major [s][i]
    Norm normalization = Norm::Raw;

    int rows() const { return static_cast<int>(axis_s.size()); }
    int cols() const { return static_cast<int>(axis_i.size()); }
    double& at(int s, int i) { return values[std::size_t(s) * cols() + i]; }
    double at(int s, int i) const { return values[std::size_t(s) * cols() + i]; }

    /// Divide by the maximum entry; the maximum cell becomes exactly 1.
    void max_normalize();
};

/// Radial-index correlation matrix |c|^2 over (p_s, p_i) for a fixed signal
/// OAM ell_s (the idler OAM is pinned to ell_p - ell_s by conservation).
/// Signal and idler waists are waist_ratio times the pump waist. The matrix
/// is max-normalized. Cells are evaluated independently, so the result does
/// not depend on the execution policy.
CorrelationMatrix p_correlation_matrix(const PumpSpec& pump, int ell_s,
                                       const IndexRange& p_range,
                                       double waist_ratio = 0.2,
                                       Exec exec = Exec::Parallel);

/// OAM correlation matrix |c|^2 over (ell_s, ell_i) for projection on
/// unmasked (Hypergeometric-Gauss) modes: each projected profile is the
/// Fourier transform of e^{-r^2} e^{i ell theta} scaled so the ell = 0
/// profile has amplitude 1/e radius hygg_waist on the crystal plane. Only
/// the conservation line ell_s + ell_i = ell_p is populated; the radial
/// integral is evaluated by adaptive quadrature. Max-normalized.
CorrelationMatrix oam_correlation_matrix_hygg(const PumpSpec& pump,
                                              const IndexRange& ell_range,
                                              double hygg_waist,
                                              Exec exec = Exec::Parallel,
                                              double tol = 1e-12);

/// Fraction of the total matrix mass lying off the main diagonal.
double off_diagonal_mass(const CorrelationMatrix& matrix);

} // namespace spdc
