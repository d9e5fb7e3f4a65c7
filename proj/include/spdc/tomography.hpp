#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spdc/exec.hpp"
#include "spdc/overlap.hpp"

namespace spdc::tomo {

inline constexpr int kDim = 16;         // two photons, radial indices 0..3
inline constexpr int kSingleDim = 4;
inline constexpr int kNumPauli = 256;   // sigma_i x sigma_j x sigma_k x sigma_l
inline constexpr int kNumProjectors = 256;

using Matrix16 = Eigen::Matrix<std::complex<double>, kDim, kDim>;
using Vector16 = Eigen::Matrix<std::complex<double>, kDim, 1>;
using Vector4 = Eigen::Matrix<std::complex<double>, kSingleDim, 1>;

/// 16x16 Hermitian, unit-trace, PSD (up to tolerance) two-photon operator on
/// the radial subspace; joint index is 4 * p_signal + p_idler.
struct DensityMatrix {
    Matrix16 m = Matrix16::Zero();

    double purity() const { return (m * m).trace().real(); }
    double trace_error() const { return std::abs(m.trace().real() - 1.0); }
    double hermiticity_error() const { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }
    double min_eigenvalue() const;
};

/// Product projector |zeta>_signal x |psi>_idler with printable labels
/// ("p2", "p0+p1", "p1+ip3").
struct ProjectorPair {
    Vector4 psi;   // idler
    Vector4 zeta;  // signal
    std::string psi_label;
    std::string zeta_label;

    Vector16 joint() const;
};

struct MeasurementRecord {
    ProjectorPair projector;
    double count = 0.0;
};

/// The 16 single-photon tomography states: 4 basis kets |p> plus the 12
/// superpositions (|p1> + e^{i alpha} |p2>)/sqrt(2), p1 < p2, alpha in
/// {0, pi/2}. Their projectors span the full 16-dimensional operator space.
std::vector<std::pair<std::string, Vector4>> single_photon_states();

/// State vector for a label ("p3", "p0+p2", "p0+ip2").
Vector4 parse_state_label(const std::string& label);

/// Full d^2 = 256 product-projector measurement set (idler-major order).
std::vector<ProjectorPair> build_measurement_set();

/// The 256 four-fold Pauli products, orthogonal under Tr(P_a P_b) = 16 d_ab.
const std::array<Matrix16, kNumPauli>& pauli_basis();

/// Coefficients S_a = Tr(rho P_a) / 16 of the Pauli expansion.
std::array<double, kNumPauli> pauli_expand(const Matrix16& rho);
Matrix16 pauli_resum(const std::array<double, kNumPauli>& coefficients);

/// Born-rule probabilities <psi zeta| rho |psi zeta>, tiny negative rounding
/// dust clipped to zero.
std::vector<double> predict_probabilities(const DensityMatrix& rho,
                                          std::span<const ProjectorPair> projectors,
                                          Exec exec = Exec::Parallel);

struct ReconstructionOptions {
    bool purity_constrained = false;
    std::vector<double> mu_sweep{10.0, 100.0, 1000.0};
    int max_iterations = 300;
    double gradient_tol = 1e-9;
    /// rescale counts so the 16 basis-product records sum to 1
    bool renormalize_counts = true;
};

struct ReconstructionResult {
    DensityMatrix rho;
    double residual = 0.0;  // sum_i (n_i - Pr_i)^2 at the optimum, before repair
    double mu = 0.0;        // penalty weight actually used (0 when unconstrained)
    int iterations = 0;
};

/// Least-squares fit of the 256 Pauli coefficients to the normalized count
/// rates, with S_0000 pinned by the unit trace. The unconstrained problem is
/// linear and solved directly; the optional purity penalty mu (Tr rho^2 - 1)^2
/// is minimized by damped Newton iterations warm-started from the linear
/// solution, sweeping mu and keeping the largest value whose data residual
/// stays within a factor 2 (plus rounding slack) of the unconstrained one.
/// The result is clipped to the PSD cone and trace-renormalized.
/// Throws IncompleteData unless every projector of build_measurement_set()
/// appears exactly once, and ConvergenceFailure if Newton stalls.
ReconstructionResult reconstruct(const std::vector<MeasurementRecord>& records,
                                 const ReconstructionOptions& options = {});

/// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2, clamped to [0, 1].
/// Throws std::domain_error if either input has an eigenvalue below -1e-8.
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

/// Pure biphoton state built from the overlap amplitudes of a pump, in the
/// OAM subspace with idler OAM ell_i (signal OAM pinned by conservation),
/// truncated to radial indices 0..3 and renormalized.
DensityMatrix theory_state(const PumpSpec& pump, int ell_i, double waist_ratio = 0.2);

/// Simulated measurement records for a state: expected probabilities scaled
/// so the mean projector count is mean_counts, Poisson-sampled per record
/// (stream derived from seed and the record index), plus dark counts, then
/// normalized by the summed basis-product counts. mean_counts <= 0 yields
/// noiseless records equal to the probabilities.
std::vector<MeasurementRecord> simulate_records(const DensityMatrix& rho,
                                                std::span<const ProjectorPair> set,
                                                double mean_counts,
                                                std::uint64_t seed,
                                                double dark_mean = 0.0);

} // namespace spdc::tomo
