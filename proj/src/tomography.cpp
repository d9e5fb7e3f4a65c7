#include "spdc/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "spdc/errors.hpp"
#include "spdc/rng.hpp"

namespace spdc::tomo {

namespace {

using Matrix2 = Eigen::Matrix2cd;
using VectorS = Eigen::VectorXd;
using MatrixA = Eigen::MatrixXd;

const std::array<Matrix2, 4>& pauli_2x2() {
    static const std::array<Matrix2, 4> sigma = [] {
        std::array<Matrix2, 4> s;
        const std::complex<double> i(0.0, 1.0);
        s[0] << 1, 0, 0, 1;
        s[1] << 0, 1, 1, 0;
        s[2] << 0, -i, i, 0;
        s[3] << 1, 0, 0, -1;
        return s;
    }();
    return sigma;
}

Eigen::Matrix4cd kron2(const Matrix2& a, const Matrix2& b) {
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

Matrix16 kron4x4(const Eigen::Matrix4cd& a, const Eigen::Matrix4cd& b) {
    Matrix16 out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            out.block<4, 4>(4 * i, 4 * j) = a(i, j) * b;
    return out;
}

/// PSD square root via eigendecomposition, eigenvalues below tolerance
/// treated as zero.
Matrix16 psd_sqrt(const Matrix16& m) {
    Eigen::SelfAdjointEigenSolver<Matrix16> solver(m);
    Eigen::Matrix<double, kDim, 1> roots = solver.eigenvalues();
    for (int i = 0; i < kDim; ++i) roots[i] = std::sqrt(std::max(roots[i], 0.0));
    return solver.eigenvectors() * roots.asDiagonal() *
           solver.eigenvectors().adjoint();
}

DensityMatrix psd_repair(const Matrix16& m) {
    const Matrix16 herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix16> solver(herm);
    Eigen::Matrix<double, kDim, 1> vals = solver.eigenvalues();
    double trace = 0.0;
    for (int i = 0; i < kDim; ++i) {
        vals[i] = std::max(vals[i], 0.0);
        trace += vals[i];
    }
    if (trace <= 0.0)
        throw ConvergenceFailure("reconstruct: repaired state has zero trace");
    vals /= trace;
    DensityMatrix rho;
    rho.m = solver.eigenvectors() * vals.asDiagonal() * solver.eigenvectors().adjoint();
    return rho;
}

/// Measurement design matrix A[r][a] = <proj_r| P_a |proj_r>.
MatrixA design_matrix(std::span<const ProjectorPair> set, Exec exec) {
    const auto& paulis = pauli_basis();
    MatrixA design(static_cast<long>(set.size()), kNumPauli);
    parallel_for(static_cast<long>(set.size()), exec, [&](long r) {
        const Vector16 joint = set[r].joint();
        for (int a = 0; a < kNumPauli; ++a)
            design(r, a) = (joint.adjoint() * paulis[a] * joint).value().real();
    });
    return design;
}

} // namespace

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix16> solver(m);
    return solver.eigenvalues().minCoeff();
}

Vector16 ProjectorPair::joint() const {
    Vector16 out;
    for (int s = 0; s < kSingleDim; ++s)
        for (int i = 0; i < kSingleDim; ++i) out[kSingleDim * s + i] = zeta[s] * psi[i];
    return out;
}

std::vector<std::pair<std::string, Vector4>> single_photon_states() {
    std::vector<std::pair<std::string, Vector4>> states;
    for (int p = 0; p < kSingleDim; ++p) {
        Vector4 v = Vector4::Zero();
        v[p] = 1.0;
        states.emplace_back("p" + std::to_string(p), v);
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int p1 = 0; p1 < kSingleDim; ++p1) {
        for (int p2 = p1 + 1; p2 < kSingleDim; ++p2) {
            for (const bool imag : {false, true}) {
                Vector4 v = Vector4::Zero();
                v[p1] = inv_sqrt2;
                v[p2] = imag ? std::complex<double>(0.0, inv_sqrt2) : inv_sqrt2;
                states.emplace_back("p" + std::to_string(p1) + "+" +
                                        (imag ? "i" : "") + "p" + std::to_string(p2),
                                    v);
            }
        }
    }
    return states;
}

Vector4 parse_state_label(const std::string& label) {
    static const auto states = single_photon_states();
    for (const auto& [name, v] : states)
        if (name == label) return v;
    throw std::invalid_argument("unknown projector state label: " + label);
}

std::vector<ProjectorPair> build_measurement_set() {
    const auto states = single_photon_states();
    std::vector<ProjectorPair> set;
    set.reserve(kNumProjectors);
    for (const auto& [psi_label, psi] : states)
        for (const auto& [zeta_label, zeta] : states)
            set.push_back({psi, zeta, psi_label, zeta_label});
    return set;
}

const std::array<Matrix16, kNumPauli>& pauli_basis() {
    static const std::array<Matrix16, kNumPauli> basis = [] {
        std::array<Matrix16, kNumPauli> out;
        const auto& sigma = pauli_2x2();
        int idx = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                for (int k = 0; k < 4; ++k)
                    for (int l = 0; l < 4; ++l)
                        out[idx++] =
                            kron4x4(kron2(sigma[i], sigma[j]), kron2(sigma[k], sigma[l]));
        return out;
    }();
    return basis;
}

std::array<double, kNumPauli> pauli_expand(const Matrix16& rho) {
    const auto& basis = pauli_basis();
    std::array<double, kNumPauli> coeff{};
    for (int a = 0; a < kNumPauli; ++a)
        coeff[a] = (rho * basis[a]).trace().real() / static_cast<double>(kDim);
    return coeff;
}

Matrix16 pauli_resum(const std::array<double, kNumPauli>& coefficients) {
    const auto& basis = pauli_basis();
    Matrix16 rho = Matrix16::Zero();
    for (int a = 0; a < kNumPauli; ++a) rho += coefficients[a] * basis[a];
    return rho;
}

std::vector<double> predict_probabilities(const DensityMatrix& rho,
                                          std::span<const ProjectorPair> projectors,
                                          Exec exec) {
    std::vector<double> probs(projectors.size(), 0.0);
    parallel_for(static_cast<long>(projectors.size()), exec, [&](long r) {
        const Vector16 joint = projectors[r].joint();
        double value = (joint.adjoint() * rho.m * joint).value().real();
        if (value < 0.0 && value > -1e-14) value = 0.0;
        probs[r] = value;
    });
    return probs;
}

ReconstructionResult reconstruct(const std::vector<MeasurementRecord>& records,
                                 const ReconstructionOptions& options) {
    const auto canonical = build_measurement_set();
    if (records.size() != canonical.size())
        throw IncompleteData("reconstruct: expected " +
                             std::to_string(canonical.size()) + " records, got " +
                             std::to_string(records.size()));

    // match records to the canonical set by label
    std::map<std::pair<std::string, std::string>, double> by_label;
    for (const auto& record : records) {
        const auto key = std::make_pair(record.projector.psi_label,
                                        record.projector.zeta_label);
        if (!by_label.emplace(key, record.count).second)
            throw IncompleteData("reconstruct: duplicate record " + key.first + "," +
                                 key.second);
    }
    Eigen::VectorXd n(kNumProjectors);
    double basis_sum = 0.0;
    for (int r = 0; r < kNumProjectors; ++r) {
        const auto key =
            std::make_pair(canonical[r].psi_label, canonical[r].zeta_label);
        const auto it = by_label.find(key);
        if (it == by_label.end())
            throw IncompleteData("reconstruct: missing record " + key.first + "," +
                                 key.second);
        n[r] = it->second;
        if (canonical[r].psi_label.size() == 2 && canonical[r].zeta_label.size() == 2)
            basis_sum += it->second; // "pN" labels are the basis projectors
    }
    if (options.renormalize_counts) {
        if (basis_sum <= 0.0)
            throw IncompleteData("reconstruct: basis-product counts sum to zero");
        n /= basis_sum;
    }

    const MatrixA design = design_matrix(canonical, Exec::Parallel);
    const Eigen::MatrixXd af = design.rightCols(kNumPauli - 1);
    const Eigen::VectorXd rhs = n - design.col(0) / static_cast<double>(kDim);

    const Eigen::MatrixXd normal = af.transpose() * af;
    const VectorS linear = normal.ldlt().solve(af.transpose() * rhs);
    const double linear_residual = (rhs - af * linear).squaredNorm();

    VectorS solution = linear;
    double residual = linear_residual;
    double mu_used = 0.0;
    int iterations = 0;

    if (options.purity_constrained) {
        // purity penalty g(x) = 16 |S|^2 - 1 with S_0 = 1/16 fixed:
        // g = 16 x.x - 15/16; f = |rhs - Af x|^2 + mu g^2
        const auto penalty_g = [](const VectorS& x) {
            return 16.0 * x.squaredNorm() - 15.0 / 16.0;
        };
        // the complete 256-record set makes the unconstrained system square
        // (residual ~ 0), so residual stability is judged across the sweep:
        // keep the largest mu whose data residual stays within a factor 2 of
        // the smallest swept mu's residual
        VectorS best = linear;
        double best_residual = linear_residual;
        double best_mu = 0.0;
        double accept_threshold = -1.0;

        VectorS x = linear;
        for (const double mu : options.mu_sweep) {
            const Eigen::MatrixXd identity =
                Eigen::MatrixXd::Identity(kNumPauli - 1, kNumPauli - 1);
            for (int iter = 0; iter < options.max_iterations; ++iter) {
                ++iterations;
                const Eigen::VectorXd r = rhs - af * x;
                const double g = penalty_g(x);
                const VectorS grad = -2.0 * af.transpose() * r + 64.0 * mu * g * x;
                if (grad.norm() <= options.gradient_tol * std::max(1.0, r.norm()))
                    break;
                Eigen::MatrixXd hessian = 2.0 * normal + (64.0 * mu * g) * identity;
                hessian.noalias() += (2048.0 * mu) * x * x.transpose();

                double damping = 0.0;
                VectorS step;
                for (;;) {
                    const auto ldlt = (hessian + damping * identity).ldlt();
                    step = ldlt.solve(-grad);
                    if (ldlt.info() == Eigen::Success && grad.dot(step) < 0.0) break;
                    damping = damping == 0.0 ? 1e-6 : damping * 100.0;
                    if (damping > 1e12)
                        throw ConvergenceFailure(
                            "reconstruct: purity Newton step not a descent direction");
                }

                const double f0 = r.squaredNorm() + mu * g * g;
                const double slope = grad.dot(step);
                if (-slope <= 1e-15 * std::max(1.0, f0)) break; // flat to rounding
                double alpha = 1.0;
                bool stalled = false;
                VectorS candidate;
                for (;;) {
                    candidate = x + alpha * step;
                    const double rc =
                        (rhs - af * candidate).squaredNorm();
                    const double gc = penalty_g(candidate);
                    if (rc + mu * gc * gc <= f0 + 1e-4 * alpha * slope) break;
                    alpha *= 0.5;
                    if (alpha < 1e-12) {
                        stalled = true; // no representable improvement left
                        break;
                    }
                }
                if (stalled) break;
                x = candidate;
            }
            const double data_residual = (rhs - af * x).squaredNorm();
            if (accept_threshold < 0.0) accept_threshold = 2.0 * data_residual + 1e-12;
            if (data_residual <= accept_threshold) {
                best = x;
                best_residual = data_residual;
                best_mu = mu;
            }
        }
        solution = best;
        residual = best_residual;
        mu_used = best_mu;
    }

    std::array<double, kNumPauli> coefficients{};
    coefficients[0] = 1.0 / static_cast<double>(kDim);
    for (int a = 1; a < kNumPauli; ++a) coefficients[a] = solution[a - 1];

    ReconstructionResult result;
    result.rho = psd_repair(pauli_resum(coefficients));
    result.residual = residual;
    result.mu = mu_used;
    result.iterations = iterations;
    return result;
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.min_eigenvalue() < -1e-8 || b.min_eigenvalue() < -1e-8)
        throw std::domain_error("fidelity: input is not PSD within tolerance");
    const Matrix16 root = psd_sqrt(a.m);
    const Matrix16 inner = root * b.m * root;
    Eigen::SelfAdjointEigenSolver<Matrix16> solver(0.5 * (inner + inner.adjoint()));
    double sum = 0.0;
    for (int i = 0; i < kDim; ++i)
        sum += std::sqrt(std::max(solver.eigenvalues()[i], 0.0));
    return std::clamp(sum * sum, 0.0, 1.0);
}

DensityMatrix theory_state(const PumpSpec& pump, int ell_i, double waist_ratio) {
    const int ell_s = pump.mode.index.ell - ell_i;
    const double w = waist_ratio * pump.mode.waist;
    Vector16 amplitudes;
    for (int ps = 0; ps < kSingleDim; ++ps) {
        for (int pi = 0; pi < kSingleDim; ++pi) {
            const ModeSpec signal{{ps, ell_s}, w};
            const ModeSpec idler{{pi, ell_i}, w};
            amplitudes[kSingleDim * ps + pi] = overlap_closed_form(pump, signal, idler);
        }
    }
    const double norm = amplitudes.norm();
    if (norm <= 0.0)
        throw std::domain_error("theory_state: all amplitudes vanish in this subspace");
    amplitudes /= norm;
    DensityMatrix rho;
    rho.m = amplitudes * amplitudes.adjoint();
    return rho;
}

std::vector<MeasurementRecord> simulate_records(const DensityMatrix& rho,
                                                std::span<const ProjectorPair> set,
                                                double mean_counts, std::uint64_t seed,
                                                double dark_mean) {
    const std::vector<double> probs = predict_probabilities(rho, set);
    std::vector<MeasurementRecord> records(set.size());

    if (mean_counts <= 0.0) {
        for (std::size_t r = 0; r < set.size(); ++r)
            records[r] = {set[r], probs[r]};
        return records;
    }

    double prob_sum = 0.0;
    for (const double p : probs) prob_sum += p;
    if (prob_sum <= 0.0)
        throw std::domain_error("simulate_records: probabilities sum to zero");
    const double scale = mean_counts * static_cast<double>(set.size()) / prob_sum;

    double basis_sum = 0.0;
    std::vector<double> counts(set.size());
    for (std::size_t r = 0; r < set.size(); ++r) {
        SplitMix64 rng = cell_rng(seed, r, 0);
        counts[r] = static_cast<double>(poisson(rng, probs[r] * scale + dark_mean));
        if (set[r].psi_label.size() == 2 && set[r].zeta_label.size() == 2)
            basis_sum += counts[r];
    }
    if (basis_sum <= 0.0) basis_sum = scale; // degenerate draw; keep rates finite
    for (std::size_t r = 0; r < set.size(); ++r)
        records[r] = {set[r], counts[r] / basis_sum};
    return records;
}

} // namespace spdc::tomo
