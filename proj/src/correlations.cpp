#include "spdc/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spdc/quadrature.hpp"

namespace spdc {

void CorrelationMatrix::max_normalize() {
    if (values.empty()) return;
    const double peak = *std::max_element(values.begin(), values.end());
    if (peak > 0.0) {
        for (double& cell : values) cell /= peak;
    }
    normalization = Norm::MaxNormalized;
}

CorrelationMatrix p_correlation_matrix(const PumpSpec& pump, int ell_s,
                                       const IndexRange& p_range, double waist_ratio,
                                       Exec exec) {
    if (p_range.size() <= 0)
        throw std::domain_error("p_correlation_matrix: empty index range");
    if (!(waist_ratio > 0.0))
        throw std::domain_error("p_correlation_matrix: waist ratio must be positive");

    const int ell_i = pump.mode.index.ell - ell_s;
    const double w = waist_ratio * pump.mode.waist;

    CorrelationMatrix matrix;
    for (int p = p_range.lo; p <= p_range.hi; ++p) {
        matrix.axis_s.push_back(p);
        matrix.axis_i.push_back(p);
    }
    const int n = p_range.size();
    matrix.values.assign(std::size_t(n) * n, 0.0);

    parallel_for(std::size_t(n) * n, exec, [&](long cell) {
        const int s = static_cast<int>(cell) / n;
        const int i = static_cast<int>(cell) % n;
        const ModeSpec signal{{p_range.lo + s, ell_s}, w};
        const ModeSpec idler{{p_range.lo + i, ell_i}, w};
        const std::complex<double> c = overlap_closed_form(pump, signal, idler);
        matrix.values[cell] = std::norm(c);
    });

    matrix.max_normalize();
    return matrix;
}

CorrelationMatrix oam_correlation_matrix_hygg(const PumpSpec& pump,
                                              const IndexRange& ell_range,
                                              double hygg_waist, Exec exec,
                                              double tol) {
    if (ell_range.size() <= 0)
        throw std::domain_error("oam_correlation_matrix_hygg: empty index range");
    if (!(hygg_waist > 0.0))
        throw std::domain_error("oam_correlation_matrix_hygg: waist must be positive");

    CorrelationMatrix matrix;
    for (int l = ell_range.lo; l <= ell_range.hi; ++l) {
        matrix.axis_s.push_back(l);
        matrix.axis_i.push_back(l);
    }
    const int n = ell_range.size();
    matrix.values.assign(std::size_t(n) * n, 0.0);

    // the ell = 0 crystal-plane profile is (1/2) exp(-(rho_adim/2)^2) with
    // rho_adim = scale * r, so scale = 2 / hygg_waist gives it radius hygg_waist
    const double scale = 2.0 / hygg_waist;
    const double w_p = pump.mode.waist;
    const int pump_degree =
        std::abs(pump.mode.index.ell) / 2 + pump.mode.index.p;
    const double r_max = w_p * std::sqrt(45.0 + 3.0 * pump_degree);

    parallel_for(std::size_t(n) * n, exec, [&](long cell) {
        const int s = static_cast<int>(cell) / n;
        const int i = static_cast<int>(cell) % n;
        const int ell_s = ell_range.lo + s;
        const int ell_i = ell_range.lo + i;
        if (!oam_conserved(pump.mode.index.ell, ell_s, ell_i)) return;

        const auto integrand = [&](double r) {
            return lg_radial(pump.mode, r) * hygg_fourier(ell_i, scale * r).real() *
                   hygg_fourier(ell_s, scale * r).real() * r;
        };
        QuadratureOptions opts;
        opts.abs_tol = tol;
        const double radial = integrate(integrand, 0.0, r_max, opts);
        const double amplitude = 2.0 * std::numbers::pi * radial;
        matrix.values[cell] = amplitude * amplitude;
    });

    matrix.max_normalize();
    return matrix;
}

double off_diagonal_mass(const CorrelationMatrix& matrix) {
    double total = 0.0, diagonal = 0.0;
    for (int s = 0; s < matrix.rows(); ++s) {
        for (int i = 0; i < matrix.cols(); ++i) {
            total += matrix.at(s, i);
            if (matrix.axis_s[s] == matrix.axis_i[i]) diagonal += matrix.at(s, i);
        }
    }
    if (total <= 0.0) return 0.0;
    return (total - diagonal) / total;
}

} // namespace spdc
