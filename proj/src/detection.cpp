#include "spdc/detection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spdc/errors.hpp"
#include "spdc/rng.hpp"

namespace spdc {

std::vector<double> CrosstalkMatrix::efficiencies() const {
    std::vector<double> diag(modes.size());
    double peak = 0.0;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        diag[i] = values.at(static_cast<int>(i), static_cast<int>(i));
        peak = std::max(peak, diag[i]);
    }
    if (peak > 0.0)
        for (double& d : diag) d /= peak;
    return diag;
}

double single_rate(const Field2D& input, const Field2D& projector,
                   const FiberSpec& fiber) {
    if (!input.same_grid(projector))
        throw GridMismatch("single_rate: fields on different grids");
    if (!(fiber.sigma > 0.0))
        throw std::domain_error("single_rate: fiber sigma must be positive");

    const GridSpec& grid = input.grid;
    const double envelope_coeff = fiber.sigma * fiber.sigma / 4.0;
    std::complex<double> inner = 0.0;
    double norm_x = 0.0, norm_p = 0.0;
    for (int iy = 0; iy < grid.n; ++iy) {
        const double y = grid.coord(iy);
        for (int ix = 0; ix < grid.n; ++ix) {
            const double x = grid.coord(ix);
            const std::complex<double> xv = input.at(ix, iy);
            const std::complex<double> pv = projector.at(ix, iy);
            inner += xv * std::conj(pv) * std::exp(-envelope_coeff * (x * x + y * y));
            norm_x += std::norm(xv);
            norm_p += std::norm(pv);
        }
    }
    if (norm_x <= 0.0 || norm_p <= 0.0) return 0.0;
    return std::norm(inner) / (norm_x * norm_p);
}

double coincidence_rate(std::span<const BiphotonAmplitude> coefficients,
                        const ProjectorState& idler_projector,
                        const ProjectorState& signal_projector) {
    const auto component = [](const ProjectorState& proj, const ModeIndex& index) {
        std::complex<double> amp = 0.0;
        double norm = 0.0;
        for (const auto& [mode, coeff] : proj.terms) {
            norm += std::norm(coeff);
            if (mode.p == index.p && mode.ell == index.ell) amp += coeff;
        }
        return norm > 0.0 ? amp / std::sqrt(norm) : std::complex<double>(0.0);
    };

    std::complex<double> sum = 0.0;
    for (const BiphotonAmplitude& c : coefficients) {
        const std::complex<double> bra_i =
            std::conj(component(idler_projector, c.idler.index));
        const std::complex<double> bra_s =
            std::conj(component(signal_projector, c.signal.index));
        sum += c.value * bra_i * bra_s;
    }
    return std::norm(sum);
}

CrosstalkMatrix build_crosstalk_matrix(const std::vector<ModeSpec>& modes,
                                       const FiberSpec& fiber, const GridSpec& grid,
                                       Exec exec) {
    CrosstalkMatrix matrix;
    const int n = static_cast<int>(modes.size());
    matrix.values = CountMatrix(n, n);
    matrix.modes.reserve(modes.size());
    for (const ModeSpec& m : modes) matrix.modes.push_back(m.index);

    std::vector<Field2D> fields;
    fields.reserve(modes.size());
    for (const ModeSpec& m : modes) fields.push_back(sample_mode(m, grid));

    parallel_for(std::size_t(n) * n, exec, [&](long cell) {
        const int i = static_cast<int>(cell) / n;
        const int j = static_cast<int>(cell) % n;
        matrix.values.at(i, j) = single_rate(fields[i], fields[j], fiber);
    });
    return matrix;
}

CountMatrix efficiency_correct(const CountMatrix& raw, const std::vector<double>& eta_s,
                               const std::vector<double>& eta_i, bool renormalize) {
    if (static_cast<int>(eta_s.size()) != raw.rows ||
        static_cast<int>(eta_i.size()) != raw.cols)
        throw std::domain_error("efficiency_correct: efficiency vector size mismatch");
    for (const double eta : eta_s)
        if (!(eta > 0.0)) throw std::domain_error("efficiency_correct: eta <= 0");
    for (const double eta : eta_i)
        if (!(eta > 0.0)) throw std::domain_error("efficiency_correct: eta <= 0");

    CountMatrix corrected(raw.rows, raw.cols);
    double raw_total = 0.0, corrected_total = 0.0;
    for (int i = 0; i < raw.rows; ++i) {
        for (int j = 0; j < raw.cols; ++j) {
            corrected.at(i, j) = raw.at(i, j) / (eta_s[i] * eta_i[j]);
            raw_total += raw.at(i, j);
            corrected_total += corrected.at(i, j);
        }
    }
    if (renormalize && corrected_total > 0.0) {
        const double factor = raw_total / corrected_total;
        for (double& cell : corrected.v) cell *= factor;
    }
    return corrected;
}

CountMatrix sample_counts(const CountMatrix& rates, double scale, double dark_mean,
                          std::uint64_t seed, Exec exec) {
    if (scale < 0.0 || dark_mean < 0.0)
        throw std::domain_error("sample_counts: scale and dark mean must be >= 0");
    CountMatrix counts(rates.rows, rates.cols);
    parallel_for(static_cast<long>(rates.v.size()), exec, [&](long cell) {
        const int i = static_cast<int>(cell) / rates.cols;
        const int j = static_cast<int>(cell) % rates.cols;
        SplitMix64 rng = cell_rng(seed, i, j);
        counts.v[cell] =
            static_cast<double>(poisson(rng, rates.v[cell] * scale + dark_mean));
    });
    return counts;
}

} // namespace spdc
