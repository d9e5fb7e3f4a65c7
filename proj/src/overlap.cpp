#include "spdc/overlap.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "spdc/quadrature.hpp"

namespace spdc {

namespace {

constexpr double kPi = std::numbers::pi;

struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double term) {
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

void check_upper_parameter(int b) {
    if (b > 0)
        throw std::domain_error(
            "hypergeometric series: upper parameters must be non-positive integers");
}

/// Pochhammer, power and factorial tables for one summation index.
struct SeriesAxis {
    std::vector<double> poch_b;    // (b)_k
    std::vector<double> poch_c;    // (c)_k
    std::vector<double> x_pow;     // x^k
    std::vector<double> inv_fact;  // 1/k!

    SeriesAxis(int b, double c, double x) {
        const int kmax = -b;
        poch_b.resize(kmax + 1);
        poch_c.resize(kmax + 1);
        x_pow.resize(kmax + 1);
        inv_fact.resize(kmax + 1);
        for (int k = 0; k <= kmax; ++k) {
            poch_b[k] = pochhammer(b, k);
            poch_c[k] = pochhammer(c, k);
            x_pow[k] = std::pow(x, k);
            inv_fact[k] = 1.0 / std::tgamma(k + 1.0);
        }
    }

    double factor(int k) const { return poch_b[k] * x_pow[k] * inv_fact[k] / poch_c[k]; }
    int kmax() const { return static_cast<int>(poch_b.size()) - 1; }
};

/// ln of the normalization constant N of the radial-integral form,
///   N = 2 pi sqrt(2 p_p! p_i! p_s! / (pi^3 (p_p+|l_p|)! (p_i+|l_i|)! (p_s+|l_s|)!))
///       * 2^{l_T} / (w_p^{|l_p|+1} w_i^{|l_i|+1} w_s^{|l_s|+1}).
double log_norm(const ModeSpec& pump, const ModeSpec& idler, const ModeSpec& signal,
                double l_total) {
    double log_ratio = std::numbers::ln2 - 3.0 * std::log(kPi);
    double log_waists = 0.0;
    for (const ModeSpec* m : {&pump, &idler, &signal}) {
        const int l = std::abs(m->index.ell);
        log_ratio += std::lgamma(m->index.p + 1.0) - std::lgamma(m->index.p + l + 1.0);
        log_waists += (l + 1) * std::log(m->waist);
    }
    return std::log(2.0 * kPi) + 0.5 * log_ratio + l_total * std::numbers::ln2 -
           log_waists;
}

/// ln of binom(p_p+|l_p|,p_p) binom(p_i+|l_i|,p_i) binom(p_s+|l_s|,p_s)
///   * Gamma(l_T + 1) / sigma^{l_T + 1}.
double log_series_prefactor(const ModeSpec& pump, const ModeSpec& idler,
                            const ModeSpec& signal, double l_total, double sigma) {
    double value = std::lgamma(l_total + 1.0) - (l_total + 1.0) * std::log(sigma);
    for (const ModeSpec* m : {&pump, &idler, &signal}) {
        const int l = std::abs(m->index.ell);
        value += std::lgamma(m->index.p + l + 1.0) - std::lgamma(m->index.p + 1.0) -
                 std::lgamma(l + 1.0);
    }
    return value;
}

void check_modes(const PumpSpec& pump, const ModeSpec& signal, const ModeSpec& idler) {
    for (const ModeSpec* m : {&pump.mode, &signal, &idler}) {
        if (m->index.p < 0) throw std::domain_error("overlap: radial index must be >= 0");
        if (!(m->waist > 0.0)) throw std::domain_error("overlap: waist must be positive");
    }
}

} // namespace

double lauricella_fa3(double a, int b1, int b2, int b3, double c1, double c2,
                      double c3, double x1, double x2, double x3) {
    check_upper_parameter(b1);
    check_upper_parameter(b2);
    check_upper_parameter(b3);
    const SeriesAxis ax1(b1, c1, x1), ax2(b2, c2, x2), ax3(b3, c3, x3);
    const int ktot = ax1.kmax() + ax2.kmax() + ax3.kmax();
    std::vector<double> poch_a(ktot + 1);
    for (int k = 0; k <= ktot; ++k) poch_a[k] = pochhammer(a, k);

    KahanSum sum;
    for (int k1 = 0; k1 <= ax1.kmax(); ++k1)
        for (int k2 = 0; k2 <= ax2.kmax(); ++k2)
            for (int k3 = 0; k3 <= ax3.kmax(); ++k3)
                sum.add(poch_a[k1 + k2 + k3] * ax1.factor(k1) * ax2.factor(k2) *
                        ax3.factor(k3));
    return sum.sum;
}

double appell_f2(double a, int b1, int b2, double c1, double c2, double x, double y) {
    check_upper_parameter(b1);
    check_upper_parameter(b2);
    const SeriesAxis ax1(b1, c1, x), ax2(b2, c2, y);
    const int ktot = ax1.kmax() + ax2.kmax();
    std::vector<double> poch_a(ktot + 1);
    for (int k = 0; k <= ktot; ++k) poch_a[k] = pochhammer(a, k);

    KahanSum sum;
    for (int k1 = 0; k1 <= ax1.kmax(); ++k1)
        for (int k2 = 0; k2 <= ax2.kmax(); ++k2)
            sum.add(poch_a[k1 + k2] * ax1.factor(k1) * ax2.factor(k2));
    return sum.sum;
}

std::complex<double> overlap_closed_form(const PumpSpec& pump, const ModeSpec& signal,
                                         const ModeSpec& idler) {
    check_modes(pump, signal, idler);
    const ModeSpec& pm = pump.mode;
    if (!oam_conserved(pm.index.ell, signal.index.ell, idler.index.ell))
        return {0.0, 0.0};

    const double l_total =
        0.5 * (std::abs(pm.index.ell) + std::abs(idler.index.ell) +
               std::abs(signal.index.ell));
    const double sigma = 1.0 / (pm.waist * pm.waist) +
                         1.0 / (idler.waist * idler.waist) +
                         1.0 / (signal.waist * signal.waist);
    const double lam_p = 2.0 / (pm.waist * pm.waist);
    const double lam_i = 2.0 / (idler.waist * idler.waist);
    const double lam_s = 2.0 / (signal.waist * signal.waist);

    const double series = lauricella_fa3(
        l_total + 1.0, -pm.index.p, -idler.index.p, -signal.index.p,
        std::abs(pm.index.ell) + 1.0, std::abs(idler.index.ell) + 1.0,
        std::abs(signal.index.ell) + 1.0, lam_p / sigma, lam_i / sigma,
        lam_s / sigma);

    const double log_pref = log_norm(pm, idler, signal, l_total) +
                            log_series_prefactor(pm, idler, signal, l_total, sigma);
    return {std::exp(log_pref) * series, 0.0};
}

std::complex<double> overlap_closed_form_pump0(const PumpSpec& pump,
                                               const ModeSpec& signal,
                                               const ModeSpec& idler) {
    check_modes(pump, signal, idler);
    const ModeSpec& pm = pump.mode;
    if (pm.index.p != 0)
        throw std::domain_error("overlap_closed_form_pump0: pump must have p = 0");
    if (!oam_conserved(pm.index.ell, signal.index.ell, idler.index.ell))
        return {0.0, 0.0};

    const double l_total =
        0.5 * (std::abs(pm.index.ell) + std::abs(idler.index.ell) +
               std::abs(signal.index.ell));
    const double sigma = 1.0 / (pm.waist * pm.waist) +
                         1.0 / (idler.waist * idler.waist) +
                         1.0 / (signal.waist * signal.waist);
    const double lam_i = 2.0 / (idler.waist * idler.waist);
    const double lam_s = 2.0 / (signal.waist * signal.waist);

    const double series = appell_f2(l_total + 1.0, -idler.index.p, -signal.index.p,
                                    std::abs(idler.index.ell) + 1.0,
                                    std::abs(signal.index.ell) + 1.0,
                                    lam_i / sigma, lam_s / sigma);

    const double log_pref = log_norm(pm, idler, signal, l_total) +
                            log_series_prefactor(pm, idler, signal, l_total, sigma);
    return {std::exp(log_pref) * series, 0.0};
}

std::complex<double> overlap_quadrature(const PumpSpec& pump, const ModeSpec& signal,
                                        const ModeSpec& idler, double tol) {
    check_modes(pump, signal, idler);
    if (!(tol > 0.0)) throw std::domain_error("overlap_quadrature: tol must be > 0");
    const ModeSpec& pm = pump.mode;
    if (!oam_conserved(pm.index.ell, signal.index.ell, idler.index.ell))
        return {0.0, 0.0};

    const double sigma = 1.0 / (pm.waist * pm.waist) +
                         1.0 / (idler.waist * idler.waist) +
                         1.0 / (signal.waist * signal.waist);
    // prefactor 2 pi C_p C_i C_s of the radial form of the mode product
    const double prefactor = 2.0 * kPi * lg_norm_const(pm) * lg_norm_const(idler) *
                             lg_norm_const(signal);

    const int power = std::abs(pm.index.ell) + std::abs(idler.index.ell) +
                      std::abs(signal.index.ell);
    const double lam_p = 2.0 / (pm.waist * pm.waist);
    const double lam_i = 2.0 / (idler.waist * idler.waist);
    const double lam_s = 2.0 / (signal.waist * signal.waist);
    const double inv_scale = std::pow(pm.waist, std::abs(pm.index.ell)) *
                             std::pow(idler.waist, std::abs(idler.index.ell)) *
                             std::pow(signal.waist, std::abs(signal.index.ell));

    // (r/w_p)^|l_p| (r/w_i)^|l_i| (r/w_s)^|l_s| = r^power / inv_scale
    const auto integrand = [&](double r) {
        const double r2 = r * r;
        return std::pow(r, power) / inv_scale *
               laguerre(pm.index.p, std::abs(pm.index.ell), lam_p * r2) *
               laguerre(idler.index.p, std::abs(idler.index.ell), lam_i * r2) *
               laguerre(signal.index.p, std::abs(signal.index.ell), lam_s * r2) *
               std::exp(-sigma * r2) * r;
    };

    // Decay is exp(-sigma r^2) times a polynomial of degree 2(l_T + sum p);
    // push the cutoff out with the degree so the dropped tail is negligible.
    const int degree = power / 2 + pm.index.p + idler.index.p + signal.index.p;
    const double u_max = 50.0 + 3.0 * degree;
    const double r_max = std::sqrt(u_max / sigma);

    QuadratureOptions opts;
    opts.abs_tol = tol / prefactor;
    const double integral = integrate(integrand, 0.0, r_max, opts);
    return {prefactor * integral, 0.0};
}

} // namespace spdc
