#include "spdc/modes.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spdc {

namespace {

constexpr double kPi = std::numbers::pi;

void check_mode(const ModeSpec& mode) {
    if (mode.index.p < 0) throw std::domain_error("mode radial index p must be >= 0");
    if (!(mode.waist > 0.0)) throw std::domain_error("mode waist must be positive");
}

} // namespace

double laguerre(int p, double alpha, double x) {
    if (p < 0) throw std::domain_error("laguerre: p must be >= 0");
    if (p == 0) return 1.0;
    double prev = 1.0;
    double curr = 1.0 + alpha - x;
    for (int k = 1; k < p; ++k) {
        const double next =
            ((2.0 * k + 1.0 + alpha - x) * curr - (k + alpha) * prev) / (k + 1.0);
        prev = curr;
        curr = next;
    }
    return curr;
}

double pochhammer(double a, int k) {
    if (k < 0) throw std::domain_error("pochhammer: k must be >= 0");
    double product = 1.0;
    for (int j = 0; j < k; ++j) product *= a + j;
    return product;
}

double lg_norm_const(const ModeSpec& mode) {
    check_mode(mode);
    const int p = mode.index.p;
    const int l = std::abs(mode.index.ell);
    // C^2 = 2^{|l|+1} p! / (pi w^2 (p+|l|)!)
    const double log_c2 = (l + 1) * std::numbers::ln2 + std::lgamma(p + 1.0) -
                          std::log(kPi) - 2.0 * std::log(mode.waist) -
                          std::lgamma(p + l + 1.0);
    return std::exp(0.5 * log_c2);
}

double lg_radial(const ModeSpec& mode, double r) {
    check_mode(mode);
    if (r < 0.0) throw std::domain_error("lg_radial: r must be >= 0");
    const int l = std::abs(mode.index.ell);
    const double u = r / mode.waist;
    const double u2 = u * u;
    return lg_norm_const(mode) * std::pow(u, l) *
           laguerre(mode.index.p, l, 2.0 * u2) * std::exp(-u2);
}

std::complex<double> lg_amplitude(const ModeSpec& mode, const PolarPoint& pt) {
    const double radial = lg_radial(mode, pt.r);
    const double phase = -mode.index.ell * pt.phi;
    return std::polar(radial, phase);
}

namespace {

/// Ascending series for e^{-z} I_nu(z); all terms positive, no cancellation.
/// Valid while the largest term stays in double range (z <= ~25 here).
double bessel_i_scaled_series(double nu, double z) {
    const double half = 0.5 * z;
    const double q = half * half;
    // term_k = (z/2)^{nu + 2k} / (k! Gamma(nu + k + 1))
    double term = std::pow(half, nu) / std::tgamma(nu + 1.0);
    double sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= q / (k * (nu + k));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum * std::exp(-z);
}

/// Asymptotic expansion of e^{-z} I_nu(z) for large z, truncated at the
/// smallest term. Accurate to ~e^{-2z} relative for z > 25.
double bessel_i_scaled_asymptotic(double nu, double z) {
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 40; ++k) {
        const double factor = (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * z);
        const double next = -term * factor;
        if (std::abs(next) >= std::abs(term)) break; // past the smallest term
        term = next;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum / std::sqrt(2.0 * kPi * z);
}

/// Half-integer orders at large z from the elementary forms of I_{+-1/2}
/// plus the order recurrence I_{nu-1} - I_{nu+1} = (2 nu / z) I_nu.
/// The e^{-2z} terms are negligible here, so the recurrence does not cancel.
double bessel_i_scaled_half_integer(int twice_nu, double z) {
    const double base = 1.0 / std::sqrt(2.0 * kPi * z);
    const double e2 = std::exp(-2.0 * z);
    double lower = base * (1.0 + e2);  // nu = -1/2
    double upper = base * (1.0 - e2);  // nu = +1/2
    if (twice_nu == -1) return lower;
    if (twice_nu == 1) return upper;
    if (twice_nu > 1) {
        // ascend: I_{nu+1} = I_{nu-1} - (2 nu / z) I_nu starting at nu = 1/2
        for (int t = 1; t < twice_nu; t += 2) {
            const double next = lower - (t / z) * upper;
            lower = upper;
            upper = next;
        }
        return upper;
    }
    // descend: I_{nu-1} = I_{nu+1} + (2 nu / z) I_nu starting at nu = -1/2
    for (int t = -1; t > twice_nu; t -= 2) {
        const double next = upper + (t / z) * lower;
        upper = lower;
        lower = next;
    }
    return lower;
}

} // namespace

double bessel_i_scaled(int twice_nu, double z) {
    if (z < 0.0) throw std::domain_error("bessel_i_scaled: z must be >= 0");
    const double nu = 0.5 * twice_nu;
    if (z == 0.0) {
        if (twice_nu == 0) return 1.0;
        if (twice_nu > 0) return 0.0;
        throw std::domain_error("bessel_i_scaled: negative order diverges at z = 0");
    }
    if (z <= 25.0) {
        if (twice_nu % 2 == 0 && twice_nu < 0) {
            // integer negative order: I_{-n} = I_n
            return bessel_i_scaled_series(-nu, z);
        }
        return bessel_i_scaled_series(nu, z);
    }
    if (twice_nu % 2 != 0) return bessel_i_scaled_half_integer(twice_nu, z);
    return bessel_i_scaled_asymptotic(std::abs(nu), z);
}

std::complex<double> hygg_fourier(int ell, double rho) {
    if (rho < 0.0) throw std::domain_error("hygg_fourier: rho must be >= 0");
    if (rho == 0.0) return {ell == 0 ? 0.5 : 0.0, 0.0};
    const int l = std::abs(ell);
    const double z = rho * rho / 8.0;
    double value = std::sqrt(kPi) * (rho / 8.0) *
                   (bessel_i_scaled(l - 1, z) - bessel_i_scaled(l + 1, z));
    // J_{-l} = (-1)^l J_l, so odd negative orders flip sign.
    if (ell < 0 && (l % 2) == 1) value = -value;
    return {value, 0.0};
}

} // namespace spdc
