#pragma once

#include <complex>

namespace spdc {

/// Radial index p and azimuthal (OAM) index ell of a Laguerre-Gauss mode.
struct ModeIndex {
    int p = 0;
    int ell = 0;
};

/// A mode index together with its waist at the beam focus.
struct ModeSpec {
    ModeIndex index;
    double waist = 1.0;
};

struct PolarPoint {
    double r = 0.0;
    double phi = 0.0;
};

/// Associated Laguerre polynomial L_p^alpha(x) via the stable upward
/// three-term recurrence.
double laguerre(int p, double alpha, double x);

/// Pochhammer symbol (a)_k = a (a+1) ... (a+k-1), with (a)_0 = 1.
/// Returns 0 for negative-integer a once the rising product crosses zero,
/// which is what terminates the hypergeometric series.
double pochhammer(double a, int k);

/// Normalization constant fixing the unit L2 norm of the mode,
/// integral |LG|^2 r dr dphi = 1.
double lg_norm_const(const ModeSpec& mode);

/// Real radial factor of the mode at the waist plane:
/// C (r/w)^|ell| L_p^|ell|(2 r^2/w^2) exp(-r^2/w^2).
double lg_radial(const ModeSpec& mode, double r);

/// Full complex amplitude LG_{ell,p}(r, phi, 0), azimuthal phase e^{-i ell phi}.
std::complex<double> lg_amplitude(const ModeSpec& mode, const PolarPoint& pt);

/// Scaled modified Bessel function e^{-z} I_nu(z) for nu = twice_nu / 2
/// (integer or half-integer order, either sign) and z >= 0. Ascending series
/// for small z; elementary closed forms (half-integer) or the asymptotic
/// expansion (integer) for large z, so the value never overflows.
double bessel_i_scaled(int twice_nu, double z);

/// Radial profile of the Fourier transform of the unmasked SLM mode
/// e^{-r^2} e^{i ell theta}: the Hankel transform
///   integral_0^inf e^{-r^2} r J_ell(rho r) dr
///     = sqrt(pi) (rho/8) e^{-rho^2/8} [I_{(ell-1)/2} - I_{(ell+1)/2}](rho^2/8).
/// The caller multiplies the azimuthal factor (-1)^ell e^{i ell phi}.
/// At rho = 0 the value is 1/2 for ell = 0 (the diverging I_{-1/2} cancels the
/// rho prefactor) and 0 otherwise.
std::complex<double> hygg_fourier(int ell, double rho);

} // namespace spdc
