#pragma once

#include <complex>

#include "spdc/modes.hpp"

namespace spdc {

/// Pump beam of the downconversion process.
struct PumpSpec {
    ModeSpec mode;
};

/// One biphoton correlation amplitude c with its index tuple.
struct BiphotonAmplitude {
    PumpSpec pump;
    ModeSpec signal;
    ModeSpec idler;
    std::complex<double> value{0.0, 0.0};
};

/// OAM conservation: the azimuthal integral vanishes unless ell_s + ell_i = ell_p.
inline bool oam_conserved(int ell_p, int ell_s, int ell_i) {
    return ell_s + ell_i == ell_p;
}

/// Terminating Lauricella F_A^(3) series. The upper parameters b1..b3 must be
/// non-positive integers (they are -p in the physical use), which truncates
/// the triple sum at k_j <= -b_j. Terms are accumulated Kahan-compensated in
/// a fixed lexicographic order.
double lauricella_fa3(double a, int b1, int b2, int b3,
                      double c1, double c2, double c3,
                      double x1, double x2, double x3);

/// Terminating second Appell function F2, same summation discipline.
double appell_f2(double a, int b1, int b2, double c1, double c2,
                 double x, double y);

/// Correlation amplitude by the closed-form Lauricella expression. Returns 0
/// when OAM is not conserved. The prefactor (normalization, binomials,
/// Gamma(l_T+1) / sigma^{l_T+1}) is assembled in log space to avoid overflow.
std::complex<double> overlap_closed_form(const PumpSpec& pump,
                                         const ModeSpec& signal,
                                         const ModeSpec& idler);

/// Closed form specialized to a pump with p_p = 0, expressed through the
/// Appell F2 series. Throws std::domain_error if the pump has p_p != 0.
std::complex<double> overlap_closed_form_pump0(const PumpSpec& pump,
                                               const ModeSpec& signal,
                                               const ModeSpec& idler);

/// Correlation amplitude by adaptive quadrature of the radial integral.
/// The azimuthal selection rule is applied analytically (exact zero off the
/// conservation line); tol is the absolute tolerance on the returned value.
/// Throws NonConvergence if the adaptive scheme cannot reach tol.
std::complex<double> overlap_quadrature(const PumpSpec& pump,
                                        const ModeSpec& signal,
                                        const ModeSpec& idler,
                                        double tol = 1e-10);

} // namespace spdc
