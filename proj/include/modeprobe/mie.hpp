#pragma once

#include <vector>

#include "modeprobe/types.hpp"

namespace modeprobe {

// Sphere in vacuum illuminated at wavelength lambda; alpha = 2 pi r / lambda.
struct MieMedium {
    double radius = 0.0;         // m
    cplx relative_index{0.0};    // imaginary part >= 0 (absorption)
    double wavelength = 0.0;     // m
    double size_parameter = 0.0;

    static MieMedium make(double radius, cplx relative_index, double wavelength);
};

// Series cutoff ceil(alpha + 4 alpha^{1/3} + 2); orders beyond it contribute
// below double precision.
int mie_order_cutoff(double size_parameter);

// Riccati-Bessel pair at complex argument. Phi = x j_iota(x) and
// Psi = Phi + i chi with chi = -x y_iota(x), i.e. Psi is built on the
// second-kind Hankel function (e^{-i omega t} time convention). Under this
// convention the Wronskian Phi Psi' - Phi' Psi equals -i.
struct RiccatiBessel {
    cplx phi;
    cplx dphi;
    cplx psi;
    cplx dpsi;
};

// Phi by downward recurrence normalized to Phi_0 = sin x (stable for all
// orders), chi by upward recurrence from its closed-form seeds, derivatives
// via z'_iota = z_{iota-1} - (iota/x) z_iota. Throws OrderOverflow when iota
// exceeds the cutoff for |x| by more than 20.
RiccatiBessel riccati_bessel(int iota, cplx x);

struct MieCoefficients {
    int iota = 0;
    cplx a{0.0};
    cplx b{0.0};
};

// Quotients of Riccati-Bessel functions at alpha and relative_index * alpha.
// Throws DegenerateDenominator if either denominator falls below 1e-30 in
// magnitude. Passivity |a|, |b| <= 1; for real index Re(a) = |a|^2.
MieCoefficients mie_coefficients(int iota, const MieMedium& medium);

// All orders 1..mie_order_cutoff(alpha).
std::vector<MieCoefficients> mie_table(const MieMedium& medium);

struct AmplitudePair {
    cplx s1{0.0};
    cplx s2{0.0};
};

// Angular amplitude functions
//   s1 = sum (2 iota + 1)/(iota (iota + 1)) (a pi + b tau),
//   s2 = same with pi and tau swapped,
// with pi_iota = P^1_iota(cos theta)/sin theta and tau_iota its theta
// derivative, both by the standard recurrences without the Condon-Shortley
// phase (pi_1 = 1). The poles theta = 0, pi use the limit
// pi_iota(+-1) = (+-1)^{iota+1} iota (iota + 1)/2.
// extra_orders extends the series past the default cutoff (truncation
// stability checks); the sum must already be converged there.
AmplitudePair amplitude_functions(double theta, const MieMedium& medium,
                                  int extra_orders = 0);

// Scattered-field normalization
//   M = i sqrt(hbar omega / (2 eps0 c T)) (lambda / 2 pi z) (|s1| + |s2|)/2.
// Reported for reference only; every downstream ratio is normalized so that
// M cancels, so nothing else may consume this value.
cplx scattered_prefactor(const MieMedium& medium, double z, double theta, double omega,
                         double temperature);

}  // namespace modeprobe
