#include "modeprobe/mie.hpp"

#include <cmath>
#include <vector>

#include "modeprobe/constants.hpp"
#include "modeprobe/errors.hpp"

namespace modeprobe {

MieMedium MieMedium::make(double radius, cplx relative_index, double wavelength) {
    if (!(radius > 0.0) || !(wavelength > 0.0)) {
        throw ConfigInvalid("sphere radius and wavelength must be positive");
    }
    if (!(std::abs(relative_index) > 0.0) || relative_index.imag() < 0.0) {
        throw ConfigInvalid("relative index must be nonzero with non-negative imaginary part");
    }
    MieMedium m;
    m.radius = radius;
    m.relative_index = relative_index;
    m.wavelength = wavelength;
    m.size_parameter = 2.0 * constants::pi * radius / wavelength;
    return m;
}

int mie_order_cutoff(double size_parameter) {
    return static_cast<int>(std::ceil(size_parameter + 4.0 * std::cbrt(size_parameter) + 2.0));
}

namespace {

// Phi_0..Phi_top by downward recurrence with trial seeds; the recurrence is
// linear, so a running rescale (applied to everything stored so far) keeps
// intermediates in range for small |x|. The result is anchored to whichever
// closed-form seed Phi_0 = sin x or Phi_1 = sin x / x - cos x is larger in
// magnitude; their zeros never coincide, so the anchor stays well away from
// zero where contamination of the trial solution would blow up.
std::vector<cplx> phi_downward(int top, cplx x) {
    // The trial solution sheds its irregular contamination only while the
    // order exceeds |x|, so start well above both.
    const int start = std::max(top, static_cast<int>(std::ceil(std::abs(x)))) + 25;
    std::vector<cplx> u(static_cast<size_t>(start) + 2, cplx{0.0, 0.0});
    u[start + 1] = {0.0, 0.0};
    u[start] = {1e-30, 0.0};
    for (int j = start; j >= 1; --j) {
        u[j - 1] = (2.0 * j + 1.0) / x * u[j] - u[j + 1];
        if (std::abs(u[j - 1]) > 1e280) {
            for (int i = j - 1; i <= start + 1; ++i) u[i] *= 1e-280;
        }
    }
    const cplx phi0 = std::sin(x);
    const cplx phi1 = std::sin(x) / x - std::cos(x);
    const cplx ratio = std::abs(phi0) >= std::abs(phi1) ? phi0 / u[0] : phi1 / u[1];
    std::vector<cplx> phi(static_cast<size_t>(top) + 1);
    for (int j = 0; j <= top; ++j) phi[j] = u[j] * ratio;
    return phi;
}

// chi_0..chi_top by upward recurrence (stable for the irregular solution).
std::vector<cplx> chi_upward(int top, cplx x) {
    std::vector<cplx> chi(static_cast<size_t>(top) + 1);
    chi[0] = std::cos(x);
    if (top >= 1) chi[1] = std::cos(x) / x + std::sin(x);
    for (int j = 1; j < top; ++j) {
        chi[j + 1] = (2.0 * j + 1.0) / x * chi[j] - chi[j - 1];
    }
    return chi;
}

RiccatiBessel assemble(int iota, cplx x, const std::vector<cplx>& phi,
                       const std::vector<cplx>& chi) {
    RiccatiBessel rb;
    rb.phi = phi[iota];
    rb.psi = phi[iota] + cplx{0.0, 1.0} * chi[iota];
    if (iota == 0) {
        // z'_0 follows from the closed forms directly.
        rb.dphi = std::cos(x);
        rb.dpsi = std::cos(x) + cplx{0.0, 1.0} * (-std::sin(x));
    } else {
        const cplx order{static_cast<double>(iota), 0.0};
        rb.dphi = phi[iota - 1] - order / x * phi[iota];
        const cplx psi_prev = phi[iota - 1] + cplx{0.0, 1.0} * chi[iota - 1];
        rb.dpsi = psi_prev - order / x * rb.psi;
    }
    return rb;
}

}  // namespace

RiccatiBessel riccati_bessel(int iota, cplx x) {
    if (iota < 0) throw ConfigInvalid("Riccati-Bessel order must be non-negative");
    if (!(std::abs(x) > 0.0)) throw ConfigInvalid("Riccati-Bessel argument must be nonzero");
    if (iota > mie_order_cutoff(std::abs(x)) + 20) {
        throw OrderOverflow("Riccati-Bessel order far beyond the convergence cutoff");
    }
    const std::vector<cplx> phi = phi_downward(iota, x);
    const std::vector<cplx> chi = chi_upward(iota, x);
    return assemble(iota, x, phi, chi);
}

MieCoefficients mie_coefficients(int iota, const MieMedium& medium) {
    if (iota < 1) throw ConfigInvalid("Mie order must be positive");
    const double alpha = medium.size_parameter;
    // The stored index uses the common absorbing-is-positive notation; under
    // the H^(2) time convention of this module absorption carries the
    // opposite sign, so the internal computation conjugates it. Passivity
    // |a|, |b| <= 1 would fail at large size parameters otherwise.
    const cplx w = std::conj(medium.relative_index);
    const RiccatiBessel out = riccati_bessel(iota, cplx{alpha, 0.0});
    const RiccatiBessel in = riccati_bessel(iota, w * alpha);

    const cplx a_num = out.phi * in.dphi - w * out.dphi * in.phi;
    const cplx a_den = out.psi * in.dphi - w * out.dpsi * in.phi;
    const cplx b_num = w * out.phi * in.dphi - out.dphi * in.phi;
    const cplx b_den = w * out.psi * in.dphi - out.dpsi * in.phi;
    if (std::abs(a_den) < 1e-30 || std::abs(b_den) < 1e-30) {
        throw DegenerateDenominator("Mie coefficient denominator vanished");
    }
    MieCoefficients c;
    c.iota = iota;
    c.a = a_num / a_den;
    c.b = b_num / b_den;
    return c;
}

std::vector<MieCoefficients> mie_table(const MieMedium& medium) {
    const int top = mie_order_cutoff(medium.size_parameter);
    std::vector<MieCoefficients> table;
    table.reserve(top);
    for (int iota = 1; iota <= top; ++iota) {
        table.push_back(mie_coefficients(iota, medium));
    }
    return table;
}

AmplitudePair amplitude_functions(double theta, const MieMedium& medium, int extra_orders) {
    const int top = mie_order_cutoff(medium.size_parameter) + extra_orders;
    std::vector<MieCoefficients> coeffs;
    coeffs.reserve(top);
    for (int iota = 1; iota <= top; ++iota) coeffs.push_back(mie_coefficients(iota, medium));
    const double mu = std::cos(theta);
    const double stheta = std::sin(theta);
    AmplitudePair out;

    if (std::abs(stheta) < 1e-12) {
        // pi and tau collapse to +-iota(iota+1)/2 at the poles; the sign
        // pattern keeps s1(0) = s2(0) and s1(pi) = -s2(pi).
        const bool forward = mu > 0.0;
        for (const MieCoefficients& c : coeffs) {
            const double iota = c.iota;
            const double mag = iota * (iota + 1.0) / 2.0;
            const double sgn = forward ? 1.0 : (c.iota % 2 == 0 ? -1.0 : 1.0);
            const double pi_v = sgn * mag;
            const double tau_v = forward ? pi_v : -pi_v;
            const double pref = (2.0 * iota + 1.0) / (iota * (iota + 1.0));
            out.s1 += pref * (c.a * pi_v + c.b * tau_v);
            out.s2 += pref * (c.a * tau_v + c.b * pi_v);
        }
        return out;
    }

    double pi_prev = 0.0;  // pi_0
    double pi_cur = 1.0;   // pi_1
    for (const MieCoefficients& c : coeffs) {
        const double iota = c.iota;
        const double tau = iota * mu * pi_cur - (iota + 1.0) * pi_prev;
        const double pref = (2.0 * iota + 1.0) / (iota * (iota + 1.0));
        out.s1 += pref * (c.a * pi_cur + c.b * tau);
        out.s2 += pref * (c.a * tau + c.b * pi_cur);
        const double pi_next =
            (2.0 * iota + 1.0) / iota * mu * pi_cur - (iota + 1.0) / iota * pi_prev;
        pi_prev = pi_cur;
        pi_cur = pi_next;
    }
    return out;
}

cplx scattered_prefactor(const MieMedium& medium, double z, double theta, double omega,
                         double temperature) {
    if (!(z > 0.0) || !(temperature > 0.0)) {
        throw ConfigInvalid("scattered prefactor needs positive distance and temperature");
    }
    const AmplitudePair s = amplitude_functions(theta, medium);
    const double field_scale = std::sqrt(constants::hbar * omega /
                                         (2.0 * constants::vacuum_permittivity *
                                          constants::speed_of_light * temperature));
    const double geometry = medium.wavelength / (2.0 * constants::pi * z);
    const double angular = 0.5 * (std::abs(s.s1) + std::abs(s.s2));
    return cplx{0.0, 1.0} * field_scale * geometry * angular;
}

}  // namespace modeprobe
