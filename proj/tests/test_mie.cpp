#include <doctest.h>

#include <cmath>
#include <complex>

#include "modeprobe/constants.hpp"
#include "modeprobe/errors.hpp"
#include "modeprobe/mie.hpp"
#include "modeprobe/types.hpp"

using namespace modeprobe;

namespace {

MieMedium medium_for_alpha(double alpha, cplx index = cplx(2.19, 0.0)) {
    const double wavelength = 125e-6;
    return MieMedium::make(alpha * wavelength / (2.0 * constants::pi), index, wavelength);
}

}  // namespace

TEST_CASE("Riccati-Bessel functions reproduce the low-order closed forms") {
    for (cplx x : {cplx(0.7, 0.0), cplx(2.5, 0.0), cplx(5.1, 0.4), cplx(13.7, 0.0)}) {
        const RiccatiBessel r0 = riccati_bessel(0, x);
        CHECK(std::abs(r0.phi - std::sin(x)) < 1e-12 * std::abs(std::sin(x)) + 1e-13);
        CHECK(std::abs(r0.psi - (std::sin(x) + cplx(0, 1) * std::cos(x))) < 1e-12);

        const RiccatiBessel r1 = riccati_bessel(1, x);
        const cplx phi1 = std::sin(x) / x - std::cos(x);
        const cplx chi1 = std::cos(x) / x + std::sin(x);
        CHECK(std::abs(r1.phi - phi1) < 1e-12);
        CHECK(std::abs(r1.psi - (phi1 + cplx(0, 1) * chi1)) < 1e-12);
    }
}

TEST_CASE("Riccati-Bessel Wronskian equals -i at every order") {
    for (int iota : {1, 3, 8, 20}) {
        for (cplx x : {cplx(1.3, 0.0), cplx(6.283185307179586, 0.0), cplx(9.0, 1.1)}) {
            const RiccatiBessel r = riccati_bessel(iota, x);
            const cplx w = r.phi * r.dpsi - r.dphi * r.psi;
            CHECK(std::abs(w - cplx(0.0, -1.0)) < 1e-10);
        }
    }
}

TEST_CASE("order overflow guard trips far past the cutoff") {
    CHECK_THROWS_AS(riccati_bessel(80, cplx(2.0, 0.0)), OrderOverflow);
}

TEST_CASE("series cutoff follows the size-parameter rule") {
    CHECK(mie_order_cutoff(6.283185307179586) ==
          static_cast<int>(
              std::ceil(6.283185307179586 + 4.0 * std::cbrt(6.283185307179586) + 2.0)));
    CHECK(mie_order_cutoff(0.01) >= 1);
}

TEST_CASE("Rayleigh limit matches the electric dipole polarizability") {
    const double alpha = 0.01;
    const cplx m(2.19, 0.0);
    const MieCoefficients c = mie_coefficients(1, medium_for_alpha(alpha, m));
    // |a_1| -> (2/3) alpha^3 (m^2 - 1)/(m^2 + 2) for alpha -> 0; the phase is
    // purely imaginary at this order, with the sign set by the Hankel choice.
    const double dipole =
        std::abs(2.0 / 3.0 * std::pow(alpha, 3) * (m * m - 1.0) / (m * m + 2.0));
    CHECK(std::abs(std::abs(c.a) - dipole) < 1e-3 * dipole);
    CHECK(std::abs(c.a.real()) < 1e-3 * std::abs(c.a.imag()));
    // The magnetic dipole b_1 scales as alpha^5 and is negligible here.
    CHECK(std::abs(c.b) < 1e-2 * std::abs(c.a));
}

TEST_CASE("non-absorbing sphere satisfies passivity and the phase-circle identity") {
    const MieMedium medium = medium_for_alpha(2.0 * constants::pi);
    for (const MieCoefficients& c : mie_table(medium)) {
        CHECK(std::abs(c.a) <= 1.0 + 1e-12);
        CHECK(std::abs(c.b) <= 1.0 + 1e-12);
        CHECK(std::abs(c.a.real() - std::norm(c.a)) < 1e-10);
        CHECK(std::abs(c.b.real() - std::norm(c.b)) < 1e-10);
    }
}

TEST_CASE("frozen a_1 at alpha = 2 pi") {
    const MieCoefficients c = mie_coefficients(1, medium_for_alpha(2.0 * constants::pi));
    CHECK(c.a.real() == doctest::Approx(0.5328116378278267).epsilon(1e-12));
    CHECK(c.a.imag() == doctest::Approx(0.4989222348453268).epsilon(1e-12));
}

TEST_CASE("forward amplitudes coincide and obey the coefficient sum rule") {
    const MieMedium medium = medium_for_alpha(2.0 * constants::pi);
    const AmplitudePair forward = amplitude_functions(0.0, medium);
    CHECK(std::abs(forward.s1 - forward.s2) < 1e-12 * std::abs(forward.s1));

    // s1(0) = sum (2 iota + 1)(a + b)/2 because pi(1) = tau(1) = iota(iota+1)/2.
    cplx sum(0.0, 0.0);
    for (const MieCoefficients& c : mie_table(medium)) {
        sum += 0.5 * (2.0 * c.iota + 1.0) * (c.a + c.b);
    }
    CHECK(std::abs(forward.s1 - sum) < 1e-10 * (1.0 + std::abs(sum)));

    // At theta = pi the same recurrence limit carries (-1)^(iota+1).
    const AmplitudePair backward = amplitude_functions(constants::pi, medium);
    cplx back(0.0, 0.0);
    for (const MieCoefficients& c : mie_table(medium)) {
        const double sign = c.iota % 2 ? 1.0 : -1.0;
        back += sign * 0.5 * (2.0 * c.iota + 1.0) * (c.a - c.b);
    }
    CHECK(std::abs(backward.s1 - back) < 1e-10 * (1.0 + std::abs(back)));
}

TEST_CASE("amplitude series is stable under extra orders") {
    const MieMedium medium = medium_for_alpha(2.0 * constants::pi);
    for (double theta : {0.0, 0.4, 1.3, 2.8}) {
        const AmplitudePair base = amplitude_functions(theta, medium);
        const AmplitudePair extended = amplitude_functions(theta, medium, 10);
        // The cutoff rule leaves partial-wave tails at the 1e-11 level.
        CHECK(std::abs(base.s1 - extended.s1) < 1e-10 * (1.0 + std::abs(base.s1)));
        CHECK(std::abs(base.s2 - extended.s2) < 1e-10 * (1.0 + std::abs(base.s2)));
    }
}
