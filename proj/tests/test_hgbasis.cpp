#include <doctest.h>

#include <cmath>
#include <complex>

#include "modeprobe/constants.hpp"
#include "modeprobe/errors.hpp"
#include "modeprobe/hgbasis.hpp"
#include "modeprobe/types.hpp"
#include "oracles.hpp"

using namespace modeprobe;

namespace {

const BeamGeometry geom = BeamGeometry::make(125e-6, 150e-6);

Field mode_field(ModeIndex idx) {
    return [idx](double x, double y) { return mode_amplitude(idx, x, y, 0.0, geom); };
}

}  // namespace

TEST_CASE("hermite polynomials match their closed forms") {
    for (double x : {-2.3, -0.7, 0.0, 0.4, 1.9, 3.5}) {
        CHECK(hermite(0, x) == 1.0);
        CHECK(hermite(1, x) == doctest::Approx(2.0 * x).epsilon(1e-14));
        CHECK(hermite(2, x) == doctest::Approx(4.0 * x * x - 2.0).epsilon(1e-13));
        CHECK(hermite(3, x) == doctest::Approx(8.0 * x * x * x - 12.0 * x).epsilon(1e-13));
        CHECK(hermite(5, x) ==
              doctest::Approx(32.0 * std::pow(x, 5) - 160.0 * std::pow(x, 3) + 120.0 * x)
                  .epsilon(1e-12));
        CHECK(hermite(10, x) == doctest::Approx(oracles::hermite_poly(10, x)).epsilon(1e-12));
    }
}

TEST_CASE("hermite functions agree with the normalized closed form") {
    for (int n : {0, 1, 2, 5, 9, 14}) {
        for (double t : {-3.1, -1.0, 0.0, 0.6, 2.7}) {
            CHECK(hermite_function(n, t) ==
                  doctest::Approx(oracles::hermite_fn(n, t)).epsilon(1e-12));
        }
    }
}

TEST_CASE("hermite functions are orthonormal under an independent integrator") {
    for (int n = 0; n <= 6; ++n) {
        for (int m = n; m <= 6; ++m) {
            const auto integrand = [&](double t) {
                return oracles::cplx(hermite_function(n, t) * hermite_function(m, t));
            };
            const double value = oracles::simpson_1d(integrand, -12.0, 12.0).real();
            CHECK(std::abs(value - (n == m ? 1.0 : 0.0)) < 1e-9);
        }
    }
}

TEST_CASE("carrier amplitude at the origin") {
    // u_00(0,0,0) = sqrt(2/pi) / w0 for equal 150 um waists.
    const cplx u = mode_amplitude({0, 0}, 0.0, 0.0, 0.0, geom);
    CHECK(u.imag() == 0.0);
    CHECK(u.real() == doctest::Approx(5319.2304).epsilon(1e-6));
    CHECK(u.real() ==
          doctest::Approx(std::sqrt(2.0 / constants::pi) / 150e-6).epsilon(1e-14));
}

TEST_CASE("waist-plane modes are orthonormal under the 2D Simpson oracle") {
    const double span = 6.0 * 150e-6;
    const ModeIndex probes[] = {{0, 0}, {1, 0}, {0, 2}, {2, 2}, {3, 1}};
    for (const ModeIndex& a : probes) {
        for (const ModeIndex& b : probes) {
            const auto integrand = [&](double x, double y) {
                return std::conj(mode_amplitude(a, x, y, 0.0, geom)) *
                       mode_amplitude(b, x, y, 0.0, geom);
            };
            const cplx value = oracles::simpson_2d(integrand, -span, span, -span, span, 240);
            const double expected = a == b ? 1.0 : 0.0;
            CHECK(std::abs(value.real() - expected) < 1e-9);
            CHECK(std::abs(value.imag()) < 1e-12);
        }
    }
}

TEST_CASE("mode normalization holds away from the waist plane") {
    for (double z : {0.0, 2e-4, 1e-3}) {
        const double span = 8.0 * geom.width_x(z);
        const auto integrand = [&](double x, double y) {
            const cplx u = mode_amplitude({2, 1}, x, y, z, geom);
            return std::conj(u) * u;
        };
        const cplx value = oracles::simpson_2d(integrand, -span, span, -span, span, 300);
        CHECK(value.real() == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("overlap and decompose reproduce coefficients of a synthetic field") {
    const cplx c20(0.3, -0.1);
    const cplx c01(0.0, 0.55);
    const Field field = [&](double x, double y) {
        return mode_amplitude({0, 0}, x, y, 0.0, geom) +
               c20 * mode_amplitude({2, 0}, x, y, 0.0, geom) +
               c01 * mode_amplitude({0, 1}, x, y, 0.0, geom);
    };
    const ModeVector coeffs = decompose(field, geom, 6);
    CHECK(std::abs(coeffs.at(0, 0) - 1.0) < 1e-10);
    CHECK(std::abs(coeffs.at(2, 0) - c20) < 1e-10);
    CHECK(std::abs(coeffs.at(0, 1) - c01) < 1e-10);
    CHECK(std::abs(coeffs.at(1, 1)) < 1e-12);

    const cplx direct = overlap(mode_field({2, 0}), field, geom);
    CHECK(std::abs(direct - c20) < 1e-10);
}

TEST_CASE("decompose is bit-identical across serial and parallel execution") {
    const Field field = [&](double x, double y) {
        return mode_amplitude({1, 2}, x, y, 0.0, geom) +
               0.2 * mode_amplitude({4, 4}, x, y, 0.0, geom);
    };
    const ModeVector serial = decompose(field, geom, 10, {}, Execution::serial);
    const ModeVector parallel = decompose(field, geom, 10, {}, Execution::parallel);
    for (int n = 0; n <= 10; ++n) {
        for (int m = 0; m <= 10; ++m) {
            CHECK(serial.at(n, m).real() == parallel.at(n, m).real());
            CHECK(serial.at(n, m).imag() == parallel.at(n, m).imag());
        }
    }
}

TEST_CASE("scale generator matrix elements match the Hermite-function oracle") {
    // G = -(x d/dx + 1/2) up to the factor i: <n+2|G|n> = i/2 sqrt((n+1)(n+2))
    // is checked against int h_{n+2}(t) (t h_n'(t) + h_n(t)/2) dt with
    // h_n' = sqrt(n/2) h_{n-1} - sqrt((n+1)/2) h_{n+1}.
    const GeneratorMatrix gen = generator(Generator::scale_x, geom, 10);
    for (int n = 0; n <= 6; ++n) {
        const auto integrand = [&](double t) {
            const double deriv = std::sqrt(n / 2.0) * (n > 0 ? hermite_function(n - 1, t) : 0.0) -
                                 std::sqrt((n + 1) / 2.0) * hermite_function(n + 1, t);
            return oracles::cplx(hermite_function(n + 2, t) *
                                 (t * deriv + 0.5 * hermite_function(n, t)));
        };
        const double oracle = -oracles::simpson_1d(integrand, -12.0, 12.0).real();
        const cplx element = gen.element({n + 2, 0}, {n, 0});
        CHECK(std::abs(element.real()) < 1e-12);
        CHECK(element.imag() == doctest::Approx(oracle).epsilon(1e-8));
        CHECK(element.imag() ==
              doctest::Approx(0.5 * std::sqrt((n + 1.0) * (n + 2.0))).epsilon(1e-12));
    }
    // Hermiticity across the +-2 band.
    const cplx up = gen.element({5, 3}, {3, 3});
    const cplx down = gen.element({3, 3}, {5, 3});
    CHECK(std::abs(up - std::conj(down)) < 1e-15);
}

TEST_CASE("shear generator carries the Gouy diagonal") {
    const GeneratorMatrix gen = generator(Generator::shear, geom, 6);
    // (2n+1)/(2 k w_x^2) + (2m+1)/(2 k w_y^2) = 1/(2 z_R) at (0,0) for equal
    // waists; the spec's iso geometry gives 884.194 per meter.
    const cplx diag = gen.element({0, 0}, {0, 0});
    CHECK(diag.imag() == 0.0);
    CHECK(diag.real() == doctest::Approx(1.0 / (2.0 * geom.rayleigh())).epsilon(1e-14));
    CHECK(diag.real() == doctest::Approx(884.194).epsilon(1e-5));
    // The two-step coupling mirrors P^2/2k: -sqrt((n+1)(n+2))/(2 k w_x^2).
    const cplx coupling = gen.element({2, 0}, {0, 0});
    CHECK(coupling.real() ==
          doctest::Approx(-std::sqrt(2.0) / (2.0 * geom.k() * geom.waist_x * geom.waist_x))
              .epsilon(1e-14));
}

TEST_CASE("generator rejects cutoffs below the two-step band") {
    CHECK_THROWS_AS(generator(Generator::scale_x, geom, 1), CutoffTooSmall);
    CHECK_NOTHROW(generator(Generator::scale_x, geom, 2));
}

TEST_CASE("evolution is unitary and reduces to the identity at zero") {
    const GeneratorMatrix gen = generator(Generator::scale_y, geom, 14);
    ModeVector state = ModeVector::basis(14, {0, 0});
    state.at(1, 3) = cplx(0.4, 0.2);
    state.at(0, 6) = cplx(-0.1, 0.3);
    const double norm = std::sqrt(state.norm_sq());

    const ModeVector still = apply_evolution(gen, 0.0, state);
    CHECK(std::abs(overlap(still, state) - state.norm_sq()) < 1e-15);

    bool warned = false;
    const ModeVector evolved = apply_evolution(gen, 0.15, state, &warned);
    CHECK_FALSE(warned);
    CHECK(std::sqrt(evolved.norm_sq()) == doctest::Approx(norm).epsilon(1e-10));

    apply_evolution(gen, 0.25, state, &warned);
    CHECK(warned);
}

TEST_CASE("first-order scale flow reproduces the analytic neighbor coefficients") {
    const GeneratorMatrix gen = generator(Generator::scale_x, geom, 8);
    const double eps = 1e-6;
    const ModeVector out = apply_evolution(gen, eps, ModeVector::basis(8, {0, 0}));
    // exp(-i eps G): the (2,0) amplitude is -i eps <2,0|G|0,0> = eps/sqrt(2)
    // to first order.
    CHECK(std::abs(out.at(2, 0) - cplx(eps / std::sqrt(2.0), 0.0)) < 1e-12 * eps + 1e-15);
    CHECK(std::abs(out.at(0, 2)) == 0.0);
}

TEST_CASE("exact squeeze coefficient matches the evolved flow and frozen values") {
    // Flow parameter for w -> (1+eps) w is log(1+eps) under the scale
    // generator; the closed form freezes the +-0.1 asymmetry.
    CHECK(squeeze_c2_exact(0.1) == doctest::Approx(0.0670390).epsilon(1e-5));
    CHECK(squeeze_c2_exact(-0.1) == doctest::Approx(-0.0740213).epsilon(1e-5));
    CHECK(std::abs(squeeze_c2_exact(-0.1)) > std::abs(squeeze_c2_exact(0.1)));
    CHECK(squeeze_c2_exact(0.0) == 0.0);

    const GeneratorMatrix gen = generator(Generator::scale_x, geom, 20);
    for (double eps : {-0.1, 0.05, 0.1}) {
        bool warned = false;
        const ModeVector out =
            apply_evolution(gen, std::log(1.0 + eps), ModeVector::basis(20, {0, 0}), &warned);
        CHECK(out.at(2, 0).real() == doctest::Approx(squeeze_c2_exact(eps)).epsilon(1e-9));
    }
}

TEST_CASE("mode converter layout follows the matched-beam closed forms") {
    const double f = converter_focal_length(150e-6, 125e-6);
    const double zr = constants::pi * 150e-6 * 150e-6 / 125e-6;
    CHECK(f == doctest::Approx(zr / (1.0 + 1.0 / std::sqrt(2.0))).epsilon(1e-14));
    CHECK(f == doctest::Approx(3.3125443e-4).epsilon(1e-6));
    CHECK(converter_lens_separation(f) == doctest::Approx(std::sqrt(2.0) * f).epsilon(1e-15));
}
