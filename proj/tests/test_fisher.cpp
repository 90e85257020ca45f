#include <doctest.h>

#include <cmath>
#include <complex>

#include "modeprobe/constants.hpp"
#include "modeprobe/errors.hpp"
#include "modeprobe/fisher.hpp"
#include "modeprobe/types.hpp"
#include "modeprobe/weakmeas.hpp"
#include "oracles.hpp"

using namespace modeprobe;

namespace {

const BeamGeometry geom = BeamGeometry::make(125e-6, 150e-6);

struct FisherInputs {
    double wv = 200.0;
    double p_s = 2.5e-5;
    double n = 1.4e16;
    double sigma = 1e-4;
    double k = 2.0 * constants::pi / 125e-6;
};

}  // namespace

TEST_CASE("flip overlap factor freezes to the closed form") {
    const double closed = std::sqrt(2.0 * std::sqrt(2.0 / std::exp(1.0)) / constants::pi);
    CHECK(flip_overlap_factor() == doctest::Approx(closed).epsilon(1e-7));
    CHECK(flip_overlap_factor() == doctest::Approx(0.7389651204).epsilon(1e-7));
    CHECK(flip_overlap_factor(0.5) == doctest::Approx(flip_overlap_factor()).epsilon(1e-14));
}

TEST_CASE("flip overlap factor against an independent Simpson oracle") {
    // Signed combination of u_00 u_20 over the three flip regions for unit
    // waist, evaluated with Hermite-function oracles: u_n(x) =
    // 2^{1/4} h_n(sqrt(2) x).
    for (double b : {0.3, 0.5, 0.9}) {
        const auto f = [&](double x) {
            return oracles::cplx(std::sqrt(2.0) * oracles::hermite_fn(0, std::sqrt(2.0) * x) *
                                 oracles::hermite_fn(2, std::sqrt(2.0) * x));
        };
        const double outer = 2.0 * oracles::simpson_1d(f, b, 14.0).real();
        const double inner = 2.0 * oracles::simpson_1d(f, 0.0, b).real();
        const double line = std::abs(outer - inner);
        const double expected = std::sqrt(line * std::sqrt(2.0 / constants::pi));
        CHECK(flip_overlap_factor(b) == doctest::Approx(expected).epsilon(1e-8));
    }
}

TEST_CASE("flip overlap factor peaks on the mode node and dies at infinity") {
    const double at_node = flip_overlap_factor(0.5);
    for (double b : {0.1, 0.3, 0.7, 1.2, 2.0}) {
        CHECK(flip_overlap_factor(b) <= at_node + 1e-12);
    }
    CHECK(flip_overlap_factor(8.0) < 1e-6);
}

TEST_CASE("information matrices share the printed prefactor and scaffolds") {
    const FisherInputs in;
    const FisherMatrix f = cfi_bhd({0, 0}, in.wv, in.p_s, in.n, in.sigma, in.k);
    const double pref = in.wv * in.wv * in.p_s * in.n;
    CHECK(f.at(0, 0) == doctest::Approx(pref / (in.sigma * in.sigma)).epsilon(1e-14));
    CHECK(f.at(1, 1) == doctest::Approx(pref / (in.sigma * in.sigma)).epsilon(1e-14));
    CHECK(f.at(2, 2) ==
          doctest::Approx(pref / (in.k * in.k * std::pow(in.sigma, 4))).epsilon(1e-14));
    CHECK(f.at(0, 1) == 0.0);
    CHECK(f.at(2, 0) == 0.0);

    // sigma scaling: waist entries go as 1/sigma^2, the axial one as 1/sigma^4.
    const FisherMatrix wide = cfi_bhd({0, 0}, in.wv, in.p_s, in.n, 2.0 * in.sigma, in.k);
    CHECK(f.at(0, 0) / wide.at(0, 0) == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(f.at(2, 2) / wide.at(2, 2) == doctest::Approx(16.0).epsilon(1e-13));
}

TEST_CASE("quantum information gains follow the mode indices") {
    const FisherInputs in;
    const FisherMatrix base = qfi({0, 0}, in.wv, in.p_s, in.n, in.sigma, in.k);
    const FisherMatrix ho = qfi({0, 1}, in.wv, in.p_s, in.n, in.sigma, in.k);
    // g1 couples to the y index m: (m^2+m+1) = 3 at m = 1; g2 keeps n = 0;
    // g3 takes nu = max(n, m) = 1.
    CHECK(ho.at(0, 0) / base.at(0, 0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(ho.at(1, 1) / base.at(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ho.at(2, 2) / base.at(2, 2) == doctest::Approx(3.0).epsilon(1e-14));

    const FisherMatrix h22 = qfi({2, 2}, in.wv, in.p_s, in.n, in.sigma, in.k);
    CHECK(h22.at(0, 0) / base.at(0, 0) == doctest::Approx(7.0).epsilon(1e-14));
}

TEST_CASE("homodyne information saturates the quantum bound on the carrier") {
    const FisherInputs in;
    const FisherMatrix q = qfi({0, 0}, in.wv, in.p_s, in.n, in.sigma, in.k);
    const FisherMatrix c = cfi_bhd({0, 0}, in.wv, in.p_s, in.n, in.sigma, in.k);
    for (int i = 0; i < 3; ++i) {
        CHECK(q.at(i, i) == c.at(i, i));
    }
}

TEST_CASE("array detection pays the flip overlap on the waist entries only") {
    const FisherInputs in;
    const FisherMatrix bhd = cfi_bhd({0, 0}, in.wv, in.p_s, in.n, in.sigma, in.k);
    const FisherMatrix ad = cfi_ad({0, 0}, in.wv, in.p_s, in.n, in.sigma, in.k);
    const double kappa = flip_overlap_factor();
    CHECK(ad.at(0, 0) / bhd.at(0, 0) == doctest::Approx(kappa).epsilon(1e-12));
    CHECK(ad.at(1, 1) / bhd.at(1, 1) == doctest::Approx(kappa).epsilon(1e-12));
    CHECK(ad.at(2, 2) == bhd.at(2, 2));
    // The BHD advantage on the waist parameters is about 35 percent.
    CHECK(bhd.at(0, 0) / ad.at(0, 0) - 1.0 == doctest::Approx(0.353244).epsilon(1e-3));
}

TEST_CASE("monte carlo estimation is reproducible and unbiased") {
    const InterferometerSetting ifm =
        InterferometerSetting::from_dark_probabilities(0.005, 0.005);
    const DetectionSetting setting;
    Deformation truth;
    truth.d_waist_y = 2e-13;
    truth.d_waist_x = -1e-13;
    truth.d_z = 5e-13;

    const MonteCarloResult a =
        monte_carlo_estimation(truth, setting, ifm, geom, 20000, 977);
    const MonteCarloResult b =
        monte_carlo_estimation(truth, setting, ifm, geom, 20000, 977);
    CHECK(a.mean_estimate.d_waist_y == b.mean_estimate.d_waist_y);
    CHECK(a.mean_estimate.d_waist_x == b.mean_estimate.d_waist_x);
    CHECK(a.mean_estimate.d_z == b.mean_estimate.d_z);
    CHECK(a.variance[0] == b.variance[0]);
    CHECK(a.variance[2] == b.variance[2]);

    // Mean within five standard errors of the truth on every component.
    const double se_y = std::sqrt(a.variance[0] / 20000.0);
    const double se_x = std::sqrt(a.variance[1] / 20000.0);
    const double se_z = std::sqrt(a.variance[2] / 20000.0);
    CHECK(std::abs(a.mean_estimate.d_waist_y - truth.d_waist_y) < 5.0 * se_y);
    CHECK(std::abs(a.mean_estimate.d_waist_x - truth.d_waist_x) < 5.0 * se_x);
    CHECK(std::abs(a.mean_estimate.d_z - truth.d_z) < 5.0 * se_z);

    const MonteCarloResult c =
        monte_carlo_estimation(truth, setting, ifm, geom, 20000, 978);
    CHECK(a.variance[0] != c.variance[0]);
}

TEST_CASE("monte carlo variance tracks the per-sample information") {
    const InterferometerSetting ifm =
        InterferometerSetting::from_dark_probabilities(0.005, 0.005);
    const DetectionSetting setting;
    const WeakValueSet wv = weak_values(ifm);
    const double n = photon_number(scattered_power(setting.probe_power, geom),
                                   setting.probe_wavelength, setting.resolution_bandwidth,
                                   setting.photon_convention);
    const Deformation truth;

    const long long samples = 100000;
    const MonteCarloResult r =
        monte_carlo_estimation(truth, setting, ifm, geom, samples, 31337);
    const double zr2 = 2.0 * geom.rayleigh();
    const double f1 = std::norm(wv.a_w1) * wv.p_s1 * n / (geom.waist_y * geom.waist_y);
    const double f3 = std::norm(wv.a_w3) * wv.p_s3 * n / (zr2 * zr2);
    CHECK(r.variance[0] * f1 == doctest::Approx(1.0).epsilon(0.03));
    CHECK(r.variance[2] * f3 == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("array-detector masking inflates only the waist variances") {
    const InterferometerSetting ifm =
        InterferometerSetting::from_dark_probabilities(0.005, 0.005);
    const DetectionSetting setting;
    const Deformation truth;
    const long long samples = 50000;

    const MonteCarloResult bhd = monte_carlo_estimation(truth, setting, ifm, geom, samples,
                                                        777, DetectorModel::bhd);
    const MonteCarloResult ad = monte_carlo_estimation(truth, setting, ifm, geom, samples,
                                                       777, DetectorModel::ad);
    // Same seed, same draws: the variance ratio is the exact mask.
    const double kappa = flip_overlap_factor();
    CHECK(ad.variance[0] / bhd.variance[0] == doctest::Approx(1.0 / kappa).epsilon(1e-12));
    CHECK(ad.variance[1] / bhd.variance[1] == doctest::Approx(1.0 / kappa).epsilon(1e-12));
    CHECK(ad.variance[2] == bhd.variance[2]);
}

TEST_CASE("monte carlo rejects undersized runs") {
    const InterferometerSetting ifm =
        InterferometerSetting::from_dark_probabilities(0.005, 0.005);
    CHECK_THROWS_AS(
        monte_carlo_estimation(Deformation{}, DetectionSetting{}, ifm, geom, 100, 1),
        ConfigInvalid);
}
