#include <doctest.h>

#include <cmath>
#include <complex>

#include "modeprobe/constants.hpp"
#include "modeprobe/detect.hpp"
#include "modeprobe/errors.hpp"
#include "modeprobe/types.hpp"
#include "modeprobe/weakmeas.hpp"

using namespace modeprobe;

namespace {

const BeamGeometry geom = BeamGeometry::make(125e-6, 150e-6);

InterferometerSetting default_ifm() {
    return InterferometerSetting::from_dark_probabilities(0.005, 0.005);
}

}  // namespace

TEST_CASE("scattered power clips to the central waist patch") {
    const double e1 = std::erf(1.0);
    CHECK(scattered_power(1.0, geom) == doctest::Approx(e1 * e1).epsilon(1e-14));
    CHECK(scattered_power(1.0, geom) == doctest::Approx(0.7101446264).epsilon(1e-9));

    const double e2 = std::erf(std::sqrt(2.0));
    CHECK(scattered_power(1.0, geom, ClipIntegrand::intensity) ==
          doctest::Approx(e2 * e2).epsilon(1e-14));
    CHECK(scattered_power(1.0, geom, ClipIntegrand::intensity) ==
          doctest::Approx(0.9110697462).epsilon(1e-9));

    // The clip ratio is waist-independent: the patch scales with the beam.
    const BeamGeometry narrow = BeamGeometry::make(125e-6, 40e-6);
    CHECK(scattered_power(2.5, narrow) == doctest::Approx(2.5 * e1 * e1).epsilon(1e-14));
}

TEST_CASE("photon number conventions differ by exactly 2 pi") {
    const double paper = photon_number(1e-6, 125e-6, 1.0, PhotonConvention::paper);
    const double physical = photon_number(1e-6, 125e-6, 1.0, PhotonConvention::physical);
    CHECK(paper == doctest::Approx(3.9537859e15).epsilon(1e-6));
    CHECK(paper / physical == doctest::Approx(2.0 * constants::pi).epsilon(1e-15));
    // Linear in power and bandwidth.
    CHECK(photon_number(2e-6, 125e-6, 1.0) == doctest::Approx(2.0 * paper).epsilon(1e-15));
    CHECK(photon_number(1e-6, 125e-6, 4.0) == doctest::Approx(paper / 4.0).epsilon(1e-15));
}

TEST_CASE("detection setting validation names bad fields") {
    DetectionSetting setting;
    setting.probe_power = -1.0;
    CHECK_THROWS_AS(setting.validate(), ConfigInvalid);
    setting = DetectionSetting{};
    setting.resolution_bandwidth = 0.0;
    CHECK_THROWS_AS(setting.validate(), ConfigInvalid);
    CHECK_NOTHROW(DetectionSetting{}.validate());
}

TEST_CASE("homodyne noise floor is the shot noise of the local oscillator") {
    const InterferometerSetting ifm = default_ifm();
    const WeakValueSet wv = weak_values(ifm);
    Deformation def;
    def.d_waist_y = 1e-13;
    const PortStates ports = port_states(ModeVector::basis(4, {0, 0}), def, ifm, geom);
    const DetectionSetting setting;
    const BhdSignal signal = bhd_signal(ports.dark1, 1, setting, wv, def, geom);

    const double n_lo = photon_number(setting.lo_power[0], setting.lo_wavelength[0],
                                      setting.resolution_bandwidth, setting.photon_convention);
    CHECK(signal.noise_std == doctest::Approx(std::sqrt(n_lo) / 2.0).epsilon(1e-14));
    CHECK(signal.mean > 0.0);
}

TEST_CASE("homodyne mean is linear in the deformation") {
    const InterferometerSetting ifm = default_ifm();
    const WeakValueSet wv = weak_values(ifm);
    const DetectionSetting setting;
    Deformation def;
    def.d_waist_y = 1e-13;
    const PortStates ports = port_states(ModeVector::basis(4, {0, 0}), def, ifm, geom);
    const double mean1 = bhd_signal(ports.dark1, 1, setting, wv, def, geom).mean;
    def.d_waist_y = 3e-13;
    const double mean3 = bhd_signal(ports.dark1, 1, setting, wv, def, geom).mean;
    CHECK(mean3 / mean1 == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("local oscillator mismatches are rejected") {
    const InterferometerSetting ifm = default_ifm();
    const WeakValueSet wv = weak_values(ifm);
    Deformation def;
    def.d_waist_y = 1e-13;
    const PortStates ports = port_states(ModeVector::basis(4, {0, 0}), def, ifm, geom);
    const DetectionSetting setting;
    // Port dark1 read out as if it were dark2.
    CHECK_THROWS_AS(bhd_signal(ports.dark1, 2, setting, wv, def, geom), LOMismatch);
    DetectionSetting detuned;
    detuned.lo_wavelength[0] = 126e-6;
    CHECK_THROWS_AS(bhd_signal(ports.dark1, 1, detuned, wv, def, geom), LOMismatch);
}

TEST_CASE("minimum measurable deformation closes the SNR = 1 loop") {
    const InterferometerSetting ifm = default_ifm();
    const WeakValueSet wv = weak_values(ifm);
    const DetectionSetting setting;
    const MMDResult result = mmd(setting, ifm, geom);

    Deformation def;
    def.d_waist_y = result.d_waist_y_min;
    def.d_waist_x = result.d_waist_x_min;
    def.d_z = result.d_z_min;
    const PortStates ports = port_states(ModeVector::basis(4, {0, 0}), def, ifm, geom);
    CHECK(bhd_signal(ports.dark1, 1, setting, wv, def, geom).snr() ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(bhd_signal(ports.dark2, 2, setting, wv, def, geom).snr() ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(bhd_signal(ports.bright2, 3, setting, wv, def, geom).snr() ==
          doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("frozen headline minima under the documented conventions") {
    const MMDResult paper = mmd(DetectionSetting{}, default_ifm(), geom);
    CHECK(paper.d_waist_x_min == doctest::Approx(0.899692e-12).epsilon(1e-6));
    CHECK(paper.d_waist_y_min == doctest::Approx(0.897428e-12).epsilon(1e-6));
    CHECK(paper.d_z_min == doctest::Approx(1.91867e-12).epsilon(1e-6));

    DetectionSetting physical;
    physical.photon_convention = PhotonConvention::physical;
    const MMDResult alt = mmd(physical, default_ifm(), geom);
    const double ratio = std::sqrt(2.0 * constants::pi);
    CHECK(alt.d_waist_x_min / paper.d_waist_x_min == doctest::Approx(ratio).epsilon(1e-12));
    CHECK(alt.d_waist_y_min / paper.d_waist_y_min == doctest::Approx(ratio).epsilon(1e-12));
    CHECK(alt.d_z_min / paper.d_z_min == doctest::Approx(ratio).epsilon(1e-12));
}

TEST_CASE("minima scale as inverse square root of the probe power") {
    DetectionSetting setting;
    const MMDResult base = mmd(setting, default_ifm(), geom);
    setting.probe_power *= 4.0;
    const MMDResult quad = mmd(setting, default_ifm(), geom);
    CHECK(quad.d_waist_y_min == doctest::Approx(base.d_waist_y_min / 2.0).epsilon(1e-14));
    CHECK(quad.d_z_min == doctest::Approx(base.d_z_min / 2.0).epsilon(1e-14));
}

TEST_CASE("higher-order probes divide the minima by the documented gains") {
    const InterferometerSetting ifm = default_ifm();
    DetectionSetting setting;
    const MMDResult base = mmd(setting, ifm, geom);

    setting.probe_order = ModeIndex{1, 0};
    const MMDResult g10 = mmd(setting, ifm, geom);
    CHECK(g10.d_waist_x_min / base.d_waist_x_min ==
          doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
    CHECK(g10.gain_x == doctest::Approx(3.0).epsilon(1e-15));

    setting.probe_order = ModeIndex{2, 2};
    const MMDResult g22 = mmd(setting, ifm, geom);
    CHECK(g22.d_waist_x_min / base.d_waist_x_min ==
          doctest::Approx(1.0 / std::sqrt(7.0)).epsilon(1e-12));
    CHECK(g22.d_waist_y_min / base.d_waist_y_min ==
          doctest::Approx(1.0 / std::sqrt(7.0)).epsilon(1e-12));
    CHECK(g22.d_z_min / base.d_z_min == doctest::Approx(1.0 / std::sqrt(7.0)).epsilon(1e-12));
}

TEST_CASE("postselection strength drops out of the dark-port minima") {
    // d_min ~ omega / (|A_W| sqrt(P_s) ...) and |A_W1| sqrt(P_s1) = cos(theta/2),
    // so the minimum depends on theta only through that cosine.
    DetectionSetting setting;
    double reference = 0.0;
    for (double p1 : {1e-4, 1e-3, 0.01, 0.05}) {
        const InterferometerSetting ifm =
            InterferometerSetting::from_dark_probabilities(p1, 0.005);
        const MMDResult r = mmd(setting, ifm, geom);
        const double theta = ifm.theta;
        const double invariant = r.d_waist_y_min * std::cos(theta / 2);
        if (reference == 0.0) {
            reference = invariant;
        }
        CHECK(invariant == doctest::Approx(reference).epsilon(1e-12));
    }
}
