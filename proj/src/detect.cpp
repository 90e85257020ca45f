#include "modeprobe/detect.hpp"

#include <cmath>
#include <string>

#include "modeprobe/constants.hpp"
#include "modeprobe/errors.hpp"

namespace modeprobe {

namespace {

double gain(int order) { return double(order) * order + order + 1.0; }

// Signal slope per unit deformation and per sqrt(N), i.e. the coefficient in
// mean = sqrt(N_LO) * slope * sqrt(N) * deformation.
double port_slope(int which, const DetectionSetting& setting, const WeakValueSet& wv,
                  const BeamGeometry& geom) {
    const int n = setting.probe_order.n, m = setting.probe_order.m;
    switch (which) {
        case 1:
            return std::abs(wv.a_w1) * std::sqrt(wv.p_s1) * std::sqrt(gain(m)) /
                   (std::sqrt(2.0) * geom.waist_y);
        case 2:
            return std::abs(wv.a_w2) * std::sqrt(wv.p_s2) * std::sqrt(gain(n)) /
                   (std::sqrt(2.0) * geom.waist_x);
        default:
            return 5.0 * std::abs(wv.a_w3) * std::sqrt(wv.p_s3) *
                   std::sqrt(gain(std::max(n, m))) / (4.0 * geom.rayleigh());
    }
}

}  // namespace

void DetectionSetting::validate() const {
    if (!(probe_power >= 0.0)) throw ConfigInvalid("probe power must be >= 0");
    if (!(probe_wavelength > 0.0)) throw ConfigInvalid("probe wavelength must be > 0");
    if (!(resolution_bandwidth > 0.0))
        throw ConfigInvalid("resolution bandwidth must be > 0");
    for (int j = 0; j < 3; ++j) {
        if (!(lo_power[j] >= 0.0)) throw ConfigInvalid("LO power must be >= 0");
        if (!(lo_wavelength[j] > 0.0)) throw ConfigInvalid("LO wavelength must be > 0");
    }
    if (probe_order.n < 0 || probe_order.m < 0)
        throw ConfigInvalid("probe order indices must be >= 0");
}

double scattered_power(double p_in, const BeamGeometry& geom, ClipIntegrand integrand) {
    (void)geom;  // the clip limits scale with the waists, so the ratio is fixed
    const double edge = integrand == ClipIntegrand::amplitude ? 1.0 : std::sqrt(2.0);
    const double per_axis = std::erf(edge);
    return p_in * per_axis * per_axis;
}

double photon_number(double power, double wavelength, double resolution_bandwidth,
                     PhotonConvention convention) {
    double n = power * wavelength /
               (constants::hbar * constants::speed_of_light * resolution_bandwidth);
    if (convention == PhotonConvention::physical) n /= 2.0 * constants::pi;
    return n;
}

BhdSignal bhd_signal(const PortState& port, int which, const DetectionSetting& setting,
                     const WeakValueSet& wv, const Deformation& def,
                     const BeamGeometry& geom) {
    setting.validate();
    if (which < 1 || which > 3) throw ConfigInvalid("BHD index must be 1, 2, or 3");
    const Port expected = which == 1   ? Port::dark1
                          : which == 2 ? Port::dark2
                                       : Port::bright2;
    if (port.port != expected)
        throw LOMismatch("BHD " + std::to_string(which) +
                         " local oscillator does not match the supplied port");
    const double rel_wavelength =
        std::abs(setting.lo_wavelength[which - 1] - setting.probe_wavelength) /
        setting.probe_wavelength;
    if (rel_wavelength > 1e-9)
        throw LOMismatch("local oscillator wavelength differs from the probe");

    const double n_lo = photon_number(setting.lo_power[which - 1],
                                      setting.lo_wavelength[which - 1],
                                      setting.resolution_bandwidth, setting.photon_convention);
    const double n_probe =
        photon_number(scattered_power(setting.probe_power, geom, setting.clip),
                      setting.probe_wavelength, setting.resolution_bandwidth,
                      setting.photon_convention);
    const double deformation = which == 1   ? def.d_waist_y
                               : which == 2 ? def.d_waist_x
                                            : def.d_z;
    // Relative waist deformations divide by the waist inside the slope.
    const double mean = std::sqrt(n_lo) * port_slope(which, setting, wv, geom) *
                        std::sqrt(n_probe) * deformation;
    return {mean, std::sqrt(n_lo) / 2.0};
}

MMDResult mmd(const DetectionSetting& setting, const InterferometerSetting& ifm,
              const BeamGeometry& geom) {
    setting.validate();
    const WeakValueSet wv = weak_values(ifm);
    const double n_probe =
        photon_number(scattered_power(setting.probe_power, geom, setting.clip),
                      setting.probe_wavelength, setting.resolution_bandwidth,
                      setting.photon_convention);
    MMDResult out;
    out.gain_x = gain(setting.probe_order.n);
    out.gain_y = gain(setting.probe_order.m);
    out.gain_z = gain(std::max(setting.probe_order.n, setting.probe_order.m));
    // SNR = 1 inverts mean = noise_std, i.e. deformation = 1/(2 slope sqrt(N)).
    out.d_waist_y_min = 0.5 / (port_slope(1, setting, wv, geom) * std::sqrt(n_probe));
    out.d_waist_x_min = 0.5 / (port_slope(2, setting, wv, geom) * std::sqrt(n_probe));
    out.d_z_min = 0.5 / (port_slope(3, setting, wv, geom) * std::sqrt(n_probe));
    return out;
}

}  // namespace modeprobe
