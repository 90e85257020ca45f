#pragma once

#include <array>

#include "modeprobe/types.hpp"
#include "modeprobe/weakmeas.hpp"

namespace modeprobe {

// N = P lambda / (hbar c tau) as used by the sensitivity formulas, versus the
// textbook count P / (hbar omega tau); the two differ by exactly 2 pi.
enum class PhotonConvention { paper, physical };

// Integrand of the aperture ratio defining the scattered power: the printed
// form integrates the field amplitude, the variant its squared modulus.
enum class ClipIntegrand { amplitude, intensity };

struct DetectionSetting {
    double probe_power = 5e-6;          // W, before scattering
    double probe_wavelength = 125e-6;   // m
    double resolution_bandwidth = 1.0;  // Hz
    std::array<double, 3> lo_power{1e-3, 1e-3, 1e-3};  // W per BHD
    std::array<double, 3> lo_wavelength{125e-6, 125e-6, 125e-6};
    ModeIndex probe_order;
    PhotonConvention photon_convention = PhotonConvention::paper;
    ClipIntegrand clip = ClipIntegrand::amplitude;

    void validate() const;  // throws ConfigInvalid
};

// Minimum measurable deformations at SNR = 1 and the higher-order sensing
// gain factors divided out of them.
struct MMDResult {
    double d_waist_x_min = 0.0;  // m
    double d_waist_y_min = 0.0;  // m
    double d_z_min = 0.0;        // m
    double gain_x = 1.0;         // n^2 + n + 1
    double gain_y = 1.0;         // m^2 + m + 1
    double gain_z = 1.0;         // nu^2 + nu + 1, nu = max(n, m)
};

// Power scattered into the probe beam: P_in times the ratio of the u_00
// integral over the central |x| <= w_x, |y| <= w_y patch to the full-plane
// integral. The ratio is erf(1)^2 for the amplitude integrand and erf(sqrt 2)^2
// for the intensity variant, independent of the waists.
double scattered_power(double p_in, const BeamGeometry& geom,
                       ClipIntegrand integrand = ClipIntegrand::amplitude);

double photon_number(double power, double wavelength, double resolution_bandwidth,
                     PhotonConvention convention = PhotonConvention::paper);

// Mean and standard deviation of a balanced-homodyne photon-number difference
// over one resolution bandwidth, in counts.
struct BhdSignal {
    double mean = 0.0;
    double noise_std = 0.0;

    double snr() const {
        const double r = mean / noise_std;
        return r * r;
    }
};

// Homodyne readout of port `which` (1 = dark1 vs LO mode (n, m+2),
// 2 = dark2 vs (n+2, m), 3 = bright2 phase quadrature vs the carrier).
// mean = sqrt(N_LO) x deformation signal with the weak value and the
// higher-order gain applied; noise_std = sqrt(N_LO)/2 for a coherent probe.
BhdSignal bhd_signal(const PortState& port, int which, const DetectionSetting& setting,
                     const WeakValueSet& wv, const Deformation& def,
                     const BeamGeometry& geom);

// Deformations at which each port reaches SNR = 1.
MMDResult mmd(const DetectionSetting& setting, const InterferometerSetting& ifm,
              const BeamGeometry& geom);

}  // namespace modeprobe
