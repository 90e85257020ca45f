#pragma once

#include "modeprobe/deform.hpp"
#include "modeprobe/hgbasis.hpp"
#include "modeprobe/types.hpp"

namespace modeprobe {

// Phase differences of the two cascaded interferometers.
struct InterferometerSetting {
    double theta = 0.0;  // rad, first interferometer
    double phi = 0.0;    // rad, second interferometer

    static InterferometerSetting make(double theta, double phi);
    // Chooses theta, phi such that the two dark ports carry postselection
    // probabilities p1 and p2 (requires p1, p2 > 0 and p1 + p2 < 1).
    static InterferometerSetting from_dark_probabilities(double p1, double p2);
};

// Weak values and postselection probabilities of the three monitored ports,
// computed from the explicit path states (equal superpositions preselected,
// postselection rotated by half the phase difference per arm).
struct WeakValueSet {
    cplx a_w1{0.0};  // i cot(theta/2)
    cplx a_w2{0.0};  // i cot(phi/2)
    cplx a_w3{0.0};  // 1
    double p_s1 = 0.0;  // sin^2(theta/2)
    double p_s2 = 0.0;  // cos^2(theta/2) sin^2(phi/2)
    double p_s3 = 0.0;  // cos^2(theta/2) cos^2(phi/2)
    // Postselection amplitudes <f_j|i_j>; P_sj = |<f_j|i_j>|^2.
    cplx fi1{0.0};
    cplx fi2{0.0};
    cplx fi3{0.0};
};

WeakValueSet weak_values(const InterferometerSetting& setting);

enum class Port { dark1, dark2, bright2 };

// One output of the interferometer chain. The physical field is
// prefactor * exp(i global_gouy_phase) * sum c_nm u_nm.
struct PortState {
    Port port = Port::dark1;
    cplx prefactor{0.0};
    ModeVector state;
    double global_gouy_phase = 0.0;
};

struct PortStates {
    PortState dark1;
    PortState dark2;
    PortState bright2;
};

struct PortOptions {
    // Ideal mode converters flip the phase of the signal-mode family; with
    // fidelity f < 1 the flip phase is pi f and the dark-port signal content
    // scales by (1 - e^{i pi f})/2. f = 1 leaves states untouched.
    double converter_fidelity = 1.0;
};

// Output states of the three monitored ports for a probe carrying the given
// deformation:
//   dark1   = i sin(theta/2) . exp(eps_y cot(theta/2) S_y) probe
//   dark2   = i sin(phi/2) cos(theta/2) . exp(eps_x cot(phi/2) S_x) probe
//   bright2 = cos(theta/2) cos(phi/2) . exp(-i dz G_shear) probe,
//             global Gouy phase -dz (1/(2 z_Rx) + 1/(2 z_Ry)) kept separate
// where exp(t S) is the real (unitary) waist-scaling flow, realized as
// apply_evolution(scale generator, t). Throws AmplifiedFlowDiverged when an
// amplified flow parameter |eps cot| exceeds 0.2.
PortStates port_states(const ModeVector& probe, const Deformation& def,
                       const InterferometerSetting& setting, const BeamGeometry& geom,
                       const PortOptions& options = {});

// The same ports derived along the field-evolution route, which keeps the
// pre-postselection unitary factors of the other deformations on each port
// (e.g. dark1 retains the x-scaling and shear flows in front). No global
// phase is split off. The two routes coincide on each port when the
// deformations the port does not monitor vanish.
PortStates port_states_field(const ModeVector& probe, const Deformation& def,
                             const InterferometerSetting& setting, const BeamGeometry& geom,
                             const PortOptions& options = {});

// Named entry point for probes with n, m > 0; forces coverage of the
// sqrt(n(n-1)) down-coupling absent for the fundamental probe.
PortStates higher_order_port_states(ModeIndex probe, int cutoff, const Deformation& def,
                                    const InterferometerSetting& setting,
                                    const BeamGeometry& geom, const PortOptions& options = {});

}  // namespace modeprobe
