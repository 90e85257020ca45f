#include "modeprobe/weakmeas.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "modeprobe/constants.hpp"
#include "modeprobe/errors.hpp"

namespace modeprobe {

namespace {

constexpr cplx iu{0.0, 1.0};
constexpr double pi = constants::pi;

// Inner product <a|b> on small fixed-size path-state vectors.
template <std::size_t N>
cplx dot(const std::array<cplx, N>& a, const std::array<cplx, N>& b) {
    cplx s{0.0};
    for (std::size_t i = 0; i < N; ++i) s += std::conj(a[i]) * b[i];
    return s;
}

template <std::size_t N>
cplx matrix_element(const std::array<cplx, N>& f, const std::array<double, N>& diag,
                    const std::array<cplx, N>& i) {
    cplx s{0.0};
    for (std::size_t k = 0; k < N; ++k) s += std::conj(f[k]) * diag[k] * i[k];
    return s;
}

void check_closed_form(cplx got, cplx want, const char* what) {
    if (std::abs(got - want) > 1e-12 * std::max(1.0, std::abs(want)))
        throw Error(std::string("weak value closed form violated for ") + what);
}

// Scales the component of state orthogonal to the carrier by the converter
// transmission (1 - e^{i pi f})/2. An ideal converter (f = 1) flips the
// signal phase by pi and transmits it fully; the identity is kept bitwise.
void apply_converter(ModeVector& state, const ModeVector& carrier, double fidelity) {
    if (fidelity == 1.0) return;
    const cplx chi = (1.0 - std::exp(iu * pi * fidelity)) / 2.0;
    const cplx overlap = carrier.inner(state);
    for (int n = 0; n <= state.cutoff(); ++n)
        for (int m = 0; m <= state.cutoff(); ++m) {
            const cplx c = carrier.at_or_zero(n, m) * overlap;
            state.at(n, m) = c + chi * (state.at(n, m) - c);
        }
}

ModeVector flow(Generator kind, double parameter, const ModeVector& state,
                const BeamGeometry& geom) {
    const auto gen = generator(kind, geom, state.cutoff());
    return apply_evolution(gen, parameter, state);
}

void check_amplified(double parameter, const char* port) {
    if (std::abs(parameter) > 0.2)
        throw AmplifiedFlowDiverged(std::string("amplified flow parameter ") +
                                    format_double(parameter) + " at " + port +
                                    " exceeds 0.2");
}

}  // namespace

InterferometerSetting InterferometerSetting::make(double theta, double phi) {
    if (!(theta > 0.0) || !(theta < pi) || !(phi > 0.0) || !(phi < pi))
        throw ConfigInvalid("interferometer phases must lie strictly between 0 and pi");
    return {theta, phi};
}

InterferometerSetting InterferometerSetting::from_dark_probabilities(double p1, double p2) {
    if (!(p1 > 0.0) || !(p2 > 0.0) || !(p1 + p2 < 1.0))
        throw ConfigInvalid("dark-port probabilities must be positive and sum below 1");
    const double theta = 2.0 * std::asin(std::sqrt(p1));
    const double phi = 2.0 * std::asin(std::sqrt(p2 / (1.0 - p1)));
    return make(theta, phi);
}

WeakValueSet weak_values(const InterferometerSetting& setting) {
    const double th = setting.theta / 2.0, ph = setting.phi / 2.0;
    const cplx eth = std::exp(iu * th), eph = std::exp(iu * ph);
    const double r = 1.0 / std::sqrt(2.0);

    // First interferometer: path basis (L, R), preselected in the equal
    // superposition, postselected on the dark output.
    const std::array<cplx, 2> i1{r, r};
    const std::array<cplx, 2> f1{eth * r, -std::conj(eth) * r};
    const std::array<double, 2> a1{1.0, -1.0};

    // Cascade: basis (L1 L2, L1 R2, R1 L2, R1 R2). The second interferometer
    // receives the bright output of the first; A acts on its own paths only.
    const std::array<cplx, 4> i2{0.5, 0.5, 0.5, 0.5};
    const std::array<cplx, 4> f2{eth * eph * 0.5, -eth * std::conj(eph) * 0.5,
                                 std::conj(eth) * eph * 0.5,
                                 -std::conj(eth) * std::conj(eph) * 0.5};
    const std::array<cplx, 4> f3{eth * eph * 0.5, eth * std::conj(eph) * 0.5,
                                 std::conj(eth) * eph * 0.5,
                                 std::conj(eth) * std::conj(eph) * 0.5};
    const std::array<double, 4> a2{1.0, -1.0, 1.0, -1.0};
    const std::array<double, 4> a3{1.0, 1.0, 1.0, 1.0};

    WeakValueSet out;
    out.fi1 = dot(f1, i1);
    out.fi2 = dot(f2, i2);
    out.fi3 = dot(f3, i2);
    out.a_w1 = matrix_element(f1, a1, i1) / out.fi1;
    out.a_w2 = matrix_element(f2, a2, i2) / out.fi2;
    out.a_w3 = matrix_element(f3, a3, i2) / out.fi3;
    out.p_s1 = std::norm(out.fi1);
    out.p_s2 = std::norm(out.fi2);
    out.p_s3 = std::norm(out.fi3);

    check_closed_form(out.a_w1, iu / std::tan(th), "A_W1");
    check_closed_form(out.a_w2, iu / std::tan(ph), "A_W2");
    check_closed_form(out.a_w3, 1.0, "A_W3");
    check_closed_form(out.p_s1, std::sin(th) * std::sin(th), "P_s1");
    check_closed_form(out.p_s2, std::cos(th) * std::cos(th) * std::sin(ph) * std::sin(ph),
                      "P_s2");
    check_closed_form(out.p_s3, std::cos(th) * std::cos(th) * std::cos(ph) * std::cos(ph),
                      "P_s3");
    return out;
}

PortStates port_states(const ModeVector& probe, const Deformation& def,
                       const InterferometerSetting& setting, const BeamGeometry& geom,
                       const PortOptions& options) {
    if (options.converter_fidelity < 0.0 || options.converter_fidelity > 1.0)
        throw ConfigInvalid("converter fidelity must lie in [0, 1]");
    check_deformation(def, geom);
    const double th = setting.theta / 2.0, ph = setting.phi / 2.0;
    const double ty = def.eps_y(geom) / std::tan(th);
    const double tx = def.eps_x(geom) / std::tan(ph);
    check_amplified(ty, "dark1");
    check_amplified(tx, "dark2");

    PortStates out;
    out.dark1 = {Port::dark1, iu * std::sin(th), flow(Generator::scale_y, ty, probe, geom),
                 0.0};
    out.dark2 = {Port::dark2, iu * std::sin(ph) * std::cos(th),
                 flow(Generator::scale_x, tx, probe, geom), 0.0};
    out.bright2 = {Port::bright2, cplx{std::cos(th) * std::cos(ph)},
                   flow(Generator::shear, def.d_z, probe, geom),
                   -def.d_z * (0.5 / geom.rayleigh_x() + 0.5 / geom.rayleigh_y())};
    apply_converter(out.dark1.state, probe, options.converter_fidelity);
    apply_converter(out.dark2.state, probe, options.converter_fidelity);

    // The unused bright output of the first interferometer carries the
    // deamplified flow; together with dark1 it must preserve the power
    // entering the second interferometer.
    const ModeVector bright1 =
        flow(Generator::scale_y, -def.eps_y(geom) * std::tan(th), probe, geom);
    const double total = std::sin(th) * std::sin(th) * out.dark1.state.norm_sq() +
                         std::cos(th) * std::cos(th) * bright1.norm_sq();
    if (options.converter_fidelity == 1.0 && std::abs(total - 1.0) > 1e-6)
        throw NormLeakage("port power conservation violated: total " + format_double(total));
    return out;
}

PortStates port_states_field(const ModeVector& probe, const Deformation& def,
                             const InterferometerSetting& setting, const BeamGeometry& geom,
                             const PortOptions& options) {
    if (options.converter_fidelity < 0.0 || options.converter_fidelity > 1.0)
        throw ConfigInvalid("converter fidelity must lie in [0, 1]");
    check_deformation(def, geom);
    const double th = setting.theta / 2.0, ph = setting.phi / 2.0;
    const double ey = def.eps_y(geom), ex = def.eps_x(geom);
    const double ty = ey / std::tan(th);
    const double tx = ex / std::tan(ph);
    check_amplified(ty, "dark1");
    check_amplified(tx, "dark2");

    // Joint exponentials of non-monitored factors are split with the shear
    // leftmost; the orders agree to first order in the deformations.
    PortStates out;
    out.dark1 = {Port::dark1, iu * std::sin(th),
                 flow(Generator::shear, def.d_z,
                      flow(Generator::scale_x, ex, flow(Generator::scale_y, ty, probe, geom),
                           geom),
                      geom),
                 0.0};
    out.dark2 = {Port::dark2, iu * std::sin(ph) * std::cos(th),
                 flow(Generator::shear, def.d_z,
                      flow(Generator::scale_x, tx,
                           flow(Generator::scale_y, -ey * std::tan(th), probe, geom), geom),
                      geom),
                 0.0};
    out.bright2 = {Port::bright2, cplx{std::cos(th) * std::cos(ph)},
                   flow(Generator::shear, def.d_z,
                        flow(Generator::scale_x, -ex * std::tan(ph),
                             flow(Generator::scale_y, -ey * std::tan(th), probe, geom), geom),
                        geom),
                   -def.d_z * (0.5 / geom.rayleigh_x() + 0.5 / geom.rayleigh_y())};
    apply_converter(out.dark1.state, probe, options.converter_fidelity);
    apply_converter(out.dark2.state, probe, options.converter_fidelity);
    return out;
}

PortStates higher_order_port_states(ModeIndex probe, int cutoff, const Deformation& def,
                                    const InterferometerSetting& setting,
                                    const BeamGeometry& geom, const PortOptions& options) {
    if (cutoff < probe.order() + 2)
        throw CutoffTooSmall("port cutoff must exceed the probe order by at least 2");
    return port_states(ModeVector::basis(cutoff, probe), def, setting, geom, options);
}

}  // namespace modeprobe
