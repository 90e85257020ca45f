#include "modeprobe/deform.hpp"

#include <cmath>

#include "modeprobe/errors.hpp"

namespace modeprobe {

ModeVector firstorder_decomposition(const Deformation& def, const BeamGeometry& geom,
                                    ModeIndex probe, const FirstOrderOptions& options,
                                    bool* linear_warning) {
    check_deformation(def, geom);
    if (linear_warning) *linear_warning = !in_linear_regime(def, geom);

    const int n = probe.n;
    const int m = probe.m;
    const int cutoff = std::max(n, m) + 2;
    ModeVector out(cutoff);

    const double ex = def.eps_x(geom);
    const double ey = def.eps_y(geom);
    const double dz = def.d_z;
    const double k = geom.k();
    const double gx = dz / (2.0 * k * geom.waist_x * geom.waist_x);  // = dz/(4 z_Rx)
    const double gy = dz / (2.0 * k * geom.waist_y * geom.waist_y);

    const double q =
        options.bookkeeping == DiagonalBookkeeping::five_quarters ? 1.25 : 1.5;
    // Diagonal phase: carrier minus i q dz [(2n+1)/(2 z_Rx) + (2m+1)/(2 z_Ry)];
    // written via 1/(2 k w^2) = 1/(4 z_R) per axis.
    const double diag =
        q * dz *
        ((2.0 * n + 1.0) / (k * geom.waist_x * geom.waist_x) +
         (2.0 * m + 1.0) / (k * geom.waist_y * geom.waist_y));
    out.at(n, m) = cplx{1.0, -diag};

    const cplx up_x = cplx{0.5 * ex, options.dz_ladder_terms ? gx : 0.0};
    const cplx dn_x = cplx{-0.5 * ex, options.dz_ladder_terms ? gx : 0.0};
    const cplx up_y = cplx{0.5 * ey, options.dz_ladder_terms ? gy : 0.0};
    const cplx dn_y = cplx{-0.5 * ey, options.dz_ladder_terms ? gy : 0.0};

    out.at(n + 2, m) += up_x * std::sqrt(double(n + 1) * (n + 2));
    if (n >= 2) out.at(n - 2, m) += dn_x * std::sqrt(double(n) * (n - 1));
    out.at(n, m + 2) += up_y * std::sqrt(double(m + 1) * (m + 2));
    if (m >= 2) out.at(n, m - 2) += dn_y * std::sqrt(double(m) * (m - 1));
    return out;
}

ModeVector exact_waist_scaling_coefficients(double eps, Axis axis, ModeIndex probe, int cutoff,
                                            const BeamGeometry& geom, const QuadratureSpec& spec,
                                            Execution exec) {
    if (std::abs(eps) >= 0.5) {
        throw DeformationOutOfRange("waist scaling beyond half the waist");
    }
    const double s = 1.0 + eps;
    const double norm = 1.0 / std::sqrt(s);
    const Field field = [&](double x, double y) {
        const double xs = axis == Axis::x ? x / s : x;
        const double ys = axis == Axis::y ? y / s : y;
        return norm * mode_amplitude(probe, xs, ys, 0.0, geom);
    };
    return decompose(field, geom, cutoff, spec, exec);
}

ModeVector exact_waist_shift_coefficients(double dz, const BeamGeometry& geom, ModeIndex probe,
                                          int cutoff, const QuadratureSpec& spec, Execution exec) {
    if (std::abs(dz) >= std::min(geom.rayleigh_x(), geom.rayleigh_y())) {
        throw DeformationOutOfRange("waist shift beyond the Rayleigh range");
    }
    const Field field = [&](double x, double y) { return mode_amplitude(probe, x, y, dz, geom); };
    return decompose(field, geom, cutoff, spec, exec);
}

double shift_global_gouy_phase(double dz, const BeamGeometry& geom, ModeIndex probe) {
    return -(probe.n + 0.5) * std::atan(dz / geom.rayleigh_x()) -
           (probe.m + 0.5) * std::atan(dz / geom.rayleigh_y());
}

double dz_diagonal_power_fraction(DiagonalBookkeeping bookkeeping) {
    const double q = bookkeeping == DiagonalBookkeeping::five_quarters ? 1.25 : 1.5;
    const double ladder = 1.0 / (2.0 * std::sqrt(2.0));
    return q * q / (q * q + 2.0 * ladder * ladder);
}

}  // namespace modeprobe
