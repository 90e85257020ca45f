#pragma once

#include "modeprobe/hgbasis.hpp"
#include "modeprobe/quadrature.hpp"
#include "modeprobe/types.hpp"

namespace modeprobe {

enum class Axis { x, y };

// Two bookkeepings are in circulation for the dz-induced diagonal phase of
// the first-order model; they differ in how much of the global Gouy phase is
// absorbed into c(n,m). Off-diagonal coefficients agree. Both apply
//   c(n,m) -= i q dz [(2n+1)/(2 z_Rx) + (2m+1)/(2 z_Ry)]
// with q = 5/4 or q = 3/2; at probe (0,0) with equal waists these reduce to
// 1 - i (5/4) dz/z_R and 1 - i (3/2) dz/z_R respectively.
enum class DiagonalBookkeeping { five_quarters, three_halves };

struct FirstOrderOptions {
    DiagonalBookkeeping bookkeeping = DiagonalBookkeeping::five_quarters;
    // The dz-induced (n+-2, m) and (n, m+-2) ladder terms are a factor
    // ~ dz/(4 z_R) below the diagonal one; dropping them reproduces the
    // bright-port approximation.
    bool dz_ladder_terms = true;
};

// First-order mode content induced on an HG probe by a small deformation:
//   c(n+2,m) = [ eps_x/2 + i dz/(2 k w_x^2)] sqrt((n+1)(n+2))
//   c(n-2,m) = [-eps_x/2 + i dz/(2 k w_x^2)] sqrt(n(n-1))
// (same in m with w_y), plus the diagonal phase selected above; the carrier
// keeps c(probe) = 1 + diagonal term. Cutoff is probe order + 2. Sets
// *linear_warning when the deformation leaves the linear regime.
ModeVector firstorder_decomposition(const Deformation& def, const BeamGeometry& geom,
                                    ModeIndex probe, const FirstOrderOptions& options = {},
                                    bool* linear_warning = nullptr);

// Exact coefficients of the rescaled field (1/sqrt(1+eps)) u_probe(x/(1+eps), y)
// (or the y analogue) by quadrature. Throws DeformationOutOfRange for
// |eps| >= 0.5 and QuadratureUnconverged per the spec in `spec`.
ModeVector exact_waist_scaling_coefficients(double eps, Axis axis, ModeIndex probe, int cutoff,
                                            const BeamGeometry& geom,
                                            const QuadratureSpec& spec = {},
                                            Execution exec = Execution::parallel);

// Exact coefficients of the waist-shifted field u_probe(x, y, dz) evaluated
// in the z = 0 plane (width growth, curvature phase, per-axis Gouy phases
// all retained). Positive dz means the evaluation plane sits downstream of
// the waist. Throws DeformationOutOfRange for |dz| >= z_R.
ModeVector exact_waist_shift_coefficients(double dz, const BeamGeometry& geom, ModeIndex probe,
                                          int cutoff, const QuadratureSpec& spec = {},
                                          Execution exec = Execution::parallel);

// First-order-in-dz global Gouy phase of the shifted field,
// -(n+1/2) atan(dz/z_Rx) - (m+1/2) atan(dz/z_Ry); callers that want the
// "mode content only" view divide it out of exact_waist_shift_coefficients.
double shift_global_gouy_phase(double dz, const BeamGeometry& geom, ModeIndex probe);

// Power fraction of the diagonal (carrier-phase) component among all
// dz-induced first-order terms for probe (0,0):
// q^2 / (q^2 + 2 (1/(2 sqrt 2))^2), i.e. 25/29 for q = 5/4 and 9/10 for
// q = 3/2.
double dz_diagonal_power_fraction(
    DiagonalBookkeeping bookkeeping = DiagonalBookkeeping::five_quarters);

}  // namespace modeprobe
