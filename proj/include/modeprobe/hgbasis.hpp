#pragma once

#include <cmath>
#include <functional>

#include "modeprobe/quadrature.hpp"
#include "modeprobe/types.hpp"

namespace modeprobe {

// Physicists' Hermite polynomial H_n(x) by the stable three-term recurrence
// H_{n+1} = 2x H_n - 2n H_{n-1}.
double hermite(int n, double x);

// Orthonormal Hermite functions h_n(t) = H_n(t) exp(-t^2/2) /
// sqrt(2^n n! sqrt(pi)); numerically stable to n of a few hundred because the
// recurrence acts on the normalized functions directly.
double hermite_function(int n, double t);

// Transverse HG amplitude u_nm(x, y, z) for a beam with (possibly distinct)
// per-axis waists: a separable product of two 1D factors, each carrying
// 1/sqrt(w(z)) normalization, Gaussian envelope, curvature phase
// exp(+i k s^2 / 2R) and its own Gouy phase exp(-i (n + 1/2) atan(z/z_R)).
// Normalized so that int |u_nm|^2 dx dy = 1 at every z; at z = 0 all phase
// factors reduce to 1.
cplx mode_amplitude(ModeIndex idx, double x, double y, double z, const BeamGeometry& geom);

// 1D waist-plane factor u_n(x) = 2^{1/4} h_n(sqrt(2) x / w) / sqrt(w).
double hg_waist_factor_1d(int n, double x, double waist);

using Field = std::function<cplx(double, double)>;

// <f|g> = int f^* g dx dy at z = 0 by Gauss-Hermite quadrature on the
// waist-scaled node grid. Throws QuadratureUnconverged if doubling the node
// count moves the result by more than rel_tol (relative to the geometric
// mean of the two field norms, so near-orthogonal pairs do not trip it).
cplx overlap(const Field& f, const Field& g, const BeamGeometry& geom,
             const QuadratureSpec& spec = {});

// ModeVector overload: the same inner product evaluated on coefficients.
cplx overlap(const ModeVector& f, const ModeVector& g);

// Decompose a field at z = 0 into HG coefficients c_nm = int u_nm^* f dx dy
// by separable Gauss-Hermite quadrature. Deterministic: parallel and serial
// execution produce bit-identical coefficients (per-mode sums run in a fixed
// order).
ModeVector decompose(const Field& field, const BeamGeometry& geom, int cutoff,
                     const QuadratureSpec& spec = {},
                     Execution exec = Execution::parallel);

// Infinitesimal generators of waist-plane mode transformations.
enum class Generator {
    scale_x,  // waist increase along x: (-iG) couples (n,m) -> (n+-2,m)
    scale_y,
    shear,    // free propagation P^2/2k: Gouy diagonal plus two-step coupling
};

// Hermitian generator over the truncated basis, stored implicitly through its
// band structure. scale_x: <n+2,m|G|n,m> = +i/2 sqrt((n+1)(n+2)),
// <n-2,m|G|n,m> = -i/2 sqrt(n(n-1)); scale_y the same in m; shear has real
// diagonal (2n+1)/(2kw_x^2) + (2m+1)/(2kw_y^2) and couplings
// -sqrt((n+1)(n+2))/(2kw_x^2) to (n+2,m) etc.
class GeneratorMatrix {
  public:
    Generator kind() const { return kind_; }
    int cutoff() const { return cutoff_; }
    const BeamGeometry& geometry() const { return geom_; }

    cplx element(ModeIndex row, ModeIndex col) const;
    // y = G x over the truncated basis (outflow above the cutoff projected
    // away on both sides, so the truncation stays Hermitian).
    ModeVector apply(const ModeVector& x) const;

  private:
    friend GeneratorMatrix generator(Generator, const BeamGeometry&, int);
    Generator kind_ = Generator::scale_x;
    int cutoff_ = 0;
    BeamGeometry geom_;
};

// Throws CutoffTooSmall if cutoff < 2 (the flows act in steps of two).
GeneratorMatrix generator(Generator kind, const BeamGeometry& geom, int cutoff);

// exp(-i parameter G) |state> by a truncated Taylor series on the sparse
// generator action; terms stop once the dropped tail is below 1e-14 of the
// state norm. Throws NormLeakage if the output norm drifts by more than 1e-4.
// |parameter| > 0.2 is outside the intended regime; it is still evaluated but
// flags *regime_warning when provided.
ModeVector apply_evolution(const GeneratorMatrix& gen, double parameter,
                           const ModeVector& state, bool* regime_warning = nullptr);

// Closed-form (0,0) -> (2,0) coefficient for an exact waist change
// w -> (1 + eps) w, derived from the one-mode squeeze:
// c2 = sqrt(s) (s^2 - 1) / (s^2 + 1)^{3/2} with s = 1 + eps.
double squeeze_c2_exact(double eps);

// Focal length of the cylindrical-lens mode converter matched to the beam:
// f = z_R / (1 + 1/sqrt(2)) with z_R = pi w0^2 / lambda.
double converter_focal_length(double waist, double wavelength);

// The two lenses sit sqrt(2) f apart.
inline double converter_lens_separation(double focal_length) {
    return std::sqrt(2.0) * focal_length;
}

}  // namespace modeprobe
