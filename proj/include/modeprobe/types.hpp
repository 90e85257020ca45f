#pragma once

#include <complex>
#include <string>
#include <vector>

namespace modeprobe {

using cplx = std::complex<double>;

enum class Execution { serial, parallel };

// Transverse mode index of a Hermite-Gaussian beam: n counts x nodes, m counts y nodes.
struct ModeIndex {
    int n = 0;
    int m = 0;

    int order() const { return n + m; }
    bool operator==(const ModeIndex&) const = default;
};

// Paraxial beam frame. Waists may differ per axis; all derived quantities are
// per axis as well (Rayleigh range z_R = pi w^2 / lambda, curvature, Gouy phase).
struct BeamGeometry {
    double wavelength = 0.0;  // m
    double waist_x = 0.0;     // m, 1/e^2 intensity radius at the waist
    double waist_y = 0.0;     // m

    static BeamGeometry make(double wavelength, double waist_x, double waist_y);
    static BeamGeometry make(double wavelength, double waist) {
        return make(wavelength, waist, waist);
    }

    double k() const;        // 2 pi / lambda
    double rayleigh_x() const;
    double rayleigh_y() const;
    // Harmonic mean of the per-axis Rayleigh ranges; equals z_R when the
    // waists coincide. Used where a single axial scale is needed.
    double rayleigh() const;

    double width_x(double z) const;  // w_x(z)
    double width_y(double z) const;
    double gouy_x(double z) const;   // atan(z / z_Rx)
    double gouy_y(double z) const;
    // 1/R_x(z); returning the inverse avoids the z = 0 singularity of R itself.
    double inv_curvature_x(double z) const;
    double inv_curvature_y(double z) const;
};

// Small deformation of the scatterer expressed through its effect on the
// scattered beam: relative waist changes and an axial waist displacement.
struct Deformation {
    double d_waist_x = 0.0;  // m, change of w_x
    double d_waist_y = 0.0;  // m
    double d_z = 0.0;        // m, waist position shift

    double eps_x(const BeamGeometry& g) const { return d_waist_x / g.waist_x; }
    double eps_y(const BeamGeometry& g) const { return d_waist_y / g.waist_y; }
};

// Throws DeformationOutOfRange beyond the hard cap |eps|, |dz|/z_R >= 0.5.
void check_deformation(const Deformation& def, const BeamGeometry& geom);
// True while the first-order model is trustworthy (|eps|, |dz|/z_R <= 0.05).
bool in_linear_regime(const Deformation& def, const BeamGeometry& geom);

// Complex coefficients over the HG modes (n, m), 0 <= n, m <= cutoff,
// stored dense in row-major (n, m) order.
class ModeVector {
  public:
    ModeVector() = default;
    explicit ModeVector(int cutoff);
    static ModeVector basis(int cutoff, ModeIndex idx);

    int cutoff() const { return cutoff_; }
    int dim() const { return (cutoff_ + 1) * (cutoff_ + 1); }

    cplx& at(int n, int m);
    const cplx& at(int n, int m) const;
    cplx at_or_zero(int n, int m) const;

    const std::vector<cplx>& raw() const { return c_; }
    std::vector<cplx>& raw() { return c_; }

    double norm_sq() const;
    bool is_normalized(double tol = 1e-10) const;

    ModeVector& operator+=(const ModeVector& other);
    ModeVector& operator*=(cplx factor);

    // Coefficient inner product <this|other>, conjugating this.
    cplx inner(const ModeVector& other) const;

    // Canonical CSV: header n,m,re,im then one row per mode sorted by (n, m),
    // 17 significant digits.
    std::string to_csv() const;
    static ModeVector from_csv(const std::string& text);

  private:
    int cutoff_ = 0;
    std::vector<cplx> c_;
};

// 17-significant-digit, locale-independent float text (round-trips a double).
std::string format_double(double v);

}  // namespace modeprobe
