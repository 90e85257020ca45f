#pragma once

#include <array>
#include <cstdint>

#include "modeprobe/detect.hpp"
#include "modeprobe/types.hpp"
#include "modeprobe/weakmeas.hpp"

namespace modeprobe {

enum class FisherKind { qfi, cfi_bhd, cfi_ad };

// 3x3 Fisher information matrix over the deformation vector
// g = (g1, g2, g3) = (d_waist_y, d_waist_x, d_z). All three kinds produced
// here are diagonal; entries carry units counts/m^2 on (1,1), (2,2) and
// counts/m^2 x 1/(k sigma)^2 x 1/sigma^2 on (3,3). Construction goes through
// diagonal(), which applies those unit scaffolds to dimensionless weights, so
// a dimensionally inconsistent matrix cannot be built.
class FisherMatrix {
  public:
    FisherKind kind() const { return kind_; }
    ModeIndex probe_order() const { return probe_; }
    double wv_magnitude() const { return wv_magnitude_; }
    double p_s() const { return p_s_; }
    double photon_count() const { return n_; }
    double sigma() const { return sigma_; }
    double wavenumber() const { return k_; }

    // 0-indexed; at(0, 0) is the paper's entry (1,1).
    double at(int i, int j) const;

    // entries = |A_W|^2 P_s N diag(c1/sigma^2, c2/sigma^2, c3/(k^2 sigma^4)).
    static FisherMatrix diagonal(FisherKind kind, ModeIndex probe, double wv_magnitude,
                                 double p_s, double n, double sigma, double k, double c1,
                                 double c2, double c3);

  private:
    FisherKind kind_ = FisherKind::qfi;
    ModeIndex probe_;
    double wv_magnitude_ = 0.0;
    double p_s_ = 0.0;
    double n_ = 0.0;
    double sigma_ = 0.0;
    double k_ = 0.0;
    std::array<double, 9> entries_{};
};

// Quantum Fisher information of the postselected state: diagonal weights
// (m^2+m+1, n^2+n+1, nu^2+nu+1) with nu = max(n, m); the y-deformation g1
// couples to the y mode index m.
FisherMatrix qfi(ModeIndex probe, double wv_magnitude, double p_s, double n, double sigma,
                 double k);

// Classical Fisher information of the balanced-homodyne readout: weights
// (1, 1, 1) independent of the probe order.
FisherMatrix cfi_bhd(ModeIndex probe, double wv_magnitude, double p_s, double n,
                     double sigma, double k);

// Classical Fisher information of the pi-flip array detector: waist entries
// carry the flip-overlap factor, the axial entry matches the BHD.
FisherMatrix cfi_ad(ModeIndex probe, double wv_magnitude, double p_s, double n,
                    double sigma, double k);

// |integral of u_00 u_20 over |x| > b  minus  integral over |x| < b| for the
// normalized 1D waist profiles, with the flip boundary b in units of the
// waist. The default boundary w0/2 sits on the u_2 node and evaluates to
// sqrt(2 sqrt(2/e)/pi) ~= 0.73899. Adaptive quadrature; scale-invariant.
double flip_overlap_factor(double boundary_waists);
double flip_overlap_factor();

enum class DetectorModel { bhd, ad };

struct MonteCarloResult {
    Deformation mean_estimate;
    // Sample variances ordered as (d_waist_y, d_waist_x, d_z), matching the
    // Fisher ordering g = (g1, g2, g3).
    std::array<double, 3> variance{};
};

// Draws `samples` Gaussian homodyne outcomes per port with the readout slope
// normalized so the per-sample information equals the corresponding CFI
// diagonal, inverts the linear signal model sample by sample, and returns the
// empirical mean and variance of the estimates. Counter-based generator:
// results are bit-identical for a fixed seed regardless of thread count.
MonteCarloResult monte_carlo_estimation(const Deformation& true_def,
                                        const DetectionSetting& setting,
                                        const InterferometerSetting& ifm,
                                        const BeamGeometry& geom, long long samples,
                                        std::uint64_t seed,
                                        DetectorModel detector = DetectorModel::bhd);

}  // namespace modeprobe
