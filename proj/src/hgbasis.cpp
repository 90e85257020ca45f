#include "modeprobe/hgbasis.hpp"

#include <cmath>
#include <vector>

#include "modeprobe/constants.hpp"
#include "modeprobe/errors.hpp"

namespace modeprobe {

double hermite(int n, double x) {
    if (n < 0) throw ConfigInvalid("Hermite order must be non-negative");
    double hm = 1.0;
    if (n == 0) return hm;
    double h = 2.0 * x;
    for (int j = 1; j < n; ++j) {
        const double next = 2.0 * x * h - 2.0 * j * hm;
        hm = h;
        h = next;
    }
    return h;
}

double hermite_function(int n, double t) {
    if (n < 0) throw ConfigInvalid("Hermite order must be non-negative");
    // h_0 = pi^{-1/4} exp(-t^2/2); h_{j+1} = t sqrt(2/(j+1)) h_j - sqrt(j/(j+1)) h_{j-1}.
    double hm = 0.0;
    double h = std::exp(-0.5 * t * t) / std::pow(constants::pi, 0.25);
    for (int j = 0; j < n; ++j) {
        const double next =
            t * std::sqrt(2.0 / (j + 1)) * h - std::sqrt(static_cast<double>(j) / (j + 1)) * hm;
        hm = h;
        h = next;
    }
    return h;
}

double hg_waist_factor_1d(int n, double x, double waist) {
    return std::pow(2.0, 0.25) * hermite_function(n, std::sqrt(2.0) * x / waist) / std::sqrt(waist);
}

cplx mode_amplitude(ModeIndex idx, double x, double y, double z, const BeamGeometry& geom) {
    const double wx = geom.width_x(z);
    const double wy = geom.width_y(z);
    const double k = geom.k();
    const double mag = hg_waist_factor_1d(idx.n, x, wx) * hg_waist_factor_1d(idx.m, y, wy);
    const double phase = 0.5 * k * x * x * geom.inv_curvature_x(z) +
                         0.5 * k * y * y * geom.inv_curvature_y(z) -
                         (idx.n + 0.5) * geom.gouy_x(z) - (idx.m + 0.5) * geom.gouy_y(z);
    return mag * std::exp(cplx{0.0, phase});
}

namespace {

// Double integral sum_{j,k} w_j w_k f*(x_j, y_k) g(x_j, y_k) on the
// waist-scaled grid, returning also the two field norms for scale guards.
struct OverlapSums {
    cplx fg{0.0, 0.0};
    double ff = 0.0;
    double gg = 0.0;
};

OverlapSums overlap_sums(const Field& f, const Field& g, const BeamGeometry& geom, int nodes) {
    const GaussHermiteRule rule = GaussHermiteRule::make(nodes);
    const double sx = geom.waist_x / std::sqrt(2.0);
    const double sy = geom.waist_y / std::sqrt(2.0);
    OverlapSums s;
    for (int j = 0; j < nodes; ++j) {
        const double x = rule.nodes[j] * sx;
        for (int k = 0; k < nodes; ++k) {
            const double y = rule.nodes[k] * sy;
            const double w = rule.weights[j] * rule.weights[k];
            const cplx fv = f(x, y);
            const cplx gv = g(x, y);
            s.fg += w * std::conj(fv) * gv;
            s.ff += w * std::norm(fv);
            s.gg += w * std::norm(gv);
        }
    }
    const double jac = sx * sy;
    s.fg *= jac;
    s.ff *= jac;
    s.gg *= jac;
    return s;
}

}  // namespace

cplx overlap(const Field& f, const Field& g, const BeamGeometry& geom, const QuadratureSpec& spec) {
    const OverlapSums coarse = overlap_sums(f, g, geom, spec.nodes);
    if (!spec.check_convergence) return coarse.fg;
    const OverlapSums fine = overlap_sums(f, g, geom, 2 * spec.nodes);
    // Near-orthogonal pairs give |fg| ~ 0; judge convergence against the
    // geometric mean of the field norms instead of the tiny result itself.
    const double scale = std::max(std::abs(fine.fg), std::sqrt(std::max(fine.ff * fine.gg, 0.0)));
    if (std::abs(coarse.fg - fine.fg) > spec.rel_tol * std::max(scale, 1e-30)) {
        throw QuadratureUnconverged("doubling the node count moved the overlap by more than rel_tol");
    }
    return coarse.fg;
}

cplx overlap(const ModeVector& f, const ModeVector& g) { return f.inner(g); }

namespace {

// Row-major tables of the 1D waist factors over the quadrature grid:
// vals[n * npts + j] = u_n(pts[j]).
std::vector<double> factor_table(int cutoff, const std::vector<double>& pts, double waist) {
    const int npts = static_cast<int>(pts.size());
    std::vector<double> vals(static_cast<size_t>(cutoff + 1) * npts);
    for (int j = 0; j < npts; ++j) {
        const double t = std::sqrt(2.0) * pts[j] / waist;
        const double scale = std::pow(2.0, 0.25) / std::sqrt(waist);
        double hm = 0.0;
        double h = std::exp(-0.5 * t * t) / std::pow(constants::pi, 0.25);
        vals[j] = scale * h;
        for (int n = 0; n < cutoff; ++n) {
            const double next =
                t * std::sqrt(2.0 / (n + 1)) * h - std::sqrt(static_cast<double>(n) / (n + 1)) * hm;
            hm = h;
            h = next;
            vals[static_cast<size_t>(n + 1) * npts + j] = scale * h;
        }
    }
    return vals;
}

ModeVector decompose_with_nodes(const Field& field, const BeamGeometry& geom, int cutoff,
                                int nodes, Execution exec) {
    const GaussHermiteRule rule = GaussHermiteRule::make(nodes);
    const int nq = nodes;
    const double sx = geom.waist_x / std::sqrt(2.0);
    const double sy = geom.waist_y / std::sqrt(2.0);

    std::vector<double> xs(nq), ys(nq);
    for (int j = 0; j < nq; ++j) {
        xs[j] = rule.nodes[j] * sx;
        ys[j] = rule.nodes[j] * sy;
    }

    std::vector<cplx> f(static_cast<size_t>(nq) * nq);
    const bool par = exec == Execution::parallel;
#pragma omp parallel for schedule(static) if (par)
    for (int j = 0; j < nq; ++j) {
        for (int kk = 0; kk < nq; ++kk) {
            f[static_cast<size_t>(j) * nq + kk] = field(xs[j], ys[kk]);
        }
    }

    const std::vector<double> xf = factor_table(cutoff, xs, geom.waist_x);
    const std::vector<double> yf = factor_table(cutoff, ys, geom.waist_y);

    // P[m][j] = sum_k w_k u_m(y_k) f(x_j, y_k); the k sum runs in a fixed
    // order so threading over (m, j) cannot change the result bitwise.
    std::vector<cplx> p(static_cast<size_t>(cutoff + 1) * nq);
#pragma omp parallel for schedule(static) if (par)
    for (int m = 0; m <= cutoff; ++m) {
        for (int j = 0; j < nq; ++j) {
            cplx acc{0.0, 0.0};
            for (int kk = 0; kk < nq; ++kk) {
                acc += rule.weights[kk] * yf[static_cast<size_t>(m) * nq + kk] *
                       f[static_cast<size_t>(j) * nq + kk];
            }
            p[static_cast<size_t>(m) * nq + j] = acc;
        }
    }

    ModeVector out(cutoff);
    const double jac = sx * sy;  // dx dy = (w_x w_y / 2) dt ds
#pragma omp parallel for schedule(static) collapse(2) if (par)
    for (int n = 0; n <= cutoff; ++n) {
        for (int m = 0; m <= cutoff; ++m) {
            cplx acc{0.0, 0.0};
            for (int j = 0; j < nq; ++j) {
                acc += rule.weights[j] * xf[static_cast<size_t>(n) * nq + j] *
                       p[static_cast<size_t>(m) * nq + j];
            }
            out.at(n, m) = jac * acc;
        }
    }
    return out;
}

}  // namespace

ModeVector decompose(const Field& field, const BeamGeometry& geom, int cutoff,
                     const QuadratureSpec& spec, Execution exec) {
    if (cutoff < 0) throw ConfigInvalid("mode cutoff must be non-negative");
    ModeVector coarse = decompose_with_nodes(field, geom, cutoff, spec.nodes, exec);
    if (!spec.check_convergence) return coarse;

    const ModeVector fine = decompose_with_nodes(field, geom, cutoff, 2 * spec.nodes, exec);
    double diff = 0.0;
    for (int i = 0; i < coarse.dim(); ++i) {
        diff += std::norm(coarse.raw()[i] - fine.raw()[i]);
    }
    const double scale = std::max(std::sqrt(fine.norm_sq()), 1e-30);
    if (std::sqrt(diff) > spec.rel_tol * scale) {
        throw QuadratureUnconverged(
            "doubling the node count moved the decomposition by more than rel_tol");
    }
    return coarse;
}

cplx GeneratorMatrix::element(ModeIndex row, ModeIndex col) const {
    if (row.n < 0 || row.m < 0 || col.n < 0 || col.m < 0 || row.n > cutoff_ || row.m > cutoff_ ||
        col.n > cutoff_ || col.m > cutoff_) {
        return {0.0, 0.0};
    }
    const int n = col.n;
    const int m = col.m;
    switch (kind_) {
        case Generator::scale_x: {
            if (row.m != m) return {0.0, 0.0};
            if (row.n == n + 2) return cplx{0.0, 0.5 * std::sqrt(double(n + 1) * (n + 2))};
            if (row.n == n - 2) return cplx{0.0, -0.5 * std::sqrt(double(n) * (n - 1))};
            return {0.0, 0.0};
        }
        case Generator::scale_y: {
            if (row.n != n) return {0.0, 0.0};
            if (row.m == m + 2) return cplx{0.0, 0.5 * std::sqrt(double(m + 1) * (m + 2))};
            if (row.m == m - 2) return cplx{0.0, -0.5 * std::sqrt(double(m) * (m - 1))};
            return {0.0, 0.0};
        }
        case Generator::shear: {
            // 1/(2 k w^2) equals 1/(4 z_R) per axis.
            const double gx = 1.0 / (2.0 * geom_.k() * geom_.waist_x * geom_.waist_x);
            const double gy = 1.0 / (2.0 * geom_.k() * geom_.waist_y * geom_.waist_y);
            if (row.n == n && row.m == m) {
                return cplx{(2.0 * n + 1.0) * gx + (2.0 * m + 1.0) * gy, 0.0};
            }
            if (row.m == m && row.n == n + 2)
                return cplx{-std::sqrt(double(n + 1) * (n + 2)) * gx, 0.0};
            if (row.m == m && row.n == n - 2) return cplx{-std::sqrt(double(n) * (n - 1)) * gx, 0.0};
            if (row.n == n && row.m == m + 2)
                return cplx{-std::sqrt(double(m + 1) * (m + 2)) * gy, 0.0};
            if (row.n == n && row.m == m - 2) return cplx{-std::sqrt(double(m) * (m - 1)) * gy, 0.0};
            return {0.0, 0.0};
        }
    }
    return {0.0, 0.0};
}

ModeVector GeneratorMatrix::apply(const ModeVector& x) const {
    if (x.cutoff() != cutoff_) throw ConfigInvalid("state cutoff does not match the generator");
    ModeVector y(cutoff_);
    const double gx = 1.0 / (2.0 * geom_.k() * geom_.waist_x * geom_.waist_x);
    const double gy = 1.0 / (2.0 * geom_.k() * geom_.waist_y * geom_.waist_y);
    for (int n = 0; n <= cutoff_; ++n) {
        for (int m = 0; m <= cutoff_; ++m) {
            cplx acc{0.0, 0.0};
            switch (kind_) {
                case Generator::scale_x:
                    acc += cplx{0.0, 0.5 * std::sqrt(double(n) * (n - 1))} * x.at_or_zero(n - 2, m);
                    acc += cplx{0.0, -0.5 * std::sqrt(double(n + 1) * (n + 2))} * x.at_or_zero(n + 2, m);
                    break;
                case Generator::scale_y:
                    acc += cplx{0.0, 0.5 * std::sqrt(double(m) * (m - 1))} * x.at_or_zero(n, m - 2);
                    acc += cplx{0.0, -0.5 * std::sqrt(double(m + 1) * (m + 2))} * x.at_or_zero(n, m + 2);
                    break;
                case Generator::shear:
                    acc += ((2.0 * n + 1.0) * gx + (2.0 * m + 1.0) * gy) * x.at(n, m);
                    acc += -std::sqrt(double(n) * (n - 1)) * gx * x.at_or_zero(n - 2, m);
                    acc += -std::sqrt(double(n + 1) * (n + 2)) * gx * x.at_or_zero(n + 2, m);
                    acc += -std::sqrt(double(m) * (m - 1)) * gy * x.at_or_zero(n, m - 2);
                    acc += -std::sqrt(double(m + 1) * (m + 2)) * gy * x.at_or_zero(n, m + 2);
                    break;
            }
            y.at(n, m) = acc;
        }
    }
    return y;
}

GeneratorMatrix generator(Generator kind, const BeamGeometry& geom, int cutoff) {
    if (cutoff < 2) throw CutoffTooSmall("generators need a cutoff of at least 2");
    GeneratorMatrix g;
    g.kind_ = kind;
    g.cutoff_ = cutoff;
    g.geom_ = geom;
    return g;
}

ModeVector apply_evolution(const GeneratorMatrix& gen, double parameter, const ModeVector& state,
                           bool* regime_warning) {
    if (regime_warning) *regime_warning = std::abs(parameter) > 0.2;
    const double norm0 = std::sqrt(state.norm_sq());
    ModeVector result = state;
    ModeVector term = state;
    const int max_terms = 400;
    bool converged = norm0 == 0.0;
    for (int j = 1; j <= max_terms && !converged; ++j) {
        ModeVector gterm = gen.apply(term);
        gterm *= cplx{0.0, -parameter} / static_cast<double>(j);
        term = gterm;
        result += term;
        // ||G|| is bounded on the truncated space, so once terms fall under
        // 1e-15 of the norm the remaining tail is below 1e-14.
        if (std::sqrt(term.norm_sq()) < 1e-15 * norm0) converged = true;
    }
    if (!converged) throw Error("evolution series did not converge within the term budget");

    const double norm1 = std::sqrt(result.norm_sq());
    if (norm0 > 0.0 && std::abs(norm1 - norm0) > 1e-4 * norm0) {
        throw NormLeakage("evolution changed the state norm beyond tolerance");
    }
    return result;
}

double squeeze_c2_exact(double eps) {
    const double s = 1.0 + eps;
    if (!(s > 0.0)) throw DeformationOutOfRange("waist scale factor must stay positive");
    return std::sqrt(s) * (s * s - 1.0) / std::pow(s * s + 1.0, 1.5);
}

double converter_focal_length(double waist, double wavelength) {
    if (!(waist > 0.0) || !(wavelength > 0.0)) {
        throw ConfigInvalid("converter needs positive waist and wavelength");
    }
    const double rayleigh = constants::pi * waist * waist / wavelength;
    return rayleigh / (1.0 + 1.0 / std::sqrt(2.0));
}

}  // namespace modeprobe
