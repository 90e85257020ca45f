#include "modeprobe/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "modeprobe/constants.hpp"
#include "modeprobe/errors.hpp"

namespace modeprobe {

BeamGeometry BeamGeometry::make(double wavelength, double waist_x, double waist_y) {
    if (!(wavelength > 0.0) || !(waist_x > 0.0) || !(waist_y > 0.0)) {
        throw ConfigInvalid("beam geometry requires positive wavelength and waists");
    }
    BeamGeometry g;
    g.wavelength = wavelength;
    g.waist_x = waist_x;
    g.waist_y = waist_y;
    return g;
}

double BeamGeometry::k() const { return 2.0 * constants::pi / wavelength; }

double BeamGeometry::rayleigh_x() const {
    return constants::pi * waist_x * waist_x / wavelength;
}

double BeamGeometry::rayleigh_y() const {
    return constants::pi * waist_y * waist_y / wavelength;
}

double BeamGeometry::rayleigh() const {
    return 2.0 / (1.0 / rayleigh_x() + 1.0 / rayleigh_y());
}

double BeamGeometry::width_x(double z) const {
    const double r = z / rayleigh_x();
    return waist_x * std::sqrt(1.0 + r * r);
}

double BeamGeometry::width_y(double z) const {
    const double r = z / rayleigh_y();
    return waist_y * std::sqrt(1.0 + r * r);
}

double BeamGeometry::gouy_x(double z) const { return std::atan(z / rayleigh_x()); }

double BeamGeometry::gouy_y(double z) const { return std::atan(z / rayleigh_y()); }

double BeamGeometry::inv_curvature_x(double z) const {
    const double zr = rayleigh_x();
    return z / (z * z + zr * zr);
}

double BeamGeometry::inv_curvature_y(double z) const {
    const double zr = rayleigh_y();
    return z / (z * z + zr * zr);
}

void check_deformation(const Deformation& def, const BeamGeometry& geom) {
    const double ex = std::abs(def.eps_x(geom));
    const double ey = std::abs(def.eps_y(geom));
    const double ez = std::abs(def.d_z) / geom.rayleigh();
    if (ex >= 0.5 || ey >= 0.5 || ez >= 0.5) {
        throw DeformationOutOfRange("deformation exceeds half the beam scale");
    }
}

bool in_linear_regime(const Deformation& def, const BeamGeometry& geom) {
    const double ex = std::abs(def.eps_x(geom));
    const double ey = std::abs(def.eps_y(geom));
    const double ez = std::abs(def.d_z) / geom.rayleigh();
    return ex <= 0.05 && ey <= 0.05 && ez <= 0.05;
}

ModeVector::ModeVector(int cutoff) : cutoff_(cutoff) {
    if (cutoff < 0) throw ConfigInvalid("mode cutoff must be non-negative");
    c_.assign(static_cast<size_t>(dim()), cplx{0.0, 0.0});
}

ModeVector ModeVector::basis(int cutoff, ModeIndex idx) {
    ModeVector v(cutoff);
    v.at(idx.n, idx.m) = 1.0;
    return v;
}

cplx& ModeVector::at(int n, int m) {
    if (n < 0 || m < 0 || n > cutoff_ || m > cutoff_) {
        throw std::out_of_range("mode index outside cutoff");
    }
    return c_[static_cast<size_t>(n) * (cutoff_ + 1) + m];
}

const cplx& ModeVector::at(int n, int m) const {
    if (n < 0 || m < 0 || n > cutoff_ || m > cutoff_) {
        throw std::out_of_range("mode index outside cutoff");
    }
    return c_[static_cast<size_t>(n) * (cutoff_ + 1) + m];
}

cplx ModeVector::at_or_zero(int n, int m) const {
    if (n < 0 || m < 0 || n > cutoff_ || m > cutoff_) return {0.0, 0.0};
    return c_[static_cast<size_t>(n) * (cutoff_ + 1) + m];
}

double ModeVector::norm_sq() const {
    double s = 0.0;
    for (const cplx& v : c_) s += std::norm(v);
    return s;
}

bool ModeVector::is_normalized(double tol) const {
    return std::abs(norm_sq() - 1.0) <= tol;
}

ModeVector& ModeVector::operator+=(const ModeVector& other) {
    if (other.cutoff_ != cutoff_) throw ConfigInvalid("mode vector cutoffs differ");
    for (size_t i = 0; i < c_.size(); ++i) c_[i] += other.c_[i];
    return *this;
}

ModeVector& ModeVector::operator*=(cplx factor) {
    for (cplx& v : c_) v *= factor;
    return *this;
}

cplx ModeVector::inner(const ModeVector& other) const {
    if (other.cutoff_ != cutoff_) throw ConfigInvalid("mode vector cutoffs differ");
    cplx s{0.0, 0.0};
    for (size_t i = 0; i < c_.size(); ++i) s += std::conj(c_[i]) * other.c_[i];
    return s;
}

std::string ModeVector::to_csv() const {
    std::string out = "n,m,re,im\n";
    for (int n = 0; n <= cutoff_; ++n) {
        for (int m = 0; m <= cutoff_; ++m) {
            const cplx v = at(n, m);
            out += std::to_string(n) + "," + std::to_string(m) + "," +
                   format_double(v.real()) + "," + format_double(v.imag()) + "\n";
        }
    }
    return out;
}

ModeVector ModeVector::from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("n,m,", 0) != 0) {
        throw IOFailure("mode vector CSV must start with an n,m,re,im header");
    }
    struct Entry {
        int n, m;
        cplx v;
    };
    std::vector<Entry> entries;
    int cutoff = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Entry e;
        double re = 0.0, im = 0.0;
        if (std::sscanf(line.c_str(), "%d,%d,%lf,%lf", &e.n, &e.m, &re, &im) != 4) {
            throw IOFailure("malformed mode vector CSV row: " + line);
        }
        if (e.n < 0 || e.m < 0) throw IOFailure("negative mode index in CSV");
        e.v = cplx{re, im};
        cutoff = std::max({cutoff, e.n, e.m});
        entries.push_back(e);
    }
    ModeVector v(cutoff);
    for (const Entry& e : entries) v.at(e.n, e.m) = e.v;
    return v;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace modeprobe
