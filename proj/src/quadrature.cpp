#include "modeprobe/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "modeprobe/errors.hpp"
#include "modeprobe/hgbasis.hpp"

namespace modeprobe {

GaussHermiteRule GaussHermiteRule::make(int n) {
    if (n < 1) throw ConfigInvalid("Gauss-Hermite rule needs at least one node");

    GaussHermiteRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);

    // Find the non-negative roots of h_n, largest first. Initial guesses
    // follow the usual ladder: asymptotic edge estimate, then linear
    // extrapolation from roots already found.
    const int half = (n + 1) / 2;
    std::vector<double> roots(half, 0.0);
    double z = 0.0;
    for (int i = 0; i < half; ++i) {
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * roots[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * roots[1];
        } else {
            z = 2.0 * z - roots[i - 2];
        }
        bool converged = false;
        for (int it = 0; it < 100; ++it) {
            const double h = hermite_function(n, z);
            // h_n'(t) = -t h_n(t) + sqrt(2n) h_{n-1}(t)
            const double hp = -z * h + std::sqrt(2.0 * n) * hermite_function(n - 1, z);
            const double dz = h / hp;
            z -= dz;
            if (std::abs(dz) <= 1e-15 * std::max(1.0, std::abs(z))) {
                converged = true;
                break;
            }
        }
        if (!converged) throw QuadratureUnconverged("Newton iteration for quadrature node stalled");
        roots[i] = z;
    }

    // Total weights w_i = 1 / (n * h_{n-1}(t_i)^2); symmetric partner node
    // gets the same weight. Nodes are stored in ascending order.
    for (int i = 0; i < half; ++i) {
        const double t = roots[i];
        const double hm = hermite_function(n - 1, t);
        const double w = 1.0 / (n * hm * hm);
        rule.nodes[n - 1 - i] = t;
        rule.weights[n - 1 - i] = w;
        rule.nodes[i] = -t;
        rule.weights[i] = w;
    }
    if (n % 2 == 1) rule.nodes[half - 1] = 0.0;
    return rule;
}

}  // namespace modeprobe
