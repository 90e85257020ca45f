#pragma once

#include <vector>

namespace modeprobe {

// Gauss-Hermite rule for integrals of the form int f(t) exp(-t^2) dt.
// Weights here are "total" weights for integrands already containing the
// Gaussian, i.e. int g(t) dt ~= sum_i w_i g(t_i) when g decays like exp(-t^2).
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    // Nodes are roots of the orthonormal Hermite function h_N, found by
    // Newton iteration; total weights w_i = 1 / (N * h_{N-1}(t_i)^2) stay
    // finite for N in the hundreds where the classical formula overflows.
    static GaussHermiteRule make(int n);
};

struct QuadratureSpec {
    int nodes = 80;
    // When set, results are recomputed at twice the node count and compared;
    // disagreement beyond rel_tol raises QuadratureUnconverged.
    bool check_convergence = true;
    double rel_tol = 1e-9;
};

}  // namespace modeprobe
