#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "modeprobe/deform.hpp"
#include "modeprobe/hgbasis.hpp"
#include "modeprobe/types.hpp"

// Times the quadrature kernels in both execution modes and verifies that the
// parallel path reproduces the serial result bit for bit.

using namespace modeprobe;

namespace {

double best_of(int reps, const std::function<void()>& body) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto start = std::chrono::steady_clock::now();
        body();
        const double s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (s < best) best = s;
    }
    return best;
}

bool bitwise_equal(const ModeVector& a, const ModeVector& b) {
    if (a.cutoff() != b.cutoff()) return false;
    for (std::size_t i = 0; i < a.raw().size(); ++i) {
        if (a.raw()[i] != b.raw()[i]) return false;
    }
    return true;
}

struct KernelReport {
    const char* name;
    double serial_s;
    double parallel_s;
    bool identical;
};

}  // namespace

int main() {
    const BeamGeometry geom = BeamGeometry::make(125e-6, 150e-6, 150e-6);
    const int cutoff = 14;
    std::vector<KernelReport> reports;

    {
        const BeamGeometry displaced = BeamGeometry::make(125e-6, 165e-6, 140e-6);
        const Field field = [&](double x, double y) {
            return mode_amplitude({0, 0}, x, y, 0.0, displaced) +
                   cplx(0.0, 0.3) * mode_amplitude({1, 2}, x, y, 0.0, displaced);
        };
        ModeVector serial_result;
        ModeVector parallel_result;
        const double serial_s = best_of(3, [&] {
            serial_result = decompose(field, geom, cutoff, {}, Execution::serial);
        });
        const double parallel_s = best_of(3, [&] {
            parallel_result = decompose(field, geom, cutoff, {}, Execution::parallel);
        });
        reports.push_back({"decompose", serial_s, parallel_s,
                           bitwise_equal(serial_result, parallel_result)});
    }

    {
        ModeVector serial_result;
        ModeVector parallel_result;
        const double serial_s = best_of(3, [&] {
            serial_result = exact_waist_scaling_coefficients(0.08, Axis::x, {2, 1}, cutoff,
                                                             geom, {}, Execution::serial);
        });
        const double parallel_s = best_of(3, [&] {
            parallel_result = exact_waist_scaling_coefficients(
                0.08, Axis::x, {2, 1}, cutoff, geom, {}, Execution::parallel);
        });
        reports.push_back({"waist scaling", serial_s, parallel_s,
                           bitwise_equal(serial_result, parallel_result)});
    }

    {
        ModeVector serial_result;
        ModeVector parallel_result;
        const double serial_s = best_of(3, [&] {
            serial_result = exact_waist_shift_coefficients(2e-4, geom, {1, 1}, cutoff, {},
                                                           Execution::serial);
        });
        const double parallel_s = best_of(3, [&] {
            parallel_result = exact_waist_shift_coefficients(2e-4, geom, {1, 1}, cutoff, {},
                                                             Execution::parallel);
        });
        reports.push_back({"waist shift", serial_s, parallel_s,
                           bitwise_equal(serial_result, parallel_result)});
    }

    std::printf("%-16s %10s %10s %8s %10s\n", "kernel", "serial_s", "parallel_s", "speedup",
                "identical");
    bool all_identical = true;
    for (const KernelReport& r : reports) {
        std::printf("%-16s %10.4f %10.4f %7.2fx %10s\n", r.name, r.serial_s, r.parallel_s,
                    r.serial_s / r.parallel_s, r.identical ? "yes" : "NO");
        all_identical = all_identical && r.identical;
    }
    return all_identical ? 0 : 1;
}
