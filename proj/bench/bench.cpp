// Timing harness for the cell-parallel kernels: runs each once with the
// serial reference and once with the OpenMP path and prints the speedup.
// Results must match bit-for-bit between the two policies (checked here too).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <omp.h>

#include "spdc/correlations.hpp"
#include "spdc/detection.hpp"
#include "spdc/holograms.hpp"
#include "spdc/tomography.hpp"

using namespace spdc;

namespace {

double time_seconds(const std::function<void()>& work) {
    const auto start = std::chrono::steady_clock::now();
    work();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

struct Row {
    std::string name;
    double serial;
    double parallel;
    bool identical;
};

std::vector<double> run_p_matrix(Exec exec) {
    std::vector<double> out;
    for (int repeat = 0; repeat < 400; ++repeat)
        out = p_correlation_matrix(PumpSpec{{{3, 1}, 1.0}}, 1, {0, 11}, 0.2, exec).values;
    return out;
}

std::vector<double> run_hygg(Exec exec) {
    std::vector<double> out;
    for (int repeat = 0; repeat < 300; ++repeat)
        out = oam_correlation_matrix_hygg(PumpSpec{{{1, 1}, 1.0}}, {-6, 6}, 0.1, exec)
                  .values;
    return out;
}

std::vector<double> run_hologram(Exec exec) {
    const GridSpec grid{1024, 8.0};
    const TargetField target = target_from_mode({{3, 2}, 1.0}, grid);
    return synthesize_mask(target, 8.0, exec).phase;
}

std::vector<double> run_crosstalk(Exec exec) {
    std::vector<ModeSpec> modes;
    for (int p = 0; p <= 5; ++p) modes.push_back({{p, 0}, 1.0});
    std::vector<double> out;
    for (int repeat = 0; repeat < 10; ++repeat)
        out = build_crosstalk_matrix(modes, {0.3}, {256, 8.0}, exec).values.v;
    return out;
}

std::vector<double> run_predict(Exec exec) {
    const auto set = tomo::build_measurement_set();
    const tomo::DensityMatrix rho = tomo::theory_state(PumpSpec{{{0, 0}, 1.0}}, 1);
    std::vector<double> out;
    for (int repeat = 0; repeat < 200; ++repeat)
        out = tomo::predict_probabilities(rho, set, exec);
    return out;
}

Row bench(const std::string& name,
          const std::function<std::vector<double>(Exec)>& kernel) {
    std::vector<double> serial_result, parallel_result;
    const double serial = time_seconds([&] { serial_result = kernel(Exec::Serial); });
    const double parallel =
        time_seconds([&] { parallel_result = kernel(Exec::Parallel); });
    return {name, serial, parallel, serial_result == parallel_result};
}

} // namespace

int main() {
    std::printf("OpenMP threads: %d\n\n", omp_get_max_threads());
    const std::vector<Row> rows = {
        bench("p-correlation 12x12 (closed form)", run_p_matrix),
        bench("HyGG OAM matrix 13x13 (quadrature)", run_hygg),
        bench("hologram synthesis 1024x1024", run_hologram),
        bench("crosstalk 6 modes @ 256x256", run_crosstalk),
        bench("tomo predict 256 projectors x200", run_predict),
    };
    std::printf("%-38s %10s %10s %8s %s\n", "kernel", "serial[s]", "openmp[s]",
                "speedup", "bitwise");
    for (const Row& row : rows) {
        std::printf("%-38s %10.4f %10.4f %7.2fx %s\n", row.name.c_str(), row.serial,
                    row.parallel, row.serial / row.parallel,
                    row.identical ? "equal" : "DIFFERS");
    }
    return 0;
}
