#include <doctest.h>

#include <cmath>
#include <numbers>

#include "spdc/errors.hpp"
#include "spdc/holograms.hpp"
#include "spdc/rng.hpp"

using namespace spdc;
using std::numbers::pi;

namespace {

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

double modulation_depth(double a) { return 1.0 + sinc_inv(a) / pi; }

TargetField uniform_target(const GridSpec& grid, double amplitude, double phase) {
    TargetField t;
    t.grid = grid;
    t.amplitude.assign(std::size_t(grid.n) * grid.n, amplitude);
    t.phase.assign(std::size_t(grid.n) * grid.n, phase);
    return t;
}

} // namespace

TEST_CASE("sinc_inv round trip and endpoints") {
    CHECK(sinc_inv(1.0) == 0.0);
    CHECK(sinc_inv(0.0) == -pi);
    CHECK(modulation_depth(0.0) == 0.0);
    CHECK(modulation_depth(1.0) == 1.0);
    SplitMix64 rng(31);
    for (int trial = 0; trial < 1000; ++trial) {
        const double a = rng.uniform();
        CHECK(sinc(sinc_inv(a)) == doctest::Approx(a).epsilon(1e-10));
    }
}

TEST_CASE("modulation depth is monotone in amplitude") {
    double previous = -1.0;
    for (int k = 0; k <= 500; ++k) {
        const double m = modulation_depth(k / 500.0);
        CHECK(m > previous);
        previous = m;
    }
}

TEST_CASE("unit-amplitude target gives the pure blazed grating") {
    const GridSpec grid{32, 32.0};
    const PhaseMask mask = synthesize_mask(uniform_target(grid, 1.0, 0.0), 8.0);
    for (int iy = 0; iy < grid.n; ++iy) {
        for (int ix = 0; ix < grid.n; ++ix) {
            const double x = ix - grid.n / 2;
            double expected = std::fmod(2.0 * pi * x / 8.0 - pi, 2.0 * pi);
            if (expected < 0.0) expected += 2.0 * pi;
            CHECK(mask.phase[std::size_t(iy) * grid.n + ix] ==
                  doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("zero-amplitude target gives a flat mask") {
    const GridSpec grid{32, 32.0};
    const PhaseMask mask = synthesize_mask(uniform_target(grid, 0.0, 1.3), 8.0);
    for (const double g : mask.phase) CHECK(g == 0.0);
}

TEST_CASE("synthesis rejects invalid inputs") {
    const GridSpec grid{16, 16.0};
    TargetField bad = uniform_target(grid, 1.0, 0.0);
    bad.amplitude[5] = 1.5;
    CHECK_THROWS_AS(synthesize_mask(bad, 8.0), std::domain_error);
    CHECK_THROWS_AS(synthesize_mask(uniform_target(grid, 1.0, 0.0), 1.5),
                    ResolutionError);
}

TEST_CASE("mask phases stay in [0, 2 pi)") {
    const GridSpec grid{128, 8.0};
    const PhaseMask mask = projection_mask({{2, -1}, 1.0}, 8.0, grid);
    for (const double g : mask.phase) {
        CHECK(g >= 0.0);
        CHECK(g < 2.0 * pi);
    }
}

TEST_CASE("blazed grating round trip recovers a plane wave") {
    const GridSpec grid{256, 256.0};
    const PhaseMask mask = synthesize_mask(uniform_target(grid, 1.0, 0.0), 8.0);
    const TargetField recovered = simulate_first_order(mask);
    const TargetField flat = uniform_target(grid, 1.0, 0.0);
    CHECK(overlap_fidelity(flat, recovered) > 0.999);
}

TEST_CASE("LG mode round trips exceed 0.99 fidelity") {
    const GridSpec grid{512, 8.0};
    for (const auto& [p, ell] : {std::pair{0, 1}, {2, 1}}) {
        const ModeSpec mode{{p, ell}, 1.0};
        const TargetField target = target_from_mode(mode, grid);
        const PhaseMask mask = synthesize_mask(target, 8.0);
        const TargetField recovered = simulate_first_order(mask);
        CAPTURE(p);
        CAPTURE(ell);
        CHECK(overlap_fidelity(target, recovered) > 0.99);
    }
}

TEST_CASE("projection mask equals the mask of the conjugated target") {
    const GridSpec grid{64, 8.0};
    const ModeSpec mode{{1, 2}, 1.0};
    const PhaseMask direct = projection_mask(mode, 8.0, grid);
    const PhaseMask expected = synthesize_mask(target_from_mode(mode, grid, true), 8.0);
    for (std::size_t k = 0; k < direct.phase.size(); ++k)
        CHECK(direct.phase[k] == expected.phase[k]);
}

TEST_CASE("serial and parallel synthesis are bit-identical") {
    const GridSpec grid{128, 8.0};
    const TargetField target = target_from_mode({{3, -2}, 1.0}, grid);
    const PhaseMask ser = synthesize_mask(target, 8.0, Exec::Serial);
    const PhaseMask par = synthesize_mask(target, 8.0, Exec::Parallel);
    for (std::size_t k = 0; k < ser.phase.size(); ++k)
        CHECK(ser.phase[k] == par.phase[k]);
}
