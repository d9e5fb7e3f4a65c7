#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spdc/correlations.hpp"
#include "spdc/grid.hpp"
#include "spdc/overlap.hpp"

namespace spdc::cli {

/// Effective run configuration. Precedence: command-line flags > config file
/// > built-in defaults; the merged result is what gets hashed into the
/// run manifest.
struct RunConfig {
    // pump and mode geometry
    int pump_p = 0;
    int pump_ell = 0;
    double pump_waist = 1.0;
    double waist_ratio = 0.2;      // signal/idler waist over pump waist
    double hygg_waist_ratio = 0.1; // unmasked-projection waist over pump waist
    IndexRange p_range{0, 3};
    IndexRange ell_range{-4, 4};

    // field-level simulation grid
    int grid_n = 256;
    double grid_extent_factor = 8.0; // extent over the largest waist

    // hologram grid
    int holo_n = 512;
    double grating_period = 8.0; // pixels
    int window_halfwidth = 0;    // 0 = default rule
    double holo_extent_factor = 8.0;

    double fiber_sigma_ratio = 0.3; // fiber sigma over projected-mode waist

    // synthetic noise
    std::uint64_t seed = 12345;
    double mean_counts = 10000.0;
    double dark_mean = 0.0;

    // tomography
    int tomo_ell_i = 1;
    bool purity_constrained = true;

    std::vector<int> ell_s_list{0};
    double quad_tol = 1e-10;

    // output
    std::string out_dir = "out";
    std::vector<std::string> formats{"csv", "json"};
    bool pgm = false;

    PumpSpec pump() const { return {{{pump_p, pump_ell}, pump_waist}}; }
    double projected_waist() const { return waist_ratio * pump_waist; }
    GridSpec detection_grid() const {
        return {grid_n, grid_extent_factor * pump_waist * waist_ratio};
    }
    GridSpec hologram_grid() const {
        // mode waist occupies 1/extent_factor of the grid side
        return {holo_n, holo_extent_factor * 1.0};
    }
    bool wants(const std::string& format) const;

    /// Throws std::invalid_argument on out-of-range values.
    void validate() const;

    /// Canonical serialization (key order fixed); its hash identifies the run.
    std::string canonical_json() const;
};

/// Apply the values found in a JSON config file on top of `config`.
/// Unknown keys are rejected. Throws std::invalid_argument on parse errors.
void apply_config_file(RunConfig& config, const std::string& path);

} // namespace spdc::cli
