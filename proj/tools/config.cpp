#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "spdc/io.hpp"

namespace spdc::cli {

using nlohmann::ordered_json;

bool RunConfig::wants(const std::string& format) const {
    return std::find(formats.begin(), formats.end(), format) != formats.end();
}

void RunConfig::validate() const {
    const auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("config: ") + what);
    };
    require(pump_p >= 0, "pump.p must be >= 0");
    require(pump_waist > 0.0, "pump.waist must be positive");
    require(waist_ratio > 0.0, "waist_ratio must be positive");
    require(hygg_waist_ratio > 0.0, "hygg_waist_ratio must be positive");
    require(p_range.lo >= 0 && p_range.size() > 0, "p_range must be a non-empty range of p >= 0");
    require(ell_range.size() > 0, "ell_range must be non-empty");
    require(grid_n >= 16, "grid.n must be >= 16");
    require(grid_extent_factor > 0.0, "grid.extent_factor must be positive");
    require(holo_n >= 16, "hologram.n must be >= 16");
    require(grating_period >= 2.0, "hologram.grating_period must be >= 2 pixels");
    require(window_halfwidth >= 0, "hologram.window_halfwidth must be >= 0");
    require(holo_extent_factor > 0.0, "hologram.extent_factor must be positive");
    require(fiber_sigma_ratio > 0.0, "fiber.sigma_ratio must be positive");
    require(mean_counts >= 0.0, "noise.mean_counts must be >= 0");
    require(dark_mean >= 0.0, "noise.dark_mean must be >= 0");
    require(quad_tol > 0.0, "quad_tol must be positive");
    require(!ell_s_list.empty(), "correlate.ell_s must be non-empty");
    require(!out_dir.empty(), "output.dir must be non-empty");
    for (const auto& f : formats)
        require(f == "csv" || f == "json", "output.formats entries must be csv or json");
}

std::string RunConfig::canonical_json() const {
    ordered_json j;
    j["pump"] = {{"p", pump_p}, {"ell", pump_ell}, {"waist", pump_waist}};
    j["waist_ratio"] = waist_ratio;
    j["hygg_waist_ratio"] = hygg_waist_ratio;
    j["p_range"] = {{"min", p_range.lo}, {"max", p_range.hi}};
    j["ell_range"] = {{"min", ell_range.lo}, {"max", ell_range.hi}};
    j["grid"] = {{"n", grid_n}, {"extent_factor", grid_extent_factor}};
    j["hologram"] = {{"n", holo_n},
                     {"grating_period", grating_period},
                     {"window_halfwidth", window_halfwidth},
                     {"extent_factor", holo_extent_factor}};
    j["fiber"] = {{"sigma_ratio", fiber_sigma_ratio}};
    j["noise"] = {{"seed", seed}, {"mean_counts", mean_counts}, {"dark_mean", dark_mean}};
    j["tomo"] = {{"ell_i", tomo_ell_i}, {"purity_constrained", purity_constrained}};
    j["correlate"] = {{"ell_s", ell_s_list}};
    j["quad_tol"] = quad_tol;
    // the output directory is where artifacts land, not part of what they
    // contain, so it stays out of the canonical form and the hash
    j["output"] = {{"formats", formats}, {"pgm", pgm}};
    return j.dump(2) + "\n";
}

namespace {

/// Pull `key` out of `src` into `dst` via `apply`, erasing it so leftovers
/// can be reported as unknown keys.
template <typename Fn>
void take(ordered_json& src, const char* key, Fn&& apply) {
    const auto it = src.find(key);
    if (it == src.end()) return;
    apply(*it);
    src.erase(it);
}

void expect_empty(const ordered_json& j, const std::string& scope) {
    if (j.empty()) return;
    throw std::invalid_argument("config: unknown key \"" + j.begin().key() +
                                "\" in " + scope);
}

} // namespace

void apply_config_file(RunConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("config: " + path + ": " + e.what());
    }

    try {
        take(j, "pump", [&](ordered_json& v) {
            take(v, "p", [&](const ordered_json& x) { config.pump_p = x.get<int>(); });
            take(v, "ell", [&](const ordered_json& x) { config.pump_ell = x.get<int>(); });
            take(v, "waist",
                 [&](const ordered_json& x) { config.pump_waist = x.get<double>(); });
            expect_empty(v, "pump");
        });
        take(j, "waist_ratio",
             [&](const ordered_json& x) { config.waist_ratio = x.get<double>(); });
        take(j, "hygg_waist_ratio",
             [&](const ordered_json& x) { config.hygg_waist_ratio = x.get<double>(); });
        take(j, "p_range", [&](ordered_json& v) {
            take(v, "min", [&](const ordered_json& x) { config.p_range.lo = x.get<int>(); });
            take(v, "max", [&](const ordered_json& x) { config.p_range.hi = x.get<int>(); });
            expect_empty(v, "p_range");
        });
        take(j, "ell_range", [&](ordered_json& v) {
            take(v, "min", [&](const ordered_json& x) { config.ell_range.lo = x.get<int>(); });
            take(v, "max", [&](const ordered_json& x) { config.ell_range.hi = x.get<int>(); });
            expect_empty(v, "ell_range");
        });
        take(j, "grid", [&](ordered_json& v) {
            take(v, "n", [&](const ordered_json& x) { config.grid_n = x.get<int>(); });
            take(v, "extent_factor", [&](const ordered_json& x) {
                config.grid_extent_factor = x.get<double>();
            });
            expect_empty(v, "grid");
        });
        take(j, "hologram", [&](ordered_json& v) {
            take(v, "n", [&](const ordered_json& x) { config.holo_n = x.get<int>(); });
            take(v, "grating_period", [&](const ordered_json& x) {
                config.grating_period = x.get<double>();
            });
            take(v, "window_halfwidth", [&](const ordered_json& x) {
                config.window_halfwidth = x.get<int>();
            });
            take(v, "extent_factor", [&](const ordered_json& x) {
                config.holo_extent_factor = x.get<double>();
            });
            expect_empty(v, "hologram");
        });
        take(j, "fiber", [&](ordered_json& v) {
            take(v, "sigma_ratio", [&](const ordered_json& x) {
                config.fiber_sigma_ratio = x.get<double>();
            });
            expect_empty(v, "fiber");
        });
        take(j, "noise", [&](ordered_json& v) {
            take(v, "seed",
                 [&](const ordered_json& x) { config.seed = x.get<std::uint64_t>(); });
            take(v, "mean_counts", [&](const ordered_json& x) {
                config.mean_counts = x.get<double>();
            });
            take(v, "dark_mean",
                 [&](const ordered_json& x) { config.dark_mean = x.get<double>(); });
            expect_empty(v, "noise");
        });
        take(j, "tomo", [&](ordered_json& v) {
            take(v, "ell_i",
                 [&](const ordered_json& x) { config.tomo_ell_i = x.get<int>(); });
            take(v, "purity_constrained", [&](const ordered_json& x) {
                config.purity_constrained = x.get<bool>();
            });
            expect_empty(v, "tomo");
        });
        take(j, "correlate", [&](ordered_json& v) {
            take(v, "ell_s", [&](const ordered_json& x) {
                config.ell_s_list = x.get<std::vector<int>>();
            });
            expect_empty(v, "correlate");
        });
        take(j, "quad_tol",
             [&](const ordered_json& x) { config.quad_tol = x.get<double>(); });
        take(j, "output", [&](ordered_json& v) {
            take(v, "dir",
                 [&](const ordered_json& x) { config.out_dir = x.get<std::string>(); });
            take(v, "formats", [&](const ordered_json& x) {
                config.formats = x.get<std::vector<std::string>>();
            });
            take(v, "pgm", [&](const ordered_json& x) { config.pgm = x.get<bool>(); });
            expect_empty(v, "output");
        });
        expect_empty(j, path);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("config: " + path + ": " + e.what());
    }
}

} // namespace spdc::cli
