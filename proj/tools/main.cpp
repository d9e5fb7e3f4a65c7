#include <chrono>
#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "spdc/correlations.hpp"
#include "spdc/detection.hpp"
#include "spdc/errors.hpp"
#include "spdc/holograms.hpp"
#include "spdc/io.hpp"
#include "spdc/overlap.hpp"
#include "spdc/tomography.hpp"
#include "spdc/version.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace spdc;
using cli::RunConfig;

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitNumericalError = 3;

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::vector<std::string>> formats;
    bool pgm = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config file");
    cmd->add_option("--seed", flags.seed, "RNG seed (overrides config)");
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--format", flags.formats, "output formats (csv, json)")
        ->delimiter(',');
    cmd->add_flag("--pgm", flags.pgm, "also write grayscale PGM images");
}

RunConfig resolve_config(const CommonFlags& flags) {
    RunConfig config;
    if (!flags.config_path.empty()) cli::apply_config_file(config, flags.config_path);
    if (flags.seed) config.seed = *flags.seed;
    if (flags.out_dir) config.out_dir = *flags.out_dir;
    if (flags.formats) config.formats = *flags.formats;
    if (flags.pgm) config.pgm = true;
    config.validate();
    return config;
}

fs::path prepare_out_dir(const RunConfig& config) {
    fs::path dir(config.out_dir);
    fs::create_directories(dir);
    return dir;
}

void write_manifest(const RunConfig& config, const std::string& command,
                    const fs::path& dir,
                    std::chrono::steady_clock::time_point start) {
    const double runtime =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    ordered_json manifest;
    manifest["tool"] = kToolName;
    manifest["version"] = kVersion;
    manifest["command"] = command;
    manifest["config_hash"] = io::hash_hex(config.canonical_json());
    manifest["runtime_seconds"] = runtime;
    io::write_text(dir / "manifest.json", manifest.dump(2) + "\n");
    io::write_text(dir / "config.json", config.canonical_json());
}

void export_correlation(const RunConfig& config, const fs::path& dir,
                        const std::string& stem, const CorrelationMatrix& matrix,
                        const std::string& axis_prefix) {
    if (config.wants("csv"))
        io::write_correlation_csv(dir / (stem + ".csv"), matrix, axis_prefix);
    if (config.wants("json"))
        io::write_text(dir / (stem + ".json"), io::correlation_json(matrix, axis_prefix));
    if (config.pgm)
        io::write_pgm(dir / (stem + ".pgm"), matrix.cols(), matrix.rows(),
                      matrix.values);
}

// ---------------------------------------------------------------- overlap --

struct IndexTuple {
    int pp, lp, ps, ls, pi, li;
};

ordered_json overlap_row(const RunConfig& config, const IndexTuple& t) {
    const PumpSpec pump{{{t.pp, t.lp}, config.pump_waist}};
    const double w = config.projected_waist();
    const ModeSpec signal{{t.ps, t.ls}, w};
    const ModeSpec idler{{t.pi, t.li}, w};
    const bool conserved = oam_conserved(t.lp, t.ls, t.li);
    const double closed = overlap_closed_form(pump, signal, idler).real();
    const double quad =
        overlap_quadrature(pump, signal, idler, config.quad_tol).real();
    const double scale = std::max(std::abs(closed), 1e-300);

    ordered_json row;
    row["p_p"] = t.pp;
    row["ell_p"] = t.lp;
    row["p_s"] = t.ps;
    row["ell_s"] = t.ls;
    row["p_i"] = t.pi;
    row["ell_i"] = t.li;
    row["conserved"] = conserved;
    row["c_quadrature"] = quad;
    row["c_closed_form"] = closed;
    row["abs_c_squared"] = closed * closed;
    row["discrepancy"] = conserved ? std::abs(quad - closed) / scale : 0.0;
    return row;
}

int run_overlap(const RunConfig& config, const IndexTuple& tuple,
                const std::string& batch_path) {
    const auto start = std::chrono::steady_clock::now();
    const fs::path dir = prepare_out_dir(config);

    std::vector<IndexTuple> tuples;
    if (batch_path.empty()) {
        tuples.push_back(tuple);
    } else {
        std::ifstream in(batch_path);
        if (!in)
            throw std::invalid_argument("overlap: cannot open batch file " + batch_path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#' || line.rfind("p_p", 0) == 0) continue;
            IndexTuple t{};
            char comma;
            std::istringstream row(line);
            if (!(row >> t.pp >> comma >> t.lp >> comma >> t.ps >> comma >> t.ls >>
                  comma >> t.pi >> comma >> t.li))
                throw std::invalid_argument("overlap: malformed batch line: " + line);
            tuples.push_back(t);
        }
    }

    ordered_json rows = ordered_json::array();
    std::ostringstream csv;
    csv << "p_p,ell_p,p_s,ell_s,p_i,ell_i,conserved,c_quadrature,c_closed_form,"
           "abs_c_squared,discrepancy\n";
    for (const IndexTuple& t : tuples) {
        const ordered_json row = overlap_row(config, t);
        rows.push_back(row);
        csv << t.pp << ',' << t.lp << ',' << t.ps << ',' << t.ls << ',' << t.pi << ','
            << t.li << ',' << (row["conserved"].get<bool>() ? 1 : 0) << ','
            << io::format_double(row["c_quadrature"].get<double>()) << ','
            << io::format_double(row["c_closed_form"].get<double>()) << ','
            << io::format_double(row["abs_c_squared"].get<double>()) << ','
            << io::format_double(row["discrepancy"].get<double>()) << '\n';
        std::cout << "c[p_s=" << t.ps << ",ell_s=" << t.ls << "; p_i=" << t.pi
                  << ",ell_i=" << t.li << " | pump p=" << t.pp << ",ell=" << t.lp
                  << "] = " << io::format_double(row["c_closed_form"].get<double>())
                  << (row["conserved"].get<bool>() ? "" : "  (OAM not conserved: 0)")
                  << '\n';
    }
    if (config.wants("csv")) io::write_text(dir / "overlap_report.csv", csv.str());
    if (config.wants("json"))
        io::write_text(dir / "overlap_report.json", rows.dump(2) + "\n");
    write_manifest(config, "overlap", dir, start);
    return 0;
}

// -------------------------------------------------------------- correlate --

int run_correlate(const RunConfig& config, const std::string& model) {
    const auto start = std::chrono::steady_clock::now();
    const fs::path dir = prepare_out_dir(config);
    const PumpSpec pump = config.pump();

    if (model == "lg" || model == "both") {
        for (const int ell_s : config.ell_s_list) {
            const CorrelationMatrix matrix = p_correlation_matrix(
                pump, ell_s, config.p_range, config.waist_ratio);
            const std::string stem = "p_correlation_ells" + std::to_string(ell_s);
            export_correlation(config, dir, stem, matrix, "p");
            std::cout << stem << ": off-diagonal mass = "
                      << io::format_double(off_diagonal_mass(matrix)) << '\n';
        }
    }
    if (model == "hygg" || model == "both") {
        const CorrelationMatrix matrix = oam_correlation_matrix_hygg(
            pump, config.ell_range, config.hygg_waist_ratio * config.pump_waist);
        export_correlation(config, dir, "oam_correlation_hygg", matrix, "ell");
        std::cout << "oam_correlation_hygg written (conservation line ell_s + ell_i = "
                  << config.pump_ell << ")\n";
    }
    write_manifest(config, "correlate", dir, start);
    return 0;
}

// --------------------------------------------------------------- hologram --

int run_hologram(const RunConfig& config, int p, int ell) {
    const auto start = std::chrono::steady_clock::now();
    const fs::path dir = prepare_out_dir(config);

    const GridSpec grid = config.hologram_grid();
    const ModeSpec mode{{p, ell}, grid.extent / config.holo_extent_factor};
    const TargetField target = target_from_mode(mode, grid);
    const PhaseMask mask = synthesize_mask(target, config.grating_period);
    const TargetField recovered =
        simulate_first_order(mask, config.window_halfwidth);
    const double fidelity = overlap_fidelity(target, recovered);

    const std::string stem = "mask_p" + std::to_string(p) + "_ell" + std::to_string(ell);
    io::write_mask_pgm(dir / (stem + ".pgm"), mask);

    ordered_json sidecar;
    sidecar["mode"] = {{"p", p}, {"ell", ell}};
    sidecar["grid_n"] = grid.n;
    sidecar["pixel_pitch"] = mask.pixel_pitch;
    sidecar["grating_period_px"] = mask.grating_period;
    sidecar["phase_encoding"] = "linear [0, 2pi) -> [0, 255]";
    sidecar["round_trip_fidelity"] = fidelity;
    io::write_text(dir / (stem + ".json"), sidecar.dump(2) + "\n");

    std::cout << stem << ": first-order round-trip fidelity = "
              << io::format_double(fidelity) << '\n';
    write_manifest(config, "hologram", dir, start);
    return 0;
}

// ------------------------------------------------------------------- tomo --

void write_density_matrix(const RunConfig& config, const fs::path& dir,
                          const std::string& stem, const tomo::DensityMatrix& rho) {
    if (config.wants("json")) {
        ordered_json j;
        j["dim"] = tomo::kDim;
        ordered_json re = ordered_json::array(), im = ordered_json::array();
        for (int r = 0; r < tomo::kDim; ++r) {
            ordered_json re_row = ordered_json::array(), im_row = ordered_json::array();
            for (int c = 0; c < tomo::kDim; ++c) {
                re_row.push_back(rho.m(r, c).real());
                im_row.push_back(rho.m(r, c).imag());
            }
            re.push_back(re_row);
            im.push_back(im_row);
        }
        j["real"] = re;
        j["imag"] = im;
        io::write_text(dir / (stem + ".json"), j.dump(2) + "\n");
    }
    if (config.wants("csv")) {
        // bar-plot data: one row per joint basis pair
        std::vector<std::string> labels;
        for (int ps = 0; ps < 4; ++ps)
            for (int pi = 0; pi < 4; ++pi)
                labels.push_back("s" + std::to_string(ps) + "i" + std::to_string(pi));
        std::vector<double> re(tomo::kDim * tomo::kDim), im(re.size());
        for (int r = 0; r < tomo::kDim; ++r) {
            for (int c = 0; c < tomo::kDim; ++c) {
                re[r * tomo::kDim + c] = rho.m(r, c).real();
                im[r * tomo::kDim + c] = rho.m(r, c).imag();
            }
        }
        io::write_matrix_csv(dir / (stem + "_real.csv"), "re", labels, labels, re);
        io::write_matrix_csv(dir / (stem + "_imag.csv"), "im", labels, labels, im);
    }
}

std::string records_csv(const std::vector<tomo::MeasurementRecord>& records) {
    std::ostringstream out;
    out << "psi,zeta,count\n";
    for (const auto& record : records)
        out << record.projector.psi_label << ',' << record.projector.zeta_label << ','
            << io::format_double(record.count) << '\n';
    return out.str();
}

tomo::MeasurementRecord make_record(const std::string& psi_label,
                                    const std::string& zeta_label, double count) {
    tomo::MeasurementRecord record;
    record.projector.psi = tomo::parse_state_label(psi_label);
    record.projector.zeta = tomo::parse_state_label(zeta_label);
    record.projector.psi_label = psi_label;
    record.projector.zeta_label = zeta_label;
    record.count = count;
    return record;
}

std::vector<tomo::MeasurementRecord> read_records_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("tomo fit: cannot open records file " + path);
    std::vector<tomo::MeasurementRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("psi", 0) == 0) continue;
        std::istringstream row(line);
        std::string psi_label, zeta_label, count_text;
        if (!std::getline(row, psi_label, ',') || !std::getline(row, zeta_label, ',') ||
            !std::getline(row, count_text))
            throw std::invalid_argument("tomo fit: malformed record line: " + line);
        records.push_back(make_record(psi_label, zeta_label, std::stod(count_text)));
    }
    return records;
}

std::vector<tomo::MeasurementRecord> read_records_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("tomo fit: cannot open records file " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("tomo fit: " + path + ": " + e.what());
    }
    if (!j.is_array())
        throw std::invalid_argument("tomo fit: " + path + ": expected a JSON array");
    std::vector<tomo::MeasurementRecord> records;
    for (const auto& entry : j) {
        if (!entry.contains("psi") || !entry.contains("zeta") || !entry.contains("count"))
            throw std::invalid_argument(
                "tomo fit: record entries need psi, zeta and count fields");
        records.push_back(make_record(entry["psi"].get<std::string>(),
                                      entry["zeta"].get<std::string>(),
                                      entry["count"].get<double>()));
    }
    return records;
}

std::vector<tomo::MeasurementRecord> read_records(const std::string& path) {
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json")
        return read_records_json(path);
    return read_records_csv(path);
}

int run_tomo_simulate(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    const fs::path dir = prepare_out_dir(config);

    const tomo::DensityMatrix rho =
        tomo::theory_state(config.pump(), config.tomo_ell_i, config.waist_ratio);
    const auto set = tomo::build_measurement_set();
    const auto records = tomo::simulate_records(rho, set, config.mean_counts,
                                                config.seed, config.dark_mean);
    io::write_text(dir / "records.csv", records_csv(records));
    if (config.wants("json")) {
        ordered_json rows = ordered_json::array();
        for (const auto& record : records)
            rows.push_back({{"psi", record.projector.psi_label},
                            {"zeta", record.projector.zeta_label},
                            {"count", record.count}});
        io::write_text(dir / "records.json", rows.dump(2) + "\n");
    }
    write_density_matrix(config, dir, "theory_state", rho);

    ordered_json report;
    report["pump"] = {{"p", config.pump_p}, {"ell", config.pump_ell}};
    report["ell_i"] = config.tomo_ell_i;
    report["ell_s"] = config.pump_ell - config.tomo_ell_i;
    report["mean_counts"] = config.mean_counts;
    report["dark_mean"] = config.dark_mean;
    report["seed"] = config.seed;
    report["records"] = records.size();
    io::write_text(dir / "tomo_simulate.json", report.dump(2) + "\n");
    std::cout << "simulated " << records.size() << " records -> "
              << (dir / "records.csv").string() << '\n';
    write_manifest(config, "tomo simulate", dir, start);
    return 0;
}

int run_tomo_fit(const RunConfig& config, const std::string& records_path) {
    const auto start = std::chrono::steady_clock::now();
    const fs::path dir = prepare_out_dir(config);

    std::vector<tomo::MeasurementRecord> records;
    if (!records_path.empty()) {
        records = read_records(records_path);
    } else {
        const fs::path default_path = dir / "records.csv";
        if (!fs::exists(default_path))
            throw std::invalid_argument(
                "tomo fit: no --records file given and " + default_path.string() +
                " does not exist");
        records = read_records(default_path.string());
    }

    tomo::ReconstructionOptions options;
    options.purity_constrained = config.purity_constrained;
    const tomo::ReconstructionResult result = tomo::reconstruct(records, options);

    const tomo::DensityMatrix theory =
        tomo::theory_state(config.pump(), config.tomo_ell_i, config.waist_ratio);
    const double fid = tomo::fidelity(result.rho, theory);

    write_density_matrix(config, dir, "density_matrix", result.rho);
    ordered_json report;
    report["fidelity_to_theory"] = fid;
    report["purity"] = result.rho.purity();
    report["residual"] = result.residual;
    report["purity_penalty_mu"] = result.mu;
    report["newton_iterations"] = result.iterations;
    report["min_eigenvalue"] = result.rho.min_eigenvalue();
    io::write_text(dir / "tomo_report.json", report.dump(2) + "\n");

    std::cout << "reconstructed density matrix: fidelity to theory = "
              << io::format_double(fid)
              << ", purity = " << io::format_double(result.rho.purity()) << '\n';
    write_manifest(config, "tomo fit", dir, start);
    return 0;
}

// -------------------------------------------------------------- calibrate --

int run_calibrate(const RunConfig& config, int ell) {
    const auto start = std::chrono::steady_clock::now();
    const fs::path dir = prepare_out_dir(config);

    const double w = config.projected_waist();
    std::vector<ModeSpec> modes;
    std::vector<std::string> labels;
    for (int p = config.p_range.lo; p <= config.p_range.hi; ++p) {
        modes.push_back({{p, ell}, w});
        labels.push_back("p" + std::to_string(p));
    }
    const FiberSpec fiber{config.fiber_sigma_ratio * w};
    const CrosstalkMatrix matrix =
        build_crosstalk_matrix(modes, fiber, config.detection_grid());
    const std::vector<double> eta = matrix.efficiencies();

    if (config.wants("csv")) {
        io::write_counts_csv(dir / "crosstalk.csv", matrix.values, labels, labels);
        std::ostringstream eta_csv;
        eta_csv << "mode,efficiency\n";
        for (std::size_t i = 0; i < labels.size(); ++i)
            eta_csv << labels[i] << ',' << io::format_double(eta[i]) << '\n';
        io::write_text(dir / "efficiencies.csv", eta_csv.str());
    }
    if (config.wants("json")) {
        ordered_json j;
        j["ell"] = ell;
        j["fiber_sigma"] = fiber.sigma;
        j["modes"] = labels;
        ordered_json rows = ordered_json::array();
        for (int i = 0; i < matrix.values.rows; ++i) {
            ordered_json row = ordered_json::array();
            for (int c = 0; c < matrix.values.cols; ++c)
                row.push_back(matrix.values.at(i, c));
            rows.push_back(row);
        }
        j["crosstalk"] = rows;
        j["efficiencies"] = eta;
        io::write_text(dir / "crosstalk.json", j.dump(2) + "\n");
    }
    if (config.pgm)
        io::write_pgm(dir / "crosstalk.pgm", matrix.values.cols, matrix.values.rows,
                      matrix.values.v);

    std::cout << "crosstalk matrix over " << labels.size() << " modes (ell = " << ell
              << ") written\n";
    write_manifest(config, "calibrate", dir, start);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Biphoton spatial-mode toolkit: correlation amplitudes, detection "
                 "holograms, measurement-chain simulation and 16-dim state "
                 "tomography"};
    app.require_subcommand(1);

    CommonFlags flags;
    IndexTuple tuple{0, 0, 0, 0, 0, 0};
    std::string batch_path;
    std::string model = "both";
    int holo_p = 0, holo_ell = 1;
    int calib_ell = 0;
    std::string records_path;

    CLI::App* overlap = app.add_subcommand("overlap", "biphoton correlation amplitude");
    add_common_flags(overlap, flags);
    overlap->add_option("--pp", tuple.pp, "pump p");
    overlap->add_option("--lp", tuple.lp, "pump ell");
    overlap->add_option("--ps", tuple.ps, "signal p");
    overlap->add_option("--ls", tuple.ls, "signal ell");
    overlap->add_option("--pi", tuple.pi, "idler p");
    overlap->add_option("--li", tuple.li, "idler ell");
    overlap->add_option("--batch", batch_path,
                        "CSV of index tuples p_p,ell_p,p_s,ell_s,p_i,ell_i");

    CLI::App* correlate =
        app.add_subcommand("correlate", "correlation matrices (LG and HyGG models)");
    add_common_flags(correlate, flags);
    correlate->add_option("--model", model, "lg, hygg or both")
        ->check(CLI::IsMember({"lg", "hygg", "both"}));
    std::vector<int> ell_s_override;
    correlate->add_option("--ell-s", ell_s_override, "signal OAM subspaces")
        ->delimiter(',');

    CLI::App* hologram =
        app.add_subcommand("hologram", "synthesize and verify a detection hologram");
    add_common_flags(hologram, flags);
    hologram->add_option("--p", holo_p, "target radial index");
    hologram->add_option("--ell", holo_ell, "target OAM index");

    CLI::App* tomo_cmd = app.add_subcommand("tomo", "quantum state tomography");
    tomo_cmd->require_subcommand(1);
    CLI::App* tomo_simulate =
        tomo_cmd->add_subcommand("simulate", "generate synthetic records");
    add_common_flags(tomo_simulate, flags);
    CLI::App* tomo_fit =
        tomo_cmd->add_subcommand("fit", "reconstruct a density matrix from records");
    add_common_flags(tomo_fit, flags);
    tomo_fit->add_option("--records", records_path, "records CSV (psi,zeta,count)");

    CLI::App* calibrate =
        app.add_subcommand("calibrate", "crosstalk matrix and detection efficiencies");
    add_common_flags(calibrate, flags);
    calibrate->add_option("--ell", calib_ell, "fixed OAM of the calibration modes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfigError;
    }

    try {
        const RunConfig config = resolve_config(flags);
        if (overlap->parsed()) return run_overlap(config, tuple, batch_path);
        if (correlate->parsed()) {
            RunConfig c = config;
            if (!ell_s_override.empty()) c.ell_s_list = ell_s_override;
            return run_correlate(c, model);
        }
        if (hologram->parsed()) return run_hologram(config, holo_p, holo_ell);
        if (tomo_simulate->parsed()) return run_tomo_simulate(config);
        if (tomo_fit->parsed()) return run_tomo_fit(config, records_path);
        if (calibrate->parsed()) return run_calibrate(config, calib_ell);
        std::cerr << "no subcommand selected\n";
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const NonConvergence& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumericalError;
    } catch (const ConvergenceFailure& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumericalError;
    } catch (const IncompleteData& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
