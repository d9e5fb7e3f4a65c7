// Acceptance suite: end-to-end checks of the artifact's contract, one
// pass/fail line per criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spdc/correlations.hpp"
#include "spdc/detection.hpp"
#include "spdc/holograms.hpp"
#include "spdc/io.hpp"
#include "spdc/overlap.hpp"
#include "spdc/rng.hpp"
#include "spdc/tomography.hpp"

using namespace spdc;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool passed,
            const std::string& detail) {
    std::printf("[%s] criterion %d: %s — %s\n", passed ? "PASS" : "FAIL", number,
                name.c_str(), detail.c_str());
    if (!passed) ++g_failures;
}

std::string fmt(double v) { return io::format_double(v); }

// 1. closed form vs quadrature over the full index grid at waist ratio 0.2
void criterion_dual_oracle() {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    int tuples = 0;
    for (int lp = 0; lp <= 2; ++lp) {
        const PumpSpec base{{{0, lp}, 1.0}};
        for (int ls = -4; ls <= 4; ++ls) {
            const int li = lp - ls;
            if (std::abs(li) > 4) continue;
            for (int pp = 0; pp <= 3; ++pp) {
                for (int pi = 0; pi <= 3; ++pi) {
                    for (int ps = 0; ps <= 3; ++ps) {
                        PumpSpec pump = base;
                        pump.mode.index.p = pp;
                        const ModeSpec signal{{ps, ls}, 0.2};
                        const ModeSpec idler{{pi, li}, 0.2};
                        const double closed =
                            overlap_closed_form(pump, signal, idler).real();
                        const double quad =
                            overlap_quadrature(pump, signal, idler, 1e-12).real();
                        const double scale = std::max(std::abs(closed), 1e-300);
                        worst = std::max(worst, std::abs(quad - closed) / scale);
                        ++tuples;
                    }
                }
            }
        }
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(1, "dual-oracle equivalence", worst < 1e-7,
           std::to_string(tuples) + " tuples, worst relative deviation " + fmt(worst) +
               ", " + fmt(seconds) + " s");
}

// 2. conservation-violating tuples are exactly zero
void criterion_selection_rule() {
    int violations = 0, checked = 0;
    for (int lp = 0; lp <= 2; ++lp) {
        for (int ls = -3; ls <= 3; ++ls) {
            for (int li = -3; li <= 3; ++li) {
                if (ls + li == lp) continue;
                const PumpSpec pump{{{1, lp}, 1.0}};
                const ModeSpec signal{{1, ls}, 0.2};
                const ModeSpec idler{{2, li}, 0.2};
                ++checked;
                if (std::abs(overlap_quadrature(pump, signal, idler)) != 0.0 ||
                    std::abs(overlap_closed_form(pump, signal, idler)) != 0.0)
                    ++violations;
            }
        }
    }
    report(2, "azimuthal selection rule", violations == 0,
           std::to_string(checked) + " violating tuples, " +
               std::to_string(violations) + " nonzero");
}

// 3. diagonal dominance for p_p in {0,1} and monotone off-diagonal mass
void criterion_radial_correlations() {
    bool diagonal_ok = true;
    for (int pp = 0; pp <= 1; ++pp) {
        const CorrelationMatrix m =
            p_correlation_matrix(PumpSpec{{{pp, 0}, 1.0}}, 0, {0, 3});
        for (int row = 0; row < m.rows(); ++row)
            for (int col = 0; col < m.cols(); ++col)
                if (col != row && m.at(row, row) <= m.at(row, col)) diagonal_ok = false;
    }
    std::vector<double> masses;
    bool monotone = true;
    for (int pp = 0; pp <= 3; ++pp) {
        masses.push_back(
            off_diagonal_mass(p_correlation_matrix(PumpSpec{{{pp, 0}, 1.0}}, 0, {0, 3})));
        if (pp > 0 && masses[pp] < masses[pp - 1]) monotone = false;
    }
    std::string detail = "off-diagonal mass by p_p:";
    for (const double m : masses) detail += " " + fmt(m);
    report(3, "radial-mode correlation structure", diagonal_ok && monotone, detail);
}

// 4. HyGG-model diagonal dip at the lowest-order cell for ell_p = 1
void criterion_hygg_dip() {
    const CorrelationMatrix m =
        oam_correlation_matrix_hygg(PumpSpec{{{0, 1}, 1.0}}, {-3, 4}, 0.1);
    const auto diag = [&](int ls) { return m.at(ls + 3, (1 - ls) + 3); };
    const double lowest = diag(0);
    const bool dip = lowest < diag(-1) && diag(1) < diag(2) &&
                     std::abs(diag(0) - diag(1)) < 1e-9;
    report(4, "unmasked-projection OAM dip",
           dip, "diagonal cells (ls=-2..3): " + fmt(diag(-2)) + " " + fmt(diag(-1)) +
                    " " + fmt(diag(0)) + " " + fmt(diag(1)) + " " + fmt(diag(2)) + " " +
                    fmt(diag(3)));
}

// 5. hologram round trip over all LG targets p <= 3, |ell| <= 2
void criterion_hologram_round_trip() {
    const GridSpec grid{512, 8.0};
    double worst = 2.0;
    int worst_p = -1, worst_ell = 0;
    double slowest = 0.0;
    for (int p = 0; p <= 3; ++p) {
        for (int ell = -2; ell <= 2; ++ell) {
            const auto start = std::chrono::steady_clock::now();
            const TargetField target = target_from_mode({{p, ell}, 1.0}, grid);
            const PhaseMask mask = synthesize_mask(target, 8.0);
            const TargetField recovered = simulate_first_order(mask);
            const double fidelity = overlap_fidelity(target, recovered);
            slowest = std::max(
                slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                       start)
                             .count());
            if (fidelity < worst) {
                worst = fidelity;
                worst_p = p;
                worst_ell = ell;
            }
        }
    }
    report(5, "hologram first-order round trip", worst > 0.99 && slowest < 10.0,
           "worst fidelity " + fmt(worst) + " at p=" + std::to_string(worst_p) +
               ", ell=" + std::to_string(worst_ell) + "; slowest mode " +
               fmt(slowest) + " s");
}

// 6. fiber-coupling ideal-projection limit
void criterion_fiber_limit() {
    const GridSpec grid{256, 8.0};
    const Field2D x = sample_mode({{0, 0}, 1.0}, grid);
    const Field2D pi_mode = sample_mode({{1, 0}, 1.0}, grid);
    bool monotone = true;
    double previous = 1e9, last = 0.0;
    std::string detail = "errors:";
    for (const double sigma : {0.5, 0.2, 0.05, 0.01}) {
        const double rate = single_rate(x, pi_mode, {sigma});
        const double self = single_rate(x, x, {sigma});
        const double error = std::max(rate, std::abs(self - 1.0));
        if (error >= previous) monotone = false;
        previous = error;
        last = error;
        detail += " " + fmt(error);
    }
    report(6, "fiber-coupling ideal limit", monotone && last < 1e-4, detail);
}

// 7. tomography self-consistency
void criterion_tomography_consistency() {
    const auto start = std::chrono::steady_clock::now();
    const auto set = tomo::build_measurement_set();

    // completeness rank of the 16 single-photon projectors
    const auto states = tomo::single_photon_states();
    Eigen::MatrixXcd gram(16, 16);
    for (int row = 0; row < 16; ++row) {
        const Eigen::Matrix4cd proj = states[row].second * states[row].second.adjoint();
        for (int col = 0; col < 16; ++col) gram(row, col) = proj(col / 4, col % 4);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(gram);
    int rank = 0;
    for (int k = 0; k < 16; ++k)
        if (svd.singularValues()[k] > 1e-10) ++rank;

    SplitMix64 rng(1701);
    double worst_fidelity = 2.0, worst_residual = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        tomo::Vector16 v;
        for (int k = 0; k < tomo::kDim; ++k) {
            const double u1 = std::max(rng.uniform(), 1e-16);
            const double u2 = rng.uniform();
            const double mag = std::sqrt(-2.0 * std::log(u1));
            v[k] = {mag * std::cos(2.0 * M_PI * u2), mag * std::sin(2.0 * M_PI * u2)};
        }
        v.normalize();
        tomo::DensityMatrix truth;
        truth.m = v * v.adjoint();
        const auto records = tomo::simulate_records(truth, set, 0.0, 0);
        const auto result = tomo::reconstruct(records);
        worst_fidelity = std::min(worst_fidelity, tomo::fidelity(result.rho, truth));
        worst_residual = std::max(worst_residual, result.residual);
    }

    tomo::DensityMatrix mixed;
    mixed.m = tomo::Matrix16::Identity() / 16.0;
    std::vector<tomo::MeasurementRecord> uniform;
    for (const auto& pair : set) uniform.push_back({pair, 1.0 / 16.0});
    const double mixed_fidelity =
        tomo::fidelity(tomo::reconstruct(uniform).rho, mixed);

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(7, "tomography self-consistency",
           rank == 16 && worst_fidelity > 0.999 && worst_residual < 1e-8 &&
               mixed_fidelity > 0.999 && seconds < 300.0,
           "rank " + std::to_string(rank) + ", worst pure fidelity " +
               fmt(worst_fidelity) + ", worst residual " + fmt(worst_residual) +
               ", mixed fidelity " + fmt(mixed_fidelity) + ", " + fmt(seconds) + " s");
}

// 8. noisy end-to-end pipeline at 1e4 mean counts
void criterion_noisy_pipeline() {
    const auto set = tomo::build_measurement_set();
    const tomo::DensityMatrix truth = tomo::theory_state(PumpSpec{{{0, 0}, 1.0}}, 1);
    tomo::ReconstructionOptions options;
    options.purity_constrained = true;
    double worst = 2.0, total = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto records = tomo::simulate_records(truth, set, 1e4, seed);
        const double fidelity =
            tomo::fidelity(tomo::reconstruct(records, options).rho, truth);
        worst = std::min(worst, fidelity);
        total += fidelity;
    }
    report(8, "noisy reconstruction pipeline", worst > 0.95,
           "20 seeds at 1e4 mean counts: worst fidelity " + fmt(worst) + ", mean " +
               fmt(total / 20.0));
}

// 9. byte-identical artifacts for equal config + seed
bool files_identical_except_manifest(const fs::path& a, const fs::path& b) {
    std::vector<fs::path> names;
    for (const auto& entry : fs::directory_iterator(a)) {
        if (entry.path().filename() == "manifest.json") continue; // carries runtime
        names.push_back(entry.path().filename());
    }
    if (names.empty()) return false;
    for (const auto& name : names) {
        if (!fs::exists(b / name)) return false;
        if (io::read_text(a / name) != io::read_text(b / name)) return false;
    }
    return true;
}

void criterion_determinism(const std::string& cli) {
    if (cli.empty()) {
        report(9, "byte-identical reruns", false, "no --cli path given");
        return;
    }
    const fs::path base = fs::temp_directory_path() / "spdc_acceptance_determinism";
    fs::remove_all(base);
    fs::create_directories(base);

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"overlap", "overlap --pp 1 --lp 1 --ps 1 --ls 2 --pi 2 --li -1"},
        {"correlate", "correlate --ell-s 0,1 --pgm"},
        {"hologram", "hologram --p 1 --ell 1"},
        {"tomo_simulate", "tomo simulate --seed 31415"},
        {"calibrate", "calibrate --ell 0"},
    };
    bool all_ok = true;
    std::string detail;
    for (const auto& [name, args] : commands) {
        const fs::path dir_a = base / (name + "_a");
        const fs::path dir_b = base / (name + "_b");
        const std::string run_a =
            cli + " " + args + " --out " + dir_a.string() + " >/dev/null 2>&1";
        const std::string run_b =
            cli + " " + args + " --out " + dir_b.string() + " >/dev/null 2>&1";
        const bool ok = std::system(run_a.c_str()) == 0 &&
                        std::system(run_b.c_str()) == 0 &&
                        files_identical_except_manifest(dir_a, dir_b);
        if (!ok) {
            all_ok = false;
            detail += name + " differs; ";
        }
    }
    // fit consumes the simulated records and must also be reproducible
    const std::string fit_a = cli + " tomo fit --records " +
                              (base / "tomo_simulate_a" / "records.csv").string() +
                              " --out " + (base / "fit_a").string() + " >/dev/null 2>&1";
    const std::string fit_b = cli + " tomo fit --records " +
                              (base / "tomo_simulate_a" / "records.csv").string() +
                              " --out " + (base / "fit_b").string() + " >/dev/null 2>&1";
    if (std::system(fit_a.c_str()) != 0 || std::system(fit_b.c_str()) != 0 ||
        !files_identical_except_manifest(base / "fit_a", base / "fit_b")) {
        all_ok = false;
        detail += "tomo fit differs; ";
    }
    if (detail.empty()) detail = "all subcommands byte-identical (manifest excluded)";
    report(9, "deterministic artifacts", all_ok, detail);
    fs::remove_all(base);
}

} // namespace

int main(int argc, char** argv) {
    std::string cli;
    for (int i = 1; i < argc; ++i) {
        if (std::string(argv[i]) == "--cli" && i + 1 < argc) cli = argv[i + 1];
    }

    criterion_dual_oracle();
    criterion_selection_rule();
    criterion_radial_correlations();
    criterion_hygg_dip();
    criterion_hologram_round_trip();
    criterion_fiber_limit();
    criterion_tomography_consistency();
    criterion_noisy_pipeline();
    criterion_determinism(cli);

    if (g_failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criteria FAILED\n", g_failures);
    return 1;
}
