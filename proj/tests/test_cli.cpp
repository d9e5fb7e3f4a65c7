#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "spdc/io.hpp"

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    const char* path = std::getenv("SPDC_CLI");
    return path ? path : "";
}

int run(const std::string& args) {
    const std::string command = cli_path() + " " + args + " >/dev/null 2>&1";
    const int status = std::system(command.c_str());
    return WEXITSTATUS(status);
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name)
        : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str(const std::string& sub = "") const {
        return (sub.empty() ? path : path / sub).string();
    }
};

} // namespace

TEST_CASE("cli: exit codes" * doctest::skip(cli_path().empty())) {
    TempDir dir("spdc_cli_codes");
    CHECK(run("definitely-not-a-command") == 2);
    CHECK(run("overlap --no-such-flag") == 2);

    // malformed config file
    spdc::io::write_text(dir.path / "bad.json", "{ \"pump\": { \"p\": -3 } }");
    CHECK(run("overlap --config " + dir.str("bad.json") + " --out " + dir.str("o")) == 2);
    spdc::io::write_text(dir.path / "unknown.json", "{ \"nonsense\": 1 }");
    CHECK(run("overlap --config " + dir.str("unknown.json") + " --out " + dir.str("o")) == 2);

    // missing records file for tomo fit
    CHECK(run("tomo fit --records " + dir.str("missing.csv") + " --out " + dir.str("o")) == 2);

    // happy path, conservation-violating indices still exit 0 and report 0
    CHECK(run("overlap --pp 0 --lp 0 --ps 0 --ls 1 --pi 0 --li 1 --out " + dir.str("ok")) == 0);
    const std::string report = spdc::io::read_text(dir.path / "ok" / "overlap_report.csv");
    CHECK(report.find(",0,") != std::string::npos);
}

TEST_CASE("cli: config file merging and flag precedence" * doctest::skip(cli_path().empty())) {
    TempDir dir("spdc_cli_config");
    spdc::io::write_text(dir.path / "cfg.json",
                         "{ \"correlate\": { \"ell_s\": [1] }, \"p_range\": "
                         "{ \"max\": 2 }, \"output\": { \"formats\": [\"csv\"] } }");

    CHECK(run("correlate --model lg --config " + dir.str("cfg.json") + " --out " +
              dir.str("a")) == 0);
    CHECK(fs::exists(dir.path / "a" / "p_correlation_ells1.csv"));
    CHECK(!fs::exists(dir.path / "a" / "p_correlation_ells1.json")); // csv only

    // the flag overrides the config file's ell_s list
    CHECK(run("correlate --model lg --config " + dir.str("cfg.json") +
              " --ell-s 2 --out " + dir.str("b")) == 0);
    CHECK(fs::exists(dir.path / "b" / "p_correlation_ells2.csv"));
    CHECK(!fs::exists(dir.path / "b" / "p_correlation_ells1.csv"));

    // p_range.max = 2 -> 3x3 matrix (header + 3 rows)
    const std::string csv =
        spdc::io::read_text(dir.path / "b" / "p_correlation_ells2.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("cli: overlap batch mode emits one row per tuple" * doctest::skip(cli_path().empty())) {
    TempDir dir("spdc_cli_batch");
    spdc::io::write_text(dir.path / "tuples.csv",
                         "p_p,ell_p,p_s,ell_s,p_i,ell_i\n"
                         "0,0,0,0,0,0\n"
                         "1,0,1,1,1,-1\n"
                         "0,1,0,2,0,-1\n");
    CHECK(run("overlap --batch " + dir.str("tuples.csv") + " --out " + dir.str("o")) == 0);
    const std::string report = spdc::io::read_text(dir.path / "o" / "overlap_report.csv");
    CHECK(std::count(report.begin(), report.end(), '\n') == 4); // header + 3 rows
}

TEST_CASE("cli: simulate then fit round trip" * doctest::skip(cli_path().empty())) {
    TempDir dir("spdc_cli_tomo");
    CHECK(run("tomo simulate --seed 5 --out " + dir.str("run")) == 0);
    CHECK(fs::exists(dir.path / "run" / "records.csv"));
    CHECK(fs::exists(dir.path / "run" / "records.json"));
    CHECK(run("tomo fit --out " + dir.str("run")) == 0);
    const std::string report =
        spdc::io::read_text(dir.path / "run" / "tomo_report.json");
    CHECK(report.find("fidelity_to_theory") != std::string::npos);

    // fitting from the JSON records gives the same result as from the CSV
    CHECK(run("tomo fit --records " + dir.str("run") + "/records.json --out " +
              dir.str("fit_json")) == 0);
    const std::string report_json =
        spdc::io::read_text(dir.path / "fit_json" / "tomo_report.json");
    CHECK(report_json.substr(0, report_json.find("runtime")) ==
          report.substr(0, report.find("runtime")));
}
