#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <vector>

#include "spdc/errors.hpp"
#include "spdc/exec.hpp"
#include "spdc/io.hpp"
#include "spdc/rng.hpp"

using namespace spdc;
namespace fs = std::filesystem;

TEST_CASE("parallel_for covers every index under both policies") {
    for (const Exec exec : {Exec::Serial, Exec::Parallel}) {
        std::vector<int> hits(1000, 0);
        parallel_for(1000, exec, [&](long i) { hits[i] += 1; });
        for (const int h : hits) CHECK(h == 1);
    }
}

TEST_CASE("parallel_for rethrows the exception of the lowest failing index") {
    const auto body = [](long i) {
        if (i == 3) throw NonConvergence("index three");
        if (i == 7) throw ConvergenceFailure("index seven");
    };
    for (const Exec exec : {Exec::Serial, Exec::Parallel}) {
        try {
            parallel_for(64, exec, body);
            FAIL("expected an exception");
        } catch (const NonConvergence& e) {
            CHECK(std::string(e.what()) == "index three");
        }
    }
}

TEST_CASE("format_double round trips exactly") {
    SplitMix64 rng(77);
    const auto check_roundtrip = [](double x) {
        const std::string text = io::format_double(x);
        CHECK(std::strtod(text.c_str(), nullptr) == x);
    };
    check_roundtrip(0.0);
    check_roundtrip(1.0);
    check_roundtrip(1e-300);
    check_roundtrip(0.1);
    check_roundtrip(2.0 / 3.0);
    for (int trial = 0; trial < 200; ++trial)
        check_roundtrip((rng.uniform() - 0.5) * std::pow(10.0, double(rng.next() % 40) - 20.0));
}

TEST_CASE("csv and pgm writers produce the expected bytes") {
    const fs::path dir = fs::temp_directory_path() / "spdc_io_test";
    fs::create_directories(dir);

    io::write_matrix_csv(dir / "m.csv", "a\\b", {"r0", "r1"}, {"c0", "c1"},
                         {1.0, 0.5, 0.25, 0.0});
    CHECK(io::read_text(dir / "m.csv") ==
          "a\\b,c0,c1\nr0,1,0.5\nr1,0.25,0\n");

    io::write_pgm(dir / "m.pgm", 2, 2, {0.0, 1.0, 0.5, 2.0});
    const std::string pgm = io::read_text(dir / "m.pgm");
    CHECK(pgm.substr(0, 11) == "P5\n2 2\n255\n");
    REQUIRE(pgm.size() == 15);
    CHECK(static_cast<unsigned char>(pgm[11]) == 0);
    CHECK(static_cast<unsigned char>(pgm[12]) == 255);
    CHECK(static_cast<unsigned char>(pgm[13]) == 128);
    CHECK(static_cast<unsigned char>(pgm[14]) == 255); // clamped

    fs::remove_all(dir);
}

TEST_CASE("fnv1a hash is stable") {
    CHECK(io::fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(io::fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(io::hash_hex("abc") == "e71fa2190541574b");
}
