#include <doctest.h>

#include <cmath>
#include <numbers>

#include "spdc/errors.hpp"
#include "spdc/quadrature.hpp"

using namespace spdc;

TEST_CASE("polynomial and gaussian integrals") {
    CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0) ==
          doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
}

TEST_CASE("oscillatory integrand") {
    const double value = integrate([](double x) { return std::sin(x); }, 0.0, 50.0);
    CHECK(value == doctest::Approx(1.0 - std::cos(50.0)).epsilon(1e-12));
}

TEST_CASE("interval budget exhaustion throws NonConvergence") {
    QuadratureOptions opts;
    opts.abs_tol = 1e-300;
    opts.rel_tol = 0.0;
    opts.max_intervals = 8;
    CHECK_THROWS_AS(integrate([](double x) { return std::sin(100.0 * x) / (1e-8 + x * x); },
                              0.0, 10.0, opts),
                    NonConvergence);
}
