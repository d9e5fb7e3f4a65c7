#pragma once

// Test-side reference implementations, deliberately independent of the
// library code paths they are used to check: a recursive Simpson integrator
// (the library uses Gauss-Kronrod), exact rational arithmetic for the
// terminating hypergeometric sums, and fixed-order Gauss-Legendre for mode
// overlaps.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace oracles {

// ------------------------------------------------------ adaptive Simpson --

inline double simpson_step(const std::function<double(double)>& f, double a,
                           double b, double fa, double fm, double fb, double whole,
                           double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0) return left + right;
    if (std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate_simpson(const std::function<double(double)>& f, double a,
                                double b, double tol = 1e-11) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, 48);
}

// --------------------------------------------------- rational arithmetic --

struct Rational {
    // numerator / denominator over __int128 to keep the terminating sums exact
    __int128 num = 0;
    __int128 den = 1;

    Rational() = default;
    Rational(long long n) : num(n), den(1) {}
    Rational(long long n, long long d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const __int128 g = gcd128(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) {
            const __int128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }

    Rational operator+(const Rational& o) const {
        Rational r;
        r.num = num * o.den + o.num * den;
        r.den = den * o.den;
        r.normalize();
        return r;
    }
    Rational operator*(const Rational& o) const {
        Rational r;
        r.num = num * o.num;
        r.den = den * o.den;
        r.normalize();
        return r;
    }
    Rational operator/(const Rational& o) const {
        if (o.num == 0) throw std::domain_error("rational division by zero");
        Rational r;
        r.num = num * o.den;
        r.den = den * o.num;
        r.normalize();
        return r;
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

inline Rational poch_rational(const Rational& a, int k) {
    Rational prod(1);
    for (int j = 0; j < k; ++j) prod = prod * (a + Rational(j));
    return prod;
}

inline Rational factorial_rational(int k) {
    Rational prod(1);
    for (int j = 2; j <= k; ++j) prod = prod * Rational(j);
    return prod;
}

/// Exact nested-loop Lauricella F_A^(3) for non-positive integer b's and
/// rational parameters.
inline Rational lauricella_rational(const Rational& a, int b1, int b2, int b3,
                                    const Rational& c1, const Rational& c2,
                                    const Rational& c3, const Rational& x1,
                                    const Rational& x2, const Rational& x3) {
    Rational sum(0);
    for (int k1 = 0; k1 <= -b1; ++k1) {
        for (int k2 = 0; k2 <= -b2; ++k2) {
            for (int k3 = 0; k3 <= -b3; ++k3) {
                Rational term = poch_rational(a, k1 + k2 + k3);
                term = term * poch_rational(Rational(b1), k1);
                term = term * poch_rational(Rational(b2), k2);
                term = term * poch_rational(Rational(b3), k3);
                const Rational denom = poch_rational(c1, k1) * poch_rational(c2, k2) *
                                       poch_rational(c3, k3) * factorial_rational(k1) *
                                       factorial_rational(k2) * factorial_rational(k3);
                term = term / denom;
                for (int j = 0; j < k1; ++j) term = term * x1;
                for (int j = 0; j < k2; ++j) term = term * x2;
                for (int j = 0; j < k3; ++j) term = term * x3;
                sum = sum + term;
            }
        }
    }
    return sum;
}

inline Rational appell_rational(const Rational& a, int b1, int b2, const Rational& c1,
                                const Rational& c2, const Rational& x,
                                const Rational& y) {
    return lauricella_rational(a, 0, b1, b2, Rational(1), c1, c2, Rational(0), x, y);
}

// ------------------------------------------------ fixed Gauss-Legendre 64 --

/// Nodes/weights generated on the fly by Newton iteration on the Legendre
/// polynomial; plenty for the smooth mode products used in the tests.
inline void gauss_legendre(int n, std::vector<double>& nodes,
                           std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
                break;
            }
        }
        nodes[i] = x;
    }
}

} // namespace oracles
