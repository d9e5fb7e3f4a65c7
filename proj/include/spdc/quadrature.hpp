#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "spdc/errors.hpp"

namespace spdc {

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-12;   // relative to the L1 norm of the panel integrals
    int max_intervals = 4000;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes on [0, 1] (QUADPACK dqk15 abscissae, shifted).
// Odd entries are the embedded 7-point Gauss rule.
inline constexpr double kGk15Nodes[15] = {
    0.0042723144395936940576063989283284,
    0.025446043828620756865888097308925,
    0.067567788320115451661251881887438,
    0.12923440720030276995800022632466,
    0.20695638226615442611944217787823,
    0.29707742431130140792205907018797,
    0.3961075224960507457083735971537,
    0.5,
    0.6038924775039492542916264028463,
    0.7029225756886985365667896985542,
    0.79304361773384557388055782212177,
    0.87076559279969723004199977367534,
    0.93243221167988454833874811811256,
    0.97455395617137918762296067143325,
    0.99572768556040625043124236981384,
};

inline constexpr double kKronrodWeights[15] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
};

inline constexpr double kGaussWeights[7] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
};

struct Panel {
    double a, b;
    double integral;
    double error;

    bool operator<(const Panel& other) const {
        // priority queue pops the panel with the largest error; ties broken
        // by position so the refinement order is fully deterministic
        if (error != other.error) return error < other.error;
        return a > other.a;
    }
};

template <typename F>
Panel gk15(F&& f, double a, double b) {
    // nodes live on [0, 1] but the weights carry the [-1, 1] normalization
    // (they sum to 2), hence the half-width scale
    const double width = b - a;
    const double half_width = 0.5 * width;
    double kronrod = 0.0, gauss = 0.0;
    for (int j = 0; j < 15; ++j) {
        const double y = f(a + width * kGk15Nodes[j]);
        kronrod += kKronrodWeights[j] * y;
        if (j % 2 == 1) gauss += kGaussWeights[j / 2] * y;
    }
    kronrod *= half_width;
    gauss *= half_width;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

} // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b]. Panels are bisected
/// worst-error-first until the summed error estimate drops below
/// max(abs_tol, rel_tol * sum |panel integrals|). Throws NonConvergence when
/// the subdivision budget is exhausted first.
template <typename F>
double integrate(F&& f, double a, double b, const QuadratureOptions& opts = {}) {
    std::priority_queue<detail::Panel> panels;
    panels.push(detail::gk15(f, a, b));
    double total_error = panels.top().error;
    double l1 = std::abs(panels.top().integral);

    while (total_error > std::max(opts.abs_tol, opts.rel_tol * l1)) {
        if (static_cast<int>(panels.size()) >= opts.max_intervals)
            throw NonConvergence("quadrature: interval budget exhausted");
        const detail::Panel worst = panels.top();
        panels.pop();
        total_error -= worst.error;
        l1 -= std::abs(worst.integral);
        const double mid = 0.5 * (worst.a + worst.b);
        const detail::Panel left = detail::gk15(f, worst.a, mid);
        const detail::Panel right = detail::gk15(f, mid, worst.b);
        total_error += left.error + right.error;
        l1 += std::abs(left.integral) + std::abs(right.integral);
        panels.push(left);
        panels.push(right);
    }

    // Kahan-compensated sum of the panel integrals
    std::vector<detail::Panel> rest;
    rest.reserve(panels.size());
    while (!panels.empty()) {
        rest.push_back(panels.top());
        panels.pop();
    }
    std::sort(rest.begin(), rest.end(),
              [](const detail::Panel& x, const detail::Panel& y) { return x.a < y.a; });
    double sum = 0.0, comp = 0.0;
    for (const auto& panel : rest) {
        const double y = panel.integral - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

} // namespace spdc
