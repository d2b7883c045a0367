#include "dpatch/quadrature.hpp"

#include "dpatch/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace dpatch::quadrature {

namespace {

template <std::size_t N>
struct Panel {
    double a;
    double b;
    std::array<double, N> value;
    std::array<double, N> error;
    std::array<double, N> abs_value;
    double priority;
};

// Kronrod abscissae are [0, x1, ..., x7]; the embedded 7-point Gauss rule
// uses the even-indexed ones (0, x2, x4, x6).
template <std::size_t N>
Panel<N> kronrod_panel(const Integrand<N>& f, double a, double b) {
    using kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
    using gauss = boost::math::quadrature::gauss<double, 7>;
    static const auto& xk = kronrod::abscissa();
    static const auto& wk = kronrod::weights();
    static const auto& wg = gauss::weights();

    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    Panel<N> p{a, b, {}, {}, {}, 0.0};
    std::array<double, N> g{};
    auto accumulate = [&](const std::array<double, N>& fx, double w_k, double w_g) {
        for (std::size_t c = 0; c < N; ++c) {
            p.value[c] += w_k * fx[c];
            p.abs_value[c] += w_k * std::abs(fx[c]);
            g[c] += w_g * fx[c];
        }
    };
    accumulate(f(mid), wk[0], wg[0]);
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const double w_g = (i % 2 == 0) ? wg[i / 2] : 0.0;
        accumulate(f(mid - half * xk[i]), wk[i], w_g);
        accumulate(f(mid + half * xk[i]), wk[i], w_g);
    }
    for (std::size_t c = 0; c < N; ++c) {
        p.value[c] *= half;
        p.abs_value[c] *= std::abs(half);
        g[c] *= half;
        p.error[c] = std::abs(p.value[c] - g[c]);
    }
    return p;
}

} // namespace

template <std::size_t N>
Result<N> integrate(const Integrand<N>& f, std::span<const double> breaks, const Options& opts) {
    if (breaks.size() < 2) throw ConfigError("quadrature: need at least one panel");

    Result<N> r;
    std::vector<Panel<N>> panels;
    panels.reserve(breaks.size() * 2);
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        auto p = kronrod_panel(f, breaks[k], breaks[k + 1]);
        for (std::size_t c = 0; c < N; ++c) {
            r.value[c] += p.value[c];
            r.error[c] += p.error[c];
            r.abs_value[c] += p.abs_value[c];
        }
        panels.push_back(p);
    }

    auto tolerance = [&](std::size_t c) { return std::max(opts.abs_tol, opts.rel_tol * r.abs_value[c]); };
    auto done = [&] {
        for (std::size_t c = 0; c < N; ++c)
            if (r.error[c] > tolerance(c)) return false;
        return true;
    };
    // Priority is the panel error scaled by the current component tolerance.
    auto priority = [&](const Panel<N>& p) {
        double worst = 0.0;
        for (std::size_t c = 0; c < N; ++c) worst = std::max(worst, p.error[c] / tolerance(c));
        return worst;
    };
    auto cmp = [](const Panel<N>& x, const Panel<N>& y) { return x.priority < y.priority; };

    for (auto& p : panels) p.priority = priority(p);
    std::priority_queue<Panel<N>, std::vector<Panel<N>>, decltype(cmp)> heap(cmp, std::move(panels));

    while (!done() && heap.size() < opts.max_intervals) {
        const Panel<N> worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        auto left = kronrod_panel(f, worst.a, mid);
        auto right = kronrod_panel(f, mid, worst.b);
        for (std::size_t c = 0; c < N; ++c) {
            r.value[c] += left.value[c] + right.value[c] - worst.value[c];
            r.error[c] += left.error[c] + right.error[c] - worst.error[c];
            r.abs_value[c] += left.abs_value[c] + right.abs_value[c] - worst.abs_value[c];
        }
        left.priority = priority(left);
        right.priority = priority(right);
        heap.push(left);
        heap.push(right);
    }

    // Re-sum from the panels to drop the running-update rounding.
    r.value = {};
    r.error = {};
    r.abs_value = {};
    r.intervals = heap.size();
    while (!heap.empty()) {
        const auto& p = heap.top();
        for (std::size_t c = 0; c < N; ++c) {
            r.value[c] += p.value[c];
            r.error[c] += p.error[c];
            r.abs_value[c] += p.abs_value[c];
        }
        heap.pop();
    }
    r.converged = done();
    return r;
}

template Result<1> integrate<1>(const Integrand<1>&, std::span<const double>, const Options&);
template Result<2> integrate<2>(const Integrand<2>&, std::span<const double>, const Options&);

} // namespace dpatch::quadrature
