#pragma once

// Globally adaptive Gauss-Kronrod (7/15) integration of a vector-valued
// integrand. Each component converges relative to the integral of its
// absolute value, so components that cancel to zero still terminate.

#include <array>
#include <cstddef>
#include <functional>
#include <span>

namespace dpatch::quadrature {

template <std::size_t N>
struct Result {
    std::array<double, N> value{};
    std::array<double, N> error{};
    std::array<double, N> abs_value{};
    std::size_t intervals = 0;
    bool converged = false;
};

template <std::size_t N>
using Integrand = std::function<std::array<double, N>(double)>;

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 1e-300;
    std::size_t max_intervals = 200000;
};

/// Integrates over the consecutive panels [breaks[k], breaks[k+1]], then
/// bisects the worst panel until every component meets its tolerance.
template <std::size_t N>
Result<N> integrate(const Integrand<N>& f, std::span<const double> breaks, const Options& opts);

extern template Result<1> integrate<1>(const Integrand<1>&, std::span<const double>, const Options&);
extern template Result<2> integrate<2>(const Integrand<2>&, std::span<const double>, const Options&);

} // namespace dpatch::quadrature
