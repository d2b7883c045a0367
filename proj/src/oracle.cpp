#include "dpatch/oracle.hpp"

#include "dpatch/errors.hpp"
#include "dpatch/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dpatch {

void QuadratureConfig::validate() const {
    if (!(tol_window > 0.0)) throw ConfigError("quadrature: tol_window must be positive");
    if (opt_samples < 3) throw ConfigError("quadrature: opt_samples must be >= 3");
    if (!(quad_rel_tol > 0.0)) throw ConfigError("quadrature: quad_rel_tol must be positive");
}

double cole_hopf_exponent(double x, double y, double t, const ProblemSpec& problem) {
    const double gap = x - y;
    return -gap * gap / (4.0 * t) - 0.5 * problem.initial.antiderivative(y);
}

double argmax_v(double x, double t, const ProblemSpec& problem, const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(t > 0.0)) throw DomainError("argmax_v: time must be positive");

    const double lo = problem.x_lo - cfg.tol_window;
    const double hi = problem.x_hi + cfg.tol_window;
    const int samples = cfg.opt_samples;
    const double step = (hi - lo) / (samples - 1);

    int best = 0;
    double best_v = cole_hopf_exponent(x, lo, t, problem);
    for (int k = 1; k < samples; ++k) {
        const double v = cole_hopf_exponent(x, lo + step * k, t, problem);
        if (v > best_v) {
            best_v = v;
            best = k;
        }
    }

    // Golden-section search on the bracket around the best sample.
    double a = lo + step * std::max(0, best - 1);
    double b = lo + step * std::min(samples - 1, best + 1);
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double vc = cole_hopf_exponent(x, c, t, problem);
    double vd = cole_hopf_exponent(x, d, t, problem);
    while (b - a > 1e-12) {
        if (vc > vd) {
            b = d;
            d = c;
            vd = vc;
            c = b - invphi * (b - a);
            vc = cole_hopf_exponent(x, c, t, problem);
        } else {
            a = c;
            c = d;
            vc = vd;
            d = a + invphi * (b - a);
            vd = cole_hopf_exponent(x, d, t, problem);
        }
    }
    const double y = 0.5 * (a + b);
    // Keep the sample if refinement drifted onto a lower point at a kink.
    return cole_hopf_exponent(x, y, t, problem) >= best_v ? y : lo + step * best;
}

double cole_hopf_eval(double x, double t, const ProblemSpec& problem, const QuadratureConfig& cfg,
                      double extra_shift) {
    cfg.validate();
    if (!(t > 0.0)) throw DomainError("cole_hopf_eval: time must be positive");
    if (!problem.diffusivity.is_constant())
        throw ConfigError("cole_hopf_eval: the Cole-Hopf representation needs constant diffusivity "
                          "(eps2 = 0)");

    const double eps = problem.diffusivity.eps1();
    const double y_star = argmax_v(x, t, problem, cfg);
    const double shift = cole_hopf_exponent(x, y_star, t, problem) + extra_shift;

    quadrature::Integrand<2> f = [&](double y) {
        const double w = std::exp((cole_hopf_exponent(x, y, t, problem) - shift) / eps);
        return std::array<double, 2>{(x - y) * w, w};
    };

    // Panels no wider than half the Gaussian kernel width, split at y*.
    const double kernel = std::sqrt(2.0 * eps * t);
    const int per_side =
        std::clamp(static_cast<int>(std::ceil(cfg.tol_window / (0.5 * kernel))), 8, 10000);
    std::vector<double> breaks;
    breaks.reserve(2 * static_cast<std::size_t>(per_side) + 1);
    for (int k = -per_side; k <= per_side; ++k)
        breaks.push_back(y_star + cfg.tol_window * k / per_side);

    quadrature::Options opts;
    opts.rel_tol = cfg.quad_rel_tol;
    const auto r = quadrature::integrate<2>(f, breaks, opts);
    if (!r.converged) {
        std::ostringstream msg;
        msg << "cole_hopf_eval: quadrature did not converge at x = " << x << ", t = " << t;
        throw NumericalError(msg.str(), t, 0);
    }
    if (!(r.value[1] > 0.0) || !std::isfinite(r.value[1])) {
        std::ostringstream msg;
        msg << "cole_hopf_eval: denominator underflow at x = " << x << ", t = " << t;
        throw NumericalError(msg.str(), t, 0);
    }
    return r.value[0] / (t * r.value[1]);
}

ColeHopfOracle::ColeHopfOracle(ProblemSpec problem, QuadratureConfig cfg)
    : problem_(std::move(problem)), cfg_(cfg) {
    cfg_.validate();
    if (!problem_.diffusivity.is_constant())
        throw ConfigError("quadrature oracle refused: nonlinear diffusivity (eps2 = " +
                          std::to_string(problem_.diffusivity.eps2()) +
                          ") has no Cole-Hopf form; use the brute-force oracle");
}

double ColeHopfOracle::evaluate(double x, double t) const {
    if (t == 0.0) return problem_.initial(x);
    return cole_hopf_eval(x, t, problem_, cfg_);
}

double fine_grid_spacing(const ProblemSpec& problem, int points) {
    return (problem.x_hi - problem.x_lo) / (points + 1);
}

FineGridSolution::FineGridSolution(std::vector<double> grid, std::vector<double> times,
                                   std::vector<std::vector<double>> snapshots)
    : grid_(std::move(grid)), times_(std::move(times)), snapshots_(std::move(snapshots)) {
    if (grid_.size() < 3) throw ConfigError("fine grid: need at least three points");
    if (times_.empty() || times_.size() != snapshots_.size())
        throw ConfigError("fine grid: snapshot count does not match the time list");
}

double FineGridSolution::evaluate(double x, double t) const {
    const double x_lo = grid_.front(), x_hi = grid_.back();
    if (!(x >= x_lo - 1e-12 && x <= x_hi + 1e-12)) {
        std::ostringstream msg;
        msg << "brute_force_eval: x = " << x << " outside [" << x_lo << ", " << x_hi << "]";
        throw DomainError(msg.str());
    }
    if (!(t >= times_.front() - 1e-12 && t <= times_.back() + 1e-12)) {
        std::ostringstream msg;
        msg << "brute_force_eval: t = " << t << " outside the snapshot range";
        throw DomainError(msg.str());
    }

    const std::size_t last = grid_.size() - 1;
    const double s = std::clamp((x - x_lo) / (grid_[1] - grid_[0]), 0.0, static_cast<double>(last));
    std::size_t i = static_cast<std::size_t>(std::floor(s));
    double frac = s - static_cast<double>(i);
    if (std::abs(s - std::round(s)) < 1e-9) {
        i = static_cast<std::size_t>(std::round(s));
        frac = 0.0;
    }
    if (i >= last) {
        i = last - 1;
        frac = 1.0;
    }
    auto at = [&](const std::vector<double>& u) { return (1.0 - frac) * u[i] + frac * u[i + 1]; };

    const auto upper = std::lower_bound(times_.begin(), times_.end(), t - 1e-12);
    std::size_t k = static_cast<std::size_t>(upper - times_.begin());
    if (k < times_.size() && std::abs(times_[k] - t) <= 1e-12) return at(snapshots_[k]);
    k = std::min(k, times_.size() - 1);
    const std::size_t k0 = k - 1;
    const double tau = (t - times_[k0]) / (times_[k] - times_[k0]);
    return (1.0 - tau) * at(snapshots_[k0]) + tau * at(snapshots_[k]);
}

FineGridSolution brute_force_solve(const ProblemSpec& problem, const FineGridConfig& cfg) {
    problem.validate();
    if (cfg.points < 3) throw ConfigError("fine grid: points must be >= 3");
    auto times = cfg.snapshot_times;
    if (times.empty()) throw ConfigError("fine grid: no snapshot times requested");
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] < 0.0) throw ConfigError("fine grid: snapshot times must be non-negative");
        if (k > 0 && !(times[k - 1] < times[k]))
            throw ConfigError("fine grid: snapshot times must be strictly increasing");
    }

    const std::size_t n = static_cast<std::size_t>(cfg.points) + 2;
    const double d = fine_grid_spacing(problem, cfg.points);
    std::vector<double> grid(n);
    for (std::size_t k = 0; k < n; ++k) grid[k] = problem.x_lo + d * static_cast<double>(k);
    grid.back() = problem.x_hi;

    std::vector<double> u(n), next(n);
    for (std::size_t k = 1; k + 1 < n; ++k) u[k] = problem.initial(grid[k]);
    u.front() = problem.boundary_left(0.0);
    u.back() = problem.boundary_right(0.0);

    double u_bound = 0.0;
    for (double v : u) u_bound = std::max(u_bound, std::abs(v));
    const double eps_max = problem.diffusivity(u_bound);
    const double stable = d * d / (2.0 * eps_max);
    const double dt = cfg.dt > 0.0 ? cfg.dt : 0.5 * d * d;
    if (dt > stable * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "fine grid: dt = " << dt << " exceeds the forward-Euler bound d^2/(2 eps_max) = "
            << stable;
        throw ConfigError(msg.str());
    }

    // u d / eps(u) grows with |u| because eps1 > 0.
    const double peclet = u_bound * d / eps_max;

    const double e1 = problem.diffusivity.eps1();
    const double e2 = problem.diffusivity.eps2();
    const double inv_d2 = 1.0 / (d * d);
    const double inv_2d = 1.0 / (2.0 * d);

    std::vector<std::vector<double>> snaps;
    snaps.reserve(times.size());
    double t = 0.0;
    for (double target : times) {
        const double span = target - t;
        if (span > 0.0) {
            const auto count = std::max(1L, static_cast<long>(std::ceil(span / dt * (1.0 - 1e-12))));
            const double h = span / static_cast<double>(count);
            for (long s = 0; s < count; ++s) {
                const double t_next = s + 1 == count ? target : t + h;
                bool admissible = true;
                for (std::size_t i = 1; i + 1 < n; ++i) {
                    const double ui = u[i];
                    const double lap = (u[i + 1] - 2.0 * ui + u[i - 1]) * inv_d2;
                    const double adv = ui * (u[i + 1] - u[i - 1]) * inv_2d;
                    next[i] = ui + h * ((e1 + e2 * std::abs(ui)) * lap - adv);
                    admissible &= std::abs(next[i]) <= cfg.blowup_bound;
                }
                next.front() = problem.boundary_left(t_next);
                next.back() = problem.boundary_right(t_next);
                if (!admissible) {
                    std::ostringstream msg;
                    msg << "fine grid: NaN or |u| > " << cfg.blowup_bound << " at t = " << t_next;
                    if (peclet > 2.0)
                        msg << " (cell Peclet number " << peclet << " > 2; use more points)";
                    throw NumericalError(msg.str(), t_next, 0);
                }
                u.swap(next);
                t = t_next;
            }
        }
        snaps.push_back(u);
    }
    return FineGridSolution(std::move(grid), std::move(times), std::move(snaps));
}

double brute_force_eval(double x, double t, const FineGridSolution& solution) {
    return solution.evaluate(x, t);
}

} // namespace dpatch
