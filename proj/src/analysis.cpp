#include "dpatch/analysis.hpp"

#include "dpatch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>

namespace dpatch {

MacroTrajectory MacroTrajectory::from(const Trajectory& traj) {
    MacroTrajectory m;
    m.times = traj.times;
    if (!traj.macro.empty()) {
        m.positions = traj.macro.front().positions;
        m.roles = traj.macro.front().roles;
    }
    m.values.reserve(traj.macro.size());
    for (const auto& s : traj.macro) m.values.push_back(s.values);
    return m;
}

MacroTrajectory MacroTrajectory::rounded(int digits) const {
    auto round = [digits](double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*g", digits, v);
        return std::strtod(buf, nullptr);
    };
    MacroTrajectory m = *this;
    for (auto& t : m.times) t = round(t);
    for (auto& x : m.positions) x = round(x);
    for (auto& row : m.values)
        for (auto& v : row) v = round(v);
    return m;
}

ErrorReport max_error(const MacroTrajectory& traj, const TrustedSolution& oracle,
                      std::span<const double> times) {
    std::vector<double> wanted(times.begin(), times.end());
    if (wanted.empty()) wanted = traj.times;

    ErrorReport r;
    r.positions = traj.positions;
    r.roles = traj.roles;
    r.max_per_node.assign(traj.positions.size(), 0.0);
    const bool has_shock = std::any_of(traj.roles.begin(), traj.roles.end(),
                                       [](NodeRole role) { return role != NodeRole::centre; });
    double outside = 0.0;

    for (double t : wanted) {
        const auto it = std::find_if(traj.times.begin(), traj.times.end(),
                                     [t](double s) { return std::abs(s - t) <= 1e-12; });
        if (it == traj.times.end()) {
            std::ostringstream msg;
            msg << "max_error: time " << t << " is not in the trajectory";
            throw DomainError(msg.str());
        }
        const auto& row = traj.values[static_cast<std::size_t>(it - traj.times.begin())];
        double worst_here = 0.0;
        for (std::size_t m = 0; m < traj.positions.size(); ++m) {
            const double e = std::abs(row[m] - oracle.evaluate(traj.positions[m], *it));
            worst_here = std::max(worst_here, e);
            r.max_per_node[m] = std::max(r.max_per_node[m], e);
            if (traj.roles[m] == NodeRole::centre) outside = std::max(outside, e);
            if (e > r.worst.error) r.worst = {*it, traj.positions[m], traj.roles[m], e};
        }
        r.times.push_back(*it);
        r.max_per_time.push_back(worst_here);
        r.global_max = std::max(r.global_max, worst_here);
    }
    if (has_shock) r.outside_double_max = outside;
    return r;
}

ProblemSpec smooth_convergence_problem() {
    ProblemSpec p;
    p.initial = {InitialCondition::Family::neg_sine, 1.0};
    p.diffusivity = Diffusivity(0.1, 0.0);
    p.final_time = 0.5;
    return p;
}

std::vector<double> default_spacings(const ProblemSpec& problem) {
    const double length = problem.x_hi - problem.x_lo;
    return {length / 24, length / 32, length / 48, length / 64};
}

PatchLayout uniform_layout(double x_lo, double x_hi, int intervals, int half_points, double dx,
                           int gamma) {
    if (intervals < 2) throw ConfigError("uniform layout: need at least two macro intervals");
    const double H = (x_hi - x_lo) / intervals;
    std::vector<Patch> patches;
    for (int k = 1; k < intervals; ++k) patches.emplace_back(x_lo + H * k, half_points, dx);
    return PatchLayout(x_lo, x_hi, std::move(patches), gamma);
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ConfigError("log_log_slope: need matching samples, at least two");
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double lx = std::log(x[k]), ly = std::log(y[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceReport convergence_study(const ProblemSpec& problem, int gamma,
                                    const ConvergenceConfig& cfg) {
    problem.validate();
    if (cfg.spacings.size() < 3)
        throw ConfigError("convergence study: need at least three macro spacings");
    if (cfg.half_points < 2) throw ConfigError("convergence study: half_points must be >= 2");

    const double length = problem.x_hi - problem.x_lo;
    std::vector<int> intervals;
    for (double H : cfg.spacings) {
        const double count = length / H;
        const long rounded = std::lround(count);
        if (!(H > 0.0) || std::abs(count - static_cast<double>(rounded)) > 1e-8 || rounded < 2) {
            std::ostringstream msg;
            msg << "convergence study: spacing " << H << " does not divide the domain length "
                << length << " into whole intervals";
            throw ConfigError(msg.str());
        }
        intervals.push_back(static_cast<int>(rounded));
    }

    // Common refinement so every macro node and micro point is a grid node.
    long common = 1;
    for (int n : intervals) common = std::lcm(common, static_cast<long>(n));
    long cells = common;
    while (length / static_cast<double>(cells) > cfg.max_micro_dx) cells += common;
    const double dx = length / static_cast<double>(cells);

    FineGridConfig fine;
    fine.points = static_cast<int>(cells - 1);
    fine.dt = cfg.oracle_dt;
    fine.snapshot_times = {0.0, problem.final_time};
    const auto reference = brute_force_solve(problem, fine);

    ConvergenceReport report;
    report.gamma = gamma;
    report.micro_dx = dx;
    const std::vector<double> final_time{problem.final_time};
    for (std::size_t k = 0; k < intervals.size(); ++k) {
        const auto layout = uniform_layout(problem.x_lo, problem.x_hi, intervals[k],
                                           cfg.half_points, dx, gamma);
        StepperConfig stepper;
        stepper.output_times = {0.0, problem.final_time};
        const auto traj = MacroTrajectory::from(simulate(problem, layout, stepper));
        report.spacings.push_back(cfg.spacings[k]);
        report.errors.push_back(max_error(traj, reference, final_time).global_max);
    }

    // Order the data by decreasing H for the monotonicity check.
    std::vector<std::size_t> order(report.spacings.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return report.spacings[a] > report.spacings[b]; });
    for (std::size_t k = 1; k < order.size(); ++k)
        if (report.errors[order[k]] > report.errors[order[k - 1]]) report.monotone = false;

    constexpr double rounding_level = 1e-13;
    report.exact = std::all_of(report.errors.begin(), report.errors.end(),
                               [](double e) { return e <= rounding_level; });
    report.slope = report.exact ? std::numeric_limits<double>::quiet_NaN()
                                : log_log_slope(report.spacings, report.errors);
    return report;
}

} // namespace dpatch
