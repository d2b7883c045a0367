#pragma once

// Error measurement at macroscale nodes and grid-refinement studies of the
// coupling order.

#include "dpatch/dynamics.hpp"
#include "dpatch/mesh.hpp"
#include "dpatch/oracle.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace dpatch {

/// Macro node values over time: values[k][m] is node m at times[k].
struct MacroTrajectory {
    std::vector<double> times;
    std::vector<double> positions;
    std::vector<NodeRole> roles;
    std::vector<std::vector<double>> values;

    static MacroTrajectory from(const Trajectory& traj);

    /// Every value rounded to `digits` significant decimal digits, i.e. what
    /// a file written at that precision holds.
    MacroTrajectory rounded(int digits) const;
};

struct NodeError {
    double time = 0.0;
    double position = 0.0;
    NodeRole role = NodeRole::centre;
    double error = 0.0;
};

struct ErrorReport {
    std::vector<double> times;
    std::vector<double> max_per_time;
    std::vector<double> positions;
    std::vector<NodeRole> roles;
    std::vector<double> max_per_node;   ///< worst error of each node over time
    double global_max = 0.0;
    NodeError worst;
    std::optional<double> outside_double_max; ///< shock nodes excluded
};

/// |U - oracle(X, t)| at every macro node and every requested time. Empty
/// `times` means all trajectory times. Throws DomainError for a time the
/// trajectory does not contain.
ErrorReport max_error(const MacroTrajectory& traj, const TrustedSolution& oracle,
                      std::span<const double> times = {});

struct ConvergenceConfig {
    /// Macro spacings; each must divide the domain length into whole intervals.
    std::vector<double> spacings;
    int half_points = 2;          ///< patch half-count n
    double max_micro_dx = 0.015;  ///< micro and reference grid spacing bound
    double oracle_dt = 1e-6;      ///< forward-Euler step of the reference solve
};

struct ConvergenceReport {
    int gamma = 1;
    std::vector<double> spacings;
    std::vector<double> errors;
    double slope = 0.0;
    bool exact = false;      ///< every error at rounding level; slope undefined
    bool monotone = true;    ///< error never grows as H shrinks
    double micro_dx = 0.0;
};

/// Shock-free instance for order studies: u0 = -sin x, eps = 0.1, t = 0.5.
ProblemSpec smooth_convergence_problem();

/// Default spacings L / {24, 32, 48, 64}; coarser sets are pre-asymptotic
/// for gamma >= 2.
std::vector<double> default_spacings(const ProblemSpec& problem);

/// Standard patches at x_lo + k H, k = 1 .. intervals - 1.
PatchLayout uniform_layout(double x_lo, double x_hi, int intervals, int half_points,
                           double dx, int gamma);

/// Runs the patch scheme for each spacing against a fine-grid reference
/// with the patches' micro spacing and fits log(error) against log(H).
ConvergenceReport convergence_study(const ProblemSpec& problem, int gamma,
                                    const ConvergenceConfig& cfg);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(std::span<const double> x, std::span<const double> y);

} // namespace dpatch
