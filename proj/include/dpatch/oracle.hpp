#pragma once

// Trusted reference solutions: the Cole-Hopf integral representation for
// constant diffusivity, and a brute-force fine-grid finite-difference solve
// for any diffusivity.

#include "dpatch/model.hpp"

#include <span>
#include <string>
#include <vector>

namespace dpatch {

/// A reference field u(x, t) evaluable at arbitrary points.
class TrustedSolution {
public:
    virtual ~TrustedSolution() = default;
    virtual double evaluate(double x, double t) const = 0;
    virtual std::string name() const = 0;
};

struct QuadratureConfig {
    double tol_window = 5.0;  ///< integrate over [y* - tol_window, y* + tol_window]
    int opt_samples = 2001;   ///< coarse scan before golden-section refinement
    double quad_rel_tol = 1e-10;

    void validate() const;
};

/// Maximiser of v(x, y) = -(x - y)^2 / (4t) - (1/2) int_0^y u0 over
/// [x_lo - tol_window, x_hi + tol_window].
double argmax_v(double x, double t, const ProblemSpec& problem, const QuadratureConfig& cfg = {});

/// The exponent v(x, y) itself.
double cole_hopf_exponent(double x, double y, double t, const ProblemSpec& problem);

/// Burgers solution by quadrature of the Cole-Hopf representation, with the
/// exponent shifted by C(x) = v(x, y*) + extra_shift. Any extra_shift cancels
/// analytically; it exists so the cancellation can be checked.
double cole_hopf_eval(double x, double t, const ProblemSpec& problem,
                      const QuadratureConfig& cfg = {}, double extra_shift = 0.0);

class ColeHopfOracle final : public TrustedSolution {
public:
    /// Throws ConfigError unless the diffusivity is constant.
    explicit ColeHopfOracle(ProblemSpec problem, QuadratureConfig cfg = {});

    double evaluate(double x, double t) const override;
    std::string name() const override { return "quadrature"; }

private:
    ProblemSpec problem_;
    QuadratureConfig cfg_;
};

struct FineGridConfig {
    int points = 1600;  ///< interior grid points; spacing d = L / (points + 1)
    double dt = 0.0;    ///< forward Euler step, <= 0 selects d^2 / 2
    std::vector<double> snapshot_times;
    double blowup_bound = 10.0;
};

double fine_grid_spacing(const ProblemSpec& problem, int points);

/// Snapshots of the fine-grid solve, boundary points included.
class FineGridSolution final : public TrustedSolution {
public:
    FineGridSolution(std::vector<double> grid, std::vector<double> times,
                     std::vector<std::vector<double>> snapshots);

    const std::vector<double>& grid() const noexcept { return grid_; }
    const std::vector<double>& times() const noexcept { return times_; }
    const std::vector<double>& snapshot(std::size_t k) const { return snapshots_.at(k); }
    double spacing() const noexcept { return grid_[1] - grid_[0]; }

    /// Linear in space between grid points and in time between snapshots.
    /// Throws DomainError outside [x_lo, x_hi] x [first, last snapshot].
    double evaluate(double x, double t) const override;
    std::string name() const override { return "brute"; }

private:
    std::vector<double> grid_;
    std::vector<double> times_;
    std::vector<std::vector<double>> snapshots_;
};

/// Forward Euler on the fine grid with the Dirichlet values pinned. Throws
/// ConfigError when dt violates dt <= d^2 / (2 eps_max), NumericalError on
/// NaN or blow-up.
FineGridSolution brute_force_solve(const ProblemSpec& problem, const FineGridConfig& cfg);

/// brute_force_eval: free-function form of FineGridSolution::evaluate.
double brute_force_eval(double x, double t, const FineGridSolution& solution);

} // namespace dpatch
