#pragma once

// Microscale finite differences inside each patch, coupled through the
// patch edges, integrated by the method of lines with classical RK4.

#include "dpatch/coupling.hpp"
#include "dpatch/mesh.hpp"
#include "dpatch/model.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace dpatch {

/// Centred second-order discretisation of the modified Burgers equation at
/// one interior point with spacing d.
inline double micro_rhs(double u_prev, double u_here, double u_next, double d,
                        const Diffusivity& diff) noexcept {
    return diff(u_here) * (u_next - 2.0 * u_here + u_prev) / (d * d) -
           u_here * (u_next - u_prev) / (2.0 * d);
}

/// Micro field of every patch, stored contiguously patch by patch.
struct SimulationState {
    double time = 0.0;
    std::vector<double> values;
    std::vector<std::size_t> offsets; ///< patch j occupies [offsets[j], offsets[j+1])

    explicit SimulationState(const PatchLayout& layout);

    std::size_t patch_count() const noexcept { return offsets.size() - 1; }
    std::span<double> patch(std::size_t j);
    std::span<const double> patch(std::size_t j) const;
};

class PatchSystem {
public:
    PatchSystem(ProblemSpec problem, PatchLayout layout);

    const ProblemSpec& problem() const noexcept { return problem_; }
    const PatchLayout& layout() const noexcept { return layout_; }
    const CouplingPlan& plan() const noexcept { return plan_; }

    /// u0 sampled on every micro point, edges coupled at t = 0.
    SimulationState initial_state() const;

    /// Centre values and shock-node values read off the micro field.
    MacroSample sample(std::span<const double> values) const;

    /// Overwrites every patch's two edge points with the coupled values.
    void impose_edges(double t, std::span<double> values) const;

    /// Couples the edges of `values` in place, then writes the interior time
    /// derivatives into `dudt`; edge derivatives are zero.
    void rhs(double t, std::span<double> values, std::span<double> dudt) const;

private:
    ProblemSpec problem_;
    PatchLayout layout_;
    CouplingPlan plan_;
    std::vector<std::size_t> offsets_;
};

/// Time derivatives for all micro points of `state` (edges slaved, zero).
std::vector<double> system_rhs(const SimulationState& state, const PatchLayout& layout,
                               const ProblemSpec& problem);

/// Classical four-stage Runge-Kutta on a flat state. `rhs(t, u, dudt)` may
/// modify `u` (the patch system imposes edge values in place).
class Rk4 {
public:
    explicit Rk4(std::size_t size) : k1_(size), k2_(size), k3_(size), k4_(size), stage_(size) {}

    template <class Rhs>
    void step(Rhs&& rhs, double t, double h, std::span<double> u) {
        const std::size_t n = u.size();
        rhs(t, u, std::span<double>(k1_));
        for (std::size_t i = 0; i < n; ++i) stage_[i] = u[i] + 0.5 * h * k1_[i];
        rhs(t + 0.5 * h, std::span<double>(stage_), std::span<double>(k2_));
        for (std::size_t i = 0; i < n; ++i) stage_[i] = u[i] + 0.5 * h * k2_[i];
        rhs(t + 0.5 * h, std::span<double>(stage_), std::span<double>(k3_));
        for (std::size_t i = 0; i < n; ++i) stage_[i] = u[i] + h * k3_[i];
        rhs(t + h, std::span<double>(stage_), std::span<double>(k4_));
        for (std::size_t i = 0; i < n; ++i)
            u[i] += h / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }

private:
    std::vector<double> k1_, k2_, k3_, k4_, stage_;
};

struct StepperConfig {
    double dt = 0.0;        ///< <= 0 selects default_dt
    double safety = 0.5;    ///< in (0, 1]
    std::vector<double> output_times;
    double blowup_bound = 10.0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<MacroSample> macro;
    std::vector<SimulationState> states;
};

/// Step bound for one patch: min(dx^2 / (2 eps_max), dx / u_max).
double patch_dt_bound(double dx, double eps_max, double u_max) noexcept;

/// safety * min over patches of patch_dt_bound, with u_max the largest |u0|
/// or boundary value and eps_max = eps(u_max).
double default_dt(const PatchLayout& layout, const ProblemSpec& problem, double safety = 0.5);

/// `count` output times evenly spaced over [0, t_final], endpoints included.
std::vector<double> uniform_times(double t_final, std::size_t count);

/// Fixed-step RK4 from u0 through every output time. Throws NumericalError
/// naming the time and patch on NaN or |u| > blowup_bound.
Trajectory simulate(const ProblemSpec& problem, const PatchLayout& layout,
                    const StepperConfig& stepper);

} // namespace dpatch
