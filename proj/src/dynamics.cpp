#include "dpatch/dynamics.hpp"

#include "dpatch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dpatch {

namespace {

std::vector<std::size_t> patch_offsets(const PatchLayout& layout) {
    std::vector<std::size_t> offsets{0};
    for (const auto& p : layout.patches())
        offsets.push_back(offsets.back() + static_cast<std::size_t>(p.point_count()));
    return offsets;
}

// Largest |u0| over the patch points, a uniform sweep of the domain, and the
// boundary values.
double initial_amplitude(const PatchLayout& layout, const ProblemSpec& problem) {
    double u_max = std::max(std::abs(problem.bc_left), std::abs(problem.bc_right));
    constexpr int sweep = 10000;
    for (int k = 0; k <= sweep; ++k) {
        const double x = problem.x_lo + (problem.x_hi - problem.x_lo) * k / sweep;
        u_max = std::max(u_max, std::abs(problem.initial(x)));
    }
    for (const auto& p : layout.patches())
        for (int i = -p.n(); i <= p.n(); ++i)
            u_max = std::max(u_max, std::abs(problem.initial(p.point(i))));
    return u_max;
}

void check_state(const PatchSystem& system, std::span<const double> values,
                 const std::vector<std::size_t>& offsets, double t, double bound) {
    for (std::size_t j = 0; j + 1 < offsets.size(); ++j) {
        for (std::size_t k = offsets[j]; k < offsets[j + 1]; ++k) {
            const double u = values[k];
            if (!std::isfinite(u) || std::abs(u) > bound) {
                std::ostringstream msg;
                msg << "simulation " << (std::isfinite(u) ? "blew up" : "produced NaN")
                    << " at t = " << t << " in patch " << j << " (centre "
                    << system.layout().patches()[j].centre() << ")";
                throw NumericalError(msg.str(), t, j);
            }
        }
    }
}

} // namespace

SimulationState::SimulationState(const PatchLayout& layout) : offsets(patch_offsets(layout)) {
    values.assign(offsets.back(), 0.0);
}

std::span<double> SimulationState::patch(std::size_t j) {
    return std::span<double>(values).subspan(offsets.at(j), offsets.at(j + 1) - offsets[j]);
}

std::span<const double> SimulationState::patch(std::size_t j) const {
    return std::span<const double>(values).subspan(offsets.at(j), offsets.at(j + 1) - offsets[j]);
}

PatchSystem::PatchSystem(ProblemSpec problem, PatchLayout layout)
    : problem_(std::move(problem)), layout_(std::move(layout)), plan_(layout_),
      offsets_(patch_offsets(layout_)) {
    problem_.validate();
    if (std::abs(layout_.x_lo() - problem_.x_lo) > 1e-12 ||
        std::abs(layout_.x_hi() - problem_.x_hi) > 1e-12)
        throw ConfigError("layout domain does not match the problem domain");
}

SimulationState PatchSystem::initial_state() const {
    SimulationState state(layout_);
    for (std::size_t j = 0; j < layout_.patches().size(); ++j) {
        const auto& p = layout_.patches()[j];
        auto u = state.patch(j);
        for (int i = -p.n(); i <= p.n(); ++i)
            u[static_cast<std::size_t>(i + p.n())] = problem_.initial(p.point(i));
    }
    impose_edges(0.0, state.values);
    return state;
}

MacroSample PatchSystem::sample(std::span<const double> values) const {
    MacroSample s;
    const auto& nodes = layout_.macro_nodes();
    s.positions.reserve(nodes.size());
    s.roles.reserve(nodes.size());
    s.values.reserve(nodes.size());
    for (const auto& node : nodes) {
        const auto& p = layout_.patches()[node.patch];
        s.positions.push_back(node.position);
        s.roles.push_back(node.role);
        s.values.push_back(values[offsets_[node.patch] + static_cast<std::size_t>(node.micro_index + p.n())]);
    }
    return s;
}

void PatchSystem::impose_edges(double t, std::span<double> values) const {
    const auto& nodes = layout_.macro_nodes();
    std::vector<double> macro(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const auto& p = layout_.patches()[nodes[k].patch];
        macro[k] = values[offsets_[nodes[k].patch] + static_cast<std::size_t>(nodes[k].micro_index + p.n())];
    }
    std::vector<EdgePair> edges(layout_.patches().size());
    plan_.apply(macro, problem_.boundary_left(t), problem_.boundary_right(t), edges);
    for (std::size_t j = 0; j < edges.size(); ++j) {
        values[offsets_[j]] = edges[j].left;
        values[offsets_[j + 1] - 1] = edges[j].right;
    }
}

void PatchSystem::rhs(double t, std::span<double> values, std::span<double> dudt) const {
    impose_edges(t, values);
    const auto& diff = problem_.diffusivity;
    for (std::size_t j = 0; j < layout_.patches().size(); ++j) {
        const double d = layout_.patches()[j].dx();
        const std::size_t first = offsets_[j], last = offsets_[j + 1] - 1;
        dudt[first] = 0.0;
        dudt[last] = 0.0;
        for (std::size_t k = first + 1; k < last; ++k)
            dudt[k] = micro_rhs(values[k - 1], values[k], values[k + 1], d, diff);
    }
}

std::vector<double> system_rhs(const SimulationState& state, const PatchLayout& layout,
                               const ProblemSpec& problem) {
    PatchSystem system(problem, layout);
    std::vector<double> u = state.values;
    std::vector<double> dudt(u.size());
    system.rhs(state.time, u, dudt);
    return dudt;
}

double patch_dt_bound(double dx, double eps_max, double u_max) noexcept {
    const double diffusive = dx * dx / (2.0 * eps_max);
    const double advective =
        u_max > 0.0 ? dx / u_max : std::numeric_limits<double>::infinity();
    return std::min(diffusive, advective);
}

double default_dt(const PatchLayout& layout, const ProblemSpec& problem, double safety) {
    if (!(safety > 0.0 && safety <= 1.0))
        throw ConfigError("stepper: safety factor must lie in (0, 1]");
    const double u_max = initial_amplitude(layout, problem);
    const double eps_max = problem.diffusivity(u_max);
    double dt = std::numeric_limits<double>::infinity();
    for (const auto& p : layout.patches()) dt = std::min(dt, patch_dt_bound(p.dx(), eps_max, u_max));
    return safety * dt;
}

std::vector<double> uniform_times(double t_final, std::size_t count) {
    if (count < 2) throw ConfigError("uniform_times: need at least two output times");
    std::vector<double> t(count);
    for (std::size_t k = 0; k < count; ++k)
        t[k] = t_final * static_cast<double>(k) / static_cast<double>(count - 1);
    return t;
}

Trajectory simulate(const ProblemSpec& problem, const PatchLayout& layout,
                    const StepperConfig& stepper) {
    const PatchSystem system(problem, layout);
    const double dt = stepper.dt > 0.0 ? stepper.dt : default_dt(layout, problem, stepper.safety);

    const auto& outputs = stepper.output_times;
    for (std::size_t k = 0; k < outputs.size(); ++k) {
        if (outputs[k] < 0.0 || outputs[k] > problem.final_time + 1e-12)
            throw ConfigError("stepper: output times must lie in [0, final_time]");
        if (k > 0 && !(outputs[k - 1] < outputs[k]))
            throw ConfigError("stepper: output times must be strictly increasing");
    }

    SimulationState state = system.initial_state();
    Rk4 rk4(state.values.size());
    auto rhs = [&system](double t, std::span<double> u, std::span<double> dudt) {
        system.rhs(t, u, dudt);
    };
    auto step = [&](double t, double h) { rk4.step(rhs, t, h, state.values); };

    Trajectory traj;
    double t = 0.0;
    for (double target : outputs) {
        const double span = target - t;
        if (span > 0.0) {
            // Equal sub-steps no longer than dt land exactly on the target.
            const auto count = static_cast<long>(std::ceil(span / dt * (1.0 - 1e-12)));
            const double h = span / static_cast<double>(std::max(1L, count));
            for (long s = 0; s < std::max(1L, count); ++s) {
                step(t, h);
                t = (s + 1 == std::max(1L, count)) ? target : t + h;
                check_state(system, state.values, state.offsets, t, stepper.blowup_bound);
            }
        }
        state.time = target;
        system.impose_edges(target, state.values);
        traj.times.push_back(target);
        traj.macro.push_back(system.sample(state.values));
        traj.states.push_back(state);
    }
    return traj;
}

} // namespace dpatch
