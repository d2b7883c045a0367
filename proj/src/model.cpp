#include "dpatch/model.hpp"

#include "dpatch/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace dpatch {

Diffusivity::Diffusivity(double eps1, double eps2) : eps1_(eps1), eps2_(eps2) {
    if (!(eps1 > 0.0) || !std::isfinite(eps1))
        throw ConfigError("diffusivity: eps1 must be positive, got " + std::to_string(eps1));
    if (!(eps2 >= 0.0) || !std::isfinite(eps2))
        throw ConfigError("diffusivity: eps2 must be non-negative, got " + std::to_string(eps2));
}

double Diffusivity::operator()(double u) const noexcept {
    return eps1_ + eps2_ * std::abs(u);
}

double lncosh(double a) noexcept {
    const double b = std::abs(a);
    return b + std::log1p(std::exp(-2.0 * b)) - std::numbers::ln2;
}

double InitialCondition::operator()(double x) const noexcept {
    using std::numbers::pi;
    switch (family) {
    case Family::tanh_step:
        return (x / pi - std::tanh(2.0 * x / param)) / std::tanh(2.0 * pi / param);
    case Family::neg_sine:
        return -param * std::sin(x);
    case Family::zero:
        break;
    }
    return 0.0;
}

double InitialCondition::antiderivative(double y) const noexcept {
    using std::numbers::pi;
    switch (family) {
    case Family::tanh_step:
        return (y * y / (2.0 * pi) - 0.5 * param * lncosh(2.0 * y / param)) /
               std::tanh(2.0 * pi / param);
    case Family::neg_sine:
        return param * (std::cos(y) - 1.0);
    case Family::zero:
        break;
    }
    return 0.0;
}

std::string_view InitialCondition::family_name() const noexcept {
    switch (family) {
    case Family::tanh_step: return "tanh";
    case Family::neg_sine: return "sine";
    case Family::zero: return "zero";
    }
    return "zero";
}

InitialCondition::Family InitialCondition::parse_family(std::string_view name) {
    if (name == "tanh") return Family::tanh_step;
    if (name == "sine") return Family::neg_sine;
    if (name == "zero") return Family::zero;
    throw ConfigError("unknown initial condition family '" + std::string(name) +
                      "' (expected tanh, sine or zero)");
}

void ProblemSpec::validate() const {
    if (!(x_lo < x_hi))
        throw ConfigError("problem: domain must satisfy x_lo < x_hi");
    if (!(final_time > 0.0))
        throw ConfigError("problem: final time must be positive");
    if (initial.family == InitialCondition::Family::tanh_step && !(initial.param > 0.0))
        throw ConfigError("problem: tanh initial condition needs a positive width");
    constexpr double tol = 1e-8;
    if (std::abs(initial(x_lo) - boundary_left(0.0)) > tol)
        throw ConfigError("problem: initial condition disagrees with the left boundary value");
    if (std::abs(initial(x_hi) - boundary_right(0.0)) > tol)
        throw ConfigError("problem: initial condition disagrees with the right boundary value");
}

std::string_view to_string(ArchetypeId id) noexcept {
    switch (id) {
    case ArchetypeId::M1: return "M1";
    case ArchetypeId::M2: return "M2";
    case ArchetypeId::M3: return "M3";
    case ArchetypeId::M4: return "M4";
    }
    return "M1";
}

ArchetypeId parse_archetype(std::string_view name) {
    for (auto id : all_archetypes)
        if (to_string(id) == name) return id;
    throw ConfigError("unknown archetype '" + std::string(name) + "' (expected M1..M4)");
}

ProblemSpec make_archetype(ArchetypeId id) {
    constexpr double eps1 = 0.001;
    const bool nonlinear = id == ArchetypeId::M3 || id == ArchetypeId::M4;
    const bool step = id == ArchetypeId::M1 || id == ArchetypeId::M3;

    ProblemSpec p;
    p.diffusivity = Diffusivity(eps1, nonlinear ? 0.05 : 0.0);
    p.initial = step ? InitialCondition{InitialCondition::Family::tanh_step, eps1}
                     : InitialCondition{InitialCondition::Family::neg_sine, 1.0};
    p.final_time = 3.0;
    return p;
}

double initial_integral(ArchetypeId id, double y) {
    if (id == ArchetypeId::M3 || id == ArchetypeId::M4)
        throw ConfigError("initial_integral: " + std::string(to_string(id)) +
                          " has nonlinear diffusivity and no Cole-Hopf form");
    return make_archetype(id).initial.antiderivative(y);
}

} // namespace dpatch
