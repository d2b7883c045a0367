#pragma once

// Modified Burgers equation  u_t + u u_x = eps(u) u_xx  on [x_lo, x_hi]
// with Dirichlet boundaries, and the four archetype problems M1..M4.

#include <array>
#include <numbers>
#include <string>
#include <string_view>

namespace dpatch {

/// eps(u) = eps1 + eps2 |u|
class Diffusivity {
public:
    Diffusivity(double eps1, double eps2);

    double eps1() const noexcept { return eps1_; }
    double eps2() const noexcept { return eps2_; }
    bool is_constant() const noexcept { return eps2_ == 0.0; }

    double operator()(double u) const noexcept;

private:
    double eps1_;
    double eps2_;
};

/// The initial conditions the engine knows about. Archetypes use
/// `tanh_step` with width equal to eps1 (M1, M3) or `neg_sine` with unit
/// amplitude (M2, M4).
struct InitialCondition {
    enum class Family {
        tanh_step, ///< (x/pi - tanh(2x/w)) / tanh(2 pi/w), w = param
        neg_sine,  ///< -param * sin(x)
        zero,
    };

    Family family = Family::zero;
    double param = 0.0;

    double operator()(double x) const noexcept;

    /// Closed-form integral of u0 over [0, y].
    double antiderivative(double y) const noexcept;

    std::string_view family_name() const noexcept;
    static Family parse_family(std::string_view name);
};

struct ProblemSpec {
    double x_lo = -std::numbers::pi;
    double x_hi = std::numbers::pi;
    InitialCondition initial;
    // Dirichlet data is constant in time for every supported problem.
    double bc_left = 0.0;
    double bc_right = 0.0;
    Diffusivity diffusivity{0.001, 0.0};
    double final_time = 3.0;

    double boundary_left(double /*t*/) const noexcept { return bc_left; }
    double boundary_right(double /*t*/) const noexcept { return bc_right; }

    /// Throws ConfigError if the domain, final time or the initial/boundary
    /// compatibility (1e-8 at t = 0) is violated.
    void validate() const;
};

enum class ArchetypeId { M1, M2, M3, M4 };

inline constexpr std::array<ArchetypeId, 4> all_archetypes{
    ArchetypeId::M1, ArchetypeId::M2, ArchetypeId::M3, ArchetypeId::M4};

std::string_view to_string(ArchetypeId id) noexcept;
ArchetypeId parse_archetype(std::string_view name);

ProblemSpec make_archetype(ArchetypeId id);

/// Integral of u0 over [0, y] for the constant-diffusivity archetypes.
/// Throws ConfigError for M3/M4.
double initial_integral(ArchetypeId id, double y);

/// log(cosh(a)) without overflow for large |a|.
double lncosh(double a) noexcept;

} // namespace dpatch
