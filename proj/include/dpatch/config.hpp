#pragma once

// Run configuration read from a flat INI-style text file.
//
//   [problem]   name, domain, eps1, eps2, ic, ic_param, bc_left, bc_right, t_final
//   [layout]    name, gamma, patch = centre width points standard|double [left right]
//   [stepper]   dt, safety, output_count, output_times, blowup_bound
//   [oracle]    kind, tol_window, opt_samples, quad_rel_tol, points, dt, samples
//   [converge]  gamma, intervals, half_points, max_micro_dx, oracle_dt
//   [output]    dir, micro
//
// `name = M1` .. `M4` loads the archetype; later keys in the section
// override single fields. '#' and ';' start comments.

#include "dpatch/analysis.hpp"
#include "dpatch/dynamics.hpp"
#include "dpatch/mesh.hpp"
#include "dpatch/model.hpp"
#include "dpatch/oracle.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dpatch {

struct PatchEntry {
    double centre = 0.0;
    double width = 0.0;
    int points = 5;
    bool is_double = false;
    ShockOffsets offsets;

    Patch build() const;
    static PatchEntry from(const Patch& patch);
};

enum class OracleKind { quadrature, brute };

std::string_view to_string(OracleKind kind) noexcept;
OracleKind parse_oracle_kind(std::string_view name);

struct RunConfig {
    std::string problem_name;   ///< archetype name, "custom", or empty if unset
    ProblemSpec problem;

    std::string layout_name;    ///< archetype name, "custom", or empty if unset
    std::vector<PatchEntry> patches;
    int gamma = 1;

    double dt = 0.0;
    double safety = 0.5;
    int output_count = 61;
    std::vector<double> output_times;  ///< overrides output_count when non-empty
    double blowup_bound = 10.0;

    OracleKind oracle = OracleKind::quadrature;
    QuadratureConfig quadrature;
    int fine_points = 1600;
    double fine_dt = 0.0;
    int oracle_samples = 201;   ///< x samples for the standalone oracle table

    int converge_gamma = 1;
    std::vector<int> converge_intervals{24, 32, 48, 64};
    int converge_half_points = 2;
    double converge_max_micro_dx = 0.015;
    double converge_oracle_dt = 1e-6;

    std::string output_dir = ".";
    bool write_micro = false;

    bool has_problem() const noexcept { return !problem_name.empty(); }
    bool has_layout() const noexcept { return !layout_name.empty(); }

    void set_problem(ArchetypeId id);
    void set_layout(ArchetypeId id);

    /// Throws ConfigError when no layout has been given.
    PatchLayout layout() const;
    StepperConfig stepper() const;
    std::vector<double> times() const;
    FineGridConfig fine_grid() const;
    ConvergenceConfig convergence() const;
};

/// Throws ConfigError naming the source, line and key on malformed input.
RunConfig parse_config(std::istream& is, const std::string& source = "config");
RunConfig load_config(const std::string& path);

/// Every field written out explicitly, so parse_config(write_config(c))
/// reproduces c.
void write_config(std::ostream& os, const RunConfig& cfg);

} // namespace dpatch
