#pragma once

// Comma-separated tables and key: value reports. Numbers are written with
// 12 significant digits.

#include "dpatch/analysis.hpp"
#include "dpatch/dynamics.hpp"
#include "dpatch/oracle.hpp"

#include <iosfwd>
#include <string>

namespace dpatch::io {

inline constexpr int output_digits = 12;

std::string format_number(double v);

/// Rows: time,node_position,node_role,value
void write_macro_csv(std::ostream& os, const MacroTrajectory& traj);

/// Inverse of write_macro_csv. Throws ConfigError naming the offending line.
MacroTrajectory read_macro_csv(std::istream& is);

/// Rows: time,patch,x,u for every micro point of every recorded state.
void write_micro_csv(std::ostream& os, const Trajectory& traj, const PatchLayout& layout);

/// key: value summary of an error report.
void write_error_report(std::ostream& os, const ErrorReport& report, const std::string& oracle);

/// Rows: time,max_error
void write_error_csv(std::ostream& os, const ErrorReport& report);

void write_convergence_report(std::ostream& os, const ConvergenceReport& report);

/// Rows: H,max_error
void write_convergence_csv(std::ostream& os, const ConvergenceReport& report);

/// Rows: x,t,u for every stored snapshot of the fine grid.
void write_fine_grid_csv(std::ostream& os, const FineGridSolution& solution);

} // namespace dpatch::io
